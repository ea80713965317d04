#include "doctest.h"
#include "tonedisc/baseline.hpp"
#include "tonedisc/config.hpp"
#include "tonedisc/experiments.hpp"

#include <cmath>
#include <functional>
#include <string>

using tonedisc::Config;
using tonedisc::ConfigError;

TEST_CASE("flat config text parses comments, blanks and later-wins") {
    const Config cfg = Config::from_text(
        "# leading comment\n"
        "\n"
        "field.d = 17   # trailing comment\n"
        "  detect.gamma=4.5\n"
        "sim.trials = 10\n"
        "sim.trials = 25\n");
    CHECK(cfg.get_u32("field.d", 0) == 17);
    CHECK(cfg.get_f64("detect.gamma", 0.0) == doctest::Approx(4.5));
    CHECK(cfg.get_u32("sim.trials", 0) == 25);
    CHECK(cfg.get_str("missing", "fallback") == "fallback");
    CHECK_FALSE(cfg.has("missing"));
    CHECK(cfg.has("field.d"));
}

TEST_CASE("command-line assignments override file values") {
    Config cfg = Config::from_text("proto.p = 0.3\nsim.seed = 5\n");
    cfg.set_pair("proto.p=0.45");
    cfg.set_pair("snr_db=-10,-5,0");
    CHECK(cfg.get_f64("proto.p", 0.0) == doctest::Approx(0.45));
    CHECK(cfg.get_u64("sim.seed", 0) == 5);
    const auto axis = cfg.get_list("snr_db", {});
    REQUIRE(axis.size() == 3);
    CHECK(axis[0] == doctest::Approx(-10.0));
    CHECK(axis[2] == doctest::Approx(0.0));
}

TEST_CASE("malformed config input fails loudly") {
    CHECK_THROWS_AS(Config::from_text("just a bare line\n"), ConfigError);
    CHECK_THROWS_AS(Config::from_text("= value without key\n"), ConfigError);
    CHECK_THROWS_AS((void)Config::from_text("x = abc\n").get_f64("x", 0.0), ConfigError);
    CHECK_THROWS_AS((void)Config::from_text("x = 12.5\n").get_u32("x", 0), ConfigError);
    CHECK_THROWS_AS((void)Config::from_text("x = maybe\n").get_bool("x", false), ConfigError);
    CHECK_THROWS_AS((void)Config::from_text("x = 1,,2\n").get_list("x", {}), ConfigError);
    Config cfg;
    CHECK_THROWS_AS(cfg.set_pair("nodelimiter"), ConfigError);
}

TEST_CASE("booleans accept the usual lowercase spellings") {
    const Config cfg = Config::from_text("a = true\nb = false\nc = 1\nd = 0\ne = yes\nf = no\n");
    CHECK(cfg.get_bool("a", false));
    CHECK_FALSE(cfg.get_bool("b", true));
    CHECK(cfg.get_bool("c", false));
    CHECK_FALSE(cfg.get_bool("d", true));
    CHECK(cfg.get_bool("e", false));
    CHECK_FALSE(cfg.get_bool("f", true));
}

TEST_CASE("every experiment rejects unknown keys") {
    const std::function<void(const Config&)> runs[] = {
        [](const Config& c) { (void)tonedisc::run_snr_sweep(c); },
        [](const Config& c) { (void)tonedisc::run_density_sweep(c); },
        [](const Config& c) { (void)tonedisc::run_baseline_curve(c); },
    };
    for (const auto& run : runs) {
        Config cfg;
        cfg.set("detect.gamm", "8");  // typo'd key
        try {
            (void)run(cfg);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("unknown key") != std::string::npos);
            CHECK(std::string(e.what()).find("detect.gamm") != std::string::npos);
        }
    }
}

TEST_CASE("experiment parameter validation") {
    Config bad_fading;
    bad_fading.set("channel.fading", "rician");
    CHECK_THROWS_AS((void)tonedisc::run_snr_sweep(bad_fading), ConfigError);

    Config bad_k;
    bad_k.set("code.k", "8");  // k must stay below n
    CHECK_THROWS_AS((void)tonedisc::run_snr_sweep(bad_k), ConfigError);

    Config no_trials;
    no_trials.set("sim.trials", "0");
    CHECK_THROWS_AS((void)tonedisc::run_snr_sweep(no_trials), ConfigError);

    Config bad_list;
    bad_list.set("baseline.l", "0,2");  // neighbor counts start at 1
    CHECK_THROWS_AS((void)tonedisc::run_baseline_curve(bad_list), ConfigError);

    Config frac;
    frac.set("baseline.t", "2.5");  // slot budgets are integers
    CHECK_THROWS_AS((void)tonedisc::run_baseline_curve(frac), ConfigError);
}

TEST_CASE("six significant digit float formatting") {
    CHECK(tonedisc::format_g6(0.0) == "0");
    CHECK(tonedisc::format_g6(1.0) == "1");
    CHECK(tonedisc::format_g6(0.5) == "0.5");
    CHECK(tonedisc::format_g6(0.0244140625) == "0.0244141");
    CHECK(tonedisc::format_g6(-19.0) == "-19");
    CHECK(tonedisc::format_g6(1234567.0) == "1.23457e+06");
}

static Config small_snr_config() {
    Config cfg;
    cfg.set("sim.trials", "150");
    cfg.set("sim.tx", "10");
    cfg.set("sim.seed", "11");
    return cfg;
}

TEST_CASE("csv output is byte-identical for identical config and seed") {
    const Config cfg = small_snr_config();
    const std::string a = tonedisc::snr_sweep_csv(cfg);
    const std::string b = tonedisc::snr_sweep_csv(cfg);
    CHECK(a == b);
    CHECK(a.rfind("# tonedisc sweep-snr seed=11 ", 0) == 0);
    CHECK(a.find("snr_db,trials,erasure_rate,error_rate\n") != std::string::npos);
    // the header echoes the resolved values, not just the overrides
    CHECK(a.find("field.d=521") != std::string::npos);
    CHECK(a.find("decode.tau=4") != std::string::npos);

    Config other = small_snr_config();
    other.set("sim.seed", "12");
    CHECK(tonedisc::snr_sweep_csv(other) != a);
}

TEST_CASE("noiseless sweep decodes every identifier") {
    Config cfg;
    cfg.set("snr_db", "60");
    cfg.set("channel.fading", "awgn");
    cfg.set("sim.trials", "40");
    cfg.set("sim.tx", "30");
    const auto rows = tonedisc::run_snr_sweep(cfg);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].erasure_rate == 0.0);
    CHECK(rows[0].error_rate == 0.0);
}

TEST_CASE("deeply buried tones erase almost everything") {
    Config cfg;
    cfg.set("snr_db", "-60");
    cfg.set("sim.trials", "40");
    cfg.set("sim.tx", "10");
    const auto rows = tonedisc::run_snr_sweep(cfg);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].erasure_rate > 0.95);
}

TEST_CASE("erasure rate falls as snr rises") {
    Config cfg = small_snr_config();
    const auto rows = tonedisc::run_snr_sweep(cfg);
    REQUIRE(rows.size() >= 8);
    CHECK(rows.front().erasure_rate > 0.8);
    CHECK(rows.back().erasure_rate < 0.02);
    for (size_t i = 1; i < rows.size(); ++i) {
        // non-increasing up to Monte-Carlo jitter at 150 trials
        CHECK(rows[i].erasure_rate <= rows[i - 1].erasure_rate + 0.06);
    }
}

TEST_CASE("baseline curve rows match the closed forms") {
    Config cfg;
    cfg.set("baseline.l", "1,3,8");
    cfg.set("baseline.t", "2,7");
    cfg.set("baseline.p", "0.2,0.5");
    const auto rows = tonedisc::run_baseline_curve(cfg);
    REQUIRE(rows.size() == 3 * 2 * 2);
    for (const auto& r : rows) {
        CHECK(r.discover == tonedisc::p_discover(r.p, r.l, r.t));
        CHECK(r.discover_opt == tonedisc::p_discover_opt(r.l, r.t));
        CHECK(r.discover <= r.discover_opt + 1e-12);
    }
    // axis order: l outermost, then t, then p
    CHECK(rows[0].l == 1);
    CHECK(rows[0].t == 2);
    CHECK(rows[0].p == doctest::Approx(0.2));
    CHECK(rows[1].p == doctest::Approx(0.5));
    CHECK(rows[2].t == 7);
}

TEST_CASE("zero density emits no data rows") {
    Config cfg;
    cfg.set("density", "0");
    cfg.set("sim.trials", "3");
    CHECK(tonedisc::run_density_sweep(cfg).empty());
    const std::string csv = tonedisc::density_sweep_csv(cfg);
    CHECK(csv.find("density,nodes,median_proposed,median_baseline\n") != std::string::npos);
    CHECK(csv.substr(csv.find("median_baseline\n") + 16).empty());
}

TEST_CASE("two nodes in range discover at least as fast as the baseline") {
    Config cfg;
    cfg.set("sim.area", "16");       // 4 x 4 box, range 8 covers any drop
    cfg.set("density", "0.125");     // 2 nodes
    cfg.set("sim.trials", "120");
    cfg.set("sim.seed", "3");
    const auto rows = tonedisc::run_density_sweep(cfg);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].nodes == 2);
    CHECK(rows[0].median_proposed <= rows[0].median_baseline);
    const double horizon = 2000.0;   // proto.max_slots default
    CHECK(rows[0].median_proposed < horizon);
    CHECK(rows[0].median_baseline < horizon);
}
