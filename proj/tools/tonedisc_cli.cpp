// Command line front end: a one-shot codec round trip for poking at the
// code, plus the three CSV experiment drivers.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tonedisc/codec.hpp"
#include "tonedisc/config.hpp"
#include "tonedisc/experiments.hpp"
#include "tonedisc/gfield.hpp"

namespace {

struct CodecArgs {
    uint64_t tnid = 0;
    uint32_t d = 521;
    uint32_t n = 8;
    uint32_t k = 1;
    int32_t offset = 0;
    uint32_t tau = 0;        // 0: k + (n-k)/2
    int32_t delta_max = -1;  // <0: search every shift
    std::string corrupt;
};

uint32_t parse_u32(std::string_view s, const char* what) {
    uint32_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
        throw std::invalid_argument(std::string("bad ") + what + " '" + std::string(s) + "'");
    }
    return v;
}

// "sym:bin" replaces symbol sym's detected set with {bin}; "sym:-" erases it.
void apply_corruption(tonedisc::DetectedTones& det, const std::string& pattern, uint32_t n,
                      uint32_t d) {
    size_t start = 0;
    while (start <= pattern.size()) {
        size_t end = pattern.find(',', start);
        if (end == std::string::npos) end = pattern.size();
        const std::string_view tok(pattern.data() + start, end - start);
        start = end + 1;
        if (tok.empty()) continue;
        const size_t colon = tok.find(':');
        if (colon == std::string_view::npos) {
            throw std::invalid_argument("corruption entries look like sym:bin or sym:-");
        }
        const uint32_t sym = parse_u32(tok.substr(0, colon), "symbol index");
        if (sym >= n) throw std::invalid_argument("corruption symbol index out of range");
        const std::string_view rest = tok.substr(colon + 1);
        if (rest == "-") {
            det.symbols[sym].clear();
        } else {
            const uint32_t bin = parse_u32(rest, "bin");
            if (bin >= d) throw std::invalid_argument("corruption bin out of range");
            det.symbols[sym] = {bin};
        }
    }
}

int run_codec(const CodecArgs& a) {
    const tonedisc::Field f(a.d, a.n);
    const auto cw = tonedisc::encode_tnid(a.tnid, f, a.k);
    const auto rx = tonedisc::shift_codeword(cw, a.offset, f);

    tonedisc::DetectedTones det(a.n);
    for (uint32_t i = 0; i < a.n; ++i) det.symbols[i].push_back(rx[i]);
    if (!a.corrupt.empty()) apply_corruption(det, a.corrupt, a.n, a.d);

    const uint32_t tau = a.tau ? a.tau : a.k + (a.n - a.k) / 2;
    const uint32_t dmax = a.delta_max < 0 ? (a.d - 1) / 2 : static_cast<uint32_t>(a.delta_max);

    std::printf("field GF(%u), n=%u, k=%u\n", a.d, a.n, a.k);
    std::printf("tnid %llu codeword:", static_cast<unsigned long long>(a.tnid));
    for (const uint32_t b : cw) std::printf(" %u", b);
    std::printf("\n");
    std::printf("received (offset %+d%s):", a.offset, a.corrupt.empty() ? "" : ", corrupted");
    for (uint32_t i = 0; i < a.n; ++i) {
        if (det.symbols[i].empty()) {
            std::printf(" -");
        } else {
            for (const uint32_t b : det.symbols[i]) std::printf(" %u", b);
        }
    }
    std::printf("\n");

    const auto results = tonedisc::decode_with_offset_search(det, f, a.k, tau, dmax);
    for (const auto& r : results) {
        std::printf("decoded %llu (score %u/%u, offset %+d)\n",
                    static_cast<unsigned long long>(r.tnid), r.score, a.n, r.offset);
    }
    if (results.empty()) std::printf("decoded nothing at tau=%u\n", tau);

    // Round trip succeeds when exactly the sent id comes back under the
    // shift that was actually applied.
    int32_t want = ((a.offset % static_cast<int32_t>(a.d)) + a.d) % a.d;
    if (want > static_cast<int32_t>((a.d - 1) / 2)) want -= a.d;
    const bool ok = results.size() == 1 && results[0].tnid == a.tnid && results[0].offset == want;
    std::printf("round trip %s\n", ok ? "ok" : "FAILED");
    return ok ? 0 : 1;
}

struct SweepArgs {
    std::string config_path;
    std::string out_path;
    std::vector<std::string> sets;
    std::optional<uint64_t> seed;
};

void add_sweep_options(CLI::App* sub, SweepArgs& args, const char* default_out) {
    args.out_path = default_out;
    sub->add_option("--config", args.config_path, "flat key=value config file");
    sub->add_option("--seed", args.seed, "master seed (overrides sim.seed)");
    sub->add_option("--out", args.out_path, "output CSV path")->capture_default_str();
    sub->add_option("--set", args.sets, "extra KEY=VALUE override, repeatable");
}

tonedisc::Config load_config(const SweepArgs& a) {
    tonedisc::Config cfg =
        a.config_path.empty() ? tonedisc::Config{} : tonedisc::Config::from_file(a.config_path);
    for (const std::string& kv : a.sets) cfg.set_pair(kv);
    if (a.seed) cfg.set("sim.seed", std::to_string(*a.seed));
    return cfg;
}

int write_csv(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    out << body;
    if (!out) throw std::runtime_error("cannot write " + path);
    size_t rows = 0;
    for (const char ch : body) rows += ch == '\n';
    std::printf("%s: %zu data rows\n", path.c_str(), rows >= 2 ? rows - 2 : 0);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"single-tone coded neighbor discovery toolkit"};
    app.require_subcommand(1);

    CodecArgs codec_args;
    CLI::App* codec = app.add_subcommand("codec", "encode one identifier, decode it back");
    codec->add_option("tnid", codec_args.tnid, "identifier to encode")->required();
    codec->add_option("--d", codec_args.d, "field size (prime)")->capture_default_str();
    codec->add_option("--n", codec_args.n, "symbols per codeword")->capture_default_str();
    codec->add_option("--k", codec_args.k, "message symbols")->capture_default_str();
    codec->add_option("--offset", codec_args.offset, "receiver frequency shift to apply");
    codec->add_option("--tau", codec_args.tau, "decode threshold, 0 means k+(n-k)/2");
    codec->add_option("--delta-max", codec_args.delta_max,
                      "offset search radius, negative means every shift");
    codec->add_option("--corrupt", codec_args.corrupt,
                      "comma list of sym:bin replacements or sym:- erasures");

    SweepArgs snr_args;
    CLI::App* snr = app.add_subcommand("sweep-snr", "codec erasure/error rates vs SNR");
    add_sweep_options(snr, snr_args, "snr_sweep.csv");

    SweepArgs density_args;
    CLI::App* density =
        app.add_subcommand("density-sweep", "discovery completion vs node density");
    add_sweep_options(density, density_args, "density.csv");

    SweepArgs curve_args;
    CLI::App* curve =
        app.add_subcommand("baseline-curve", "closed-form baseline discovery probability");
    add_sweep_options(curve, curve_args, "baseline_curve.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*codec) return run_codec(codec_args);
        if (*snr) return write_csv(snr_args.out_path, tonedisc::snr_sweep_csv(load_config(snr_args)));
        if (*density) {
            return write_csv(density_args.out_path,
                             tonedisc::density_sweep_csv(load_config(density_args)));
        }
        if (*curve) {
            return write_csv(curve_args.out_path,
                             tonedisc::baseline_curve_csv(load_config(curve_args)));
        }
    } catch (const tonedisc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
