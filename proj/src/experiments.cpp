#include "tonedisc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <unordered_set>

#include "tonedisc/baseline.hpp"
#include "tonedisc/channel.hpp"
#include "tonedisc/codec.hpp"
#include "tonedisc/protocol.hpp"
#include "tonedisc/topology.hpp"

namespace tonedisc {

std::string format_g6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Resolved settings destined for the CSV header comment: effective values
// where lossless (integers), configured values where rounding would drift.
class Resolved {
public:
    void put(const std::string& key, const std::string& v) { kv_[key] = v; }
    void put(const std::string& key, const char* v) { kv_[key] = v; }
    void put(const std::string& key, double v) { kv_[key] = format_g6(v); }
    void put(const std::string& key, uint32_t v) { kv_[key] = std::to_string(v); }
    void put(const std::string& key, uint64_t v) { kv_[key] = std::to_string(v); }
    void put(const std::string& key, bool v) { kv_[key] = v ? "true" : "false"; }
    void put_list(const std::string& key, const std::vector<double>& v) {
        std::string joined;
        for (size_t i = 0; i < v.size(); ++i) {
            if (i) joined += ',';
            joined += format_g6(v[i]);
        }
        kv_[key] = joined;
    }

    std::string header(const std::string& experiment, uint64_t seed) const {
        std::string line = "# tonedisc " + experiment + " seed=" + std::to_string(seed);
        for (const auto& [k, v] : kv_) line += " " + k + "=" + v;
        line += '\n';
        return line;
    }

private:
    std::map<std::string, std::string> kv_;
};

void reject_unknown(const Config& cfg, std::initializer_list<const char*> known,
                    const char* experiment) {
    for (const std::string& key : cfg.keys()) {
        if (std::find_if(known.begin(), known.end(),
                         [&](const char* k) { return key == k; }) == known.end()) {
            throw ConfigError(std::string(experiment) + ": unknown key '" + key + "'");
        }
    }
}

// d^k - 1 with saturation well past any practical identifier count.
uint64_t id_pool(uint32_t d, uint32_t k) {
    uint64_t pool = 1;
    for (uint32_t i = 0; i < k; ++i) {
        if (pool > (uint64_t{1} << 62) / d) return uint64_t{1} << 62;
        pool *= d;
    }
    return pool - 1;
}

double median_of(std::vector<uint32_t>& v) {
    std::sort(v.begin(), v.end());
    const size_t h = v.size() / 2;
    if (v.size() % 2 == 1) return v[h];
    return (static_cast<double>(v[h - 1]) + v[h]) / 2.0;
}

struct SnrSetup {
    Field field;
    uint32_t k;
    uint32_t tau;
    uint32_t delta_max;
    double gamma;
    FadingKind fading;
    uint64_t pool;
    uint32_t ntx;
    uint32_t trials;
    uint64_t seed;
    std::vector<double> snr_db;
    Resolved resolved;
};

SnrSetup snr_setup(const Config& cfg) {
    reject_unknown(cfg,
                   {"field.d", "field.n", "code.k", "detect.gamma", "decode.tau",
                    "decode.delta_max", "channel.fading", "sim.tx", "sim.trials", "sim.seed",
                    "snr_db"},
                   "sweep-snr");
    const uint32_t d = cfg.get_u32("field.d", 521);
    const uint32_t n = cfg.get_u32("field.n", 8);
    Field field(d, n);
    const uint32_t k = cfg.get_u32("code.k", 1);
    if (k == 0 || k >= n) throw ConfigError("code.k must be in [1, n-1]");
    const double gamma = cfg.get_f64("detect.gamma", 8.0);
    if (gamma <= 0.0) throw ConfigError("detect.gamma must be positive");
    uint32_t tau = cfg.get_u32("decode.tau", 0);
    if (tau == 0) tau = k + (n - k) / 2;
    if (tau < k || tau > n) throw ConfigError("decode.tau must be in [k, n]");
    const uint32_t delta_max = cfg.get_u32("decode.delta_max", 0);
    const std::string fading_name = cfg.get_str("channel.fading", "rayleigh");
    FadingKind fading;
    if (fading_name == "rayleigh") {
        fading = FadingKind::RayleighBlock;
    } else if (fading_name == "awgn") {
        fading = FadingKind::Awgn;
    } else {
        throw ConfigError("channel.fading must be rayleigh or awgn");
    }
    const uint64_t pool = id_pool(d, k);
    const uint32_t ntx = cfg.get_u32("sim.tx", 30);
    if (ntx == 0 || ntx > pool) throw ConfigError("sim.tx must be in [1, d^k - 1]");
    const uint32_t trials = cfg.get_u32("sim.trials", 2000);
    if (trials == 0) throw ConfigError("sim.trials must be at least 1");
    const uint64_t seed = cfg.get_u64("sim.seed", 1);
    std::vector<double> snr_db =
        cfg.get_list("snr_db", {-25, -22, -19, -16, -13, -10, -7, -4, -1});
    if (snr_db.empty()) throw ConfigError("snr_db must list at least one point");

    SnrSetup s{field,    k,   tau,    delta_max, gamma, fading,
               pool,     ntx, trials, seed,      std::move(snr_db), {}};
    s.resolved.put("field.d", d);
    s.resolved.put("field.n", n);
    s.resolved.put("code.k", k);
    s.resolved.put("detect.gamma", gamma);
    s.resolved.put("decode.tau", tau);
    s.resolved.put("decode.delta_max", delta_max);
    s.resolved.put("channel.fading", fading_name);
    s.resolved.put("sim.tx", ntx);
    s.resolved.put("sim.trials", trials);
    s.resolved.put("sim.seed", seed);
    s.resolved.put_list("snr_db", s.snr_db);
    return s;
}

}  // namespace

std::vector<SnrPoint> run_snr_sweep(const Config& cfg) {
    const SnrSetup s = snr_setup(cfg);
    const Field& f = s.field;
    const uint32_t d = f.d();
    const uint32_t n = f.n();
    const size_t cells = static_cast<size_t>(n) * d;

    std::vector<SnrPoint> out;
    std::vector<std::complex<double>> acc(cells);
    std::vector<Tnid> sent;
    std::unordered_set<Tnid> seen;
    ToneGrid grid(n, d);

    for (size_t pi = 0; pi < s.snr_db.size(); ++pi) {
        const double snr = std::pow(10.0, s.snr_db[pi] / 10.0);
        const double noise_var = snr_to_noise(snr, d);
        const double ns = std::sqrt(noise_var * 0.5);
        uint64_t erasures = 0;
        uint64_t errors = 0;

        for (uint32_t t = 0; t < s.trials; ++t) {
            Rng rng = Rng::stream(s.seed, "sweep-snr", pi * s.trials + t);
            sent.clear();
            seen.clear();
            while (sent.size() < s.ntx) {
                const Tnid id = 1 + rng.below(s.pool);
                if (seen.insert(id).second) sent.push_back(id);
            }

            // Superpose all codewords as complex amplitudes. Only the bins a
            // codeword occupies matter, so fading is drawn per occupied cell
            // (one unit-mean complex gain per symbol of each transmitter)
            // rather than for the whole d-wide band.
            std::fill(acc.begin(), acc.end(), std::complex<double>{});
            for (const Tnid id : sent) {
                const std::vector<uint32_t> cw = encode_tnid(id, f, s.k);
                if (s.fading == FadingKind::Awgn) {
                    const double ph = rng.uniform(0.0, kTwoPi);
                    const std::complex<double> g(std::cos(ph), std::sin(ph));
                    for (uint32_t row = 0; row < n; ++row) {
                        acc[static_cast<size_t>(row) * d + cw[row]] += g;
                    }
                } else {
                    const double rs = std::sqrt(0.5);
                    for (uint32_t row = 0; row < n; ++row) {
                        acc[static_cast<size_t>(row) * d + cw[row]] +=
                            std::complex<double>(rs * rng.gauss(), rs * rng.gauss());
                    }
                }
            }
            if (noise_var > 0.0) {
                for (auto& cell : acc) {
                    cell += std::complex<double>(ns * rng.gauss(), ns * rng.gauss());
                }
            }
            for (size_t i = 0; i < cells; ++i) grid.energy[i] = std::norm(acc[i]);

            const DetectedTones det = detect_tones(grid, s.gamma);
            std::unordered_set<Tnid> got;
            for (const DecodeResult& r :
                 decode_with_offset_search(det, f, s.k, s.tau, s.delta_max)) {
                got.insert(r.tnid);
                if (seen.count(r.tnid) == 0) ++errors;
            }
            for (const Tnid id : sent) {
                if (got.count(id) == 0) ++erasures;
            }
        }

        const double denom = static_cast<double>(s.trials) * s.ntx;
        out.push_back({s.snr_db[pi], s.trials, erasures / denom, errors / denom});
    }
    return out;
}

std::string snr_sweep_csv(const Config& cfg) {
    const SnrSetup s = snr_setup(cfg);
    std::string out = s.resolved.header("sweep-snr", s.seed);
    out += "snr_db,trials,erasure_rate,error_rate\n";
    for (const SnrPoint& r : run_snr_sweep(cfg)) {
        out += format_g6(r.snr_db) + "," + std::to_string(r.trials) + "," +
               format_g6(r.erasure_rate) + "," + format_g6(r.error_rate) + "\n";
    }
    return out;
}

namespace {

struct DensitySetup {
    Field field;
    ProtocolConfig proto;
    SimParams simp;
    double baseline_p;
    double area;
    double range;
    bool wrap;
    uint32_t trials;
    uint64_t seed;
    std::vector<double> density;
    Resolved resolved;
};

DensitySetup density_setup(const Config& cfg) {
    reject_unknown(cfg,
                   {"field.d", "field.n", "detect.gamma", "decode.tau", "decode.delta_max",
                    "proto.p", "proto.period", "proto.m", "proto.w", "proto.jam_margin",
                    "proto.jam_prob", "proto.c", "proto.max_slots", "baseline.p", "sim.area",
                    "sim.range", "sim.wrap", "sim.trials", "sim.seed", "density"},
                   "density-sweep");
    const uint32_t d = cfg.get_u32("field.d", 521);
    const uint32_t n = cfg.get_u32("field.n", 8);
    Field field(d, n);
    const double gamma = cfg.get_f64("detect.gamma", 8.0);
    if (gamma <= 0.0) throw ConfigError("detect.gamma must be positive");
    const uint32_t tau = cfg.get_u32("decode.tau", 0);
    const uint32_t delta_max = cfg.get_u32("decode.delta_max", 0);

    ProtocolConfig proto;
    proto.p = cfg.get_f64("proto.p", 0.4);
    proto.period = cfg.get_u32("proto.period", 100);
    proto.m = cfg.get_u32("proto.m", 16);
    proto.w = cfg.get_u32("proto.w", 2);
    proto.jam_margin = cfg.get_f64("proto.jam_margin", -1.0);
    proto.jam_prob = cfg.get_f64("proto.jam_prob", 0.5);
    proto.c = cfg.get_u32("proto.c", 2);
    proto.max_slots = cfg.get_u32("proto.max_slots", 2000);
    proto.validate(d - 1);

    const double baseline_p = cfg.get_f64("baseline.p", proto.p);
    if (baseline_p < 0.0 || baseline_p > 1.0) throw ConfigError("baseline.p must be in [0, 1]");
    const double area = cfg.get_f64("sim.area", 1024.0);
    const double range = cfg.get_f64("sim.range", 8.0);
    if (area <= 0.0 || range <= 0.0) throw ConfigError("sim.area and sim.range must be positive");
    const bool wrap = cfg.get_bool("sim.wrap", true);
    const uint32_t trials = cfg.get_u32("sim.trials", 200);
    if (trials == 0) throw ConfigError("sim.trials must be at least 1");
    const uint64_t seed = cfg.get_u64("sim.seed", 1);
    std::vector<double> density = cfg.get_list("density", {0.009765625, 0.0244140625, 0.0498046875});
    for (const double v : density) {
        if (v < 0.0) throw ConfigError("density values must be non-negative");
    }

    SimParams simp{.field = field};
    simp.gamma = gamma;
    simp.tau = tau;
    simp.delta_max = delta_max;

    DensitySetup s{field,    proto, simp, baseline_p,         area, range,
                   wrap,     trials, seed, std::move(density), {}};
    s.resolved.put("field.d", d);
    s.resolved.put("field.n", n);
    s.resolved.put("detect.gamma", gamma);
    s.resolved.put("decode.tau", simp.resolved_tau());
    s.resolved.put("decode.delta_max", delta_max);
    s.resolved.put("proto.p", proto.p);
    s.resolved.put("proto.period", proto.period);
    s.resolved.put("proto.m", proto.m);
    s.resolved.put("proto.w", proto.w);
    s.resolved.put("proto.jam_margin", proto.jam_margin);
    s.resolved.put("proto.jam_prob", proto.jam_prob);
    s.resolved.put("proto.c", proto.c);
    s.resolved.put("proto.max_slots", proto.max_slots);
    s.resolved.put("baseline.p", baseline_p);
    s.resolved.put("sim.area", area);
    s.resolved.put("sim.range", range);
    s.resolved.put("sim.wrap", wrap);
    s.resolved.put("sim.trials", trials);
    s.resolved.put("sim.seed", seed);
    s.resolved.put_list("density", s.density);
    return s;
}

}  // namespace

std::vector<DensityPoint> run_density_sweep(const Config& cfg) {
    const DensitySetup s = density_setup(cfg);
    std::vector<DensityPoint> out;
    std::vector<uint32_t> proposed;
    std::vector<uint32_t> baseline;

    for (size_t di = 0; di < s.density.size(); ++di) {
        const uint32_t nodes = static_cast<uint32_t>(std::llround(s.density[di] * s.area));
        if (nodes == 0) continue;
        proposed.clear();
        baseline.clear();

        for (uint32_t t = 0; t < s.trials; ++t) {
            const uint64_t idx = di * s.trials + t;
            Rng topo_rng = Rng::stream(s.seed, "density-topo", idx);
            const Topology topo = random_topology(nodes, s.area, s.range, s.wrap, topo_rng);

            const uint64_t sub_seed = Rng::stream(s.seed, "density-proto", idx).u64();
            const RunResult prop = run_discovery(topo, s.proto, s.simp, sub_seed);
            Rng base_rng = Rng::stream(s.seed, "density-base", idx);
            const RunResult base =
                simulate_baseline(topo, s.baseline_p, s.proto.max_slots, base_rng);
            // Discovery time runs from readiness: the first acquisition for
            // the proposed scheme, slot 0 for the baseline (its reports carry
            // acquired_slot 0). Nodes that never finish count as the horizon.
            for (const NodeReport& rep : prop.nodes) {
                proposed.push_back(rep.complete ? rep.completion_slot - rep.acquired_slot
                                                : s.proto.max_slots);
            }
            for (const NodeReport& rep : base.nodes) {
                baseline.push_back(rep.complete ? rep.completion_slot - rep.acquired_slot
                                                : s.proto.max_slots);
            }
        }
        out.push_back({s.density[di], nodes, median_of(proposed), median_of(baseline)});
    }
    return out;
}

std::string density_sweep_csv(const Config& cfg) {
    const DensitySetup s = density_setup(cfg);
    std::string out = s.resolved.header("density-sweep", s.seed);
    out += "density,nodes,median_proposed,median_baseline\n";
    for (const DensityPoint& r : run_density_sweep(cfg)) {
        out += format_g6(r.density) + "," + std::to_string(r.nodes) + "," +
               format_g6(r.median_proposed) + "," + format_g6(r.median_baseline) + "\n";
    }
    return out;
}

namespace {

std::vector<uint64_t> integral_list(const Config& cfg, const std::string& key,
                                    std::vector<double> def, uint64_t min_value) {
    std::vector<uint64_t> out;
    for (const double v : cfg.get_list(key, std::move(def))) {
        if (v != std::floor(v) || v < static_cast<double>(min_value) || v > 1e9) {
            throw ConfigError(key + ": entries must be integers >= " + std::to_string(min_value));
        }
        out.push_back(static_cast<uint64_t>(v));
    }
    if (out.empty()) throw ConfigError(key + " must list at least one value");
    return out;
}

}  // namespace

std::vector<BaselineCurvePoint> run_baseline_curve(const Config& cfg) {
    reject_unknown(cfg, {"baseline.l", "baseline.t", "baseline.p", "sim.seed"}, "baseline-curve");
    const auto ls = integral_list(cfg, "baseline.l", {1, 2, 5, 10}, 1);
    const auto ts = integral_list(cfg, "baseline.t", {1, 5, 10, 20}, 0);
    const auto ps = cfg.get_list("baseline.p", {0.1, 0.25, 0.5});
    if (ps.empty()) throw ConfigError("baseline.p must list at least one value");

    std::vector<BaselineCurvePoint> out;
    for (const uint64_t l : ls) {
        for (const uint64_t t : ts) {
            for (const double p : ps) {
                out.push_back({static_cast<uint32_t>(l), t, p,
                               p_discover(p, static_cast<uint32_t>(l), t),
                               p_discover_opt(static_cast<uint32_t>(l), t)});
            }
        }
    }
    return out;
}

std::string baseline_curve_csv(const Config& cfg) {
    const auto rows = run_baseline_curve(cfg);
    Resolved resolved;
    resolved.put_list("baseline.l", cfg.get_list("baseline.l", {1, 2, 5, 10}));
    resolved.put_list("baseline.t", cfg.get_list("baseline.t", {1, 5, 10, 20}));
    resolved.put_list("baseline.p", cfg.get_list("baseline.p", {0.1, 0.25, 0.5}));
    const uint64_t seed = cfg.get_u64("sim.seed", 1);
    resolved.put("sim.seed", seed);
    std::string out = resolved.header("baseline-curve", seed);
    out += "l,t,p,p_discover,p_discover_opt\n";
    for (const BaselineCurvePoint& r : rows) {
        out += std::to_string(r.l) + "," + std::to_string(r.t) + "," + format_g6(r.p) + "," +
               format_g6(r.discover) + "," + format_g6(r.discover_opt) + "\n";
    }
    return out;
}

}  // namespace tonedisc
