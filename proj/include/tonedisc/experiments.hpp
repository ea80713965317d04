#ifndef TONEDISC_EXPERIMENTS_HPP
#define TONEDISC_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "tonedisc/config.hpp"

namespace tonedisc {

// Seeded experiment drivers behind the CLI. Each run_* validates the whole
// config (including rejecting unknown keys) before the first trial, and its
// *_csv twin renders the rows with a leading comment carrying the fully
// resolved configuration, so a CSV is reproducible from its own header.
// Trial i of an experiment draws from Rng::stream(sim.seed, <name>, i), which
// makes every trial independent of execution order.

struct SnrPoint {
    double snr_db;
    uint32_t trials;
    double erasure_rate;  // transmitted ids missing from the decode, per id
    double error_rate;    // decoded ids nobody transmitted, per transmitted id
};

struct DensityPoint {
    double density;  // nodes per unit area
    uint32_t nodes;
    double median_proposed;  // slots from readiness to completion, pooled
                             // over trials and nodes (readiness is the first
                             // acquisition; the baseline is ready at slot 0)
    double median_baseline;
};

struct BaselineCurvePoint {
    uint32_t l;
    uint64_t t;
    double p;
    double discover;      // closed-form discovery probability
    double discover_opt;  // same at the optimal transmit probability 1/l
};

std::vector<SnrPoint> run_snr_sweep(const Config& cfg);
std::vector<DensityPoint> run_density_sweep(const Config& cfg);
std::vector<BaselineCurvePoint> run_baseline_curve(const Config& cfg);

std::string snr_sweep_csv(const Config& cfg);
std::string density_sweep_csv(const Config& cfg);
std::string baseline_curve_csv(const Config& cfg);

// Shortest decimal form with 6 significant digits (printf %g).
std::string format_g6(double v);

}  // namespace tonedisc

#endif
