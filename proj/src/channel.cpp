#include "tonedisc/channel.hpp"

#include <algorithm>
#include <cmath>

namespace tonedisc {

namespace {

double pathloss_amplitude(const ChannelModel& model, double distance) {
    if (model.ref_gain < 0.0) throw std::invalid_argument("ref_gain must be non-negative");
    if (distance <= 0.0 && model.pathloss_exp != 0.0) {
        throw std::invalid_argument("distance must be positive under path loss");
    }
    return std::sqrt(model.ref_gain * std::pow(distance, -model.pathloss_exp));
}

}  // namespace

LinkGains link_gain(const ChannelModel& model, uint32_t d, double distance, Rng& rng) {
    const double amp = pathloss_amplitude(model, distance);
    LinkGains g(d);
    if (model.kind == FadingKind::Awgn) {
        std::fill(g.begin(), g.end(), std::complex<double>(amp, 0.0));
    } else {
        const double s = amp * std::sqrt(0.5);  // unit mean energy per bin
        for (auto& h : g) h = std::complex<double>(s * rng.gauss(), s * rng.gauss());
    }
    return g;
}

LinkGains draw_link(const ChannelModel& model, uint32_t d, double distance, Rng& rng) {
    LinkGains g = link_gain(model, d, distance, rng);
    if (model.kind == FadingKind::Awgn) {
        const double phase = rng.uniform(0.0, 6.283185307179586476925286766559);
        const std::complex<double> rot(std::cos(phase), std::sin(phase));
        for (auto& h : g) h *= rot;
    }
    return g;
}

ToneGrid synthesize_slot(const std::vector<Transmission>& txs, uint32_t n, uint32_t d,
                         const ChannelModel& model, Rng& rng) {
    std::vector<std::complex<double>> acc(static_cast<size_t>(n) * d, {0.0, 0.0});
    for (const Transmission& tx : txs) {
        if (tx.codeword.size() != n) {
            throw DimensionMismatchError("codeword length differs from symbol count");
        }
        if (tx.link_gain.size() != d) {
            throw DimensionMismatchError("link gain count differs from bin count");
        }
        if (tx.tone_energy < 0.0) throw std::invalid_argument("tone energy must be non-negative");
        const double amp = std::sqrt(tx.tone_energy);
        for (uint32_t i = 0; i < n; ++i) {
            if (tx.codeword[i] >= d) throw DimensionMismatchError("tone index outside the grid");
            int64_t idx = (static_cast<int64_t>(tx.codeword[i]) + tx.offset) % d;
            if (idx < 0) idx += d;
            acc[static_cast<size_t>(i) * d + idx] += amp * tx.link_gain[idx];
        }
    }
    ToneGrid grid(n, d);
    if (model.noise_var > 0.0) {
        const double s = std::sqrt(model.noise_var * 0.5);
        for (auto& cell : acc) cell += std::complex<double>(s * rng.gauss(), s * rng.gauss());
    }
    for (size_t i = 0; i < acc.size(); ++i) grid.energy[i] = std::norm(acc[i]);
    return grid;
}

DetectedTones detect_tones(const ToneGrid& grid, double gamma) {
    if (gamma <= 0.0) throw std::invalid_argument("gamma must be positive");
    DetectedTones det(grid.n);
    std::vector<double> row(grid.d);
    for (uint32_t i = 0; i < grid.n; ++i) {
        const double* cells = grid.energy.data() + static_cast<size_t>(i) * grid.d;
        row.assign(cells, cells + grid.d);
        const auto mid = row.begin() + grid.d / 2;
        std::nth_element(row.begin(), mid, row.end());
        double median = *mid;
        if (grid.d % 2 == 0) {
            median = 0.5 * (median + *std::max_element(row.begin(), mid));
        }
        const double threshold = gamma * std::max(median, kDetectionFloor);
        for (uint32_t b = 0; b < grid.d; ++b) {
            if (cells[b] > threshold) det.symbols[i].push_back(b);
        }
    }
    return det;
}

double snr_to_noise(double snr_per_sample, uint32_t d) {
    if (snr_per_sample <= 0.0) throw std::invalid_argument("snr must be positive");
    if (d == 0) throw std::invalid_argument("d must be positive");
    return 1.0 / (static_cast<double>(d) * snr_per_sample);
}

}  // namespace tonedisc
