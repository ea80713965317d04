#ifndef TONEDISC_CHANNEL_HPP
#define TONEDISC_CHANNEL_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tonedisc/codec.hpp"
#include "tonedisc/rng.hpp"

namespace tonedisc {

struct DimensionMismatchError : std::invalid_argument {
    explicit DimensionMismatchError(const char* what) : std::invalid_argument(what) {}
};

enum class FadingKind { Awgn, RayleighBlock };

struct ChannelModel {
    FadingKind kind = FadingKind::Awgn;
    double noise_var = 0.0;     // complex noise energy per bin
    double pathloss_exp = 0.0;  // free-space style distance exponent
    double ref_gain = 1.0;      // gain at unit distance
};

using LinkGains = std::vector<std::complex<double>>;

// Energy floor under the detection threshold; keeps all-quiet slots from
// flagging every bin once the median is 0.
inline constexpr double kDetectionFloor = 1e-12;

// Per-bin complex gains of one transmitter -> receiver link for one slot.
// Awgn links have the constant real gain sqrt(ref_gain * distance^-exp) on
// every bin; Rayleigh links draw an independent unit-mean complex gain per
// bin (energy is exponential), scaled by the same distance factor. Gains are
// redrawn every slot, i.e. fading is constant within a slot and independent
// across slots.
LinkGains link_gain(const ChannelModel& model, uint32_t d, double distance, Rng& rng);

// link_gain plus a uniform random carrier phase on awgn links, so co-channel
// superposition from different transmitters never adds coherently by
// construction. Rayleigh gains already carry random phase. Simulators use
// this; link_gain keeps the deterministic awgn form for calibration.
LinkGains draw_link(const ChannelModel& model, uint32_t d, double distance, Rng& rng);

struct Transmission {
    std::vector<uint32_t> codeword;  // tone index per symbol, before offset
    double tone_energy = 1.0;
    LinkGains link_gain;             // d complex gains for this link
    int32_t offset = 0;              // receiver-side integer frequency shift
};

// Received energy per (symbol, bin) cell.
struct ToneGrid {
    ToneGrid(uint32_t n_, uint32_t d_) : n(n_), d(d_), energy(static_cast<size_t>(n_) * d_, 0.0) {}
    uint32_t n;
    uint32_t d;
    std::vector<double> energy;
    double at(uint32_t symbol, uint32_t bin) const {
        return energy[static_cast<size_t>(symbol) * d + bin];
    }
    double& at(uint32_t symbol, uint32_t bin) {
        return energy[static_cast<size_t>(symbol) * d + bin];
    }
};

// Superpose all transmissions as complex amplitudes: each adds
// sqrt(tone_energy) * link_gain[idx] at idx = (codeword[i] + offset) mod d,
// then complex noise of variance noise_var lands on every bin and the grid
// keeps |.|^2.
ToneGrid synthesize_slot(const std::vector<Transmission>& txs, uint32_t n, uint32_t d,
                         const ChannelModel& model, Rng& rng);

// A bin is detected when its energy exceeds gamma times the per-symbol
// median energy (or the floor when the median is smaller). The median keeps
// the rule scale-free: it tracks the noise level without knowing it.
DetectedTones detect_tones(const ToneGrid& grid, double gamma);

// noise_var for a target per-sample SNR: a unit-energy tone spreads over d
// time samples, so per-sample signal energy is 1/d and noise_var = 1/(d*snr).
double snr_to_noise(double snr_per_sample, uint32_t d);

}  // namespace tonedisc

#endif
