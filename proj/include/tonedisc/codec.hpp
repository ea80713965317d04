#ifndef TONEDISC_CODEC_HPP
#define TONEDISC_CODEC_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "tonedisc/gfield.hpp"

namespace tonedisc {

// A device identifier: an integer in [0, d^k) that maps to k field symbols.
using Tnid = uint64_t;

struct OutOfRangeError : std::invalid_argument {
    explicit OutOfRangeError(const char* what) : std::invalid_argument(what) {}
};

struct KTooLargeError : std::invalid_argument {
    explicit KTooLargeError(const char* what) : std::invalid_argument(what) {}
};

// Per-symbol sets of tone indices seen by a receiver. symbols[i] holds the
// subcarrier bins detected during symbol i; order and duplicates do not
// matter, decoding sanitizes its input.
struct DetectedTones {
    explicit DetectedTones(uint32_t n) : symbols(n) {}
    DetectedTones(std::initializer_list<std::vector<uint32_t>> sets) : symbols(sets) {}
    std::vector<std::vector<uint32_t>> symbols;
};

struct DecodeResult {
    Tnid tnid;
    uint32_t score;    // number of symbols whose detected set contains this
                       // candidate's tone
    int32_t offset;    // frequency shift hypothesis the candidate was found
                       // under (0 unless an offset search ran)
    friend bool operator==(const DecodeResult&, const DecodeResult&) = default;
};

struct CorrectionCapability {
    uint32_t errors;    // wrong tones tolerated
    uint32_t erasures;  // missing tones tolerated
    friend bool operator==(const CorrectionCapability&, const CorrectionCapability&) = default;
};

// Base-d digits of m, least significant first. Throws OutOfRangeError when
// m >= d^k and KTooLargeError when k is not in [1, n-1].
std::vector<uint32_t> message_to_symbols(Tnid m, const Field& f, uint32_t k);

Tnid symbols_to_message(std::span<const uint32_t> u, const Field& f);

// Codeword tone indices c_n = sum_k u[k-1] * beta^(n*k), n = 0..n-1. This is
// the transform of the padded vector (0, u, 0, ..., 0), so the codeword's
// inverse transform has a zero first coefficient and a zero tail.
std::vector<uint32_t> gft_encode(std::span<const uint32_t> u, const Field& f);

// Convenience: encode a message id directly.
std::vector<uint32_t> encode_tnid(Tnid m, const Field& f, uint32_t k);

// Inverse transform: element j = n^-1 * sum_i c[i] * beta^(-i*j).
std::vector<uint32_t> igft(std::span<const uint32_t> c, const Field& f);

// True iff c is a codeword for some k-symbol message: inverse transform
// coefficient 0 is zero and so are the n-k-1 trailing coefficients.
bool is_valid_codeword(std::span<const uint32_t> c, const Field& f, uint32_t k);

// A constant shift delta added to every tone index shows up as the mean of
// the received indices: n^-1 * sum c'[i] recovers delta for a valid codeword.
uint32_t estimate_offset(std::span<const uint32_t> c, const Field& f);

std::vector<uint32_t> shift_codeword(std::span<const uint32_t> c, int32_t delta, const Field& f);

// d simultaneous signals are always separable iff k <= ceil(n/d): some symbol
// then contributes at least k tones of any single codeword, and distinct
// codewords cannot share k tone positions.
bool capacity_ok(uint32_t n, uint32_t k, uint32_t d);

// errors = floor((n-k)/2), erasures = n-k, from minimum distance n-k+1.
CorrectionCapability correction_capability(uint32_t n, uint32_t k);

// Score every codeword consistent with the detected tones and keep those
// matching in at least tau symbols. For k = 1 each detected tone votes for
// exactly one candidate, so this is linear in the number of detections. For
// k >= 2 candidates come from solving the k x k tone systems over all
// k-subsets of symbols; cost grows with (tones per symbol)^k. Results are
// sorted by descending score, then ascending tnid. Requires tau >= k.
std::vector<DecodeResult> decode_multi(const DetectedTones& det, const Field& f, uint32_t k,
                                       uint32_t tau);

// Runs decode_multi under each shift hypothesis delta in 0, +1, -1, ...,
// +delta_max, -delta_max, un-shifting the detected bins first. Each tnid is
// reported once, with the delta giving its best score; ties keep the smaller
// |delta|. delta_max = 0 degenerates to decode_multi.
std::vector<DecodeResult> decode_with_offset_search(const DetectedTones& det, const Field& f,
                                                    uint32_t k, uint32_t tau, uint32_t delta_max);

// Precomputed k = 1 tone layout: row u holds the codeword of tnid u, and per
// symbol the map bin -> tnid inverts it. Shared by the discovery simulator,
// which scans all d channels every slot.
class CodeTable {
public:
    explicit CodeTable(const Field& f);

    const Field& field() const { return f_; }
    std::span<const uint32_t> codeword(uint32_t u) const {
        return {cw_.data() + static_cast<size_t>(u) * f_.n(), f_.n()};
    }
    uint32_t channel_of(uint32_t symbol, uint32_t bin) const {
        return inv_[static_cast<size_t>(symbol) * f_.d() + bin];
    }

private:
    Field f_;
    std::vector<uint32_t> cw_;   // d rows of n tone indices
    std::vector<uint32_t> inv_;  // n rows of d bin -> tnid entries
};

}  // namespace tonedisc

#endif
