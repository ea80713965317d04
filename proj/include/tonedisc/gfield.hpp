#ifndef TONEDISC_GFIELD_HPP
#define TONEDISC_GFIELD_HPP

#include <cstdint>
#include <stdexcept>

namespace tonedisc {

struct NotPrimeError : std::invalid_argument {
    explicit NotPrimeError(uint32_t d);
};

struct NotDivisorError : std::invalid_argument {
    NotDivisorError(uint32_t n, uint32_t d);
};

struct ZeroInverseError : std::domain_error {
    ZeroInverseError();
};

// Prime field GF(d) together with the length-n transform root.
//
// alpha is the smallest primitive root of d, found by checking multiplicative
// orders exhaustively so every build picks the same generator. beta =
// alpha^((d-1)/n) then has order exactly n, which is what the length-n
// transform needs; this requires n | d-1.
class Field {
public:
    Field(uint32_t d, uint32_t n);

    uint32_t d() const { return d_; }
    uint32_t n() const { return n_; }
    uint32_t alpha() const { return alpha_; }
    uint32_t beta() const { return beta_; }

    uint32_t add(uint32_t a, uint32_t b) const { return (a + b) % d_; }
    uint32_t sub(uint32_t a, uint32_t b) const { return (a + d_ - b % d_) % d_; }
    uint32_t mul(uint32_t a, uint32_t b) const {
        return static_cast<uint32_t>(static_cast<uint64_t>(a) * b % d_);
    }
    uint32_t pow(uint32_t a, uint64_t e) const;
    uint32_t inv(uint32_t a) const;

    // (a + delta) mod d for a signed shift of any magnitude.
    uint32_t shift(uint32_t a, int64_t delta) const {
        int64_t r = (static_cast<int64_t>(a % d_) + delta) % static_cast<int64_t>(d_);
        if (r < 0) r += d_;
        return static_cast<uint32_t>(r);
    }

private:
    uint32_t d_;
    uint32_t n_;
    uint32_t alpha_;
    uint32_t beta_;
};

bool is_prime(uint32_t d);

}  // namespace tonedisc

#endif
