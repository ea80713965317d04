#include "tonedisc/gfield.hpp"

#include <string>

namespace tonedisc {

NotPrimeError::NotPrimeError(uint32_t d)
    : std::invalid_argument("field order " + std::to_string(d) + " is not an odd prime") {}

NotDivisorError::NotDivisorError(uint32_t n, uint32_t d)
    : std::invalid_argument("transform length " + std::to_string(n) + " does not divide " +
                            std::to_string(d) + "-1") {}

ZeroInverseError::ZeroInverseError() : std::domain_error("inverse of 0") {}

bool is_prime(uint32_t d) {
    if (d < 2) return false;
    if (d % 2 == 0) return d == 2;
    for (uint32_t f = 3; static_cast<uint64_t>(f) * f <= d; f += 2) {
        if (d % f == 0) return false;
    }
    return true;
}

namespace {

uint32_t multiplicative_order(uint32_t a, uint32_t d) {
    uint64_t x = a;
    uint32_t ord = 1;
    while (x != 1) {
        x = x * a % d;
        ++ord;
    }
    return ord;
}

uint32_t smallest_primitive_root(uint32_t d) {
    for (uint32_t g = 2; g < d; ++g) {
        if (multiplicative_order(g, d) == d - 1) return g;
    }
    return 0;  // unreachable for prime d >= 3
}

}  // namespace

Field::Field(uint32_t d, uint32_t n) : d_(d), n_(n) {
    if (d < 3 || !is_prime(d)) throw NotPrimeError(d);
    if (n < 1 || (d - 1) % n != 0) throw NotDivisorError(n, d);
    alpha_ = smallest_primitive_root(d);
    beta_ = pow(alpha_, (d - 1) / n);
}

uint32_t Field::pow(uint32_t a, uint64_t e) const {
    uint64_t base = a % d_;
    uint64_t acc = 1;
    while (e > 0) {
        if (e & 1) acc = acc * base % d_;
        base = base * base % d_;
        e >>= 1;
    }
    return static_cast<uint32_t>(acc);
}

uint32_t Field::inv(uint32_t a) const {
    if (a % d_ == 0) throw ZeroInverseError();
    return pow(a % d_, d_ - 2);
}

}  // namespace tonedisc
