#include "doctest.h"
#include "tonedisc/gfield.hpp"

#include <cstdint>
#include <vector>

using tonedisc::Field;

namespace {

// Brute-force multiplicative order, independent of Field's arithmetic.
uint32_t order_by_table(uint32_t a, uint32_t d) {
    uint64_t x = 1;
    for (uint32_t k = 1; k <= d; ++k) {
        x = x * a % d;
        if (x == 1) return k;
    }
    return 0;
}

uint32_t reference_primitive_root(uint32_t d) {
    for (uint32_t g = 2; g < d; ++g) {
        if (order_by_table(g, d) == d - 1) return g;
    }
    return 0;
}

const std::vector<uint32_t> kPrimes = {3, 5, 7, 17, 101, 257, 521, 997};

}  // namespace

TEST_CASE("field construction picks the smallest primitive root") {
    Field f(7, 3);
    CHECK(f.alpha() == 3);
    CHECK(f.beta() == 2);

    Field g(7, 6);
    CHECK(g.alpha() == 3);
    CHECK(g.beta() == 3);

    for (uint32_t d : kPrimes) {
        Field h(d, 1);
        CHECK(h.alpha() == reference_primitive_root(d));
    }
}

TEST_CASE("field construction rejects bad parameters") {
    CHECK_THROWS_AS(Field(512, 8), tonedisc::NotPrimeError);
    CHECK_THROWS_AS(Field(7, 4), tonedisc::NotDivisorError);
    CHECK_THROWS_AS(Field(1, 1), tonedisc::NotPrimeError);
    CHECK_THROWS_AS(Field(2, 1), tonedisc::NotPrimeError);
    CHECK_THROWS_AS(Field(9, 2), tonedisc::NotPrimeError);
    CHECK_THROWS_AS(Field(7, 0), tonedisc::NotDivisorError);
    CHECK_THROWS_AS(Field(7, 5), tonedisc::NotDivisorError);
}

TEST_CASE("basic arithmetic in GF(7)") {
    Field f(7, 6);
    CHECK(f.mul(3, 5) == 1);
    CHECK(f.inv(3) == 5);
    CHECK(f.pow(2, 3) == 1);
    CHECK(f.add(6, 3) == 2);
    CHECK(f.sub(2, 5) == 4);
    CHECK(f.pow(0, 0) == 1);
    CHECK_THROWS_AS(f.inv(0), tonedisc::ZeroInverseError);
    CHECK_THROWS_AS(f.inv(7), tonedisc::ZeroInverseError);
}

TEST_CASE("every nonzero element has a working inverse") {
    for (uint32_t d : kPrimes) {
        Field f(d, 1);
        for (uint32_t a = 1; a < d; ++a) {
            CHECK(f.mul(a, f.inv(a)) == 1);
        }
    }
}

TEST_CASE("beta has order exactly n for every admissible n") {
    for (uint32_t d : {7u, 17u, 257u, 521u}) {
        for (uint32_t n = 1; n < d; ++n) {
            if ((d - 1) % n != 0) continue;
            Field f(d, n);
            CHECK(order_by_table(f.beta(), d) == f.n());
        }
    }
}

TEST_CASE("beta power sums vanish off the zero residue") {
    // sum_j beta^(j*m) over j = 0..n-1 is n when m = 0 mod n and 0 otherwise;
    // this is the cancellation the transform inverse relies on.
    for (uint32_t d : {7u, 17u, 257u}) {
        for (uint32_t n : {2u, 4u, 8u, 16u}) {
            if ((d - 1) % n != 0) continue;
            Field f(d, n);
            for (uint32_t m = 0; m < 2 * n; ++m) {
                uint32_t s = 0;
                for (uint32_t j = 0; j < n; ++j) {
                    s = f.add(s, f.pow(f.beta(), static_cast<uint64_t>(j) * m));
                }
                if (m % n == 0) {
                    CHECK(s == n % d);
                } else {
                    CHECK(s == 0);
                }
            }
        }
    }
}

TEST_CASE("signed shifts wrap into the field") {
    Field f(7, 3);
    CHECK(f.shift(6, 1) == 0);
    CHECK(f.shift(0, -1) == 6);
    CHECK(f.shift(3, -10) == 0);
    CHECK(f.shift(3, 14) == 3);
}
