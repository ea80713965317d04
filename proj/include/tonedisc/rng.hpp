#ifndef TONEDISC_RNG_HPP
#define TONEDISC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace tonedisc {

// Deterministic random stream. Wraps mt19937_64 but generates doubles and
// gaussians itself so that results do not depend on the standard library's
// distribution implementations. Independent streams are derived from a
// master seed, a stream name and an index, which lets trials run in any
// order and still reproduce bit for bit.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    static Rng stream(uint64_t master, std::string_view name, uint64_t index) {
        uint64_t h = 1469598103934665603ull;  // FNV-1a over the stream name
        for (char c : name) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ull;
        }
        std::seed_seq seq{static_cast<uint32_t>(master), static_cast<uint32_t>(master >> 32),
                          static_cast<uint32_t>(h), static_cast<uint32_t>(h >> 32),
                          static_cast<uint32_t>(index), static_cast<uint32_t>(index >> 32)};
        Rng r(0);
        r.eng_.seed(seq);
        return r;
    }

    uint64_t u64() { return eng_(); }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n), n >= 1, without modulo bias.
    uint64_t below(uint64_t n) {
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Standard normal via Box-Muller; pairs are cached.
    double gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace tonedisc

#endif
