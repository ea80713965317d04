#include "tonedisc/codec.hpp"

#include <algorithm>
#include <cstdlib>
#include <unordered_map>
#include <unordered_set>

namespace tonedisc {

namespace {

// d^k without overflow surprises; k <= 31 is plenty for any practical field.
uint64_t pool_size(uint32_t d, uint32_t k) {
    uint64_t s = 1;
    for (uint32_t i = 0; i < k; ++i) s *= d;
    return s;
}

void check_k(uint32_t k, const Field& f) {
    if (k < 1 || k > f.n() - 1) {
        throw KTooLargeError("message length k must be in [1, n-1]");
    }
}

std::vector<uint32_t> clean_symbol_set(const std::vector<uint32_t>& bins, uint32_t d) {
    std::vector<uint32_t> s(bins);
    for (uint32_t b : s) {
        if (b >= d) throw OutOfRangeError("detected tone index outside the field");
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

void sort_results(std::vector<DecodeResult>& out) {
    std::sort(out.begin(), out.end(), [](const DecodeResult& a, const DecodeResult& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.tnid < b.tnid;
    });
}

// Candidate generation for k >= 2: pick k distinct symbols, pick one detected
// tone from each, and solve for the unique message hitting those tones.
class TupleSolver {
public:
    TupleSolver(const std::vector<std::vector<uint32_t>>& sets, const Field& f, uint32_t k)
        : sets_(sets), f_(f), k_(k) {
        for (uint32_t i = 0; i < sets.size(); ++i) {
            if (!sets[i].empty()) nonempty_.push_back(i);
        }
    }

    std::vector<std::vector<uint32_t>> run() {
        if (nonempty_.size() >= k_) {
            chosen_.resize(k_);
            pick_symbol(0, 0);
        }
        std::vector<std::vector<uint32_t>> out;
        out.reserve(found_.size());
        for (Tnid m : seen_order_) out.push_back(found_[m]);
        return out;
    }

private:
    void pick_symbol(uint32_t depth, size_t start) {
        if (depth == k_) {
            rhs_.resize(k_);
            pick_tone(0);
            return;
        }
        for (size_t i = start; i + (k_ - depth - 1) < nonempty_.size(); ++i) {
            chosen_[depth] = nonempty_[i];
            pick_symbol(depth + 1, i + 1);
        }
    }

    void pick_tone(uint32_t depth) {
        if (depth == k_) {
            solve();
            return;
        }
        for (uint32_t b : sets_[chosen_[depth]]) {
            rhs_[depth] = b;
            pick_tone(depth + 1);
        }
    }

    // Gaussian elimination on A[i][j] = x_i^(j+1), x_i = beta^symbol_i. The
    // x_i are distinct and nonzero, so the system is always regular.
    void solve() {
        const uint32_t k = k_;
        std::vector<uint32_t> a(static_cast<size_t>(k) * (k + 1));
        for (uint32_t i = 0; i < k; ++i) {
            const uint32_t x = f_.pow(f_.beta(), chosen_[i]);
            uint32_t p = 1;
            for (uint32_t j = 0; j < k; ++j) {
                p = f_.mul(p, x);
                a[i * (k + 1) + j] = p;
            }
            a[i * (k + 1) + k] = rhs_[i];
        }
        for (uint32_t col = 0; col < k; ++col) {
            uint32_t pivot = col;
            while (a[pivot * (k + 1) + col] == 0) ++pivot;
            if (pivot != col) {
                for (uint32_t j = col; j <= k; ++j) {
                    std::swap(a[col * (k + 1) + j], a[pivot * (k + 1) + j]);
                }
            }
            const uint32_t pinv = f_.inv(a[col * (k + 1) + col]);
            for (uint32_t j = col; j <= k; ++j) {
                a[col * (k + 1) + j] = f_.mul(a[col * (k + 1) + j], pinv);
            }
            for (uint32_t row = 0; row < k; ++row) {
                if (row == col) continue;
                const uint32_t factor = a[row * (k + 1) + col];
                if (factor == 0) continue;
                for (uint32_t j = col; j <= k; ++j) {
                    a[row * (k + 1) + j] =
                        f_.sub(a[row * (k + 1) + j], f_.mul(factor, a[col * (k + 1) + j]));
                }
            }
        }
        std::vector<uint32_t> u(k);
        for (uint32_t i = 0; i < k; ++i) u[i] = a[i * (k + 1) + k];
        const Tnid m = symbols_to_message(u, f_);
        if (found_.emplace(m, std::move(u)).second) seen_order_.push_back(m);
    }

    const std::vector<std::vector<uint32_t>>& sets_;
    const Field& f_;
    uint32_t k_;
    std::vector<uint32_t> nonempty_;
    std::vector<uint32_t> chosen_;
    std::vector<uint32_t> rhs_;
    std::unordered_map<Tnid, std::vector<uint32_t>> found_;
    std::vector<Tnid> seen_order_;
};

}  // namespace

std::vector<uint32_t> message_to_symbols(Tnid m, const Field& f, uint32_t k) {
    check_k(k, f);
    if (m >= pool_size(f.d(), k)) throw OutOfRangeError("message id outside [0, d^k)");
    std::vector<uint32_t> u(k);
    for (uint32_t i = 0; i < k; ++i) {
        u[i] = static_cast<uint32_t>(m % f.d());
        m /= f.d();
    }
    return u;
}

Tnid symbols_to_message(std::span<const uint32_t> u, const Field& f) {
    check_k(static_cast<uint32_t>(u.size()), f);
    Tnid m = 0;
    for (size_t i = u.size(); i-- > 0;) {
        if (u[i] >= f.d()) throw OutOfRangeError("symbol outside the field");
        m = m * f.d() + u[i];
    }
    return m;
}

std::vector<uint32_t> gft_encode(std::span<const uint32_t> u, const Field& f) {
    check_k(static_cast<uint32_t>(u.size()), f);
    for (uint32_t s : u) {
        if (s >= f.d()) throw OutOfRangeError("symbol outside the field");
    }
    std::vector<uint32_t> c(f.n());
    for (uint32_t n = 0; n < f.n(); ++n) {
        const uint32_t bn = f.pow(f.beta(), n);
        uint32_t acc = 0;
        uint32_t p = 1;
        for (uint32_t s : u) {
            p = f.mul(p, bn);  // beta^(n*k) for k = 1, 2, ...
            acc = f.add(acc, f.mul(s, p));
        }
        c[n] = acc;
    }
    return c;
}

std::vector<uint32_t> encode_tnid(Tnid m, const Field& f, uint32_t k) {
    const std::vector<uint32_t> u = message_to_symbols(m, f, k);
    return gft_encode(u, f);
}

std::vector<uint32_t> igft(std::span<const uint32_t> c, const Field& f) {
    if (c.size() != f.n()) throw OutOfRangeError("codeword length differs from n");
    const uint32_t ninv = f.inv(f.n() % f.d());
    const uint32_t binv = f.inv(f.beta());
    std::vector<uint32_t> v(f.n());
    for (uint32_t j = 0; j < f.n(); ++j) {
        uint32_t acc = 0;
        for (uint32_t i = 0; i < f.n(); ++i) {
            acc = f.add(acc, f.mul(c[i] % f.d(), f.pow(binv, static_cast<uint64_t>(i) * j)));
        }
        v[j] = f.mul(ninv, acc);
    }
    return v;
}

bool is_valid_codeword(std::span<const uint32_t> c, const Field& f, uint32_t k) {
    check_k(k, f);
    const std::vector<uint32_t> v = igft(c, f);
    if (v[0] != 0) return false;
    for (uint32_t j = k + 1; j < f.n(); ++j) {
        if (v[j] != 0) return false;
    }
    return true;
}

uint32_t estimate_offset(std::span<const uint32_t> c, const Field& f) {
    if (c.size() != f.n()) throw OutOfRangeError("codeword length differs from n");
    uint32_t s = 0;
    for (uint32_t x : c) s = f.add(s, x % f.d());
    return f.mul(f.inv(f.n() % f.d()), s);
}

std::vector<uint32_t> shift_codeword(std::span<const uint32_t> c, int32_t delta, const Field& f) {
    std::vector<uint32_t> out(c.begin(), c.end());
    for (uint32_t& x : out) x = f.shift(x, delta);
    return out;
}

bool capacity_ok(uint32_t n, uint32_t k, uint32_t d) {
    if (n == 0 || k == 0 || d == 0) throw OutOfRangeError("n, k, d must be positive");
    const uint32_t ceil_nd = (n + d - 1) / d;
    return k <= ceil_nd;
}

CorrectionCapability correction_capability(uint32_t n, uint32_t k) {
    if (k == 0 || k >= n) throw OutOfRangeError("need 0 < k < n");
    return {(n - k) / 2, n - k};
}

std::vector<DecodeResult> decode_multi(const DetectedTones& det, const Field& f, uint32_t k,
                                       uint32_t tau) {
    check_k(k, f);
    if (tau < k) throw OutOfRangeError("acceptance threshold tau must be at least k");
    if (det.symbols.size() != f.n()) throw OutOfRangeError("detected tone sets differ from n");

    std::vector<std::vector<uint32_t>> sets(f.n());
    for (uint32_t i = 0; i < f.n(); ++i) sets[i] = clean_symbol_set(det.symbols[i], f.d());

    std::vector<DecodeResult> out;

    if (k == 1) {
        // Tone b in symbol i can only come from tnid b * beta^-i, so count
        // votes instead of scanning all d candidates.
        std::vector<uint32_t> score(f.d(), 0);
        std::vector<uint32_t> touched;
        const uint32_t binv = f.inv(f.beta());
        uint32_t bipow = 1;
        for (uint32_t i = 0; i < f.n(); ++i) {
            for (uint32_t b : sets[i]) {
                const uint32_t u = f.mul(b, bipow);
                if (score[u]++ == 0) touched.push_back(u);
            }
            bipow = f.mul(bipow, binv);
        }
        for (uint32_t u : touched) {
            if (score[u] >= tau) out.push_back({u, score[u], 0});
        }
        for (uint32_t u : touched) score[u] = 0;
    } else {
        TupleSolver solver(sets, f, k);
        std::vector<std::vector<uint8_t>> present(f.n(), std::vector<uint8_t>(f.d(), 0));
        for (uint32_t i = 0; i < f.n(); ++i) {
            for (uint32_t b : sets[i]) present[i][b] = 1;
        }
        for (const std::vector<uint32_t>& u : solver.run()) {
            const std::vector<uint32_t> c = gft_encode(u, f);
            uint32_t score = 0;
            for (uint32_t i = 0; i < f.n(); ++i) score += present[i][c[i]];
            if (score >= tau) out.push_back({symbols_to_message(u, f), score, 0});
        }
    }

    sort_results(out);
    return out;
}

std::vector<DecodeResult> decode_with_offset_search(const DetectedTones& det, const Field& f,
                                                    uint32_t k, uint32_t tau, uint32_t delta_max) {
    if (delta_max > (f.d() - 1) / 2) {
        throw OutOfRangeError("offset search range exceeds (d-1)/2");
    }
    if (delta_max == 0) return decode_multi(det, f, k, tau);

    std::unordered_map<Tnid, DecodeResult> best;
    DetectedTones shifted(f.n());
    for (int32_t mag = 0; mag <= static_cast<int32_t>(delta_max); ++mag) {
        for (int sign : {+1, -1}) {
            if (mag == 0 && sign < 0) continue;
            const int32_t delta = sign * mag;
            for (uint32_t i = 0; i < f.n(); ++i) {
                shifted.symbols[i].clear();
                for (uint32_t b : det.symbols[i]) {
                    shifted.symbols[i].push_back(f.shift(b, -delta));
                }
            }
            for (DecodeResult r : decode_multi(shifted, f, k, tau)) {
                r.offset = delta;
                auto [it, fresh] = best.emplace(r.tnid, r);
                // Hypotheses arrive in order of |delta|, so a strictly better
                // score is the only reason to replace.
                if (!fresh && r.score > it->second.score) it->second = r;
            }
        }
    }

    std::vector<DecodeResult> out;
    out.reserve(best.size());
    for (const auto& [m, r] : best) out.push_back(r);
    sort_results(out);
    return out;
}

CodeTable::CodeTable(const Field& f) : f_(f) {
    const uint32_t d = f.d();
    const uint32_t n = f.n();
    cw_.resize(static_cast<size_t>(d) * n);
    inv_.resize(static_cast<size_t>(n) * d);
    for (uint32_t u = 0; u < d; ++u) {
        uint32_t bin = u;  // u * beta^0
        for (uint32_t i = 0; i < n; ++i) {
            cw_[static_cast<size_t>(u) * n + i] = bin;
            inv_[static_cast<size_t>(i) * d + bin] = u;
            bin = f.mul(bin, f.beta());
        }
    }
}

}  // namespace tonedisc
