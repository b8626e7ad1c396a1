#pragma once

// Multi-indices over N modes (photon occupation tuples), graded-lex ordering,
// layer enumeration, and small combinatorial tables shared by the series and
// Fock-basis code.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace bfock {

using cx = std::complex<double>;

// Exponent tuple (n1, ..., nN), one nonnegative entry per mode.
using MultiIndex = std::vector<int>;

// Total photon cutoffs are capped so that sqrt(n1! ... nN!) stays far from
// double overflow and packed 8-bit exponents fit a 64-bit key.
inline constexpr int kMaxCutoff = 34;
inline constexpr int kMaxSeriesModes = 8;

inline int total_degree(const MultiIndex& n) {
    int d = 0;
    for (int e : n) d += e;
    return d;
}

// Graded lexicographic: lower total degree first, then plain tuple order.
struct GradedLexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const {
        const int da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        return a < b;
    }
};

using CoeffMap = std::map<MultiIndex, cx, GradedLexLess>;

inline double factorial(int n) {
    static const std::vector<double> table = [] {
        std::vector<double> t(kMaxCutoff + 1);
        t[0] = 1.0;
        for (int k = 1; k <= kMaxCutoff; ++k) t[k] = t[k - 1] * k;
        return t;
    }();
    if (n < 0 || n > kMaxCutoff) throw std::domain_error("factorial: n out of range");
    return table[n];
}

inline double sqrt_factorial(int n) {
    static const std::vector<double> table = [] {
        std::vector<double> t(kMaxCutoff + 1);
        for (int k = 0; k <= kMaxCutoff; ++k) t[k] = std::sqrt(factorial(k));
        return t;
    }();
    if (n < 0 || n > kMaxCutoff) throw std::domain_error("sqrt_factorial: n out of range");
    return table[n];
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    return factorial(n) / (factorial(k) * factorial(n - k));
}

// sqrt(n1! ... nN!)
inline double sqrt_factorial_product(const MultiIndex& n) {
    double p = 1.0;
    for (int e : n) p *= sqrt_factorial(e);
    return p;
}

// Packs exponents into a 64-bit key (8 bits each); requires N <= 8 and
// entries <= kMaxCutoff.
inline std::uint64_t pack_index(const MultiIndex& n) {
    std::uint64_t key = 0;
    for (std::size_t j = 0; j < n.size(); ++j)
        key |= static_cast<std::uint64_t>(n[j] & 0xff) << (8 * j);
    return key;
}

// All multi-indices with total degree exactly `degree`, in ascending tuple
// order. Appends to `out`.
inline void enumerate_layer(int num_modes, int degree, std::vector<MultiIndex>& out) {
    MultiIndex idx(num_modes, 0);
    // Walk compositions recursively; the tail mode absorbs the remainder.
    auto rec = [&](auto&& self, int mode, int remaining) -> void {
        if (mode == num_modes - 1) {
            idx[mode] = remaining;
            out.push_back(idx);
            return;
        }
        for (int e = 0; e <= remaining; ++e) {
            idx[mode] = e;
            self(self, mode + 1, remaining - e);
        }
    };
    if (num_modes == 0) return;
    rec(rec, 0, degree);
}

// Basis bookkeeping for fixed (N, D): per-layer index lists, rank lookup by
// packed key, and successor ranks under exponent increments. Built once per
// series operation; sizes are C(D+N, N) overall.
struct IndexTable {
    int num_modes = 0;
    int max_degree = 0;
    std::vector<std::vector<MultiIndex>> layers;                    // [d][pos]
    std::vector<std::unordered_map<std::uint64_t, int>> ranks;      // [d] key -> pos
    std::vector<std::vector<int>> successors;                       // [d][pos * N + j] -> pos in layer d+1

    IndexTable(int n_modes, int degree) : num_modes(n_modes), max_degree(degree) {
        if (n_modes < 1 || n_modes > kMaxSeriesModes)
            throw std::domain_error("IndexTable: mode count must be in 1..8");
        if (degree < 0 || degree > kMaxCutoff)
            throw std::domain_error("IndexTable: degree must be in 0..34");
        layers.resize(degree + 1);
        ranks.resize(degree + 1);
        for (int d = 0; d <= degree; ++d) {
            enumerate_layer(n_modes, d, layers[d]);
            ranks[d].reserve(layers[d].size() * 2);
            for (int p = 0; p < static_cast<int>(layers[d].size()); ++p)
                ranks[d].emplace(pack_index(layers[d][p]), p);
        }
        successors.resize(degree);
        for (int d = 0; d < degree; ++d) {
            successors[d].resize(layers[d].size() * n_modes);
            for (int p = 0; p < static_cast<int>(layers[d].size()); ++p) {
                MultiIndex idx = layers[d][p];
                for (int j = 0; j < n_modes; ++j) {
                    ++idx[j];
                    successors[d][p * n_modes + j] = ranks[d + 1].at(pack_index(idx));
                    --idx[j];
                }
            }
        }
    }

    int rank(const MultiIndex& n) const {
        return ranks[total_degree(n)].at(pack_index(n));
    }
};

}  // namespace bfock
