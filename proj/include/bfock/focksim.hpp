#pragma once

// Brute-force Fock-basis oracle. Applies the network directly to truncated
// amplitudes through the creation-operator transform U a^dag, by explicit
// multinomial expansion with all sqrt(n!) bookkeeping, an independent route
// against which the series substitution is cross-validated.

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "bfock/fock_vector.hpp"
#include "bfock/network.hpp"
#include "bfock/series.hpp"

namespace bfock {

namespace detail {

// Expansion of (sum_k U_{row,k} a_k^dag)^p over compositions m of p:
//   sum_{|m|=p} p!/(m1!...mN!) prod_k U_{row,k}^{m_k} (a^dag)^m.
// Memoized per (row, p).
struct RowPowerCache {
    const Mat& u;
    int num_modes;
    std::vector<std::vector<MultiIndex>> layers;  // compositions by degree
    // cache[(row, p)] -> coefficient per composition of p
    std::unordered_map<std::uint64_t, std::vector<cx>> cache;

    RowPowerCache(const Mat& m, int max_power) : u(m), num_modes(static_cast<int>(m.rows())) {
        layers.resize(max_power + 1);
        for (int d = 0; d <= max_power; ++d) enumerate_layer(num_modes, d, layers[d]);
    }

    const std::vector<cx>& row_power(int row, int p) {
        const std::uint64_t key = (static_cast<std::uint64_t>(row) << 32) | static_cast<std::uint32_t>(p);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        std::vector<cx> coeffs(layers[p].size());
        for (std::size_t i = 0; i < layers[p].size(); ++i) {
            const MultiIndex& m = layers[p][i];
            double multinomial = factorial(p);
            for (int e : m) multinomial /= factorial(e);
            cx c(multinomial, 0.0);
            for (int k = 0; k < num_modes && c != cx(0.0, 0.0); ++k)
                for (int t = 0; t < m[k]; ++t) c *= u(row, k);
            coeffs[i] = c;
        }
        return cache.emplace(key, std::move(coeffs)).first->second;
    }
};

}  // namespace detail

// |Psi_out> amplitudes: each input basis state |n> contributes
//   prod_j (sum_k U_jk a_k^dag)^{n_j} |vac> / sqrt(prod_j n_j!),
// expanded multinomially row by row. Photon number is conserved, so every
// layer is exact; no truncation error is introduced.
inline FockVector apply_network_oracle(const FockVector& psi, const NetworkUnitary& u) {
    if (psi.num_modes != u.dim())
        throw std::invalid_argument("apply_network_oracle: state/network dimension mismatch");
    const int n_modes = psi.num_modes;
    detail::RowPowerCache rows(u.matrix(), psi.cutoff);

    FockVector out(n_modes, psi.cutoff);
    std::unordered_map<std::uint64_t, cx> acc, next;
    for (const auto& [n, amp] : psi.amplitudes) {
        // product over occupied rows of the memoized expansions
        acc.clear();
        acc.emplace(pack_index(MultiIndex(n_modes, 0)), cx(1.0, 0.0));
        MultiIndex combined(n_modes, 0);
        for (int row = 0; row < n_modes; ++row) {
            const int p = n[row];
            if (p == 0) continue;
            const auto& expansion = rows.row_power(row, p);
            const auto& comps = rows.layers[p];
            next.clear();
            next.reserve(acc.size() * expansion.size());
            for (const auto& [key, val] : acc) {
                for (std::size_t i = 0; i < comps.size(); ++i) {
                    if (expansion[i] == cx(0.0, 0.0)) continue;
                    next[key + pack_index(comps[i])] += val * expansion[i];
                }
            }
            acc.swap(next);
        }
        const double inv_norm = 1.0 / sqrt_factorial_product(n);
        for (const auto& [key, val] : acc) {
            for (int j = 0; j < n_modes; ++j) combined[j] = static_cast<int>((key >> (8 * j)) & 0xff);
            // (a^dag)^q |vac> = sqrt(q!) |q>
            out.add(combined, amp * inv_norm * val * sqrt_factorial_product(combined));
        }
    }
    // drop float dust that is exactly representable as zero after cancellation
    for (auto it = out.amplitudes.begin(); it != out.amplitudes.end();)
        it = (it->second == cx(0.0, 0.0)) ? out.amplitudes.erase(it) : std::next(it);
    return out;
}

// Bridge from the series representation (delegates to fock_amplitudes).
inline FockVector from_bf(const MultivariateSeries& b) { return fock_amplitudes(b); }

}  // namespace bfock
