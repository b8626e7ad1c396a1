#pragma once

// Amplitudes over the truncated multi-mode Fock basis |n1,...,nN> with a
// total-photon cutoff.

#include <algorithm>
#include <stdexcept>

#include "bfock/multi_index.hpp"

namespace bfock {

struct FockVector {
    int num_modes = 0;
    int cutoff = 0;                // max total photons
    CoeffMap amplitudes;           // absent index means amplitude zero

    FockVector(int n_modes, int max_total)
        : num_modes(n_modes), cutoff(max_total) {
        if (n_modes < 1 || n_modes > kMaxSeriesModes)
            throw std::domain_error("FockVector: mode count must be in 1..8");
        if (max_total < 0 || max_total > kMaxCutoff)
            throw std::domain_error("FockVector: cutoff must be in 0..34");
    }

    cx amplitude(const MultiIndex& n) const {
        const auto it = amplitudes.find(n);
        return it == amplitudes.end() ? cx(0.0, 0.0) : it->second;
    }

    void add(const MultiIndex& n, cx value) {
        if (value == cx(0.0, 0.0)) return;
        if (total_degree(n) > cutoff)
            throw std::domain_error("FockVector: index exceeds the photon cutoff");
        amplitudes[n] += value;
    }

    double norm_squared() const {
        double s = 0.0;
        for (const auto& [n, a] : amplitudes) s += std::norm(a);
        return s;
    }
};

// Probability mass lost to the cutoff, clamped at zero.
inline double norm_deficit(const FockVector& psi) {
    return std::max(0.0, 1.0 - psi.norm_squared());
}

}  // namespace bfock
