#pragma once

// Numerical entanglement diagnostics on Fock-basis states: single-mode
// marginals, purity, von Neumann / Schmidt entropy (base 2, so Hong-Ou-Mandel
// reads exactly one bit), and the all-modes product test. Truncation deficit
// is renormalized away and folded into the tolerance so that lost tail mass
// never masquerades as entanglement.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bfock/fock_vector.hpp"

namespace bfock {

inline constexpr double kEigenvalueFloor = 1e-14;

struct EntanglementReport {
    std::vector<double> per_mode_entropy;  // bits
    std::vector<double> per_mode_purity;
    double min_purity = 1.0;
    bool is_product = true;
    double tolerance_used = 0.0;
    double truncation_deficit = 0.0;
};

namespace detail {

inline double entropy_bits(const std::vector<double>& probs) {
    double s = 0.0;
    for (double p : probs)
        if (p > kEigenvalueFloor) s -= p * std::log2(p);
    return std::max(0.0, s);
}

// Packs the exponents of `n` outside `mode` (resp. outside `subset`).
inline std::uint64_t complement_key(const MultiIndex& n, int mode) {
    std::uint64_t key = 0;
    int at = 0;
    for (std::size_t j = 0; j < n.size(); ++j) {
        if (static_cast<int>(j) == mode) continue;
        key |= static_cast<std::uint64_t>(n[j] & 0xff) << (8 * at++);
    }
    return key;
}

}  // namespace detail

// Reduced density matrix of one mode in the photon basis 0..cutoff,
// normalized to unit trace.
inline Eigen::MatrixXcd single_mode_marginal(const FockVector& psi, int mode) {
    if (mode < 0 || mode >= psi.num_modes)
        throw std::invalid_argument("single_mode_marginal: mode out of range");
    const int dim = psi.cutoff + 1;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    // group amplitudes sharing the complement configuration
    std::unordered_map<std::uint64_t, std::vector<std::pair<int, cx>>> groups;
    for (const auto& [n, a] : psi.amplitudes)
        groups[detail::complement_key(n, mode)].emplace_back(n[mode], a);
    for (const auto& [key, entries] : groups)
        for (const auto& [na, aa] : entries)
            for (const auto& [nb, ab] : entries) rho(na, nb) += aa * std::conj(ab);
    const double tr = rho.trace().real();
    if (tr > 0.0) rho /= tr;
    return rho;
}

inline double marginal_purity(const Eigen::MatrixXcd& rho) {
    return (rho * rho).trace().real();
}

inline double marginal_entropy_bits(const Eigen::MatrixXcd& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    std::vector<double> probs(es.eigenvalues().data(),
                              es.eigenvalues().data() + es.eigenvalues().size());
    return detail::entropy_bits(probs);
}

struct SchmidtResult {
    double entropy_bits = 0.0;
    std::vector<double> singular_values;
};

// Entanglement entropy across (subset | complement): reshape amplitudes into
// a matrix over the two sub-bases and take singular values.
inline SchmidtResult schmidt_entropy(const FockVector& psi, const std::vector<int>& partition) {
    if (partition.empty() || static_cast<int>(partition.size()) >= psi.num_modes)
        throw std::domain_error("schmidt_entropy: partition must be a nonempty proper subset");
    std::vector<char> in_part(psi.num_modes, 0);
    for (int m : partition) {
        if (m < 0 || m >= psi.num_modes)
            throw std::invalid_argument("schmidt_entropy: mode out of range");
        in_part[m] = 1;
    }
    // enumerate the sub-indices actually present, in graded-lex order
    std::map<MultiIndex, int, GradedLexLess> row_of, col_of;
    std::vector<std::tuple<int, int, cx>> entries;
    MultiIndex a, b;
    for (const auto& [n, amp] : psi.amplitudes) {
        a.clear();
        b.clear();
        for (int j = 0; j < psi.num_modes; ++j) (in_part[j] ? a : b).push_back(n[j]);
        const int r = row_of.emplace(a, static_cast<int>(row_of.size())).first->second;
        const int c = col_of.emplace(b, static_cast<int>(col_of.size())).first->second;
        entries.emplace_back(r, c, amp);
    }
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(std::max<std::size_t>(row_of.size(), 1),
                                                std::max<std::size_t>(col_of.size(), 1));
    for (const auto& [r, c, amp] : entries) m(r, c) = amp;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    SchmidtResult res;
    double total = 0.0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
        const double s = svd.singularValues()(i);
        res.singular_values.push_back(s);
        total += s * s;
    }
    std::vector<double> probs;
    for (double s : res.singular_values)
        if (total > 0.0) probs.push_back(s * s / total);
    res.entropy_bits = detail::entropy_bits(probs);
    return res;
}

// A pure state is a full product across modes iff every single-mode marginal
// is pure. tol <= 0 selects the deficit-aware default max(1e-9, 10 * deficit).
inline EntanglementReport product_test(const FockVector& psi, double tol = 0.0) {
    EntanglementReport rep;
    rep.truncation_deficit = norm_deficit(psi);
    rep.tolerance_used = tol > 0.0 ? tol : std::max(1e-9, 10.0 * rep.truncation_deficit);
    for (int mode = 0; mode < psi.num_modes; ++mode) {
        const Eigen::MatrixXcd rho = single_mode_marginal(psi, mode);
        rep.per_mode_purity.push_back(marginal_purity(rho));
        rep.per_mode_entropy.push_back(marginal_entropy_bits(rho));
    }
    rep.min_purity = *std::min_element(rep.per_mode_purity.begin(), rep.per_mode_purity.end());
    rep.is_product = (1.0 - rep.min_purity) <= rep.tolerance_used;
    return rep;
}

}  // namespace bfock
