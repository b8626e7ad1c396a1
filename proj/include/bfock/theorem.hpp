#pragma once

// The analytic classification of which pure product inputs to a connected
// linear-optical network produce a product output:
//
//   * all inputs coherent (log series stops at degree 1), or
//   * all inputs Gaussian with equal |lambda^(2)| and the joint phase system
//     conj(U_kj) xi_j = lambda_k U_kj solvable, which pins the network to be
//     rephasable to a real matrix compatibly with the lambda phases.
//
// Any log-series term of degree >= 3 forces entanglement: the element-wise
// power matrix U_d has 1-norm strictly below 1 on a connected nontrivial
// network, so the degree-d coefficient norm cannot survive the transform.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "bfock/network.hpp"
#include "bfock/rng.hpp"
#include "bfock/states.hpp"

namespace bfock {

enum class Prediction { Product, Entangled };

enum class VerdictReason {
    AllCoherent,
    EqualSqueezingRealRephasableU,
    HigherOrderTermsPresent,
    QuadraticConditionViolated,
    NetworkTrivialOrDisconnectedCaveat,
};

inline const char* to_string(Prediction p) {
    return p == Prediction::Product ? "Product" : "Entangled";
}

inline const char* to_string(VerdictReason r) {
    switch (r) {
        case VerdictReason::AllCoherent: return "AllCoherent";
        case VerdictReason::EqualSqueezingRealRephasableU: return "EqualSqueezingRealRephasableU";
        case VerdictReason::HigherOrderTermsPresent: return "HigherOrderTermsPresent";
        case VerdictReason::QuadraticConditionViolated: return "QuadraticConditionViolated";
        case VerdictReason::NetworkTrivialOrDisconnectedCaveat:
            return "NetworkTrivialOrDisconnectedCaveat";
    }
    return "?";
}

// Rephasing pair certifying the exceptional family: with input-mode phases
// a_k and output-mode phases b_j, diag(e^{ia}) U diag(e^{ib}) is real and
// every lambda_k^(2) e^{-2i a_k} is real.
struct PhaseWitness {
    std::vector<double> input_phases;
    std::vector<double> output_phases;
};

struct TheoremVerdict {
    Prediction prediction = Prediction::Product;
    VerdictReason reason = VerdictReason::AllCoherent;
    std::optional<PhaseWitness> phases;
    std::optional<int> offending_degree;
    std::vector<int> offending_modes;

    std::string to_line() const {
        std::string line = std::string(to_string(prediction)) + " " + to_string(reason);
        if (offending_degree) line += " degree=" + std::to_string(*offending_degree);
        if (!offending_modes.empty()) {
            line += " modes=";
            for (std::size_t i = 0; i < offending_modes.size(); ++i)
                line += (i ? "," : "") + std::to_string(offending_modes[i]);
        }
        return line;
    }
};

struct ClassifyOptions {
    int cutoff = 20;                  // series cutoff for numeric log expansions
    double lambda_tol = 1e-10;        // relative zero threshold for lambda coefficients
    double phase_tol = 1e-8;          // radians, for the joint phase consistency
    double zero_threshold = kDefaultZeroThreshold;
    double vacuum_floor = kDefaultVacuumFloor;
};

struct QuadraticConditionResult {
    bool satisfied = false;
    std::optional<PhaseWitness> phases;
    std::vector<int> offending_modes;  // unequal magnitudes or phase clash
};

// Decides whether conj(U_kj) xi_j = lambda_k U_kj admits a solution xi.
// Writing lambda_k = c e^{2i theta_k}, each support entry forces the output
// phase psi_j = theta_k + arg U_kj (mod pi); the condition holds iff the
// magnitudes |lambda_k| agree and every column's forced phases coincide.
inline QuadraticConditionResult check_quadratic_condition(const std::vector<cx>& lambda2,
                                                          const NetworkUnitary& u,
                                                          double tol = 1e-10,
                                                          double phase_tol = 1e-8,
                                                          double zero_threshold = kDefaultZeroThreshold) {
    const int n = u.dim();
    if (static_cast<int>(lambda2.size()) != n)
        throw std::invalid_argument("check_quadratic_condition: dimension mismatch");
    QuadraticConditionResult res;

    double cmax = 0.0, cmin = std::numeric_limits<double>::infinity();
    for (const cx& l : lambda2) {
        cmax = std::max(cmax, std::abs(l));
        cmin = std::min(cmin, std::abs(l));
    }
    if (cmax <= tol) {  // all-zero quadratic part; nothing to constrain
        res.satisfied = true;
        res.phases = PhaseWitness{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
        return res;
    }
    if (cmax - cmin > tol) {
        res.satisfied = false;
        for (int k = 0; k < n; ++k)
            if (std::abs(std::abs(lambda2[k]) - cmax) > tol) res.offending_modes.push_back(k);
        return res;
    }

    const double pi = std::numbers::pi;
    std::vector<double> theta(n);
    for (int k = 0; k < n; ++k) theta[k] = 0.5 * std::arg(lambda2[k]);

    std::vector<double> psi(n, 0.0);
    std::vector<char> psi_set(n, 0);
    const Mat& m = u.matrix();
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            if (std::abs(m(k, j)) <= zero_threshold) continue;
            double cand = std::fmod(theta[k] + std::arg(m(k, j)), pi);
            if (cand < 0) cand += pi;
            if (!psi_set[j]) {
                psi[j] = cand;
                psi_set[j] = 1;
            } else if (detail::dist_mod_pi(cand - psi[j]) > phase_tol) {
                res.satisfied = false;
                res.offending_modes = {k, j};
                return res;
            }
        }
    }
    res.satisfied = true;
    PhaseWitness w;
    w.input_phases = theta;
    for (int j = 0; j < n; ++j) w.output_phases.push_back(-psi[j]);
    res.phases = std::move(w);
    return res;
}

namespace detail {

// lambda_j^(d) per mode, after displacement when the state lacks vacuum
// overlap. Gaussian specs use their closed forms (displacement leaves the
// classification untouched and their quadratic coefficient alone).
inline std::vector<GCoefficients> input_lambdas(const std::vector<ModeStateSpec>& specs,
                                                const ClassifyOptions& opt) {
    std::vector<GCoefficients> out;
    out.reserve(specs.size());
    for (const auto& spec : specs) {
        if (is_gaussian(spec)) {
            out.push_back(g_coefficients(spec, opt.cutoff, opt.vacuum_floor));
            continue;
        }
        const VacuumOverlapResult displaced =
            ensure_vacuum_overlap({spec}, opt.cutoff, opt.vacuum_floor);
        MultivariateSeries b(1, opt.cutoff);
        for (int k = 0; k <= opt.cutoff; ++k) b.add(MultiIndex{k}, displaced.displaced[0].coeffs[k]);
        const MultivariateSeries logb = series_log(b, opt.vacuum_floor);
        GCoefficients g;
        g.lambda.assign(opt.cutoff + 1, cx(0, 0));
        for (const auto& [idx, c] : logb.coeffs) g.lambda[idx[0]] = c;
        out.push_back(std::move(g));
    }
    return out;
}

inline TheoremVerdict classify_connected_block(const std::vector<ModeStateSpec>& specs,
                                               const NetworkUnitary& u,
                                               const ClassifyOptions& opt) {
    const std::vector<GCoefficients> lambdas = input_lambdas(specs, opt);
    const int n = static_cast<int>(specs.size());

    double scale = 0.0;
    for (const auto& g : lambdas)
        for (std::size_t d = 1; d < g.lambda.size(); ++d)
            scale = std::max(scale, std::abs(g.lambda[d]));
    const double zero = opt.lambda_tol * std::max(1.0, scale);

    // degree >= 3 terms force entanglement; the cutoff-adjacent degrees are
    // skipped because displacement folds tail truncation error into them
    const int dcheck = opt.cutoff - 2;
    TheoremVerdict v;
    for (int d = 3; d <= dcheck; ++d) {
        for (int j = 0; j < n; ++j) {
            if (d < static_cast<int>(lambdas[j].lambda.size()) &&
                std::abs(lambdas[j].lambda[d]) > zero) {
                v.prediction = Prediction::Entangled;
                v.reason = VerdictReason::HigherOrderTermsPresent;
                v.offending_degree = d;
                v.offending_modes = {j};
                return v;
            }
        }
    }

    std::vector<cx> lambda2(n);
    bool any_quadratic = false;
    for (int j = 0; j < n; ++j) {
        lambda2[j] = lambdas[j].lambda.size() > 2 ? lambdas[j].lambda[2] : cx(0, 0);
        if (std::abs(lambda2[j]) > zero) any_quadratic = true;
    }
    if (!any_quadratic) {
        v.prediction = Prediction::Product;
        v.reason = VerdictReason::AllCoherent;
        return v;
    }

    const QuadraticConditionResult qc =
        check_quadratic_condition(lambda2, u, opt.lambda_tol * std::max(1.0, scale),
                                  opt.phase_tol, opt.zero_threshold);
    if (qc.satisfied) {
        v.prediction = Prediction::Product;
        v.reason = VerdictReason::EqualSqueezingRealRephasableU;
        v.phases = qc.phases;
    } else {
        v.prediction = Prediction::Entangled;
        v.reason = VerdictReason::QuadraticConditionViolated;
        v.offending_modes = qc.offending_modes;
    }
    return v;
}

}  // namespace detail

// Full decision procedure. Disconnected networks are split into support
// blocks and classified per block (the combined verdict is Product iff every
// block's is); single-mode blocks are phase pipes and never entangle.
inline TheoremVerdict classify(const std::vector<ModeStateSpec>& specs, const NetworkUnitary& u,
                               const ClassifyOptions& opt = {}) {
    if (static_cast<int>(specs.size()) != u.dim())
        throw std::invalid_argument("classify: specs/network dimension mismatch");
    if (u.dim() == 1) {  // a phase pipe never entangles anything
        TheoremVerdict v;
        v.prediction = Prediction::Product;
        v.reason = VerdictReason::NetworkTrivialOrDisconnectedCaveat;
        return v;
    }
    std::vector<int> comp;
    const int ncomp = detail::support_components(u.matrix(), opt.zero_threshold, comp);
    if (ncomp == 1) return detail::classify_connected_block(specs, u, opt);

    TheoremVerdict combined;
    combined.prediction = Prediction::Product;
    combined.reason = VerdictReason::NetworkTrivialOrDisconnectedCaveat;
    const int n = u.dim();
    for (int c = 0; c < ncomp; ++c) {
        std::vector<int> rows, cols;
        for (int k = 0; k < n; ++k)
            if (comp[k] == c) rows.push_back(k);
        for (int j = 0; j < n; ++j)
            if (comp[n + j] == c) cols.push_back(j);
        if (rows.empty() || cols.empty()) continue;  // isolated vertex of an all-zero row/col cannot occur for unitary U
        if (rows.size() == 1 && cols.size() == 1) continue;  // phase pipe
        Mat block(rows.size(), cols.size());
        for (std::size_t a = 0; a < rows.size(); ++a)
            for (std::size_t b = 0; b < cols.size(); ++b) block(a, b) = u.matrix()(rows[a], cols[b]);
        std::vector<ModeStateSpec> block_specs;
        for (int k : rows) block_specs.push_back(specs[k]);
        const TheoremVerdict sub = detail::classify_connected_block(
            block_specs, NetworkUnitary(std::move(block), u.unitarity_tol()), opt);
        if (sub.prediction == Prediction::Entangled) {
            TheoremVerdict v = sub;
            v.offending_modes.clear();
            for (int m : sub.offending_modes)
                v.offending_modes.push_back(m < static_cast<int>(rows.size()) ? rows[m] : m);
            return v;
        }
    }
    return combined;
}

struct NormStrictness {
    NormReport report;
    bool strict = false;        // both 1-norms strictly below 1
    double margin = 0.0;        // 1 - max(one_norm, one_norm_transpose)
    double max_probe_ratio = 0.0;  // max ||U_d^T v|| / ||v|| over random probes
};

// Norm chain audit for d = 3..d_max. Trivial networks (identity, permutations)
// show margin 0 and are reported non-strict rather than failing.
inline std::vector<NormStrictness> verify_norm_strictness(const NetworkUnitary& u, int d_max,
                                                          int probes = 8,
                                                          std::uint64_t seed = 0x5eed) {
    std::vector<NormStrictness> table;
    Rng rng(seed);
    for (int d = 3; d <= d_max; ++d) {
        NormStrictness row;
        row.report = elementwise_power_norms(u, d);
        row.margin = 1.0 - std::max(row.report.one_norm, row.report.one_norm_transpose);
        row.strict = row.margin > 1e-12;
        const Mat ud_t = elementwise_power(u, d).transpose();
        for (int p = 0; p < probes; ++p) {
            Eigen::VectorXcd v(u.dim());
            for (int j = 0; j < u.dim(); ++j) v(j) = cx(rng.gaussian(), rng.gaussian());
            const double ratio = (ud_t * v).norm() / v.norm();
            row.max_probe_ratio = std::max(row.max_probe_ratio, ratio);
        }
        table.push_back(std::move(row));
    }
    return table;
}

}  // namespace bfock
