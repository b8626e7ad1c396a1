#pragma once

// N-port linear-optical network matrices: construction and validation,
// support-graph structure (connectedness, nontriviality), rephasing of the
// input/output modes to a real matrix, and norms of element-wise powers.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <complex>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <vector>

#include "bfock/multi_index.hpp"
#include "bfock/rng.hpp"

namespace bfock {

using Mat = Eigen::MatrixXcd;

inline constexpr double kDefaultUnitarityTol = 1e-10;
inline constexpr double kDefaultZeroThreshold = 1e-12;

// The mode-mixing matrix U of an N-port network, validated unitary on
// construction: max |(U^dag U - I)_kj| <= unitarity_tol.
class NetworkUnitary {
public:
    explicit NetworkUnitary(Mat entries, double unitarity_tol = kDefaultUnitarityTol)
        : entries_(std::move(entries)), unitarity_tol_(unitarity_tol) {
        if (entries_.rows() < 1 || entries_.rows() != entries_.cols())
            throw std::invalid_argument("NetworkUnitary: matrix must be square, dim >= 1");
        if (unitarity_tol_ < 0.0)
            throw std::invalid_argument("NetworkUnitary: unitarity_tol must be nonnegative");
        const Mat defect = entries_.adjoint() * entries_ - Mat::Identity(dim(), dim());
        if (defect.cwiseAbs().maxCoeff() > unitarity_tol_)
            throw std::invalid_argument("NetworkUnitary: matrix fails the unitarity check");
    }

    int dim() const { return static_cast<int>(entries_.rows()); }
    const Mat& matrix() const { return entries_; }
    double unitarity_tol() const { return unitarity_tol_; }

    cx operator()(int k, int j) const { return entries_(k, j); }

private:
    Mat entries_;
    double unitarity_tol_;
};

struct StructureReport {
    bool connected = false;
    bool nontrivial = false;
    double zero_threshold = kDefaultZeroThreshold;
};

struct RephasingWitness {
    bool feasible = false;
    std::vector<double> row_phases;  // alpha_k, radians
    std::vector<double> col_phases;  // beta_j, radians
    double residual = 0.0;           // max distance of arg(U_kj)+alpha_k+beta_j from {0, pi} mod 2pi
};

struct NormReport {
    int degree = 0;
    double one_norm = 0.0;            // ||U_d||_1, max column abs sum
    double one_norm_transpose = 0.0;  // ||U_d^T||_1, max row abs sum
    double spectral_norm = 0.0;       // ||U_d^T||_2, largest singular value
};

// 2x2 beamsplitter [[cos t, e^{-i p} sin t], [-e^{i p} sin t, cos t]];
// theta in [0, pi/2] sets the reflectivity, phi in [0, 2pi) the output phase.
inline NetworkUnitary make_beamsplitter(double theta, double phi) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi / 2))
        throw std::domain_error("make_beamsplitter: theta must lie in [0, pi/2]");
    if (!(phi >= 0.0 && phi < 2 * std::numbers::pi))
        throw std::domain_error("make_beamsplitter: phi must lie in [0, 2pi)");
    const double c = std::cos(theta), s = std::sin(theta);
    Mat u(2, 2);
    u(0, 0) = c;
    u(0, 1) = std::polar(s, -phi);
    u(1, 0) = -std::polar(s, phi);
    u(1, 1) = c;
    return NetworkUnitary(std::move(u));
}

inline NetworkUnitary make_identity(int n) {
    return NetworkUnitary(Mat::Identity(n, n));
}

// Haar-distributed n x n unitary: QR of a complex Ginibre matrix with the
// R diagonal rephased to be positive. Deterministic for a fixed seed.
inline NetworkUnitary haar_random_unitary(int n, std::uint64_t seed) {
    if (n < 1) throw std::domain_error("haar_random_unitary: n must be >= 1");
    Rng rng(seed);
    Mat g(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) g(r, c) = cx(rng.gaussian(), rng.gaussian());
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < n; ++c) {
        const cx d = r(c, c);
        const double a = std::abs(d);
        q.col(c) *= (a > 0.0) ? d / a : cx(1.0, 0.0);
    }
    return NetworkUnitary(std::move(q));
}

namespace detail {

// Connected components of the bipartite support graph on rows (0..N-1) and
// columns (N..2N-1); edge (k, N+j) present iff |U_kj| > zero_threshold.
// Returns a component id per vertex and the component count.
inline int support_components(const Mat& u, double zero_threshold, std::vector<int>& comp) {
    const int n = static_cast<int>(u.rows());
    comp.assign(2 * n, -1);
    int ncomp = 0;
    for (int start = 0; start < 2 * n; ++start) {
        if (comp[start] >= 0) continue;
        comp[start] = ncomp;
        std::queue<int> q;
        q.push(start);
        while (!q.empty()) {
            const int v = q.front();
            q.pop();
            if (v < n) {
                for (int j = 0; j < n; ++j)
                    if (std::abs(u(v, j)) > zero_threshold && comp[n + j] < 0) {
                        comp[n + j] = ncomp;
                        q.push(n + j);
                    }
            } else {
                const int j = v - n;
                for (int k = 0; k < n; ++k)
                    if (std::abs(u(k, j)) > zero_threshold && comp[k] < 0) {
                        comp[k] = ncomp;
                        q.push(k);
                    }
            }
        }
        ++ncomp;
    }
    return ncomp;
}

// Distance of an angle from the nearest multiple of pi.
inline double dist_mod_pi(double angle) {
    const double pi = std::numbers::pi;
    double r = std::fmod(angle, pi);
    if (r < 0) r += pi;
    return std::min(r, pi - r);
}

}  // namespace detail

inline StructureReport structure_report(const NetworkUnitary& u,
                                        double zero_threshold = kDefaultZeroThreshold) {
    StructureReport rep;
    rep.zero_threshold = zero_threshold;
    std::vector<int> comp;
    rep.connected = detail::support_components(u.matrix(), zero_threshold, comp) == 1;
    rep.nontrivial = u.matrix().cwiseAbs().maxCoeff() < 1.0 - zero_threshold;
    return rep;
}

// Searches for row phases alpha and column phases beta with
// arg(U_kj) + alpha_k + beta_j = 0 (mod pi) on every support edge, by
// spanning-tree propagation; non-tree edges decide feasibility. Phases are
// determined mod pi ("real" admits negative entries), and disconnected
// matrices are solved per component.
inline RephasingWitness real_rephasing_witness(const NetworkUnitary& u, double phase_tol = 1e-8,
                                               double zero_threshold = kDefaultZeroThreshold) {
    const Mat& m = u.matrix();
    const int n = u.dim();
    const double pi = std::numbers::pi;
    RephasingWitness w;
    w.row_phases.assign(n, 0.0);
    w.col_phases.assign(n, 0.0);

    std::vector<char> row_set(n, 0), col_set(n, 0);
    std::queue<int> q;  // vertices 0..n-1 rows, n..2n-1 cols
    for (int start = 0; start < 2 * n; ++start) {
        const bool seen = start < n ? row_set[start] : col_set[start - n];
        if (seen) continue;
        if (start < n)
            row_set[start] = 1;
        else
            col_set[start - n] = 1;
        q.push(start);
        while (!q.empty()) {
            const int v = q.front();
            q.pop();
            if (v < n) {
                const int k = v;
                for (int j = 0; j < n; ++j) {
                    if (std::abs(m(k, j)) <= zero_threshold || col_set[j]) continue;
                    double b = -std::arg(m(k, j)) - w.row_phases[k];
                    b = std::fmod(b, pi);
                    if (b < 0) b += pi;
                    w.col_phases[j] = b;
                    col_set[j] = 1;
                    q.push(n + j);
                }
            } else {
                const int j = v - n;
                for (int k = 0; k < n; ++k) {
                    if (std::abs(m(k, j)) <= zero_threshold || row_set[k]) continue;
                    double a = -std::arg(m(k, j)) - w.col_phases[j];
                    a = std::fmod(a, pi);
                    if (a < 0) a += pi;
                    w.row_phases[k] = a;
                    row_set[k] = 1;
                    q.push(k);
                }
            }
        }
    }

    double residual = 0.0;
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            if (std::abs(m(k, j)) <= zero_threshold) continue;
            const double gap =
                detail::dist_mod_pi(std::arg(m(k, j)) + w.row_phases[k] + w.col_phases[j]);
            residual = std::max(residual, gap);
        }
    w.residual = residual;
    w.feasible = residual <= phase_tol;
    return w;
}

// Element-wise d-th power of the network matrix.
inline Mat elementwise_power(const NetworkUnitary& u, int d) {
    const Mat& m = u.matrix();
    Mat out(m.rows(), m.cols());
    for (Eigen::Index k = 0; k < m.rows(); ++k)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            cx p(1.0, 0.0);
            for (int t = 0; t < d; ++t) p *= m(k, j);
            out(k, j) = p;
        }
    return out;
}

// 1-norms of U_d and U_d^T (exact column/row abs sums) and the spectral norm
// via singular values. For a connected nontrivial network and d >= 3 both
// 1-norms fall strictly below 1, which is what forbids product outputs with
// higher-order log-series terms.
inline NormReport elementwise_power_norms(const NetworkUnitary& u, int d) {
    if (d < 2) throw std::domain_error("elementwise_power_norms: d must be >= 2");
    const Mat ud = elementwise_power(u, d);
    NormReport rep;
    rep.degree = d;
    rep.one_norm = ud.cwiseAbs().colwise().sum().maxCoeff();
    rep.one_norm_transpose = ud.cwiseAbs().rowwise().sum().maxCoeff();
    Eigen::JacobiSVD<Mat> svd(ud);
    rep.spectral_norm = svd.singularValues()(0);
    return rep;
}

}  // namespace bfock
