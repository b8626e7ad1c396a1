#pragma once

// Truncated multivariate power series over C, the working form of the
// Bargmann-Fock representation B(z) = sum_n <n|Psi>/sqrt(n1!...nN!) z^n.
//
// Truncation is by TOTAL degree D (a global photon cutoff). The linear
// substitution z -> Uz maps each total-degree layer to itself, so all the
// identities below hold layer by layer with no truncation cross-talk.

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "bfock/fock_vector.hpp"
#include "bfock/multi_index.hpp"
#include "bfock/network.hpp"

namespace bfock {

inline constexpr double kDefaultVacuumFloor = 1e-8;

// One mode's B_j(z_j), a plain coefficient list indexed by degree.
struct SingleModeSeries {
    int max_degree = 0;
    std::vector<cx> coeffs;  // size max_degree + 1

    explicit SingleModeSeries(int degree) : max_degree(degree), coeffs(degree + 1, cx(0, 0)) {
        if (degree < 1 || degree > kMaxCutoff)
            throw std::domain_error("SingleModeSeries: degree must be in 1..34");
    }
};

struct MultivariateSeries {
    int num_modes = 0;
    int max_total_degree = 0;
    CoeffMap coeffs;  // absent index means coefficient zero

    MultivariateSeries(int n_modes, int degree) : num_modes(n_modes), max_total_degree(degree) {
        if (n_modes < 1 || n_modes > kMaxSeriesModes)
            throw std::domain_error("MultivariateSeries: mode count must be in 1..8");
        if (degree < 0 || degree > kMaxCutoff)
            throw std::domain_error("MultivariateSeries: degree must be in 0..34");
    }

    cx coeff(const MultiIndex& n) const {
        const auto it = coeffs.find(n);
        return it == coeffs.end() ? cx(0.0, 0.0) : it->second;
    }

    void add(const MultiIndex& n, cx value) {
        if (value == cx(0.0, 0.0)) return;
        if (total_degree(n) > max_total_degree)
            throw std::domain_error("MultivariateSeries: index exceeds the total-degree cutoff");
        coeffs[n] += value;
    }

    cx constant_term() const { return coeff(MultiIndex(num_modes, 0)); }
};

namespace detail {

// Truncated product; both factors must share mode count and cutoff.
inline MultivariateSeries multiply(const MultivariateSeries& a, const MultivariateSeries& b) {
    if (a.num_modes != b.num_modes || a.max_total_degree != b.max_total_degree)
        throw std::invalid_argument("series multiply: shape mismatch");
    MultivariateSeries out(a.num_modes, a.max_total_degree);
    MultiIndex sum(a.num_modes, 0);
    for (const auto& [m, cm] : a.coeffs) {
        const int dm = total_degree(m);
        for (const auto& [n, cn] : b.coeffs) {
            if (dm + total_degree(n) > a.max_total_degree) break;  // graded order: later terms only grow
            for (int j = 0; j < a.num_modes; ++j) sum[j] = m[j] + n[j];
            out.add(sum, cm * cn);
        }
    }
    return out;
}

inline MultivariateSeries scale(MultivariateSeries s, cx factor) {
    for (auto& [n, c] : s.coeffs) c *= factor;
    return s;
}

}  // namespace detail

// B(z) = prod_j B_j(z_j) truncated to total degree D; the coefficient at
// (n1,...,nN) is prod_j B_j[n_j].
inline MultivariateSeries product_series(const std::vector<SingleModeSeries>& modes) {
    if (modes.empty()) throw std::domain_error("product_series: empty mode list");
    const int n_modes = static_cast<int>(modes.size());
    const int degree = modes[0].max_degree;
    for (const auto& m : modes)
        if (m.max_degree != degree)
            throw std::invalid_argument("product_series: modes must share max_degree");
    MultivariateSeries out(n_modes, degree);
    std::vector<MultiIndex> layer;
    for (int d = 0; d <= degree; ++d) {
        layer.clear();
        enumerate_layer(n_modes, d, layer);
        for (const auto& idx : layer) {
            cx c(1.0, 0.0);
            for (int j = 0; j < n_modes && c != cx(0.0, 0.0); ++j) c *= modes[j].coeffs[idx[j]];
            out.add(idx, c);
        }
    }
    return out;
}

// B_in(Uz): every monomial prod_j z_j^{n_j} becomes prod_j ((Uz)_j)^{n_j},
// expanded by repeated multiplication with the linear forms (Uz)_j. Photon
// number is conserved, so each total-degree layer maps to itself and the
// truncation commutes with the substitution.
inline MultivariateSeries substitute_linear(const MultivariateSeries& b, const NetworkUnitary& u) {
    if (b.num_modes != u.dim())
        throw std::invalid_argument("substitute_linear: series/network dimension mismatch");
    const int n_modes = b.num_modes;
    const int dmax = b.max_total_degree;
    const IndexTable table(n_modes, dmax);
    const Mat& m = u.matrix();

    std::vector<std::vector<cx>> out_layers(dmax + 1);
    for (int d = 0; d <= dmax; ++d) out_layers[d].assign(table.layers[d].size(), cx(0, 0));

    std::vector<cx> cur, next;
    for (const auto& [n, coeff] : b.coeffs) {
        const int deg = total_degree(n);
        cur.assign(1, coeff);  // layer-0 slot
        int at = 0;
        for (int row = 0; row < n_modes; ++row) {
            for (int rep = 0; rep < n[row]; ++rep) {
                next.assign(table.layers[at + 1].size(), cx(0, 0));
                const auto& succ = table.successors[at];
                for (int p = 0; p < static_cast<int>(cur.size()); ++p) {
                    const cx v = cur[p];
                    if (v == cx(0.0, 0.0)) continue;
                    for (int j = 0; j < n_modes; ++j)
                        next[succ[p * n_modes + j]] += v * m(row, j);
                }
                cur.swap(next);
                ++at;
            }
        }
        for (int p = 0; p < static_cast<int>(cur.size()); ++p) out_layers[deg][p] += cur[p];
    }

    MultivariateSeries out(n_modes, dmax);
    for (int d = 0; d <= dmax; ++d)
        for (int p = 0; p < static_cast<int>(out_layers[d].size()); ++p)
            out.add(table.layers[d][p], out_layers[d][p]);
    return out;
}

namespace detail {

// B(z - conj(y)) by per-monomial binomial expansion; degrees only decrease.
inline MultivariateSeries shift_argument(const MultivariateSeries& b, const std::vector<cx>& y) {
    MultivariateSeries out(b.num_modes, b.max_total_degree);
    std::vector<cx> ybar(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) ybar[j] = std::conj(y[j]);
    MultiIndex idx(b.num_modes, 0);
    auto expand = [&](auto&& self, const MultiIndex& n, int mode, cx acc) -> void {
        if (mode == b.num_modes) {
            out.add(idx, acc);
            return;
        }
        cx shift_pow(1.0, 0.0);  // (-ybar_j)^(n_j - k), built k descending below
        // walk k = n_j .. 0 so the power accumulates one factor per step
        for (int k = n[mode]; k >= 0; --k) {
            idx[mode] = k;
            self(self, n, mode + 1, acc * binomial(n[mode], k) * shift_pow);
            shift_pow *= -ybar[mode];
        }
        idx[mode] = 0;
    };
    for (const auto& [n, c] : b.coeffs) expand(expand, n, 0, c);
    return out;
}

// Truncated exp(sum_j y_j z_j) as a product of single-mode exponentials.
inline MultivariateSeries exp_linear(int n_modes, int degree, const std::vector<cx>& y) {
    std::vector<SingleModeSeries> factors;
    factors.reserve(n_modes);
    for (int j = 0; j < n_modes; ++j) {
        SingleModeSeries f(degree);
        cx p(1.0, 0.0);
        for (int k = 0; k <= degree; ++k) {
            f.coeffs[k] = p;
            p *= y[j] / static_cast<double>(k + 1);
        }
        factors.push_back(std::move(f));
    }
    return product_series(factors);
}

}  // namespace detail

// BF representation of the displaced state D(y)|Psi>:
//   C(z) = B(z - conj(y)) exp(y^T z) exp(-||y||^2 / 2),
// all three factors truncated to the series cutoff.
inline MultivariateSeries apply_displacement(const MultivariateSeries& b, const std::vector<cx>& y) {
    if (static_cast<int>(y.size()) != b.num_modes)
        throw std::invalid_argument("apply_displacement: displacement dimension mismatch");
    bool zero = true;
    for (const cx& v : y)
        if (v != cx(0.0, 0.0)) zero = false;
    if (zero) return b;
    double norm2 = 0.0;
    for (const cx& v : y) norm2 += std::norm(v);
    MultivariateSeries shifted = detail::shift_argument(b, y);
    MultivariateSeries expfac = detail::exp_linear(b.num_modes, b.max_total_degree, y);
    return detail::scale(detail::multiply(shifted, expfac), std::exp(-norm2 / 2.0));
}

// Single-mode specialization of the displacement formula.
inline SingleModeSeries displace_single_mode(const SingleModeSeries& b, cx y) {
    const int dmax = b.max_degree;
    const cx ybar = std::conj(y);
    std::vector<cx> shifted(dmax + 1, cx(0, 0));
    for (int n = 0; n <= dmax; ++n) {
        if (b.coeffs[n] == cx(0.0, 0.0)) continue;
        cx pw(1.0, 0.0);
        for (int k = n; k >= 0; --k) {
            shifted[k] += b.coeffs[n] * binomial(n, k) * pw;
            pw *= -ybar;
        }
    }
    std::vector<cx> expf(dmax + 1);
    cx p(1.0, 0.0);
    for (int k = 0; k <= dmax; ++k) {
        expf[k] = p;
        p *= y / static_cast<double>(k + 1);
    }
    SingleModeSeries out(dmax);
    const cx pref = std::exp(-std::norm(y) / 2.0);
    for (int n = 0; n <= dmax; ++n) {
        cx acc(0, 0);
        for (int k = 0; k <= n; ++k) acc += shifted[k] * expf[n - k];
        out.coeffs[n] = pref * acc;
    }
    return out;
}

// G = ln B, the log of the BF representation, computed as
// ln b0 + sum_k (-1)^{k+1} R^k / k with R = B/b0 - 1 (min degree >= 1, so the
// sum closes after at most D truncated products). Requires a usable vacuum
// coefficient b0.
inline MultivariateSeries series_log(const MultivariateSeries& b,
                                     double vacuum_floor = kDefaultVacuumFloor) {
    const cx b0 = b.constant_term();
    if (std::abs(b0) <= vacuum_floor)
        throw std::domain_error(
            "series_log: vacuum coefficient below floor; displace the state first "
            "(see ensure_vacuum_overlap)");
    MultivariateSeries r(b.num_modes, b.max_total_degree);
    for (const auto& [n, c] : b.coeffs) {
        if (total_degree(n) == 0) continue;
        r.add(n, c / b0);
    }
    MultivariateSeries g(b.num_modes, b.max_total_degree);
    g.add(MultiIndex(b.num_modes, 0), std::log(b0));
    MultivariateSeries power = r;
    double sign = 1.0;
    for (int k = 1; k <= b.max_total_degree; ++k) {
        if (power.coeffs.empty()) break;
        for (const auto& [n, c] : power.coeffs) g.add(n, sign / static_cast<double>(k) * c);
        if (k < b.max_total_degree) power = detail::multiply(power, r);
        sign = -sign;
    }
    return g;
}

// exp(G) as a truncated series; inverse of series_log through degree D.
inline MultivariateSeries series_exp(const MultivariateSeries& g) {
    const cx g0 = g.constant_term();
    MultivariateSeries h(g.num_modes, g.max_total_degree);
    for (const auto& [n, c] : g.coeffs) {
        if (total_degree(n) == 0) continue;
        h.add(n, c);
    }
    MultivariateSeries out(g.num_modes, g.max_total_degree);
    out.add(MultiIndex(g.num_modes, 0), cx(1.0, 0.0));
    MultivariateSeries power = h;
    double kfact = 1.0;
    for (int k = 1; k <= g.max_total_degree; ++k) {
        if (power.coeffs.empty()) break;
        kfact *= k;
        for (const auto& [n, c] : power.coeffs) out.add(n, c / kfact);
        if (k < g.max_total_degree) power = detail::multiply(power, h);
    }
    return detail::scale(out, std::exp(g0));
}

struct SeparabilityReport {
    bool separable = false;
    double max_cross_term = 0.0;
    MultiIndex argmax;  // empty when no cross terms exist
};

// G is additively separable (G = G_1(z_1) + ... + G_N(z_N)) iff no stored
// coefficient couples two or more modes above tolerance.
inline SeparabilityReport is_additively_separable(const MultivariateSeries& g, double tol) {
    SeparabilityReport rep;
    for (const auto& [n, c] : g.coeffs) {
        int active = 0;
        for (int e : n)
            if (e > 0) ++active;
        if (active < 2) continue;
        const double mag = std::abs(c);
        if (mag > rep.max_cross_term) {
            rep.max_cross_term = mag;
            rep.argmax = n;
        }
    }
    rep.separable = rep.max_cross_term <= tol;
    return rep;
}

// Fock amplitudes from BF coefficients: <n|Psi> = coeff(n) sqrt(n1!...nN!).
inline FockVector fock_amplitudes(const MultivariateSeries& b) {
    FockVector psi(b.num_modes, b.max_total_degree);
    for (const auto& [n, c] : b.coeffs) psi.add(n, c * sqrt_factorial_product(n));
    return psi;
}

inline MultivariateSeries bf_from_fock(const FockVector& psi) {
    MultivariateSeries b(psi.num_modes, psi.cutoff);
    for (const auto& [n, a] : psi.amplitudes) b.add(n, a / sqrt_factorial_product(n));
    return b;
}

// Fixed displacement search grid: magnitudes 0.5, 1.0, ..., 3.0 crossed with
// directions +1, -1, +i, -i, in that order.
inline std::vector<cx> displacement_grid() {
    std::vector<cx> grid;
    for (int step = 1; step <= 6; ++step) {
        const double r = 0.5 * step;
        grid.emplace_back(r, 0.0);
        grid.emplace_back(-r, 0.0);
        grid.emplace_back(0.0, r);
        grid.emplace_back(0.0, -r);
    }
    return grid;
}

// Dump format: one line "n1 n2 ... nN re im" per stored index, graded-lex
// sorted, 12 significant digits.
inline std::string dump_series(const MultivariateSeries& b, const char* label = "coefficients") {
    std::string out = "# series " + std::string(label) + " modes=" + std::to_string(b.num_modes) +
                      " max_total_degree=" + std::to_string(b.max_total_degree) + "\n";
    char buf[64];
    for (const auto& [n, c] : b.coeffs) {
        for (int e : n) {
            out += std::to_string(e);
            out += ' ';
        }
        std::snprintf(buf, sizeof buf, "%.12g %.12g\n", c.real(), c.imag());
        out += buf;
    }
    return out;
}

inline std::string dump_fock(const FockVector& psi) {
    std::string out = "# fock amplitudes modes=" + std::to_string(psi.num_modes) +
                      " cutoff=" + std::to_string(psi.cutoff) + "\n";
    char buf[64];
    for (const auto& [n, a] : psi.amplitudes) {
        for (int e : n) {
            out += std::to_string(e);
            out += ' ';
        }
        std::snprintf(buf, sizeof buf, "%.12g %.12g\n", a.real(), a.imag());
        out += buf;
    }
    return out;
}

}  // namespace bfock
