#pragma once

// Single-mode input states as BF series, and their log-series expansion
// coefficients lambda^(d). The dichotomy that drives the classifier lives
// here: Gaussian states stop at d = 2, everything else keeps going.

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "bfock/series.hpp"

namespace bfock {

struct Coherent {
    cx alpha{0.0, 0.0};
};

struct SqueezedVacuum {
    double gamma = 0.0;       // squeezing strength, S = exp(gamma (a^2 - a^dag^2)/2)
    double axis_phase = 0.0;  // rotates the squeezing axis; 0 squeezes the position quadrature
};

struct DisplacedSqueezed {
    cx y{0.0, 0.0};  // applied after squeezing: D(y) S(gamma) |vac>
    double gamma = 0.0;
    double axis_phase = 0.0;
};

struct Fock {
    int n = 0;
};

struct Cat {
    cx alpha{0.0, 0.0};
    int parity = 1;  // +1 even (|a> + |-a>), -1 odd (|a> - |-a>)
};

using ModeStateSpec = std::variant<Coherent, SqueezedVacuum, DisplacedSqueezed, Fock, Cat>;

// Per-degree coefficients of G_j(z) = ln B_j(z).
struct GCoefficients {
    std::vector<cx> lambda;  // lambda[d], d = 0..D
};

inline bool is_gaussian(const ModeStateSpec& spec) {
    return std::holds_alternative<Coherent>(spec) ||
           std::holds_alternative<SqueezedVacuum>(spec) ||
           std::holds_alternative<DisplacedSqueezed>(spec);
}

inline std::string spec_name(const ModeStateSpec& spec) {
    if (std::holds_alternative<Coherent>(spec)) return "coherent";
    if (std::holds_alternative<SqueezedVacuum>(spec)) return "squeezed";
    if (std::holds_alternative<DisplacedSqueezed>(spec)) return "displaced_squeezed";
    if (std::holds_alternative<Fock>(spec)) return "fock";
    return "cat";
}

namespace detail {

// Squeezed vacuum B(z) = (cosh g)^{-1/2} exp(-(t/2) z^2), t = e^{2i phi} tanh g.
// Amplitudes at 2m follow the two-term recurrence
//   a_m = a_{m-1} (-t) sqrt(2m (2m-1)) / (2m),
// which is the factorial-ratio form without the large intermediates.
inline SingleModeSeries squeezed_series(double gamma, double axis_phase, int dmax) {
    SingleModeSeries s(dmax);
    const cx t = std::tanh(gamma) * std::exp(cx(0.0, 2.0 * axis_phase));
    cx amp = cx(1.0 / std::sqrt(std::cosh(gamma)), 0.0);
    s.coeffs[0] = amp;
    for (int m = 1; 2 * m <= dmax; ++m) {
        amp *= -t * std::sqrt(2.0 * m * (2.0 * m - 1.0)) / (2.0 * m);
        s.coeffs[2 * m] = amp / sqrt_factorial(2 * m);
    }
    return s;
}

}  // namespace detail

// Normalized truncated BF series of a single-mode state.
inline SingleModeSeries mode_series(const ModeStateSpec& spec, int dmax) {
    if (dmax < 1 || dmax > kMaxCutoff)
        throw std::domain_error("mode_series: cutoff must be in 1..34");
    SingleModeSeries s(dmax);
    if (const auto* c = std::get_if<Coherent>(&spec)) {
        // B(z) = e^{-|a|^2/2} e^{a z}
        cx coeff = std::exp(-0.5 * std::norm(c->alpha));
        for (int n = 0; n <= dmax; ++n) {
            s.coeffs[n] = coeff;
            coeff *= c->alpha / static_cast<double>(n + 1);
        }
    } else if (const auto* sq = std::get_if<SqueezedVacuum>(&spec)) {
        s = detail::squeezed_series(sq->gamma, sq->axis_phase, dmax);
    } else if (const auto* ds = std::get_if<DisplacedSqueezed>(&spec)) {
        s = displace_single_mode(detail::squeezed_series(ds->gamma, ds->axis_phase, dmax), ds->y);
    } else if (const auto* f = std::get_if<Fock>(&spec)) {
        if (f->n < 0) throw std::domain_error("mode_series: Fock n must be nonnegative");
        if (f->n > dmax) throw std::domain_error("mode_series: Fock n exceeds the cutoff");
        s.coeffs[f->n] = 1.0 / sqrt_factorial(f->n);  // B(z) = z^n / sqrt(n!)
    } else {
        const auto& cat = std::get<Cat>(spec);
        if (cat.parity != 1 && cat.parity != -1)
            throw std::domain_error("mode_series: cat parity must be +1 or -1");
        // |a> + p |-a>, normalized with <a|-a> = e^{-2|a|^2}
        const double p = static_cast<double>(cat.parity);
        const double norm = 1.0 / std::sqrt(2.0 * (1.0 + p * std::exp(-2.0 * std::norm(cat.alpha))));
        cx plus(1.0, 0.0), minus(1.0, 0.0);
        const cx pref = norm * std::exp(-0.5 * std::norm(cat.alpha));
        for (int n = 0; n <= dmax; ++n) {
            s.coeffs[n] = pref * (plus + p * minus);
            plus *= cat.alpha / static_cast<double>(n + 1);
            minus *= -cat.alpha / static_cast<double>(n + 1);
        }
    }
    return s;
}

// 1 - sum |amplitude|^2 for a single mode, clamped at zero.
inline double mode_norm_deficit(const SingleModeSeries& s) {
    double norm2 = 0.0;
    for (int n = 0; n <= s.max_degree; ++n)
        norm2 += std::norm(s.coeffs[n]) * factorial(n);
    return std::max(0.0, 1.0 - norm2);
}

inline cx vacuum_overlap(const SingleModeSeries& s) { return s.coeffs[0]; }

// G_j(z) coefficients. Closed forms for the Gaussian specs:
//   Coherent a:            lambda0 = -|a|^2/2, lambda1 = a
//   SqueezedVacuum:        lambda0 = -ln(cosh g)/2, lambda2 = -t/2
//   DisplacedSqueezed y:   lambda0 = -ln(cosh g)/2 - (t/2) ybar^2 - |y|^2/2,
//                          lambda1 = y + t ybar, lambda2 = -t/2
// with t = e^{2i phi} tanh g. Everything else goes through series_log, which
// requires nonzero vacuum overlap.
inline GCoefficients g_coefficients(const ModeStateSpec& spec, int dmax,
                                    double vacuum_floor = kDefaultVacuumFloor) {
    GCoefficients g;
    g.lambda.assign(dmax + 1, cx(0, 0));
    if (const auto* c = std::get_if<Coherent>(&spec)) {
        g.lambda[0] = -0.5 * std::norm(c->alpha);
        if (dmax >= 1) g.lambda[1] = c->alpha;
        return g;
    }
    auto quad = [](double gamma, double axis_phase) {
        return std::tanh(gamma) * std::exp(cx(0.0, 2.0 * axis_phase));
    };
    if (const auto* sq = std::get_if<SqueezedVacuum>(&spec)) {
        g.lambda[0] = -0.5 * std::log(std::cosh(sq->gamma));
        if (dmax >= 2) g.lambda[2] = -0.5 * quad(sq->gamma, sq->axis_phase);
        return g;
    }
    if (const auto* ds = std::get_if<DisplacedSqueezed>(&spec)) {
        const cx t = quad(ds->gamma, ds->axis_phase);
        const cx ybar = std::conj(ds->y);
        g.lambda[0] = -0.5 * std::log(std::cosh(ds->gamma)) - 0.5 * t * ybar * ybar -
                      0.5 * std::norm(ds->y);
        if (dmax >= 1) g.lambda[1] = ds->y + t * ybar;
        if (dmax >= 2) g.lambda[2] = -0.5 * t;
        return g;
    }
    const SingleModeSeries s = mode_series(spec, dmax);
    if (std::abs(vacuum_overlap(s)) <= vacuum_floor)
        throw std::domain_error("g_coefficients: zero vacuum overlap; displace the state first");
    MultivariateSeries b(1, dmax);
    for (int n = 0; n <= dmax; ++n) b.add(MultiIndex{n}, s.coeffs[n]);
    const MultivariateSeries logb = series_log(b, vacuum_floor);
    for (const auto& [n, c] : logb.coeffs) g.lambda[n[0]] = c;
    return g;
}

struct VacuumOverlapResult {
    std::vector<cx> displacement;               // y_j applied per mode (0 when none needed)
    std::vector<SingleModeSeries> displaced;    // series after displacement
};

// Guarantees |B_j(0)| > vacuum_floor per mode by walking the fixed
// displacement grid in order and taking the first hit. Modes that already
// have vacuum overlap are left alone.
inline VacuumOverlapResult ensure_vacuum_overlap(const std::vector<ModeStateSpec>& specs, int dmax,
                                                 double vacuum_floor = kDefaultVacuumFloor) {
    VacuumOverlapResult out;
    const std::vector<cx> grid = displacement_grid();
    for (const auto& spec : specs) {
        SingleModeSeries s = mode_series(spec, dmax);
        cx y(0.0, 0.0);
        if (std::abs(vacuum_overlap(s)) <= vacuum_floor) {
            bool found = false;
            for (const cx& candidate : grid) {
                SingleModeSeries d = displace_single_mode(s, candidate);
                if (std::abs(vacuum_overlap(d)) > vacuum_floor) {
                    y = candidate;
                    s = std::move(d);
                    found = true;
                    break;
                }
            }
            if (!found)
                throw std::runtime_error(
                    "ensure_vacuum_overlap: displacement grid exhausted for mode " +
                    spec_name(spec));
        }
        out.displacement.push_back(y);
        out.displaced.push_back(std::move(s));
    }
    return out;
}

}  // namespace bfock
