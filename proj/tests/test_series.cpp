#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "bfock/network.hpp"
#include "bfock/rng.hpp"
#include "bfock/series.hpp"
#include "bfock/states.hpp"

using namespace bfock;
using Catch::Approx;

namespace {

SingleModeSeries vacuum_series(int d) {
    SingleModeSeries s(d);
    s.coeffs[0] = 1.0;
    return s;
}

// random normalized-ish test series with unit constant term and decaying tail
MultivariateSeries random_series(int n_modes, int d, std::uint64_t seed) {
    Rng rng(seed);
    MultivariateSeries b(n_modes, d);
    std::vector<MultiIndex> layer;
    for (int deg = 0; deg <= d; ++deg) {
        layer.clear();
        enumerate_layer(n_modes, deg, layer);
        for (const auto& idx : layer) {
            const double scale = deg == 0 ? 0.0 : std::pow(0.4, deg) / factorial(std::min(deg, 12));
            b.add(idx, cx(rng.gaussian(), rng.gaussian()) * scale);
        }
    }
    b.add(MultiIndex(n_modes, 0), cx(1.0, 0.0));
    return b;
}

double max_abs_diff(const MultivariateSeries& a, const MultivariateSeries& b) {
    double m = 0.0;
    for (const auto& [n, c] : a.coeffs) m = std::max(m, std::abs(c - b.coeff(n)));
    for (const auto& [n, c] : b.coeffs) m = std::max(m, std::abs(c - a.coeff(n)));
    return m;
}

std::vector<double> layer_norms(const FockVector& psi) {
    std::vector<double> out(psi.cutoff + 1, 0.0);
    for (const auto& [n, a] : psi.amplitudes) out[total_degree(n)] += std::norm(a);
    return out;
}

}  // namespace

TEST_CASE("product_series basics", "[series]") {
    const MultivariateSeries vac = product_series({vacuum_series(6), vacuum_series(6)});
    REQUIRE(vac.coeffs.size() == 1);
    CHECK(std::abs(vac.coeff({0, 0}) - 1.0) < 1e-15);

    // coherent-mode exponentials multiply to alpha^n beta^m / (n! m!)
    const cx alpha(0.7, 0.2), beta(-0.3, 0.5);
    std::vector<SingleModeSeries> modes;
    for (const cx a : {alpha, beta}) {
        SingleModeSeries s(8);
        cx c(1.0, 0.0);
        for (int n = 0; n <= 8; ++n) {
            s.coeffs[n] = c;
            c *= a / static_cast<double>(n + 1);
        }
        modes.push_back(std::move(s));
    }
    const MultivariateSeries prod = product_series(modes);
    for (int n = 0; n <= 3; ++n)
        for (int m = 0; m <= 3; ++m) {
            const cx expect = std::pow(alpha, n) * std::pow(beta, m) /
                              (factorial(n) * factorial(m));
            CHECK(std::abs(prod.coeff({n, m}) - expect) < 1e-12);
        }

    SingleModeSeries fock1(4);
    fock1.coeffs[1] = 1.0;
    const MultivariateSeries pair = product_series({fock1, fock1});
    REQUIRE(pair.coeffs.size() == 1);
    CHECK(std::abs(pair.coeff({1, 1}) - 1.0) < 1e-15);

    CHECK_THROWS_AS(product_series({}), std::domain_error);
}

TEST_CASE("substitute_linear reproduces the HOM polynomial", "[series]") {
    // B = z1 z2 through a 50:50 beamsplitter -> (z2^2 - z1^2)/2
    MultivariateSeries b(2, 4);
    b.add({1, 1}, cx(1.0, 0.0));
    const MultivariateSeries out = substitute_linear(b, make_beamsplitter(std::numbers::pi / 4, 0.0));
    CHECK(std::abs(out.coeff({2, 0}) - cx(-0.5, 0.0)) < 1e-14);
    CHECK(std::abs(out.coeff({0, 2}) - cx(0.5, 0.0)) < 1e-14);
    CHECK(std::abs(out.coeff({1, 1})) < 1e-14);
}

TEST_CASE("substitute_linear identity and errors", "[series]") {
    const MultivariateSeries b = random_series(2, 8, 11);
    const MultivariateSeries same = substitute_linear(b, make_identity(2));
    CHECK(max_abs_diff(b, same) < 1e-15);
    CHECK_THROWS_AS(substitute_linear(b, make_identity(3)), std::invalid_argument);
}

TEST_CASE("substitute_linear preserves each total-degree layer norm", "[series]") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const int n_modes = seed % 2 ? 2 : 3;
        const MultivariateSeries b = random_series(n_modes, 8, seed);
        const NetworkUnitary u = haar_random_unitary(n_modes, seed * 13);
        const MultivariateSeries out = substitute_linear(b, u);
        const auto before = layer_norms(fock_amplitudes(b));
        const auto after = layer_norms(fock_amplitudes(out));
        for (std::size_t d = 0; d < before.size(); ++d)
            CHECK(std::abs(before[d] - after[d]) <= 1e-10 * std::max(1.0, before[d]));
    }
}

TEST_CASE("apply_displacement", "[series]") {
    const MultivariateSeries b = random_series(2, 10, 3);
    const MultivariateSeries same = apply_displacement(b, {cx(0, 0), cx(0, 0)});
    CHECK(max_abs_diff(b, same) == 0.0);

    // vacuum displaced by alpha is the coherent series e^{-|a|^2/2} e^{a z}
    MultivariateSeries vac(1, 12);
    vac.add({0}, cx(1.0, 0.0));
    const cx alpha(0.4, -0.3);
    const MultivariateSeries disp = apply_displacement(vac, {alpha});
    cx expect = std::exp(-0.5 * std::norm(alpha));
    for (int n = 0; n <= 6; ++n) {
        CHECK(std::abs(disp.coeff({n}) - expect) < 1e-13);
        expect *= alpha / static_cast<double>(n + 1);
    }

    CHECK_THROWS_AS(apply_displacement(b, {cx(1, 0)}), std::invalid_argument);
}

TEST_CASE("displacement round trip", "[series]") {
    const MultivariateSeries b = random_series(2, 20, 5);
    const std::vector<cx> y = {cx(0.4, 0.2), cx(-0.3, 0.35)};
    std::vector<cx> neg(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) neg[j] = -y[j];
    const MultivariateSeries back = apply_displacement(apply_displacement(b, y), neg);
    // equality up to a global phase; fix it on the constant term
    const cx phase = b.constant_term() / back.constant_term();
    CHECK(std::abs(std::abs(phase) - 1.0) < 1e-6);
    double maxdiff = 0.0;
    for (const auto& [n, c] : b.coeffs)
        if (total_degree(n) <= 14)  // the top layers carry the truncation tail
            maxdiff = std::max(maxdiff, std::abs(c - phase * back.coeff(n)));
    CHECK(maxdiff <= 1e-8);
}

TEST_CASE("single-mode displacement agrees with the multivariate formula", "[series]") {
    const SingleModeSeries s = mode_series(Fock{2}, 16);
    const cx y(0.3, -0.45);
    const SingleModeSeries d1 = displace_single_mode(s, y);
    MultivariateSeries b(1, 16);
    for (int n = 0; n <= 16; ++n) b.add({n}, s.coeffs[n]);
    const MultivariateSeries d2 = apply_displacement(b, {y});
    for (int n = 0; n <= 16; ++n) CHECK(std::abs(d1.coeffs[n] - d2.coeff({n})) < 1e-13);
}

TEST_CASE("series_log basics", "[series]") {
    // B = e^{alpha z} -> G = alpha z
    const cx alpha(0.6, 0.1);
    MultivariateSeries b(1, 12);
    cx c(1.0, 0.0);
    for (int n = 0; n <= 12; ++n) {
        b.add({n}, c);
        c *= alpha / static_cast<double>(n + 1);
    }
    const MultivariateSeries g = series_log(b);
    CHECK(std::abs(g.coeff({0})) < 1e-14);
    CHECK(std::abs(g.coeff({1}) - alpha) < 1e-13);
    for (int n = 2; n <= 10; ++n) CHECK(std::abs(g.coeff({n})) < 1e-12);

    // squeezed vacuum -> only degree-0 and degree-2 terms survive
    const SingleModeSeries sq = mode_series(SqueezedVacuum{0.3, 0.0}, 20);
    MultivariateSeries bs(1, 20);
    for (int n = 0; n <= 20; ++n) bs.add({n}, sq.coeffs[n]);
    const MultivariateSeries gs = series_log(bs);
    CHECK(gs.coeff({0}).real() == Approx(-0.022170384962970153).epsilon(1e-10));
    CHECK(gs.coeff({2}).real() == Approx(-0.14565630622579545).epsilon(1e-10));
    CHECK(std::abs(gs.coeff({1})) < 1e-13);
    for (int n = 3; n <= 18; ++n) CHECK(std::abs(gs.coeff({n})) < 1e-11);
}

TEST_CASE("series_log requires vacuum overlap", "[series]") {
    MultivariateSeries b(2, 6);
    b.add({1, 1}, cx(1.0, 0.0));
    CHECK_THROWS_AS(series_log(b), std::domain_error);
}

TEST_CASE("exp and log invert each other", "[series]") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const MultivariateSeries b = random_series(2, 10, seed);
        CHECK(max_abs_diff(b, series_exp(series_log(b))) <= 1e-12);
        const MultivariateSeries g = random_series(2, 10, seed + 100);
        CHECK(max_abs_diff(g, series_log(series_exp(g))) <= 1e-12);
    }
}

TEST_CASE("log of a product series has no cross terms", "[series]") {
    std::vector<SingleModeSeries> modes;
    modes.push_back(mode_series(Coherent{cx(0.8, -0.1)}, 14));
    modes.push_back(mode_series(SqueezedVacuum{0.4, 0.7}, 14));
    modes.push_back(mode_series(Cat{cx(0.6, 0.0), +1}, 14));
    const MultivariateSeries g = series_log(product_series(modes));
    const SeparabilityReport rep = is_additively_separable(g, 1e-12);
    CHECK(rep.separable);
}

TEST_CASE("is_additively_separable flags cross terms", "[series]") {
    MultivariateSeries g(2, 6);
    g.add({1, 0}, cx(0.5, 0.0));
    g.add({1, 1}, cx(1e-15, 0.0));
    CHECK(is_additively_separable(g, 1e-12).separable);

    g.add({2, 1}, cx(3e-3, 0.0));
    const SeparabilityReport rep = is_additively_separable(g, 1e-12);
    CHECK_FALSE(rep.separable);
    CHECK(rep.max_cross_term == Approx(3e-3));
    CHECK(rep.argmax == MultiIndex{2, 1});
}

TEST_CASE("fock_amplitudes", "[series]") {
    MultivariateSeries vac(2, 4);
    vac.add({0, 0}, cx(1.0, 0.0));
    const FockVector pv = fock_amplitudes(vac);
    CHECK(std::abs(pv.amplitude({0, 0}) - 1.0) < 1e-15);

    // coherent alpha=1: Poisson amplitudes e^{-1/2}/sqrt(n!)
    const SingleModeSeries coh = mode_series(Coherent{cx(1.0, 0.0)}, 20);
    MultivariateSeries b(1, 20);
    for (int n = 0; n <= 20; ++n) b.add({n}, coh.coeffs[n]);
    const FockVector pc = fock_amplitudes(b);
    for (int n = 0; n <= 12; ++n)
        CHECK(std::abs(pc.amplitude({n}) - std::exp(-0.5) / sqrt_factorial(n)) < 1e-13);

    // HOM output amplitudes
    MultivariateSeries hom(2, 4);
    hom.add({1, 1}, cx(1.0, 0.0));
    const FockVector out =
        fock_amplitudes(substitute_linear(hom, make_beamsplitter(std::numbers::pi / 4, 0.0)));
    const double rt2inv = std::sqrt(2.0) / 2.0;
    CHECK(out.amplitude({2, 0}).real() == Approx(-rt2inv));
    CHECK(out.amplitude({0, 2}).real() == Approx(rt2inv));
    CHECK(std::abs(out.amplitude({1, 1})) < 1e-14);
}

TEST_CASE("series dump format", "[series]") {
    MultivariateSeries b(2, 2);
    b.add({0, 0}, cx(1.0, 0.0));
    b.add({1, 1}, cx(-0.25, 0.5));
    const std::string dump = dump_series(b);
    CHECK(dump ==
          "# series coefficients modes=2 max_total_degree=2\n"
          "0 0 1 0\n"
          "1 1 -0.25 0.5\n");
}
