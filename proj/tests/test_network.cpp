#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "bfock/network.hpp"

using namespace bfock;
using Catch::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
const double kRt2Inv = std::sqrt(2.0) / 2.0;

// direct sum of two 50:50 beamsplitters on 4 modes
Mat two_block_matrix() {
    const Mat bs = make_beamsplitter(kPi / 4, 0.0).matrix();
    Mat m = Mat::Zero(4, 4);
    m.block(0, 0, 2, 2) = bs;
    m.block(2, 2, 2, 2) = bs;
    return m;
}
}  // namespace

TEST_CASE("beamsplitter matrix entries", "[network]") {
    const NetworkUnitary u = make_beamsplitter(kPi / 4, 0.0);
    CHECK(u(0, 0).real() == Approx(kRt2Inv));
    CHECK(u(0, 1).real() == Approx(kRt2Inv));
    CHECK(u(1, 0).real() == Approx(-kRt2Inv));
    CHECK(u(1, 1).real() == Approx(kRt2Inv));
    CHECK(std::abs(u(0, 1).imag()) < 1e-15);

    const NetworkUnitary id = make_beamsplitter(0.0, 1.0);
    CHECK(std::abs(id(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(id(0, 1)) < 1e-15);

    const NetworkUnitary c = make_beamsplitter(kPi / 4, kPi / 2);
    CHECK(c(0, 1).imag() == Approx(-kRt2Inv));
    CHECK(std::abs(c(0, 1).real()) < 1e-15);
    CHECK(c(1, 0).imag() == Approx(-kRt2Inv));

    CHECK_THROWS_AS(make_beamsplitter(-0.1, 0.0), std::domain_error);
    CHECK_THROWS_AS(make_beamsplitter(kPi, 0.0), std::domain_error);
    CHECK_THROWS_AS(make_beamsplitter(kPi / 4, -1.0), std::domain_error);
    CHECK_THROWS_AS(make_beamsplitter(kPi / 4, 7.0), std::domain_error);
}

TEST_CASE("unitarity validation rejects non-unitary input", "[network]") {
    Mat bad = Mat::Identity(2, 2);
    bad(0, 0) = 1.1;
    CHECK_THROWS_AS(NetworkUnitary(bad), std::invalid_argument);
}

TEST_CASE("haar random unitary", "[network]") {
    const NetworkUnitary u = haar_random_unitary(4, 42);
    const Mat defect = u.matrix().adjoint() * u.matrix() - Mat::Identity(4, 4);
    CHECK(defect.cwiseAbs().maxCoeff() <= 1e-12);

    const NetworkUnitary u1 = haar_random_unitary(1, 7);
    CHECK(std::abs(std::abs(u1(0, 0)) - 1.0) < 1e-14);

    const NetworkUnitary a = haar_random_unitary(3, 1234);
    const NetworkUnitary b = haar_random_unitary(3, 1234);
    CHECK((a.matrix() - b.matrix()).cwiseAbs().maxCoeff() == 0.0);
    const NetworkUnitary c = haar_random_unitary(3, 1235);
    CHECK((a.matrix() - c.matrix()).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("structure report", "[network]") {
    const StructureReport id = structure_report(make_identity(2));
    CHECK_FALSE(id.connected);
    CHECK_FALSE(id.nontrivial);

    const StructureReport bs = structure_report(make_beamsplitter(kPi / 4, 0.0));
    CHECK(bs.connected);
    CHECK(bs.nontrivial);

    const StructureReport blocks = structure_report(NetworkUnitary(two_block_matrix()));
    CHECK_FALSE(blocks.connected);
    CHECK(blocks.nontrivial);
}

TEST_CASE("structure report is permutation invariant", "[network]") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const NetworkUnitary u = haar_random_unitary(4, seed);
        const bool base = structure_report(u).connected;
        Rng rng(seed * 77);
        Eigen::PermutationMatrix<Eigen::Dynamic> p1(4), p2(4);
        p1.setIdentity();
        p2.setIdentity();
        for (int i = 3; i > 0; --i) {
            std::swap(p1.indices()(i), p1.indices()(rng.uniform_int(0, i)));
            std::swap(p2.indices()(i), p2.indices()(rng.uniform_int(0, i)));
        }
        const NetworkUnitary perm(p1 * u.matrix() * p2);
        CHECK(structure_report(perm).connected == base);
    }
}

TEST_CASE("real rephasing witness", "[network]") {
    const RephasingWitness w = real_rephasing_witness(make_beamsplitter(kPi / 4, kPi / 2));
    CHECK(w.feasible);
    CHECK(w.residual <= 1e-12);

    // already-real orthogonal matrix: feasible with zero-phase solution
    const RephasingWitness r = real_rephasing_witness(make_beamsplitter(kPi / 3, 0.0));
    CHECK(r.feasible);

    // 3x3 discrete Fourier matrix: the 2x2 cycle phase sum is 2pi/3, not 0 mod pi
    Mat f(3, 3);
    const cx w3 = std::exp(cx(0.0, 2.0 * kPi / 3.0));
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) f(j, k) = std::pow(w3, j * k) / std::sqrt(3.0);
    const RephasingWitness dft = real_rephasing_witness(NetworkUnitary(f));
    CHECK_FALSE(dft.feasible);
    CHECK(dft.residual > 0.1);
}

TEST_CASE("rephasing witness solves disconnected matrices per component", "[network]") {
    Mat m = Mat::Zero(4, 4);
    m.block(0, 0, 2, 2) = make_beamsplitter(kPi / 4, kPi / 2).matrix();
    m.block(2, 2, 2, 2) = make_beamsplitter(kPi / 3, 0.0).matrix();
    const RephasingWitness w = real_rephasing_witness(NetworkUnitary(m));
    CHECK(w.feasible);
    CHECK(w.residual <= 1e-12);
}

TEST_CASE("rephasing witness is sound on phase-decorated real matrices", "[network]") {
    // any diag(e^{ia}) O diag(e^{ib}) with O real orthogonal must be feasible,
    // and applying the returned phases must land on a real matrix
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        Rng rng(seed);
        const int n = 2 + static_cast<int>(seed % 3);
        Eigen::MatrixXd g(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) g(r, c) = rng.gaussian();
        const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
        const Eigen::MatrixXd o = qr.householderQ();
        Mat m = o.cast<cx>();
        for (int r = 0; r < n; ++r) m.row(r) *= std::exp(cx(0.0, rng.uniform(0.0, 2 * kPi)));
        for (int c = 0; c < n; ++c) m.col(c) *= std::exp(cx(0.0, rng.uniform(0.0, 2 * kPi)));
        const NetworkUnitary u(m);
        const RephasingWitness w = real_rephasing_witness(u);
        REQUIRE(w.feasible);
        double max_imag = 0.0;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                const cx rephased =
                    u(r, c) * std::exp(cx(0.0, w.row_phases[r] + w.col_phases[c]));
                max_imag = std::max(max_imag, std::abs(rephased.imag()));
            }
        CHECK(max_imag <= 1e-8);
    }
}

TEST_CASE("elementwise power norms", "[network]") {
    const NormReport bs3 = elementwise_power_norms(make_beamsplitter(kPi / 4, 0.0), 3);
    CHECK(bs3.one_norm == Approx(kRt2Inv).epsilon(1e-12));  // 2 * 2^{-3/2}
    CHECK(bs3.one_norm < 1.0);

    const NormReport id3 = elementwise_power_norms(make_identity(3), 3);
    CHECK(id3.one_norm == Approx(1.0));

    CHECK_THROWS_AS(elementwise_power_norms(make_identity(2), 1), std::domain_error);

    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const NetworkUnitary u = haar_random_unitary(4, seed);
        for (int d = 3; d <= 5; ++d) {
            const NormReport rep = elementwise_power_norms(u, d);
            CHECK(rep.one_norm < 1.0);
            CHECK(rep.one_norm_transpose < 1.0);
            CHECK(rep.spectral_norm < 1.0);
            // the submultiplicative chain used by the classification argument
            CHECK(rep.spectral_norm * rep.spectral_norm <=
                  rep.one_norm * rep.one_norm_transpose + 1e-12);
        }
    }
}
