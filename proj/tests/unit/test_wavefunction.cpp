#include <doctest.h>

#include <cmath>
#include <complex>

#include "rabi/errors.hpp"
#include "rabi/oracle.hpp"
#include "rabi/spectrum.hpp"
#include "rabi/wavefunction.hpp"

using namespace rabi;

namespace {
const ModelParams kBase{1.0, 0.7, 0.4, 0.0};

double overlap_with_block(const FockVector& v, Parity parity, const ModelParams& p, int level) {
    const int n_tr = 200;
    const auto block = build(parity == Parity::Plus ? OracleModel::ParityBlockPlus
                                                    : OracleModel::ParityBlockMinus,
                             p, n_tr);
    const auto es = eigensolve(block, true);
    const auto ref = es.vectors.column(level);
    const auto mine = v.parity_block(parity, n_tr);
    double dot = 0.0;
    for (int i = 0; i < n_tr; ++i) dot += ref[i] * mine[i];
    return std::abs(dot);
}
}  // namespace

TEST_CASE("two routes agree at every low root") {
    for (Parity par : {Parity::Plus, Parity::Minus}) {
        const auto roots = lowest_levels(par, 4, kBase);
        for (const auto& r : roots) {
            const auto a = psi_from_phi2(r.x_root, par, kBase);
            const auto b = psi_from_phi1(r.x_root, par, kBase);
            CHECK(a.source == SeriesRoute::Phi2);
            CHECK(b.source == SeriesRoute::Phi1);
            CHECK(a.tail_ratio < 1e-12);
            double worst = 0.0;
            double scale = 0.0;
            for (const auto& z : circle_samples(0.3, 20)) {
                const auto va = evaluate(a, z);
                const auto vb = evaluate(b, z);
                worst = std::max(worst, std::abs(va - vb));
                scale = std::max(scale, std::abs(va));
            }
            CHECK(worst < 1e-8 * scale);
        }
    }
}

TEST_CASE("direct sums agree on the spectrum and not between levels") {
    const auto roots = lowest_levels(Parity::Plus, 3, kBase);
    const auto samples = circle_samples(0.3, 16);
    for (const auto& r : roots) {
        const auto rep = consistency_check(r.x_root, Parity::Plus, kBase, samples);
        CHECK(rep.max_difference < 1e-9 * rep.scale);
        CHECK(rep.terms > 20);
    }
    const double mid = 0.5 * (roots[0].x_root + roots[1].x_root);
    const auto off = consistency_check(mid, Parity::Plus, kBase, samples);
    CHECK(off.max_difference > 1e-3 * off.scale);
    CHECK_THROWS_AS(consistency_check(roots[0].x_root, Parity::Plus, kBase, circle_samples(0.8, 4)),
                    InvalidArgument);
}

TEST_CASE("Fock amplitudes match the matrix eigenvectors") {
    for (Parity par : {Parity::Plus, Parity::Minus}) {
        const auto roots = lowest_levels(par, 3, kBase);
        for (const auto& r : roots) {
            const auto v = fock_amplitudes(psi_from_phi2(r.x_root, par, kBase), kBase);
            double norm = 0.0;
            for (double a : v.up) norm += a * a;
            for (double a : v.down) norm += a * a;
            CHECK(norm == doctest::Approx(1.0).epsilon(1e-13));
            CHECK(overlap_with_block(v, par, kBase, r.index) > 1.0 - 1e-8);
        }
    }
}

TEST_CASE("Fock state lives in one parity sector") {
    const auto r = lowest_levels(Parity::Minus, 2, kBase)[1];
    const auto v = fock_amplitudes(psi_from_phi1(r.x_root, Parity::Minus, kBase), kBase);
    for (std::size_t m = 0; m < v.up.size(); ++m) {
        // Parity -1: sigma_z (-1)^m = -1, so up needs odd m and down even m.
        if (m % 2 == 0) {
            CHECK(v.up[m] == 0.0);
        } else if (m < v.down.size()) {
            CHECK(v.down[m] == 0.0);
        }
    }
    const auto product = v.product_basis(50);
    CHECK(product.size() == 100);
}

TEST_CASE("circle samples") {
    const auto s = circle_samples(0.5, 4);
    REQUIRE(s.size() == 4);
    CHECK(s[0].real() == doctest::Approx(0.5));
    CHECK(s[0].imag() == doctest::Approx(0.0));
    CHECK(s[1].imag() == doctest::Approx(0.5));
    for (const auto& z : s) CHECK(std::abs(z) == doctest::Approx(0.5));
}

TEST_CASE("series evaluation matches exp for a pure exponential") {
    BargmannSeries s;
    double c = 1.0;
    for (int m = 0; m < 40; ++m) {
        s.taylor.push_back(c);
        c /= (m + 1);
    }
    const std::complex<double> z{0.3, -0.2};
    CHECK(std::abs(evaluate(s, z) - std::exp(z)) < 1e-15);
}

TEST_CASE("explicit orders and tail control") {
    const auto r = lowest_levels(Parity::Plus, 1, kBase)[0];
    const auto a = psi_from_phi2(r.x_root, Parity::Plus, kBase, 120);
    CHECK(a.taylor.size() == 121);
    CHECK_THROWS_AS(psi_from_phi2(r.x_root, Parity::Plus, kBase, 3), ConvergenceError);
    CHECK_THROWS_AS(psi_from_phi2(r.x_root, Parity::Plus, {1.0, 0.7, 0.4, 0.2}), InvalidArgument);
}
