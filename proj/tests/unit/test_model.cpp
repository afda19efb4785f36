#include <doctest.h>

#include <cmath>
#include <limits>

#include "rabi/errors.hpp"
#include "rabi/model.hpp"
#include "rabi/oracle.hpp"

using namespace rabi;

TEST_CASE("normalize divides every field by omega") {
    ModelParams p{2.0, 1.4, 0.8, 0.0};
    const NormalizedParams n = normalize(p);
    CHECK(n.g == 1.4 / 2.0);
    CHECK(n.delta == 0.8 / 2.0);
    CHECK(n.epsilon == 0.0);
    CHECK(n.omega == 2.0);
    CHECK(n.g == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("normalize is the identity at omega = 1") {
    ModelParams p{1.0, 0.7, 0.4, 0.0};
    const NormalizedParams n = normalize(p);
    CHECK(n.g == 0.7);
    CHECK(n.delta == 0.4);
    const ModelParams back = denormalize(n);
    CHECK(back.g == p.g);
    CHECK(back.delta == p.delta);
}

TEST_CASE("invalid records are rejected") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(validate({0.0, 0.5, 0.4, 0.0}), InvalidArgument);
    CHECK_THROWS_AS(validate({-1.0, 0.5, 0.4, 0.0}), InvalidArgument);
    CHECK_THROWS_AS(validate({1.0, -0.1, 0.4, 0.0}), InvalidArgument);
    CHECK_THROWS_AS(validate({1.0, 0.5, nan, 0.0}), InvalidArgument);
    CHECK_THROWS_AS(normalize({1.0, 0.5, 0.4, std::numeric_limits<double>::infinity()}),
                    InvalidArgument);
    CHECK_NOTHROW(validate({1.0, 0.0, -0.4, 0.3}));
}

TEST_CASE("baseline energies") {
    CHECK(baseline_energy(0, {1.0, 0.7, 0.4, 0.0}) == doctest::Approx(-0.49).epsilon(1e-15));
    CHECK(baseline_energy(3, {1.0, 0.0, 0.4, 0.0}) == 3.0);
    CHECK(baseline_energy(1, {2.0, 1.0, 0.4, 0.0}) == 1.5);
    CHECK_THROWS_AS(baseline_energy(-1, {1.0, 0.7, 0.4, 0.0}), InvalidArgument);
}

TEST_CASE("spectrum scales with omega") {
    const std::vector<double> a = oracle_levels(OracleModel::Rabi, {1.0, 0.7, 0.4, 0.0}, 150, 10);
    const std::vector<double> b = oracle_levels(OracleModel::Rabi, {2.0, 1.4, 0.8, 0.0}, 150, 10);
    for (int i = 0; i < 10; ++i) {
        CHECK(b[i] == doctest::Approx(2.0 * a[i]).epsilon(1e-12));
    }
}

TEST_CASE("scaled multiplies every energy field") {
    const ModelParams s = scaled({1.0, 0.7, 0.4, 0.2}, 3.0);
    CHECK(s.omega == 3.0);
    CHECK(s.g == doctest::Approx(2.1));
    CHECK(s.delta == doctest::Approx(1.2));
    CHECK(s.epsilon == doctest::Approx(0.6));
    CHECK_THROWS_AS(scaled({1.0, 0.7, 0.4, 0.0}, 0.0), InvalidArgument);
}

TEST_CASE("parity labels") {
    CHECK(sign(Parity::Plus) == 1);
    CHECK(sign(Parity::Minus) == -1);
    CHECK(opposite(Parity::Plus) == Parity::Minus);
    CHECK(ModelParams{1.0, 0.5, 0.4, 0.0}.symmetric());
    CHECK_FALSE(ModelParams{1.0, 0.5, 0.4, 0.1}.symmetric());
}
