#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rabi/errors.hpp"
#include "rabi/roots.hpp"

using namespace rabi;

TEST_CASE("refinement stays inside the bracket and converges") {
    auto f = [](double x) { return std::cos(x) - x; };
    const RefinedRoot r = refine_root(f, 0.0, 1.0, f(0.0), f(1.0));
    CHECK(r.x == doctest::Approx(0.7390851332151607).epsilon(1e-12));
    CHECK(r.lo <= r.x);
    CHECK(r.x <= r.hi);
    CHECK(r.hi - r.lo <= 1e-12);
}

TEST_CASE("refinement handles flat and steep sides") {
    auto f = [](double x) { return std::pow(x - 0.3, 9); };
    const RefinedRoot r = refine_root(f, 0.0, 1.0, f(0.0), f(1.0), 1e-12);
    CHECK(std::abs(r.x - 0.3) < 1e-6);
    auto h = [](double x) { return std::exp(40.0 * x) - 2.0; };
    const RefinedRoot s = refine_root(h, -1.0, 1.0, h(-1.0), h(1.0));
    CHECK(s.x == doctest::Approx(std::log(2.0) / 40.0).epsilon(1e-10));
}

TEST_CASE("refinement rejects a bracket without a sign change") {
    auto f = [](double x) { return x * x + 1.0; };
    CHECK_THROWS_AS(refine_root(f, -1.0, 1.0, f(-1.0), f(1.0)), InvalidArgument);
}

TEST_CASE("close poles share a site") {
    const auto sites = group_poles({{2.0, 2, true}, {0.0, 0, true}, {1.0005, 1, false}, {0.9995, 1, true}}, 1e-3);
    REQUIRE(sites.size() == 3);
    CHECK(sites[0].plus_index == 0);
    CHECK(sites[1].plus_index == 1);
    CHECK(sites[1].minus_index == 1);
    CHECK(sites[1].lo == doctest::Approx(0.9995));
    CHECK(sites[1].hi == doctest::Approx(1.0005));
    CHECK(sites[2].plus_index == 2);
}

TEST_CASE("scan recovers roots away from and next to poles") {
    // f(x) = (x - 0.25)(x - 1.0004)(x - 2.6) / (x - 1): one root sits inside
    // the window of the pole at 1.
    ScanProblem problem;
    problem.value = [](double x) { return (x - 0.25) * (x - 1.0004) * (x - 2.6) / (x - 1.0); };
    problem.cleared = [](double x, const PoleSite&) { return (x - 0.25) * (x - 1.0004) * (x - 2.6); };
    problem.sites = group_poles({{1.0, 1, true}}, 1e-3);
    const auto roots = scan_roots(problem, 0.0, 3.0, ScanSettings{});
    REQUIRE(roots.size() == 3);
    CHECK(roots[0].x == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(roots[1].x == doctest::Approx(1.0004).epsilon(1e-12));
    CHECK(roots[1].near_pole);
    CHECK(roots[1].site == 0);
    CHECK(roots[2].x == doctest::Approx(2.6).epsilon(1e-12));
    CHECK_FALSE(roots[2].near_pole);
}

TEST_CASE("scan does not report a sign flip across a pole as a root") {
    ScanProblem problem;
    problem.value = [](double x) { return 1.0 / (x - 0.5); };
    problem.cleared = [](double, const PoleSite&) { return 1.0; };
    problem.sites = group_poles({{0.5, 0, true}}, 1e-3);
    CHECK(scan_roots(problem, 0.0, 1.0, ScanSettings{}).empty());
}

TEST_CASE("refinement pass catches a close pair of roots") {
    ScanProblem problem;
    problem.value = [](double x) { return (x - 0.3001) * (x - 0.3071); };
    problem.cleared = [](double, const PoleSite&) { return 1.0; };
    ScanSettings settings;
    settings.step = 0.01;
    const auto roots = scan_roots(problem, 0.0, 1.0, settings);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].x == doctest::Approx(0.3001).epsilon(1e-12));
    CHECK(roots[1].x == doctest::Approx(0.3071).epsilon(1e-12));
}
