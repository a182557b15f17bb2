#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"

#include "junctionhj/errors.hpp"
#include "junctionhj/junction_function.hpp"

using namespace junctionhj;

namespace {

double eval2(const JunctionFunction& L, double p0, double p1, double p2) {
    const std::array<double, 2> p = {p1, p2};
    return L.evaluate(p0, p);
}

// Table matching kirchhoff beta = (1, 1) on a box: L = -(p1 + p2).
TabulatedGrid kirchhoff_table() {
    TabulatedGrid g;
    const std::vector<double> axis = {-2.0, -1.0, 0.0, 1.0, 2.0};
    g.axes = {axis, axis, axis};
    g.values.reserve(axis.size() * axis.size() * axis.size());
    for (double p0 : axis) {
        (void)p0;
        for (double p1 : axis)
            for (double p2 : axis) g.values.push_back(-(p1 + p2));
    }
    return g;
}

} // namespace

TEST_CASE("kirchhoff ignores the vertex slope") {
    const auto L = JunctionFunction::kirchhoff({1.0, 2.0});
    CHECK(eval2(L, 5.0, 1.0, 1.0) == doctest::Approx(-3.0));
    CHECK(eval2(L, -17.0, 1.0, 1.0) == doctest::Approx(-3.0));
    CHECK(L.arity() == 2);
}

TEST_CASE("neumann single branch") {
    const auto L = JunctionFunction::neumann({0.5});
    const std::array<double, 1> p = {1.25};
    CHECK(L.evaluate(0.0, p) == doctest::Approx(-0.75));
    CHECK(L.evaluate(3.0, p) == doctest::Approx(-0.75));
}

TEST_CASE("flux limited germ takes the max of level and envelopes") {
    const std::vector<Hamiltonian1D> hs = {Hamiltonian1D::quadratic(1.0, 0.0, 0.0),
                                           Hamiltonian1D::quadratic(1.0, 0.0, 0.0)};
    const auto L = JunctionFunction::flux_limited(1.0, hs);
    // H^-(0.5) = 0, H^-(-1) = 1, so max(A, ...) = 1 and L = -p0 + 1
    CHECK(eval2(L, -2.0, 0.5, -1.0) == doctest::Approx(3.0));
    // envelopes win when a slope is steep enough
    CHECK(eval2(L, 0.0, -3.0, 0.0) == doctest::Approx(9.0));
}

TEST_CASE("affine germ") {
    const auto L = JunctionFunction::affine({-1.0, -1.0, -1.0}, 2.0);
    CHECK(eval2(L, 1.0, 0.5, 0.5) == doctest::Approx(0.0));
}

TEST_CASE("valid families pass the structural validator") {
    const std::vector<Hamiltonian1D> hs = {Hamiltonian1D::quadratic(1.0, 0.0, 0.0),
                                           Hamiltonian1D::absolute_value(1.0, 0.5, -0.5)};
    CHECK(JunctionFunction::kirchhoff({1.0, 2.0}).validate_assumptions().all_passed());
    CHECK(JunctionFunction::neumann({0.5, -0.25}).validate_assumptions().all_passed());
    CHECK(JunctionFunction::flux_limited(0.75, hs).validate_assumptions().all_passed());
    CHECK(JunctionFunction::affine({-0.5, -1.0, -2.0}, 1.0).validate_assumptions().all_passed());
}

TEST_CASE("affine with a positive slope coefficient fails monotonicity") {
    const auto L = JunctionFunction::affine({-1.0, 1.0, -1.0}, 0.0);
    const auto rep = L.validate_assumptions();
    CHECK_FALSE(rep.all_passed());
    bool monotone_failed = false;
    for (const auto& c : rep.checks)
        if (c.name.find("(L2)") != std::string::npos && !c.passed) monotone_failed = true;
    CHECK(monotone_failed);
}

TEST_CASE("tabulated interpolation is exact for a multilinear target") {
    const auto L = JunctionFunction::tabulated(kirchhoff_table());
    const auto ref = JunctionFunction::kirchhoff({1.0, 1.0});
    CHECK(L.arity() == 2);
    const double probes[][3] = {{0.0, 0.0, 0.0},  {1.0, -1.0, 0.5}, {-1.5, 0.3, -0.7},
                                {2.0, 2.0, -2.0}, {0.25, 1.75, 1.1}};
    for (const auto& q : probes) {
        bool clamped = false; // sticky flag: evaluate only ever sets it
        const std::array<double, 2> p = {q[1], q[2]};
        CHECK(L.evaluate(q[0], p, {}, &clamped) ==
              doctest::Approx(ref.evaluate(q[0], p)).epsilon(1e-12));
        CHECK_FALSE(clamped);
    }
}

TEST_CASE("tabulated evaluation clamps outside the hull") {
    const auto L = JunctionFunction::tabulated(kirchhoff_table());
    bool clamped = false;
    const std::array<double, 2> p = {5.0, 0.0};
    CHECK(L.evaluate(0.0, p, {}, &clamped) == doctest::Approx(-2.0)); // p1 pinned at 2
    CHECK(clamped);
}

TEST_CASE("bounded tables are reported at the divergence probes") {
    const auto rep = JunctionFunction::tabulated(kirchhoff_table()).validate_assumptions();
    bool annotated = false;
    for (const auto& c : rep.checks)
        if (!c.passed && c.detail.find("bounded table") != std::string::npos) annotated = true;
    CHECK(annotated);
}

TEST_CASE("arity mismatches are rejected") {
    const auto L = JunctionFunction::kirchhoff({1.0, 1.0});
    const std::array<double, 3> p = {0.0, 0.0, 0.0};
    CHECK_THROWS_AS(L.evaluate(0.0, p), ArityMismatch);
    CHECK_THROWS_AS(JunctionFunction::kirchhoff({}), std::invalid_argument);
    CHECK_THROWS_AS(JunctionFunction::affine({-1.0}, 0.0), std::invalid_argument);
}
