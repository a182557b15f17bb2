#include <cmath>
#include <vector>

#include "doctest.h"

#include "junctionhj/errors.hpp"
#include "junctionhj/hamiltonian.hpp"
#include "junctionhj/random.hpp"
#include "junctionhj/self_test.hpp"

using namespace junctionhj;

namespace {

// Independent oracle for pi_plus: predicate bisection on the nondecreasing
// envelope H^+,'first p at which H^+ reaches the level'.
double pi_plus_oracle(const Hamiltonian1D& h, double level) {
    double lo = h.minimal_minimizer();
    if (h.monotone_part(BranchSign::Increasing, lo) >= level) return lo;
    double hi = lo + 1.0;
    while (h.monotone_part(BranchSign::Increasing, hi) < level) hi = lo + 2.0 * (hi - lo);
    for (int it = 0; it < 120; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (h.monotone_part(BranchSign::Increasing, mid) >= level)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

} // namespace

TEST_CASE("quadratic family closed forms") {
    const auto h = Hamiltonian1D::quadratic(2.0, -1.0, 0.5);
    CHECK(h.evaluate(0.0) == doctest::Approx(2.5));
    CHECK(h.min_value() == doctest::Approx(0.5));
    CHECK(h.minimal_minimizer() == doctest::Approx(-1.0));
    CHECK(h.pi_plus(2.5) == doctest::Approx(0.0));     // c + sqrt((l - m)/a)
    CHECK(h.pi_plus_hat(2.5) == doctest::Approx(0.0)); // no plateau: both ends agree
    CHECK(h.pi_plus(0.5) == doctest::Approx(-1.0));

    // envelopes: frozen at the minimum on the wrong side of it
    CHECK(h.monotone_part(BranchSign::Decreasing, 0.0) == doctest::Approx(0.5));
    CHECK(h.monotone_part(BranchSign::Increasing, -3.0) == doctest::Approx(0.5));
    CHECK(h.monotone_part(BranchSign::Decreasing, -3.0) == doctest::Approx(8.5));
}

TEST_CASE("absolute value family closed forms") {
    const auto h = Hamiltonian1D::absolute_value(2.0, 1.0, -1.0);
    CHECK(h.evaluate(0.0) == doctest::Approx(1.0));
    CHECK(h.pi_plus(3.0) == doctest::Approx(3.0)); // c + (l - m)/a
    CHECK(h.min_value() == doctest::Approx(-1.0));
}

TEST_CASE("trapezoid plateau endpoints") {
    const auto h = Hamiltonian1D::trapezoid(1.0, 2.0, -0.5);
    CHECK(h.evaluate(0.3) == doctest::Approx(-0.5));
    CHECK(h.evaluate(2.0) == doctest::Approx(1.5));
    CHECK(h.minimal_minimizer() == doctest::Approx(-1.0));

    // the whole bottom [-w, w] sits at the minimum level
    CHECK(h.pi_plus(-0.5) == doctest::Approx(-1.0));
    CHECK(h.pi_plus_hat(-0.5) == doctest::Approx(1.0));
    CHECK(h.pi_plus(0.5) == doctest::Approx(1.5));
    CHECK(h.pi_plus_hat(0.5) == doctest::Approx(1.5));
}

TEST_CASE("piecewise linear evaluation and inverses") {
    // wing slopes are upward rates away from the table on either side
    const std::vector<Breakpoint> table = {{-1.0, 2.0}, {0.0, 0.0}, {1.0, 3.0}};
    const auto h = Hamiltonian1D::piecewise_linear(table, 4.0, 5.0);

    CHECK(h.evaluate(-0.5) == doctest::Approx(1.0));
    CHECK(h.evaluate(0.5) == doctest::Approx(1.5));
    CHECK(h.evaluate(-2.0) == doctest::Approx(6.0));  // left wing
    CHECK(h.evaluate(3.0) == doctest::Approx(13.0));  // right wing
    CHECK(h.min_value() == doctest::Approx(0.0));
    CHECK(h.minimal_minimizer() == doctest::Approx(0.0));

    CHECK(h.pi_plus(1.5) == doctest::Approx(0.5));
    CHECK(h.pi_plus(3.0) == doctest::Approx(1.0));
    CHECK(h.pi_plus(4.0) == doctest::Approx(1.2)); // onto the wing
    CHECK(h.pi_plus_hat(1.5) == doctest::Approx(0.5));
}

TEST_CASE("piecewise linear plateau at the minimum") {
    const std::vector<Breakpoint> table = {{-1.0, 1.0}, {0.0, 0.0}, {1.0, 0.0}, {2.0, 1.0}};
    const auto h = Hamiltonian1D::piecewise_linear(table, 2.0, 2.0);

    CHECK(h.minimal_minimizer() == doctest::Approx(0.0));
    CHECK(h.pi_plus(0.0) == doctest::Approx(0.0));
    CHECK(h.pi_plus_hat(0.0) == doctest::Approx(1.0));
    CHECK(h.pi_plus(0.5) == doctest::Approx(1.5));
    CHECK(h.pi_plus(1.0) == doctest::Approx(2.0));
}

TEST_CASE("piecewise linear plateau strictly above the minimum") {
    const std::vector<Breakpoint> table = {{0.0, 0.0}, {1.0, 1.0}, {2.0, 1.0}, {3.0, 2.0}};
    const auto h = Hamiltonian1D::piecewise_linear(table, 1.0, 1.0);

    CHECK(h.pi_plus(1.0) == doctest::Approx(1.0));
    CHECK(h.pi_plus_hat(1.0) == doctest::Approx(2.0)); // right end of the flat step
    CHECK(h.pi_plus(1.5) == doctest::Approx(2.5));     // jumps across the plateau
}

TEST_CASE("pi_plus agrees with predicate bisection on random instances") {
    Rng rng(2024);
    for (int n = 0; n < 60; ++n) {
        const Hamiltonian1D h = random_hamiltonian(rng);
        for (int s = 0; s < 6; ++s) {
            const double level = h.min_value() + rng.uniform(0.0, 5.0);
            const double oracle = pi_plus_oracle(h, level);
            CHECK(h.pi_plus(level) == doctest::Approx(oracle).epsilon(1e-7));
        }
    }
}

TEST_CASE("envelope identity and inverse consistency on random instances") {
    Rng rng(7);
    for (int n = 0; n < 80; ++n) {
        const Hamiltonian1D h = random_hamiltonian(rng);
        REQUIRE(h.validate().all_passed());
        for (int s = 0; s < 30; ++s) {
            const double p = rng.uniform(-7.0, 7.0);
            const double hv = h.evaluate(p);
            const double hm = h.monotone_part(BranchSign::Decreasing, p);
            const double hp = h.monotone_part(BranchSign::Increasing, p);
            CHECK(std::max(hm, hp) == doctest::Approx(hv).epsilon(1e-12));
            CHECK(hm >= h.min_value() - 1e-12);
            CHECK(hp >= h.min_value() - 1e-12);
        }
        double prev = -1e300;
        for (int s = 0; s < 12; ++s) {
            const double level = h.min_value() + 0.5 * s;
            const double pp = h.pi_plus(level);
            CHECK(h.evaluate(pp) == doctest::Approx(level).epsilon(1e-9));
            CHECK(pp >= prev - 1e-12);
            CHECK(h.pi_plus_hat(level) >= pp - 1e-12);
            prev = pp;
        }
    }
}

TEST_CASE("lipschitz bound is a sampled modulus") {
    const auto q = Hamiltonian1D::quadratic(1.0, 0.0, 0.0);
    CHECK(q.lipschitz_bound(-2.0, 3.0) == doctest::Approx(6.0));

    Rng rng(99);
    for (int n = 0; n < 40; ++n) {
        const Hamiltonian1D h = random_hamiltonian(rng);
        const double lo = rng.uniform(-6.0, 0.0);
        const double hi = lo + rng.uniform(0.5, 6.0);
        const double bound = h.lipschitz_bound(lo, hi);
        for (int s = 0; s < 25; ++s) {
            const double p1 = rng.uniform(lo, hi);
            const double p2 = rng.uniform(lo, hi);
            CHECK(std::abs(h.evaluate(p1) - h.evaluate(p2)) <=
                  bound * std::abs(p1 - p2) + 1e-10);
        }
    }
}

TEST_CASE("reflection flips the argument") {
    Rng rng(5);
    for (int n = 0; n < 30; ++n) {
        const Hamiltonian1D h = random_hamiltonian(rng);
        const Hamiltonian1D r = h.reflected();
        for (int s = 0; s < 15; ++s) {
            const double p = rng.uniform(-5.0, 5.0);
            CHECK(r.evaluate(p) == doctest::Approx(h.evaluate(-p)).epsilon(1e-12));
        }
        CHECK(r.min_value() == doctest::Approx(h.min_value()));
    }
}

TEST_CASE("min offset shifts values uniformly") {
    const auto h = Hamiltonian1D::trapezoid(0.5, 1.0, -0.25);
    const auto shifted = h.with_min_offset(0.7);
    CHECK(shifted.min_value() == doctest::Approx(0.45));
    CHECK(shifted.evaluate(2.0) == doctest::Approx(h.evaluate(2.0) + 0.7));
}

TEST_CASE("structural validation flags bad tables") {
    // dips after an increase: not quasi-convex
    const std::vector<Breakpoint> bad = {{-1.0, 0.0}, {0.0, 1.0}, {1.0, 0.5}};
    const auto h = Hamiltonian1D::piecewise_linear(bad, 1.0, 1.0);
    CHECK_FALSE(h.validate().all_passed());

    // nonpositive upward wing rates kill coercivity
    const std::vector<Breakpoint> flat = {{-1.0, 1.0}, {0.0, 0.0}};
    const auto wrong_wing = Hamiltonian1D::piecewise_linear(flat, -1.0, 1.0);
    CHECK_FALSE(wrong_wing.validate().all_passed());
}

TEST_CASE("constructor and level guards") {
    CHECK_THROWS_AS(Hamiltonian1D::quadratic(0.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Hamiltonian1D::trapezoid(-0.1, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Hamiltonian1D::piecewise_linear({{1.0, 0.0}, {0.0, 1.0}}, -1.0, 1.0),
                    std::invalid_argument);

    const auto h = Hamiltonian1D::quadratic(1.0, 0.0, 0.0);
    CHECK_THROWS_AS(h.pi_plus(-1.0), LevelBelowMinimum);
    CHECK_THROWS_AS(h.pi_plus_hat(-0.5), LevelBelowMinimum);
}
