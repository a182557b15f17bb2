#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"

#include "junctionhj/effective_limiter.hpp"
#include "junctionhj/errors.hpp"
#include "junctionhj/random.hpp"
#include "junctionhj/self_test.hpp"

using namespace junctionhj;

namespace {

std::vector<Hamiltonian1D> two_quadratics() {
    return {Hamiltonian1D::quadratic(1.0, 0.0, 0.0), Hamiltonian1D::quadratic(1.0, 0.0, 0.0)};
}

// Random junction problem matching the acceptance generator's spirit but with
// a local seed: 2 branches, any family, any germ with a guaranteed root side.
std::pair<std::vector<Hamiltonian1D>, JunctionFunction> random_problem(Rng& rng) {
    std::vector<Hamiltonian1D> hs;
    const int n = rng.uniform_int(2, 3);
    for (int i = 0; i < n; ++i) hs.push_back(random_hamiltonian(rng));
    const int pick = rng.uniform_int(0, 2);
    if (pick == 0) {
        std::vector<double> beta;
        for (int i = 0; i < n; ++i) beta.push_back(rng.uniform(0.3, 2.0));
        return {hs, JunctionFunction::kirchhoff(beta)};
    }
    if (pick == 1) {
        std::vector<double> g;
        for (int i = 0; i < n; ++i) g.push_back(rng.uniform(-1.0, 1.0));
        return {hs, JunctionFunction::neumann(g)};
    }
    std::vector<double> gamma;
    for (int i = 0; i <= n; ++i) gamma.push_back(rng.uniform(-2.0, -0.2));
    return {hs, JunctionFunction::affine(gamma, rng.uniform(-1.0, 1.0))};
}

} // namespace

TEST_CASE("neumann limiter closed forms") {
    const auto hs = std::vector<Hamiltonian1D>{Hamiltonian1D::quadratic(1.0, 0.0, 0.0)};

    // g = 0: L(A0, pi+(A0)) = 0 - 0 = 0 <= 0, base-level case
    const auto at_zero = compute_AL(JunctionFunction::neumann({0.0}), hs);
    CHECK(at_zero.took_A0_branch);
    CHECK(at_zero.AL == doctest::Approx(0.0).epsilon(1e-12));

    // g = 1: root of 1 - sqrt(l) = 0 at l = 1, certifying slope sqrt(1) = 1
    const auto at_one = compute_AL(JunctionFunction::neumann({1.0}), hs);
    CHECK_FALSE(at_one.took_A0_branch);
    CHECK(at_one.AL == doctest::Approx(1.0).epsilon(1e-9));
    REQUIRE(at_one.branch_slopes.size() == 1);
    CHECK(at_one.branch_slopes[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(at_one.rep_sup == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(at_one.rep_inf == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(at_one.certification_residual) <= 1e-8);
}

TEST_CASE("base level case activates below the germ root") {
    // H = p^2 - 1 so A0 = -1; unit Kirchhoff gives L(A0, 0) = 0 <= 0
    const std::vector<Hamiltonian1D> hs = {Hamiltonian1D::quadratic(1.0, 0.0, -1.0)};
    const auto rep = compute_AL(JunctionFunction::kirchhoff({1.0}), hs);
    CHECK(rep.took_A0_branch);
    CHECK(rep.AL == doctest::Approx(-1.0));
    CHECK(rep.A0 == doctest::Approx(-1.0));
}

TEST_CASE("kirchhoff pair with shifted branch") {
    // H1 = (p + 2)^2, H2 = p^2: pi1+(l) = -2 + sqrt(l), pi2+(l) = sqrt(l),
    // sum vanishes at l = 1 with slopes (-1, 1)
    const std::vector<Hamiltonian1D> hs = {Hamiltonian1D::quadratic(1.0, -2.0, 0.0),
                                           Hamiltonian1D::quadratic(1.0, 0.0, 0.0)};
    const auto rep = compute_AL(JunctionFunction::kirchhoff({1.0, 1.0}), hs);
    CHECK_FALSE(rep.took_A0_branch);
    CHECK(rep.A0 == doctest::Approx(0.0));
    CHECK(rep.AL == doctest::Approx(1.0).epsilon(1e-9));
    REQUIRE(rep.branch_slopes.size() == 2);
    CHECK(rep.branch_slopes[0] == doctest::Approx(-1.0).epsilon(1e-7));
    CHECK(rep.branch_slopes[1] == doctest::Approx(1.0).epsilon(1e-7));

    const auto check = check_representations(rep, JunctionFunction::kirchhoff({1.0, 1.0}), hs);
    CHECK_FALSE(check.skipped);
    CHECK(check.passed);
    CHECK(check.sup_gap <= 1e-8);
    CHECK(check.inf_gap <= 1e-8);
}

TEST_CASE("dedicated kirchhoff solver matches the closed form") {
    // H1 = H2 = 0.5 (p + 1)^2 - 0.5: minimizers at -1, pi sum < 0, root where
    // pi1+(l) + pi2+(l) = 2(-1 + sqrt(2(l + 0.5))) = 0, i.e. l = 0
    const auto h = Hamiltonian1D::quadratic(0.5, -1.0, -0.5);
    const auto lim = compute_Ae(h, h);
    CHECK_FALSE(lim.took_A0_branch);
    CHECK(lim.level == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(lim.p1_plus == doctest::Approx(0.0).epsilon(1e-7));
    CHECK(lim.p2_plus == doctest::Approx(-lim.p1_plus).epsilon(1e-9));
}

TEST_CASE("flux limited germ is idempotent") {
    // branches p^2 and (p - 1)^2 + 0.25 give A0 = 0.25; any level above it
    // must be reproduced exactly
    const std::vector<Hamiltonian1D> hs = {Hamiltonian1D::quadratic(1.0, 0.0, 0.0),
                                           Hamiltonian1D::quadratic(1.0, 1.0, 0.25)};
    const double a0 = compute_A0(hs);
    CHECK(a0 == doctest::Approx(0.25));

    for (double target : {0.25, 0.9, 1.7}) {
        const auto germ = JunctionFunction::flux_limited(target, hs);
        const auto rep = compute_AL(germ, hs);
        CHECK(rep.AL == doctest::Approx(target).epsilon(1e-8));
    }
}

TEST_CASE("plateau at the root level is certified from the bracket") {
    // Trapezoid bottom [-1, 1] at level 0 with Neumann g = 0: the root sits
    // exactly on the plateau, pi+ jumps from -1 to 1 across it
    const std::vector<Hamiltonian1D> hs = {Hamiltonian1D::trapezoid(1.0, 1.0, 0.0)};
    const auto germ = JunctionFunction::neumann({0.0});
    const auto rep = compute_AL(germ, hs);

    CHECK(std::abs(rep.AL) <= 1e-9);
    CHECK(std::abs(rep.rep_sup) <= 1e-8);
    CHECK(std::abs(rep.rep_inf) <= 1e-8);
    CHECK(std::abs(rep.certification_residual) <= 1e-8);
    REQUIRE(rep.branch_slopes.size() == 1);
    CHECK(std::abs(rep.branch_slopes[0]) <= 1e-7);

    const auto check = check_representations(rep, germ, hs);
    CHECK(check.passed);
    // one-sided views straddle zero: L(lo, pi+) = +1 side, L(hi, pihat+) = -1 side
    CHECK(check.view_def == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(check.view_def_plus == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("definitional oracle on random instances") {
    // AL = sup{l >= A0 : L(l, pi+(l)) > 0} by definition, so the germ value
    // must change sign across AL (root branch) or be nonpositive at A0.
    Rng rng(314159);
    const double delta = 1e-6;
    for (int n = 0; n < 30; ++n) {
        const auto [hs, germ] = random_problem(rng);
        const auto rep = compute_AL(germ, hs);
        const std::span<const Hamiltonian1D> span(hs);

        auto g_at = [&](double level) {
            std::vector<double> p;
            for (const auto& h : span) p.push_back(h.pi_plus(level));
            return germ.evaluate(level, p);
        };

        if (rep.took_A0_branch) {
            CHECK(g_at(rep.A0) <= 1e-9);
        } else {
            CHECK(g_at(rep.AL - delta) > 0.0);
            CHECK(g_at(rep.AL + delta) <= 0.0);
        }
    }
}

TEST_CASE("certifying slopes sit on the increasing side at the reported level") {
    Rng rng(602214);
    for (int n = 0; n < 60; ++n) {
        const auto [hs, germ] = random_problem(rng);
        const auto rep = compute_AL(germ, hs);
        const double residual = rep.took_A0_branch ? std::max(0.0, rep.certification_residual)
                                                   : std::abs(rep.certification_residual);
        CHECK(residual <= 1e-8);
        REQUIRE(rep.branch_slopes.size() == hs.size());
        for (std::size_t i = 0; i < hs.size(); ++i) {
            CHECK(std::abs(hs[i].evaluate(rep.branch_slopes[i]) - rep.AL) <= 1e-8);
            CHECK(rep.branch_slopes[i] >= hs[i].minimal_minimizer() - 1e-9);
        }
    }
}

TEST_CASE("ishii maximizer escapes a trapezoid plateau") {
    // The flat trapezoid bottom spans most of I and ties any two interior
    // probes, so plain quasi-concave search collapses into it; the true
    // maximum is the crossing beyond the plateau edge.
    const auto h1t = Hamiltonian1D::absolute_value(2.67, 1.47, -0.131);
    const auto h2t = Hamiltonian1D::trapezoid(0.83, 1.26, -0.0152);

    const auto rep = compute_ishii(h1t, h2t);
    CHECK(rep.maximizer > 0.83);
    CHECK(rep.A_star == doctest::Approx(0.49553).epsilon(1e-3));

    const auto eq = verify_Ae_equals_AIminus(h1t, h2t);
    CHECK(eq.proof_case == EqualityCase::Crossing);
    CHECK(eq.gap <= 1e-8);
}

TEST_CASE("unit kirchhoff germ and dedicated solver agree") {
    Rng rng(271828);
    const auto germ = JunctionFunction::kirchhoff({1.0, 1.0});
    for (int n = 0; n < 30; ++n) {
        const Hamiltonian1D h1 = random_hamiltonian(rng);
        const Hamiltonian1D h2 = random_hamiltonian(rng);
        const std::vector<Hamiltonian1D> hs = {h1, h2};
        const auto general = compute_AL(germ, hs);
        const auto special = compute_Ae(h1, h2);
        CHECK(special.level == doctest::Approx(general.AL).epsilon(1e-9));
    }
}

TEST_CASE("ishii crossing example") {
    // Tilde frame: left 0.5 (p - 1)^2 - 0.5, right 0.5 (p + 1)^2 - 0.5.
    // Folded minimizers are both -1, interval [-1, 1], graphs cross at 0.
    const auto h1t = Hamiltonian1D::quadratic(0.5, 1.0, -0.5);
    const auto h2t = Hamiltonian1D::quadratic(0.5, -1.0, -0.5);
    const auto rep = compute_ishii(h1t, h2t);

    CHECK(rep.pi_sum == doctest::Approx(-2.0));
    CHECK(rep.interval_lo == doctest::Approx(-1.0));
    CHECK(rep.interval_hi == doctest::Approx(1.0));
    CHECK(rep.A_star == doctest::Approx(0.0).epsilon(1e-7));
    CHECK(std::abs(rep.maximizer) <= 1e-4);
    CHECK(rep.A_I_minus == doctest::Approx(0.0).epsilon(1e-7));
    CHECK(rep.A_I_plus == doctest::Approx(0.0).epsilon(1e-7));
    CHECK(rep.A0 == doctest::Approx(-0.5));
}

TEST_CASE("equality proof cases are classified") {
    struct Pair {
        Hamiltonian1D h1t, h2t;
        EqualityCase expected;
    };
    const std::vector<Pair> pairs = {
        {Hamiltonian1D::quadratic(1.0, 0.0, 0.0), Hamiltonian1D::quadratic(1.0, 0.0, 0.0),
         EqualityCase::PiSumNonnegative},
        {Hamiltonian1D::quadratic(1.0, 2.0, -1.0), Hamiltonian1D::quadratic(1.0, 1.0, 0.5),
         EqualityCase::SeparatedBelow},
        {Hamiltonian1D::quadratic(0.5, 1.0, -0.5), Hamiltonian1D::quadratic(0.5, -1.0, -0.5),
         EqualityCase::Crossing},
        {Hamiltonian1D::quadratic(1.0, -1.0, 0.5), Hamiltonian1D::quadratic(1.0, -2.0, -1.0),
         EqualityCase::SeparatedAbove},
    };
    for (const auto& pr : pairs) {
        const auto rep = verify_Ae_equals_AIminus(pr.h1t, pr.h2t);
        CHECK(rep.proof_case == pr.expected);
        CHECK(rep.equal);
        CHECK(rep.gap <= 1e-8);
    }
}

TEST_CASE("affine offset sweeps the limiter") {
    // gamma = (-1, -1, -1), branches p^2: root of c - l - 2 sqrt(l) = 0,
    // i.e. AL = (sqrt(c + 1) - 1)^2
    const auto hs = two_quadratics();
    for (double c : {0.0, 3.0}) {
        const auto germ = JunctionFunction::affine({-1.0, -1.0, -1.0}, c);
        const auto rep = compute_AL(germ, hs);
        const double expected = std::pow(std::sqrt(c + 1.0) - 1.0, 2.0);
        CHECK(rep.AL == doctest::Approx(expected).epsilon(1e-8));
    }
}

TEST_CASE("parameter sweep tracks the coercivity curve") {
    ParametricFamily family;
    family.base = two_quadratics();
    family.offset = ParametricFamily::Offset::PPrimeSquared;

    std::vector<ParamPoint> grid;
    for (double r : {0.0, 0.5, 1.0}) {
        ParamPoint pt;
        pt.p_prime = {r};
        grid.push_back(pt);
    }

    const auto germ = JunctionFunction::kirchhoff({1.0, 1.0});
    const auto table = sweep_limiter(family, germ, grid);
    REQUIRE(table.rows.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        const double r = grid[k].p_prime[0];
        CHECK(table.rows[k].report.AL == doctest::Approx(r * r).epsilon(1e-9));
        CHECK(table.coercivity_curve[k].second == doctest::Approx(r * r).epsilon(1e-9));
    }
    // AL moves by at most 1 over |p'| steps of 0.5 here; the modulus reflects it
    CHECK(table.continuity_modulus >= 0.49);
    CHECK(table.continuity_modulus <= 2.01);

    const auto threaded = sweep_limiter(family, germ, grid, 2);
    REQUIRE(threaded.rows.size() == table.rows.size());
    for (std::size_t k = 0; k < table.rows.size(); ++k)
        CHECK(threaded.rows[k].report.AL == doctest::Approx(table.rows[k].report.AL).epsilon(1e-12));
}

TEST_CASE("invalid germs are rejected before solving") {
    // positive gamma on a slope coordinate breaks monotonicity
    const auto hs = two_quadratics();
    const auto germ = JunctionFunction::affine({-1.0, 1.0, -1.0}, 0.0);
    CHECK_THROWS_AS(compute_AL(germ, hs), AssumptionViolated);
    CHECK_THROWS_AS(compute_A0({}), std::invalid_argument);
}
