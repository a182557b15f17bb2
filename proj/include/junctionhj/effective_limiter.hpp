#pragma once

#include <span>
#include <utility>
#include <vector>

#include "junctionhj/hamiltonian.hpp"
#include "junctionhj/junction_function.hpp"

namespace junctionhj {

// Result of the effective flux limiter computation.
//
// bracket_lo / bracket_hi is the final bisection bracket around the root
// level.  The map lambda -> L(lambda, pi^+(lambda)) is strictly decreasing
// but may jump across zero when a branch has a plateau exactly at the root
// level; the bracket endpoints are then the correct places to evaluate the
// one-sided quantities (pi^+ is left continuous, pi-hat^+ right continuous).
struct FluxLimiterReport {
    double A0 = 0.0;
    double AL = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    std::vector<double> branch_slopes; // certifying p_i^+
    bool took_A0_branch = false;
    double rep_sup = 0.0; // sup{l >= A0 : L(l, pi^+(l)) > 0}
    double rep_inf = 0.0; // inf{l >= A0 : L(l, pihat^+(l)) < 0}
    int iterations = 0;
    bool hull_clamped = false; // tabulated L evaluated outside its grid hull
    double certification_residual = 0.0;
};

// A0 = max_i min H_i
double compute_A0(std::span<const Hamiltonian1D> branches);

// Effective flux limiter A_L: A0 when L(A0, p0) <= 0, otherwise the unique
// level l >= A0 at which L(l, p+) = 0 with H_i(p_i+) = l, p_i+ >= p_i0.
// Root tolerance 1e-10, certification tolerance 1e-8, bracket ceiling
// A0 + 1e6, at most 200 bisection iterations per root.
// Throws AssumptionViolated when the sampled validator rejects L (builtin
// families; bounded tables are exempt from the divergence checks and flag
// hull_clamped instead).
FluxLimiterReport compute_AL(const JunctionFunction& L,
                             std::span<const Hamiltonian1D> branches,
                             const ParamPoint& params = {});

struct RepresentationCheck {
    bool skipped = false;       // Def. case i: no root was bracketed
    double view_def = 0.0;      // L at (bracket_lo, pi^+(bracket_lo)), expected >= -1e-8
    double view_def_plus = 0.0; // L at (bracket_hi, pihat^+(bracket_hi)), expected <= 1e-8
    double sup_gap = 0.0;       // |AL - rep_sup|
    double inf_gap = 0.0;       // |AL - rep_inf|
    bool passed = false;
};

RepresentationCheck check_representations(const FluxLimiterReport& report,
                                          const JunctionFunction& L,
                                          std::span<const Hamiltonian1D> branches,
                                          const ParamPoint& params = {});

// Kirchhoff special case with unit weights: A_e = A0 when p10 + p20 >= 0,
// else the level where pi_1^+(l) + pi_2^+(l) = 0.  Inputs are the junction
// frame (already folded) branch Hamiltonians.
struct KirchhoffLimiter {
    double level = 0.0;
    double p1_plus = 0.0; // certifying pair, p1 + p2 = 0 on the root branch
    double p2_plus = 0.0;
    bool took_A0_branch = false;
    int iterations = 0;
};

KirchhoffLimiter compute_Ae(const Hamiltonian1D& h1, const Hamiltonian1D& h2);

// Ishii limiters for the two-sided line problem with Hamiltonians H~1 (left)
// and H~2 (right).  Folding H1(p) = H~1(-p), H2 = H~2 is applied internally.
enum class IshiiBranch { UsedA0, UsedAIplus };

struct IshiiReport {
    double A0 = 0.0;
    double A_star = 0.0;
    double A_I_plus = 0.0;  // max(A0, A_star)
    double A_I_minus = 0.0; // A_I_plus if pi_sum <= 0, else A0
    double interval_lo = 0.0;
    double interval_hi = 0.0;
    double pi_sum = 0.0; // pi_1^0 + pi_2^0 of the folded pair
    double maximizer = 0.0;
    IshiiBranch branch = IshiiBranch::UsedA0;
};

IshiiReport compute_ishii(const Hamiltonian1D& h1_tilde, const Hamiltonian1D& h2_tilde);

// Equality of the Kirchhoff limiter with the minimal Ishii limiter, with the
// geometric case classification: either pi_sum >= 0, or on I = [pi20, -pi10]
// the reflected left graph and the right graph are separated (below/above)
// or cross.
enum class EqualityCase { PiSumNonnegative, SeparatedBelow, Crossing, SeparatedAbove };

struct EqualityReport {
    double A_e = 0.0;
    double A_I_minus = 0.0;
    double gap = 0.0;
    EqualityCase proof_case = EqualityCase::PiSumNonnegative;
    bool equal = false; // gap <= 1e-8
};

EqualityReport verify_Ae_equals_AIminus(const Hamiltonian1D& h1_tilde,
                                        const Hamiltonian1D& h2_tilde);

// Closed-form catalog of parameter dependence for limiter sweeps.  The only
// nontrivial entry shifts every branch minimum by |p'|^2, which keeps the
// limiter coercive in the tangential gradient.
struct ParametricFamily {
    enum class Offset { None, PPrimeSquared };

    std::vector<Hamiltonian1D> base;
    Offset offset = Offset::PPrimeSquared;

    std::vector<Hamiltonian1D> at(const ParamPoint& point) const;
};

struct SweepRow {
    ParamPoint point;
    FluxLimiterReport report;
};

struct SweepTable {
    std::vector<SweepRow> rows; // in grid order
    double continuity_modulus = 0.0;
    std::vector<std::pair<double, double>> coercivity_curve; // (|p'|, min AL)
};

// Evaluates compute_AL over the parameter grid; rows may be computed in
// parallel (threads > 1) and are assembled in grid order.
SweepTable sweep_limiter(const ParametricFamily& family, const JunctionFunction& L,
                         std::span<const ParamPoint> grid, int threads = 1);

} // namespace junctionhj
