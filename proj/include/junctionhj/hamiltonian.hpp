#pragma once

#include <limits>
#include <vector>

#include "junctionhj/validation.hpp"

namespace junctionhj {

// Evaluation point of the frozen tangential parameters (t, x', p').  The
// one-dimensional machinery below never looks inside; parameter dependence
// is owned by the sweep layer.
struct ParamPoint {
    double t = 0.0;
    std::vector<double> x_prime;
    std::vector<double> p_prime;

    double p_prime_norm2() const {
        double s = 0.0;
        for (double v : p_prime) s += v * v;
        return s;
    }
};

enum class HamiltonianFamily { Quadratic, AbsoluteValue, Trapezoid, PiecewiseLinear };

enum class BranchSign { Decreasing, Increasing }; // H^- resp. H^+

struct Breakpoint {
    double p = 0.0;
    double h = 0.0;
};

// Quasi-convex coercive Hamiltonian of one scalar slope.  Immutable after
// construction; all queries are const and re-entrant.
//
// Core derived quantities:
//   minimal_minimizer()  the smallest global minimizer pi0
//   monotone_part()      H^-(p) = H(p) for p <= pi0 else min H, and the
//                        mirrored H^+; max(H^-, H^+) = H pointwise
//   pi_plus(l)           inf{p : H(p) = H^+(p) = l}, left plateau endpoint
//   pi_plus_hat(l)       sup of the same set, right plateau endpoint
class Hamiltonian1D {
public:
    static Hamiltonian1D quadratic(double a, double c, double m);
    static Hamiltonian1D absolute_value(double a, double c, double m);
    static Hamiltonian1D trapezoid(double half_width, double wing_slope, double m);
    // Table interpolated linearly between breakpoints (strictly increasing p),
    // extended by straight wings; declared wing slopes are the upward rates,
    // so both must be positive for coercivity (validate() reports otherwise).
    static Hamiltonian1D piecewise_linear(std::vector<Breakpoint> table,
                                          double left_wing_slope,
                                          double right_wing_slope);

    HamiltonianFamily family() const { return family_; }

    double evaluate(double p) const;
    double min_value() const;
    double minimal_minimizer() const;

    double monotone_part(BranchSign sign, double p) const;

    // Generalized inverses of the nondecreasing part at a level >= min H.
    // Closed forms for the parametric families, exact breakpoint walking for
    // tables.  Throws LevelBelowMinimum if level < min H - 1e-12.
    double pi_plus(double level) const;
    double pi_plus_hat(double level) const;

    // max |H'| over [p_lo, p_hi], used for CFL budgets.
    double lipschitz_bound(double p_lo, double p_hi) const;

    // p -> H(-p); used when folding a two-sided line problem onto a junction.
    Hamiltonian1D reflected() const;

    // Same shape shifted vertically; the parametric sweep catalog uses this.
    Hamiltonian1D with_min_offset(double dm) const;

    ValidationReport validate() const;

    // Slope interval on which tabulated data is exact (unbounded otherwise).
    double domain_lo() const { return domain_lo_; }
    double domain_hi() const { return domain_hi_; }

    // Raw parameters, for serialization.
    double param_a() const { return a_; }
    double param_c() const { return c_; }
    double param_m() const { return m_; }
    double param_w() const { return w_; }
    double param_s() const { return s_; }
    const std::vector<Breakpoint>& table() const { return table_; }
    double left_wing() const { return left_wing_; }
    double right_wing() const { return right_wing_; }

private:
    Hamiltonian1D() = default;

    int min_index() const; // first table index achieving the minimum

    HamiltonianFamily family_ = HamiltonianFamily::Quadratic;
    // parametric families
    double a_ = 1.0, c_ = 0.0, m_ = 0.0; // quadratic / absolute value
    double w_ = 0.0, s_ = 1.0;           // trapezoid
    // table family
    std::vector<Breakpoint> table_;
    double left_wing_ = 1.0, right_wing_ = 1.0;

    double domain_lo_ = -std::numeric_limits<double>::infinity();
    double domain_hi_ = std::numeric_limits<double>::infinity();
};

// Lightweight view of one monotone envelope, handy for scheme code.
struct MonotoneBranch {
    const Hamiltonian1D* parent = nullptr;
    BranchSign sign = BranchSign::Increasing;
    double operator()(double p) const { return parent->monotone_part(sign, p); }
};

} // namespace junctionhj
