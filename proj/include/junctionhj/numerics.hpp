#pragma once

#include <functional>

namespace junctionhj {

struct BracketResult {
    double lo = 0.0;
    double hi = 0.0;
    int iterations = 0;
    double midpoint() const { return 0.5 * (lo + hi); }
};

// Bisection on a sign change of f over [lo, hi]; requires f(lo) > 0 >= f(hi)
// up to the stated orientation (pass negate=true for the increasing case).
// Works for monotone functions that jump across zero: the bracket then
// converges to the jump point. Stops when hi - lo <= tol or after max_iter.
BracketResult bisect_decreasing(const std::function<double(double)>& f,
                                double lo, double hi, double tol,
                                int max_iter = 200);

// Boundary of {x in [lo, hi] : pred(x)} for a predicate that is true on an
// initial segment [lo, b) or [lo, b] and false afterwards.
BracketResult bisect_predicate(const std::function<bool(double)>& pred,
                               double lo, double hi, double tol,
                               int max_iter = 200);

struct ScalarOptimum {
    double arg = 0.0;
    double value = 0.0;
};

// Maximum of a quasi-concave f on [lo, hi] by golden-section plus an
// endpoint check (the optimum may sit on the boundary).
ScalarOptimum golden_section_max(const std::function<double(double)>& f,
                                 double lo, double hi, double tol,
                                 int max_iter = 200);

// Minimum of a quasi-convex f on [lo, hi].
ScalarOptimum golden_section_min(const std::function<double(double)>& f,
                                 double lo, double hi, double tol,
                                 int max_iter = 200);

} // namespace junctionhj
