#include "junctionhj/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace junctionhj {

BracketResult bisect_decreasing(const std::function<double(double)>& f,
                                double lo, double hi, double tol, int max_iter) {
    if (!(lo <= hi)) throw std::invalid_argument("bisect_decreasing: lo > hi");
    BracketResult r{lo, hi, 0};
    while (r.hi - r.lo > tol && r.iterations < max_iter) {
        const double mid = 0.5 * (r.lo + r.hi);
        if (f(mid) > 0.0)
            r.lo = mid;
        else
            r.hi = mid;
        ++r.iterations;
    }
    return r;
}

BracketResult bisect_predicate(const std::function<bool(double)>& pred,
                               double lo, double hi, double tol, int max_iter) {
    if (!(lo <= hi)) throw std::invalid_argument("bisect_predicate: lo > hi");
    BracketResult r{lo, hi, 0};
    while (r.hi - r.lo > tol && r.iterations < max_iter) {
        const double mid = 0.5 * (r.lo + r.hi);
        if (pred(mid))
            r.lo = mid;
        else
            r.hi = mid;
        ++r.iterations;
    }
    return r;
}

ScalarOptimum golden_section_max(const std::function<double(double)>& f,
                                 double lo, double hi, double tol, int max_iter) {
    if (!(lo <= hi)) throw std::invalid_argument("golden_section_max: lo > hi");
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    int it = 0;
    while (b - a > tol && it < max_iter) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
        ++it;
    }
    ScalarOptimum best{0.5 * (a + b), f(0.5 * (a + b))};
    // quasi-concavity does not rule out a boundary maximum
    const double flo = f(lo), fhi = f(hi);
    if (flo > best.value) best = {lo, flo};
    if (fhi > best.value) best = {hi, fhi};
    return best;
}

ScalarOptimum golden_section_min(const std::function<double(double)>& f,
                                 double lo, double hi, double tol, int max_iter) {
    auto neg = [&f](double x) { return -f(x); };
    ScalarOptimum r = golden_section_max(neg, lo, hi, tol, max_iter);
    return {r.arg, -r.value};
}

} // namespace junctionhj
