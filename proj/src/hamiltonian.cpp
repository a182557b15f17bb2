#include "junctionhj/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "junctionhj/errors.hpp"

namespace junctionhj {

namespace {

// Plateau / level comparisons use a relative tolerance so that tables with
// large values behave the same as rescaled ones.
double level_tol(double x) { return 1e-12 * (1.0 + std::abs(x)); }

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be finite");
}

} // namespace

Hamiltonian1D Hamiltonian1D::quadratic(double a, double c, double m) {
    require_finite(a, "quadratic a");
    require_finite(c, "quadratic c");
    require_finite(m, "quadratic m");
    if (a <= 0.0) throw std::invalid_argument("quadratic curvature a must be > 0");
    Hamiltonian1D h;
    h.family_ = HamiltonianFamily::Quadratic;
    h.a_ = a;
    h.c_ = c;
    h.m_ = m;
    return h;
}

Hamiltonian1D Hamiltonian1D::absolute_value(double a, double c, double m) {
    require_finite(a, "absolute_value a");
    require_finite(c, "absolute_value c");
    require_finite(m, "absolute_value m");
    if (a <= 0.0) throw std::invalid_argument("absolute_value slope a must be > 0");
    Hamiltonian1D h;
    h.family_ = HamiltonianFamily::AbsoluteValue;
    h.a_ = a;
    h.c_ = c;
    h.m_ = m;
    return h;
}

Hamiltonian1D Hamiltonian1D::trapezoid(double half_width, double wing_slope, double m) {
    require_finite(half_width, "trapezoid w");
    require_finite(wing_slope, "trapezoid s");
    require_finite(m, "trapezoid m");
    if (half_width < 0.0) throw std::invalid_argument("trapezoid half width must be >= 0");
    if (wing_slope <= 0.0) throw std::invalid_argument("trapezoid wing slope must be > 0");
    Hamiltonian1D h;
    h.family_ = HamiltonianFamily::Trapezoid;
    h.w_ = half_width;
    h.s_ = wing_slope;
    h.m_ = m;
    return h;
}

Hamiltonian1D Hamiltonian1D::piecewise_linear(std::vector<Breakpoint> table,
                                              double left_wing_slope,
                                              double right_wing_slope) {
    if (table.empty()) throw std::invalid_argument("piecewise_linear needs at least one breakpoint");
    require_finite(left_wing_slope, "left wing slope");
    require_finite(right_wing_slope, "right wing slope");
    for (std::size_t j = 0; j < table.size(); ++j) {
        require_finite(table[j].p, "breakpoint p");
        require_finite(table[j].h, "breakpoint h");
        if (j > 0 && !(table[j].p > table[j - 1].p))
            throw std::invalid_argument("breakpoints must be strictly increasing in p");
    }
    Hamiltonian1D h;
    h.family_ = HamiltonianFamily::PiecewiseLinear;
    h.table_ = std::move(table);
    h.left_wing_ = left_wing_slope;
    h.right_wing_ = right_wing_slope;
    h.domain_lo_ = h.table_.front().p;
    h.domain_hi_ = h.table_.back().p;
    return h;
}

double Hamiltonian1D::evaluate(double p) const {
    switch (family_) {
    case HamiltonianFamily::Quadratic: {
        const double d = p - c_;
        return a_ * d * d + m_;
    }
    case HamiltonianFamily::AbsoluteValue:
        return a_ * std::abs(p - c_) + m_;
    case HamiltonianFamily::Trapezoid:
        return m_ + s_ * std::max(0.0, std::abs(p) - w_);
    case HamiltonianFamily::PiecewiseLinear: {
        if (p <= table_.front().p)
            return table_.front().h + left_wing_ * (table_.front().p - p);
        if (p >= table_.back().p)
            return table_.back().h + right_wing_ * (p - table_.back().p);
        auto it = std::upper_bound(table_.begin(), table_.end(), p,
                                   [](double v, const Breakpoint& b) { return v < b.p; });
        const Breakpoint& hi = *it;
        const Breakpoint& lo = *(it - 1);
        const double t = (p - lo.p) / (hi.p - lo.p);
        return lo.h + t * (hi.h - lo.h);
    }
    }
    return 0.0; // unreachable
}

int Hamiltonian1D::min_index() const {
    double vmin = table_.front().h;
    for (const auto& b : table_) vmin = std::min(vmin, b.h);
    const double tol = level_tol(vmin);
    for (std::size_t j = 0; j < table_.size(); ++j)
        if (table_[j].h <= vmin + tol) return static_cast<int>(j);
    return 0; // unreachable
}

double Hamiltonian1D::min_value() const {
    if (family_ != HamiltonianFamily::PiecewiseLinear) return m_;
    double vmin = table_.front().h;
    for (const auto& b : table_) vmin = std::min(vmin, b.h);
    return vmin;
}

double Hamiltonian1D::minimal_minimizer() const {
    switch (family_) {
    case HamiltonianFamily::Quadratic:
    case HamiltonianFamily::AbsoluteValue:
        return c_;
    case HamiltonianFamily::Trapezoid:
        return -w_;
    case HamiltonianFamily::PiecewiseLinear:
        return table_[static_cast<std::size_t>(min_index())].p;
    }
    return 0.0; // unreachable
}

double Hamiltonian1D::monotone_part(BranchSign sign, double p) const {
    const double pi0 = minimal_minimizer();
    if (sign == BranchSign::Decreasing)
        return p <= pi0 ? evaluate(p) : min_value();
    return p >= pi0 ? evaluate(p) : min_value();
}

double Hamiltonian1D::pi_plus(double level) const {
    const double vmin = min_value();
    if (level < vmin - 1e-12)
        throw LevelBelowMinimum("pi_plus: level " + std::to_string(level) +
                                " below min H = " + std::to_string(vmin));
    level = std::max(level, vmin);
    switch (family_) {
    case HamiltonianFamily::Quadratic:
        return c_ + std::sqrt(std::max(0.0, (level - m_) / a_));
    case HamiltonianFamily::AbsoluteValue:
        return c_ + std::max(0.0, level - m_) / a_;
    case HamiltonianFamily::Trapezoid:
        if (level - m_ <= level_tol(level)) return -w_;
        return w_ + (level - m_) / s_;
    case HamiltonianFamily::PiecewiseLinear: {
        const double tau = level_tol(level);
        const int k0 = min_index();
        const int n = static_cast<int>(table_.size()) - 1;
        for (int j = k0; j <= n; ++j) {
            if (table_[static_cast<std::size_t>(j)].h >= level - tau) {
                if (j == k0) return table_[static_cast<std::size_t>(k0)].p;
                const Breakpoint& lo = table_[static_cast<std::size_t>(j - 1)];
                const Breakpoint& hi = table_[static_cast<std::size_t>(j)];
                const double t = (level - lo.h) / (hi.h - lo.h);
                return lo.p + t * (hi.p - lo.p);
            }
        }
        const Breakpoint& last = table_.back();
        return last.p + (level - last.h) / right_wing_;
    }
    }
    return 0.0; // unreachable
}

double Hamiltonian1D::pi_plus_hat(double level) const {
    const double vmin = min_value();
    if (level < vmin - 1e-12)
        throw LevelBelowMinimum("pi_plus_hat: level " + std::to_string(level) +
                                " below min H = " + std::to_string(vmin));
    level = std::max(level, vmin);
    switch (family_) {
    case HamiltonianFamily::Quadratic:
    case HamiltonianFamily::AbsoluteValue:
        return pi_plus(level); // no plateaus
    case HamiltonianFamily::Trapezoid:
        if (level - m_ <= level_tol(level)) return w_;
        return w_ + (level - m_) / s_;
    case HamiltonianFamily::PiecewiseLinear: {
        const double tau = level_tol(level);
        const int k0 = min_index();
        const int n = static_cast<int>(table_.size()) - 1;
        if (level > table_.back().h + tau) {
            const Breakpoint& last = table_.back();
            return last.p + (level - last.h) / right_wing_;
        }
        int j = k0;
        for (int k = k0; k <= n; ++k)
            if (table_[static_cast<std::size_t>(k)].h <= level + tau) j = k;
        const Breakpoint& at = table_[static_cast<std::size_t>(j)];
        if (std::abs(at.h - level) <= tau) return at.p;
        // level falls strictly inside segment (j, j+1)
        const Breakpoint& hi = table_[static_cast<std::size_t>(j + 1)];
        const double t = (level - at.h) / (hi.h - at.h);
        return at.p + t * (hi.p - at.p);
    }
    }
    return 0.0; // unreachable
}

double Hamiltonian1D::lipschitz_bound(double p_lo, double p_hi) const {
    if (p_lo > p_hi) std::swap(p_lo, p_hi);
    switch (family_) {
    case HamiltonianFamily::Quadratic:
        return 2.0 * a_ * std::max(std::abs(p_lo - c_), std::abs(p_hi - c_));
    case HamiltonianFamily::AbsoluteValue:
        return a_;
    case HamiltonianFamily::Trapezoid:
        return s_;
    case HamiltonianFamily::PiecewiseLinear: {
        double lip = 0.0;
        if (p_lo < table_.front().p) lip = std::max(lip, std::abs(left_wing_));
        if (p_hi > table_.back().p) lip = std::max(lip, std::abs(right_wing_));
        for (std::size_t j = 0; j + 1 < table_.size(); ++j) {
            const Breakpoint& a = table_[j];
            const Breakpoint& b = table_[j + 1];
            if (b.p < p_lo || a.p > p_hi) continue;
            lip = std::max(lip, std::abs((b.h - a.h) / (b.p - a.p)));
        }
        return lip;
    }
    }
    return 0.0; // unreachable
}

Hamiltonian1D Hamiltonian1D::reflected() const {
    switch (family_) {
    case HamiltonianFamily::Quadratic:
        return quadratic(a_, -c_, m_);
    case HamiltonianFamily::AbsoluteValue:
        return absolute_value(a_, -c_, m_);
    case HamiltonianFamily::Trapezoid:
        return trapezoid(w_, s_, m_); // symmetric about 0
    case HamiltonianFamily::PiecewiseLinear: {
        std::vector<Breakpoint> rev(table_.size());
        for (std::size_t j = 0; j < table_.size(); ++j) {
            const Breakpoint& b = table_[table_.size() - 1 - j];
            rev[j] = {-b.p, b.h};
        }
        return piecewise_linear(std::move(rev), right_wing_, left_wing_);
    }
    }
    return *this; // unreachable
}

Hamiltonian1D Hamiltonian1D::with_min_offset(double dm) const {
    require_finite(dm, "min offset");
    Hamiltonian1D h = *this;
    if (family_ == HamiltonianFamily::PiecewiseLinear) {
        for (auto& b : h.table_) b.h += dm;
    } else {
        h.m_ += dm;
    }
    return h;
}

ValidationReport Hamiltonian1D::validate() const {
    ValidationReport rep;
    switch (family_) {
    case HamiltonianFamily::Quadratic:
        rep.checks.push_back({"coercive", a_ > 0.0, "curvature a = " + std::to_string(a_)});
        rep.checks.push_back({"quasi-convex", true, "convex parabola"});
        rep.checks.push_back({"continuous", true, "closed form"});
        break;
    case HamiltonianFamily::AbsoluteValue:
        rep.checks.push_back({"coercive", a_ > 0.0, "slope a = " + std::to_string(a_)});
        rep.checks.push_back({"quasi-convex", true, "convex kink"});
        rep.checks.push_back({"continuous", true, "closed form"});
        break;
    case HamiltonianFamily::Trapezoid:
        rep.checks.push_back({"coercive", s_ > 0.0, "wing slope s = " + std::to_string(s_)});
        rep.checks.push_back({"quasi-convex", w_ >= 0.0, "plateau half width w = " + std::to_string(w_)});
        rep.checks.push_back({"continuous", true, "closed form"});
        break;
    case HamiltonianFamily::PiecewiseLinear: {
        const bool coercive = left_wing_ > 0.0 && right_wing_ > 0.0;
        std::string cdetail = "wing slopes " + std::to_string(left_wing_) + ", " + std::to_string(right_wing_);
        rep.checks.push_back({"coercive", coercive, cdetail});

        bool qc = true;
        std::string qdetail = "non-increasing then non-decreasing";
        bool ascending = false;
        for (std::size_t j = 0; j + 1 < table_.size(); ++j) {
            const double h0 = table_[j].h;
            const double h1 = table_[j + 1].h;
            const double tol = level_tol(std::max(std::abs(h0), std::abs(h1)));
            if (h1 > h0 + tol) ascending = true;
            if (ascending && h1 < h0 - tol) {
                qc = false;
                qdetail = "value falls from " + std::to_string(h0) + " to " + std::to_string(h1) +
                          " at breakpoint index " + std::to_string(j + 1) +
                          " (p = " + std::to_string(table_[j + 1].p) + ") after an increase";
                break;
            }
        }
        rep.checks.push_back({"quasi-convex", qc, qdetail});
        rep.checks.push_back({"continuous", true, "linear interpolation, no jumps"});
        break;
    }
    }
    return rep;
}

} // namespace junctionhj
