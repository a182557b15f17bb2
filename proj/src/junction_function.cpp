#include "junctionhj/junction_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "junctionhj/errors.hpp"
#include "junctionhj/random.hpp"

namespace junctionhj {

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be finite");
}

std::string point_string(double p0, std::span<const double> p) {
    std::string s = "(p0=" + std::to_string(p0);
    for (double v : p) s += ", " + std::to_string(v);
    s += ")";
    return s;
}

} // namespace

double TabulatedGrid::interpolate(std::span<const double> coords, bool* clamped) const {
    const std::size_t dims = axes.size();
    if (coords.size() != dims)
        throw ArityMismatch("tabulated grid expects " + std::to_string(dims) + " coordinates");

    std::vector<std::size_t> cell(dims);
    std::vector<double> frac(dims);
    for (std::size_t d = 0; d < dims; ++d) {
        const auto& ax = axes[d];
        double x = coords[d];
        if (x < ax.front()) {
            x = ax.front();
            if (clamped) *clamped = true;
        } else if (x > ax.back()) {
            x = ax.back();
            if (clamped) *clamped = true;
        }
        auto it = std::upper_bound(ax.begin(), ax.end(), x);
        std::size_t j = (it == ax.begin()) ? 0 : static_cast<std::size_t>(it - ax.begin()) - 1;
        j = std::min(j, ax.size() - 2);
        cell[d] = j;
        frac[d] = (x - ax[j]) / (ax[j + 1] - ax[j]);
    }

    std::vector<std::size_t> stride(dims);
    stride[dims - 1] = 1;
    for (std::size_t d = dims - 1; d > 0; --d) stride[d - 1] = stride[d] * axes[d].size();

    double acc = 0.0;
    const std::size_t corners = std::size_t{1} << dims;
    for (std::size_t mask = 0; mask < corners; ++mask) {
        double w = 1.0;
        std::size_t idx = 0;
        for (std::size_t d = 0; d < dims; ++d) {
            const bool hi = (mask >> d) & 1u;
            w *= hi ? frac[d] : 1.0 - frac[d];
            idx += (cell[d] + (hi ? 1 : 0)) * stride[d];
        }
        acc += w * values[idx];
    }
    return acc;
}

JunctionFunction JunctionFunction::kirchhoff(std::vector<double> beta) {
    if (beta.empty()) throw std::invalid_argument("kirchhoff needs at least one branch weight");
    for (double b : beta) require_finite(b, "kirchhoff beta");
    JunctionFunction L;
    L.family_ = JunctionFamily::Kirchhoff;
    L.weights_ = std::move(beta);
    return L;
}

JunctionFunction JunctionFunction::neumann(std::vector<double> target_flux) {
    if (target_flux.empty()) throw std::invalid_argument("neumann needs at least one branch target");
    for (double g : target_flux) require_finite(g, "neumann target");
    JunctionFunction L;
    L.family_ = JunctionFamily::Neumann;
    L.weights_ = std::move(target_flux);
    return L;
}

JunctionFunction JunctionFunction::flux_limited(double level, std::vector<Hamiltonian1D> branches) {
    require_finite(level, "flux limiter level");
    if (branches.empty()) throw std::invalid_argument("flux_limited needs branch Hamiltonians");
    JunctionFunction L;
    L.family_ = JunctionFamily::FluxLimited;
    L.level_ = level;
    L.branches_ = std::move(branches);
    return L;
}

JunctionFunction JunctionFunction::affine(std::vector<double> gamma, double offset) {
    if (gamma.size() < 2) throw std::invalid_argument("affine needs gamma_0 plus branch coefficients");
    for (double g : gamma) require_finite(g, "affine gamma");
    require_finite(offset, "affine offset");
    JunctionFunction L;
    L.family_ = JunctionFamily::Affine;
    L.weights_ = std::move(gamma);
    L.offset_ = offset;
    return L;
}

JunctionFunction JunctionFunction::tabulated(TabulatedGrid grid) {
    if (grid.axes.size() < 2) throw std::invalid_argument("tabulated grid needs a p0 axis and branch axes");
    std::size_t expected = 1;
    for (const auto& ax : grid.axes) {
        if (ax.size() < 2) throw std::invalid_argument("tabulated axis needs at least two coordinates");
        for (std::size_t j = 0; j + 1 < ax.size(); ++j)
            if (!(ax[j] < ax[j + 1]))
                throw std::invalid_argument("tabulated axis must be strictly increasing");
        expected *= ax.size();
    }
    if (grid.values.size() != expected)
        throw std::invalid_argument("tabulated values size does not match axes");
    for (double v : grid.values) require_finite(v, "tabulated value");
    JunctionFunction L;
    L.family_ = JunctionFamily::Tabulated;
    L.grid_ = std::move(grid);
    return L;
}

int JunctionFunction::arity() const {
    switch (family_) {
    case JunctionFamily::Kirchhoff:
    case JunctionFamily::Neumann:
        return static_cast<int>(weights_.size());
    case JunctionFamily::FluxLimited:
        return static_cast<int>(branches_.size());
    case JunctionFamily::Affine:
        return static_cast<int>(weights_.size()) - 1;
    case JunctionFamily::Tabulated:
        return static_cast<int>(grid_.axes.size()) - 1;
    }
    return 0; // unreachable
}

double JunctionFunction::evaluate(double p0, std::span<const double> p,
                                  const ParamPoint& params, bool* clamped) const {
    (void)params; // builtin families are frozen in the tangential variables
    if (static_cast<int>(p.size()) != arity())
        throw ArityMismatch("junction function expects " + std::to_string(arity()) +
                            " branch slopes, got " + std::to_string(p.size()));
    switch (family_) {
    case JunctionFamily::Kirchhoff: {
        double s = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) s += weights_[i] * p[i];
        return -s;
    }
    case JunctionFamily::Neumann: {
        double s = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) s += weights_[i] - p[i];
        return s;
    }
    case JunctionFamily::FluxLimited: {
        double flux = level_;
        for (std::size_t i = 0; i < p.size(); ++i)
            flux = std::max(flux, branches_[i].monotone_part(BranchSign::Decreasing, p[i]));
        return -p0 + flux;
    }
    case JunctionFamily::Affine: {
        double s = offset_ + weights_[0] * p0;
        for (std::size_t i = 0; i < p.size(); ++i) s += weights_[i + 1] * p[i];
        return s;
    }
    case JunctionFamily::Tabulated: {
        std::vector<double> coords(p.size() + 1);
        coords[0] = p0;
        std::copy(p.begin(), p.end(), coords.begin() + 1);
        return grid_.interpolate(coords, clamped);
    }
    }
    return 0.0; // unreachable
}

ValidationReport JunctionFunction::validate_assumptions(int samples, std::uint64_t seed) const {
    ValidationReport rep;
    const int N = arity();
    Rng rng(seed);

    // sampling box: generic slopes, or the table hull shrunk by 10%
    std::vector<double> lo(static_cast<std::size_t>(N) + 1, -8.0);
    std::vector<double> hi(static_cast<std::size_t>(N) + 1, 8.0);
    if (family_ == JunctionFamily::Tabulated) {
        for (std::size_t d = 0; d < grid_.axes.size(); ++d) {
            const double a = grid_.axes[d].front();
            const double b = grid_.axes[d].back();
            lo[d] = a + 0.05 * (b - a);
            hi[d] = b - 0.05 * (b - a);
        }
    }

    auto draw = [&]() {
        std::vector<double> q(static_cast<std::size_t>(N) + 1);
        for (std::size_t d = 0; d < q.size(); ++d) q[d] = rng.uniform(lo[d], hi[d]);
        return q;
    };
    auto eval = [&](const std::vector<double>& q) {
        return evaluate(q[0], std::span<const double>(q.data() + 1, static_cast<std::size_t>(N)));
    };

    if (family_ == JunctionFamily::FluxLimited) {
        for (std::size_t i = 0; i < branches_.size(); ++i) {
            ValidationReport hrep = branches_[i].validate();
            rep.checks.push_back({"branch " + std::to_string(i + 1) + " Hamiltonian",
                                  hrep.all_passed(),
                                  hrep.all_passed() ? "" : hrep.summary()});
        }
    }

    // (L1) continuity under small perturbations
    {
        bool ok = true;
        std::string detail = "sampled perturbations of size 1e-9";
        for (int k = 0; k < samples && ok; ++k) {
            auto q = draw();
            const double v0 = eval(q);
            auto q2 = q;
            for (auto& x : q2) x += rng.uniform(-1e-9, 1e-9);
            const double v1 = eval(q2);
            if (std::abs(v1 - v0) > 1e-4 * (1.0 + std::abs(v0))) {
                ok = false;
                detail = "jump of " + std::to_string(v1 - v0) + " at " +
                         point_string(q[0], std::span<const double>(q.data() + 1, static_cast<std::size_t>(N)));
            }
        }
        rep.checks.push_back({"(L1) continuity", ok, detail});
    }

    // (L2) nonincreasing in each coordinate
    {
        bool ok = true;
        std::string detail = "single-coordinate bumps";
        for (int k = 0; k < samples && ok; ++k) {
            auto q = draw();
            const double v0 = eval(q);
            const int i = rng.uniform_int(0, N);
            auto q2 = q;
            q2[static_cast<std::size_t>(i)] += rng.uniform(1e-6, 1.0);
            const double v1 = eval(q2);
            if (v1 > v0 + 1e-12 * (1.0 + std::abs(v0))) {
                ok = false;
                detail = "L increased by " + std::to_string(v1 - v0) + " bumping coordinate " +
                         std::to_string(i) + " at " +
                         point_string(q[0], std::span<const double>(q.data() + 1, static_cast<std::size_t>(N)));
            }
        }
        rep.checks.push_back({"(L2) monotone", ok, detail});
    }

    // (L3) strictly decreasing when every coordinate moves up together
    {
        bool ok = true;
        std::string detail = "uniform bump 1e-3, decrease by at least 1e-15";
        for (int k = 0; k < samples && ok; ++k) {
            auto q = draw();
            const double v0 = eval(q);
            auto q2 = q;
            for (auto& x : q2) x += 1e-3;
            const double v1 = eval(q2);
            if (!(v1 <= v0 - 1e-15)) {
                ok = false;
                detail = "no strict decrease at " +
                         point_string(q[0], std::span<const double>(q.data() + 1, static_cast<std::size_t>(N)));
            }
        }
        rep.checks.push_back({"(L3) strict simultaneous decrease", ok, detail});
    }

    // (L4)/(L5) divergence probes at +-1e6
    {
        std::vector<double> q(static_cast<std::size_t>(N) + 1);
        q[0] = 0.0;
        for (int i = 1; i <= N; ++i) q[static_cast<std::size_t>(i)] = -1e6;
        const double v = eval(q);
        const bool ok = v >= 1e3;
        rep.checks.push_back({"(L4) divergence as branch slopes -> -inf", ok,
                              "L(0, -1e6, ...) = " + std::to_string(v) +
                                  (family_ == JunctionFamily::Tabulated && !ok
                                       ? " (bounded table, clamped at hull)"
                                       : "")});
    }
    {
        std::vector<double> q(static_cast<std::size_t>(N) + 1, 1e6);
        const double v = eval(q);
        const bool ok = v <= -1e3;
        rep.checks.push_back({"(L5) divergence as slopes -> +inf", ok,
                              "L(1e6, ..., 1e6) = " + std::to_string(v) +
                                  (family_ == JunctionFamily::Tabulated && !ok
                                       ? " (bounded table, clamped at hull)"
                                       : "")});
    }

    return rep;
}

} // namespace junctionhj
