#include "junctionhj/large_deviations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "junctionhj/errors.hpp"
#include "junctionhj/numerics.hpp"

namespace junctionhj {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_side(const QuadraticSideData& side) {
    if (!(side.a > 0.0) || !std::isfinite(side.a) || !std::isfinite(side.b))
        throw std::invalid_argument("side data needs finite b and positive a");
}

struct InnerSplit {
    double cost = kInf;
    double q1 = 0.0;
    double q2 = 0.0;
};

// Minimize l L1(q1) + (1-l) L2(q2) over q1 >= 0 >= q2 with l q1 + (1-l) q2 = q
// for a fixed time fraction l. The stationary point of the equality-constrained
// problem is q_i = b_i + nu a_i; if a sign constraint binds, the other velocity
// is pinned by the balance equation.
InnerSplit inner_split(const QuadraticSideData& s1, const QuadraticSideData& s2, double q, double l) {
    InnerSplit best;
    if (l <= 0.0) {
        if (q <= 0.0) best = {lagrangian_side(s2, q), 0.0, q};
        return best;
    }
    if (l >= 1.0) {
        if (q >= 0.0) best = {lagrangian_side(s1, q), q, 0.0};
        return best;
    }
    const double m = 1.0 - l;

    const double nu = (q - l * s1.b - m * s2.b) / (l * s1.a + m * s2.a);
    const double q1_free = s1.b + nu * s1.a;
    const double q2_free = s2.b + nu * s2.a;
    if (q1_free >= 0.0 && q2_free <= 0.0)
        best = {l * lagrangian_side(s1, q1_free) + m * lagrangian_side(s2, q2_free), q1_free, q2_free};

    if (q <= 0.0) { // q1 pinned at zero
        const double q2 = q / m;
        const double cost = l * lagrangian_side(s1, 0.0) + m * lagrangian_side(s2, q2);
        if (cost < best.cost) best = {cost, 0.0, q2};
    }
    if (q >= 0.0) { // q2 pinned at zero
        const double q1 = q / l;
        const double cost = l * lagrangian_side(s1, q1) + m * lagrangian_side(s2, 0.0);
        if (cost < best.cost) best = {cost, q1, 0.0};
    }
    return best;
}

enum class Region { Side1, Interface, Side2 };

Region classify(double y, double band) {
    if (y < -band) return Region::Side1;
    if (y > band) return Region::Side2;
    return Region::Interface;
}

double linear_interp(const std::vector<double>& w, double x_lo, double dx, double x) {
    const int n = static_cast<int>(w.size());
    double s = (x - x_lo) / dx;
    if (s <= 0.0) return w.front();
    if (s >= n - 1) return w.back();
    const int i = static_cast<int>(std::floor(s));
    const double f = s - i;
    return w[i] * (1.0 - f) + w[i + 1] * f;
}

struct DpRun {
    double value = 0.0;
    double velocity_bound = 0.0;
};

DpRun dp_backward(const QuadraticSideData& s1, const QuadraticSideData& s2,
                  const std::function<double(double)>& terminal, double horizon, double x0,
                  double x_lo, double x_hi, int nx, int nt, int n_vel) {
    const double dx = (x_hi - x_lo) / (nx - 1);
    const double band = 0.5 * dx;
    const double dt = horizon / nt;

    const double l_ref = std::max({lagrangian_side(s1, 0.0), lagrangian_side(s2, 0.0), 1.0});
    const double a_max = std::max(s1.a, s2.a);
    const double b_max = std::max(std::abs(s1.b), std::abs(s2.b));
    const double v_bound = 2.0 * (b_max + std::sqrt(2.0 * a_max * l_ref));

    std::vector<double> vs(n_vel);
    std::vector<double> cost_side1(n_vel), cost_side2(n_vel), cost_interface(n_vel);
    for (int m = 0; m < n_vel; ++m) {
        vs[m] = -v_bound + 2.0 * v_bound * m / (n_vel - 1);
        cost_side1[m] = lagrangian_side(s1, vs[m]);
        cost_side2[m] = lagrangian_side(s2, vs[m]);
        cost_interface[m] = interface_lagrangian(s1, s2, vs[m]).value;
    }

    std::vector<double> w(nx), w_next(nx);
    for (int j = 0; j < nx; ++j) w[j] = terminal(x_lo + j * dx);

    for (int k = 0; k < nt; ++k) {
        for (int j = 0; j < nx; ++j) {
            const double x = x_lo + j * dx;
            double best = kInf;
            for (int m = 0; m < n_vel; ++m) {
                const double mid = x + 0.5 * vs[m] * dt;
                double running;
                switch (classify(mid, band)) {
                    case Region::Side1: running = cost_side1[m]; break;
                    case Region::Side2: running = cost_side2[m]; break;
                    default: running = cost_interface[m]; break;
                }
                const double cand = dt * running + linear_interp(w, x_lo, dx, x + vs[m] * dt);
                best = std::min(best, cand);
            }
            w_next[j] = best;
        }
        std::swap(w, w_next);
    }
    return {linear_interp(w, x_lo, dx, x0), v_bound};
}

} // namespace

Hamiltonian1D side_hamiltonian(const QuadraticSideData& side) {
    require_side(side);
    return Hamiltonian1D::quadratic(0.5 * side.a, side.b / side.a, -0.5 * side.b * side.b / side.a);
}

double lagrangian_side(const QuadraticSideData& side, double q) {
    const double d = q - side.b;
    return d * d / (2.0 * side.a);
}

InterfaceValue interface_lagrangian(const QuadraticSideData& side1, const QuadraticSideData& side2,
                                    double q) {
    require_side(side1);
    require_side(side2);
    if (!std::isfinite(q)) throw std::invalid_argument("interface velocity must be finite");

    const auto cost = [&](double l) { return inner_split(side1, side2, q, l).cost; };
    const ScalarOptimum opt = golden_section_min(cost, 0.0, 1.0, 1e-12);

    const InnerSplit split = inner_split(side1, side2, q, opt.arg);
    InterfaceValue out;
    out.value = split.cost;
    out.lambda = opt.arg;
    out.q1 = split.q1;
    out.q2 = split.q2;
    return out;
}

double interface_lagrangian_scan(const QuadraticSideData& side1, const QuadraticSideData& side2,
                                 double q, int lambda_points, int velocity_points,
                                 double velocity_span) {
    require_side(side1);
    require_side(side2);
    double best = kInf;
    for (int i = 0; i < lambda_points; ++i) {
        const double l = static_cast<double>(i) / (lambda_points - 1);
        const double m = 1.0 - l;
        if (l == 0.0) {
            if (q <= 0.0) best = std::min(best, lagrangian_side(side2, q));
            continue;
        }
        if (m == 0.0) {
            if (q >= 0.0) best = std::min(best, lagrangian_side(side1, q));
            continue;
        }
        for (int j = 0; j < velocity_points; ++j) {
            const double q1 = velocity_span * j / (velocity_points - 1); // q1 in [0, span]
            const double q2 = (q - l * q1) / m;
            if (q2 > 0.0 || q2 < -velocity_span) continue;
            best = std::min(best, l * lagrangian_side(side1, q1) + m * lagrangian_side(side2, q2));
        }
    }
    return best;
}

double rate_function(const QuadraticSideData& side1, const QuadraticSideData& side2,
                     const PathSample& path, double band_halfwidth) {
    require_side(side1);
    require_side(side2);
    if (path.times.size() != path.positions.size())
        throw std::invalid_argument("times and positions must have equal length");
    if (path.times.size() < 2) throw std::invalid_argument("a path needs at least two samples");
    if (!(band_halfwidth >= 0.0)) throw std::invalid_argument("band halfwidth must be nonnegative");

    const double dt0 = path.times[1] - path.times[0];
    if (!(dt0 > 0.0)) throw std::invalid_argument("times must be strictly increasing");
    for (std::size_t j = 1; j + 1 < path.times.size(); ++j) {
        const double dt = path.times[j + 1] - path.times[j];
        if (std::abs(dt - dt0) > 1e-9 * (1.0 + dt0))
            throw std::invalid_argument("path samples must be uniformly spaced in time");
    }

    double action = 0.0;
    for (std::size_t j = 0; j + 1 < path.positions.size(); ++j) {
        const double dt = path.times[j + 1] - path.times[j];
        const double v = (path.positions[j + 1] - path.positions[j]) / dt;
        const double mid = 0.5 * (path.positions[j] + path.positions[j + 1]);
        switch (classify(mid, band_halfwidth)) {
            case Region::Side1: action += dt * lagrangian_side(side1, v); break;
            case Region::Side2: action += dt * lagrangian_side(side2, v); break;
            default: action += dt * interface_lagrangian(side1, side2, v).value; break;
        }
    }
    return action;
}

VariationalResult variational_value(const QuadraticSideData& side1, const QuadraticSideData& side2,
                                    const std::function<double(double)>& terminal_cost,
                                    double horizon, double x0, const DpGridSpec& spec) {
    require_side(side1);
    require_side(side2);
    if (!terminal_cost) throw std::invalid_argument("terminal cost is required");
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
    if (!(spec.x_lo < spec.x_hi)) throw std::invalid_argument("x_lo must be below x_hi");
    if (!(x0 >= spec.x_lo && x0 <= spec.x_hi)) throw std::invalid_argument("x0 must lie inside the grid");
    if (spec.nx < 3 || spec.nt < 1 || spec.velocities < 3)
        throw std::invalid_argument("grid spec too small");

    const DpRun coarse = dp_backward(side1, side2, terminal_cost, horizon, x0, spec.x_lo, spec.x_hi,
                                     spec.nx, spec.nt, spec.velocities);
    const int nx_fine = 2 * (spec.nx - 1) + 1;
    const DpRun fine = dp_backward(side1, side2, terminal_cost, horizon, x0, spec.x_lo, spec.x_hi,
                                   nx_fine, spec.nt, spec.velocities);

    VariationalResult out;
    out.value = coarse.value;
    out.refined_value = fine.value;
    out.grid_too_coarse = std::abs(coarse.value - fine.value) > spec.refine_tol;
    out.velocity_bound = coarse.velocity_bound;
    return out;
}

HopfColeReport hopf_cole_pipeline(const QuadraticSideData& side1, const QuadraticSideData& side2,
                                  const std::function<double(double)>& terminal_cost, double epsilon,
                                  double horizon, const HopfColeSpec& spec, const DpGridSpec& dp_spec) {
    require_side(side1);
    require_side(side2);
    if (!terminal_cost) throw std::invalid_argument("terminal cost is required");
    if (!(epsilon > 0.0)) throw NonpositiveViscosity("epsilon must be positive");
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
    if (std::abs(side1.a - side2.a) > 1e-12 * std::max(side1.a, side2.a))
        throw std::invalid_argument(
            "the junction comparison needs equal diffusion coefficients on both sides");
    if (spec.half_nodes < 3) throw std::invalid_argument("need at least three nodes per half-line");
    if (!(spec.y_half > 0.0)) throw std::invalid_argument("y_half must be positive");

    const int m_nodes = spec.half_nodes;
    const int n = 2 * m_nodes - 1;
    const int j0 = m_nodes - 1; // index of the interface node y = 0
    const double dy = spec.y_half / (m_nodes - 1);

    std::vector<double> v0(n);
    for (int j = 0; j < n; ++j) v0[j] = terminal_cost((j - j0) * dy);

    // --- sample-path side: linear equation for u = exp(-v/eps) -------------
    std::vector<double> u(n);
    for (int j = 0; j < n; ++j) u[j] = std::exp(-v0[j] / epsilon);

    const double diff1 = 0.5 * epsilon * side1.a;
    const double diff2 = 0.5 * epsilon * side2.a;
    const double b_max = std::max(std::abs(side1.b), std::abs(side2.b));
    const double diff_max = std::max(diff1, diff2);
    const double diff_min = std::min(diff1, diff2);
    // Centered transport keeps the scheme free of numerical diffusion, which
    // would otherwise inflate the quadratic coefficient seen through the
    // Hopf-Cole transform (upwinding adds b dy / 2 to the diffusivity, a
    // visible bias at small epsilon). Positivity of u needs the cell Peclet
    // number below one.
    if (b_max * dy > 2.0 * diff_min)
        throw std::invalid_argument("half_nodes too coarse for this drift/epsilon: "
                                    "centered transport needs |b| dy <= epsilon a");
    const double dt_full = spec.cfl / (b_max / dy + 2.0 * diff_max / (dy * dy));

    std::vector<double> u_next(u);
    double t = 0.0;
    while (t < horizon - 1e-14 * (1.0 + horizon)) {
        const double dt = std::min(dt_full, horizon - t);
        for (int j = 1; j < n - 1; ++j) {
            if (j == j0) continue;
            const double b = j < j0 ? side1.b : side2.b;
            const double diff = j < j0 ? diff1 : diff2;
            const double uy = (u[j + 1] - u[j - 1]) / (2.0 * dy);
            const double uyy = (u[j + 1] - 2.0 * u[j] + u[j - 1]) / (dy * dy);
            u_next[j] = u[j] + dt * (b * uy + diff * uyy);
        }
        u_next[0] = u[0];
        u_next[n - 1] = u[n - 1];
        u_next[j0] = 0.5 * (u_next[j0 - 1] + u_next[j0 + 1]);
        std::swap(u, u_next);
        t += dt;
    }

    HopfColeReport report;
    report.epsilon = epsilon;
    report.horizon = horizon;
    report.v_eps.dx = dy;
    report.v_eps.half_nodes = m_nodes;
    report.v_eps.values.resize(n);
    for (int j = 0; j < n; ++j)
        report.v_eps.values[j] = -epsilon * std::log(std::max(u[j], 1e-300));
    report.v_eps_origin = report.v_eps.values[j0];

    // --- junction side: viscous Kirchhoff solve of the folded HJ problem ---
    LineProblem line{dy, m_nodes, v0};
    FoldedProblem folded = fold_line_problem(line, side_hamiltonian(side1), side_hamiltonian(side2));
    const double beta[] = {1.0, 1.0};
    // The far closures differ on purpose: the linear march freezes its
    // endpoints while the junction solve extrapolates the last slope. Both
    // are wrong about the truncated tail, and the trim window is there to
    // keep that region out of the comparison.
    const GridSolution viscous =
        solve_viscous_kirchhoff(folded.hamiltonians, beta, diff1, folded.u0, horizon);
    report.v_hj = unfold_to_line(viscous.final_field());
    report.v_hj_origin = report.v_hj.values[j0];

    const int k_max = static_cast<int>(std::floor((1.0 - spec.trim) * (m_nodes - 1) + 1e-9));
    double sup = 0.0;
    for (int j = j0 - k_max; j <= j0 + k_max; ++j)
        sup = std::max(sup, std::abs(report.v_eps.values[j] - report.v_hj.values[j]));
    report.sup_diff = sup;

    // --- deterministic yardstick -------------------------------------------
    const VariationalResult dp = variational_value(side1, side2, terminal_cost, horizon, 0.0, dp_spec);
    report.v_dp = dp.value;
    report.grid_too_coarse = dp.grid_too_coarse;
    report.origin_gap_dp = std::abs(report.v_eps_origin - report.v_dp);
    return report;
}

} // namespace junctionhj
