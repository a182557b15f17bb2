#include "junctionhj/junction_pde.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "junctionhj/effective_limiter.hpp"
#include "junctionhj/errors.hpp"

namespace junctionhj {

namespace {

void require_shape(std::span<const Hamiltonian1D> branch_h, const JunctionGrid& grid) {
    if (grid.branches < 1) throw std::invalid_argument("junction needs at least one branch");
    if (grid.nodes_per_branch < 2) throw std::invalid_argument("need at least two nodes per branch");
    if (!(grid.dx > 0.0)) throw std::invalid_argument("dx must be positive");
    if (static_cast<int>(branch_h.size()) != grid.branches)
        throw ArityMismatch("one Hamiltonian per branch required");
}

struct SlopeRange {
    double lo = 0.0;
    double hi = 0.0;
};

// The CFL budget has to cover slopes the dynamics can create, not just the
// ones present at t = 0: the vertex relaxes toward the level-A inverse slopes,
// and folded even/odd profiles swap slope signs across the vertex. Start from
// the symmetrized data hull, add the level slopes when a limiter is active,
// then inflate by half the width plus a floor.
SlopeRange inflate_budget(SlopeRange base) {
    const double margin =
        0.5 * (base.hi - base.lo) + 1e-6 * (1.0 + std::max(std::abs(base.lo), std::abs(base.hi)));
    return {base.lo - margin, base.hi + margin};
}

SlopeRange symmetric_hull(SlopeRange r) {
    const double s = std::max(std::abs(r.lo), std::abs(r.hi));
    return {-s, s};
}

SlopeRange slope_range(const JunctionField& u) {
    const auto& g = u.grid();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int i = 0; i < g.branches; ++i) {
        for (int k = 1; k < g.nodes_per_branch; ++k) {
            const double s = (u.at(i, k) - u.at(i, k - 1)) / g.dx;
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
    }
    return {lo, hi};
}

// Quasi-convexity puts the largest |H| over an interval at an endpoint or at
// the minimum, so three evaluations bound the flux magnitude.
double magnitude_bound(const Hamiltonian1D& h, double p_lo, double p_hi) {
    return std::max({std::abs(h.evaluate(p_lo)), std::abs(h.evaluate(p_hi)), std::abs(h.min_value())});
}

// A frozen far endpoint pins the last node while the interior drains, so a
// staircase layer forms against it: each layer cell settles near
// s_out = s_in + H(s_in) dx / eps and the run steepens and recruits inward
// over time. Those slopes leave any fixed budget, but they feed the scheme
// only through the decreasing envelope, which is flat past the minimizer, so
// the first node inside the layer still sees certified fluxes. Exempt the
// contiguous over-budget run at the frozen end from the upper check as long
// as every slope in it is saturated; downhill slopes sit on the steep side of
// the envelope and stay subject to the full budget everywhere (an actual CFL
// blowup oscillates and trips the lower bound).
void check_budget(const JunctionField& u, std::span<const Hamiltonian1D> branch_h,
                  FarBoundary far_bc, double lo, double hi, int step) {
    const auto& g = u.grid();
    const int last = g.nodes_per_branch - 1;
    SlopeRange r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (int i = 0; i < g.branches; ++i) {
        int guard_top = last; // slopes at k <= guard_top face the upper check
        if (far_bc == FarBoundary::Frozen) {
            const double pi0 = branch_h[i].minimal_minimizer();
            while (guard_top >= 1) {
                const double s = (u.at(i, guard_top) - u.at(i, guard_top - 1)) / g.dx;
                if (!(s > hi && s >= pi0)) break;
                --guard_top;
            }
        }
        for (int k = 1; k <= last; ++k) {
            const double s = (u.at(i, k) - u.at(i, k - 1)) / g.dx;
            r.lo = std::min(r.lo, s);
            if (k <= guard_top) r.hi = std::max(r.hi, s);
        }
    }
    if (!(r.lo >= lo && r.hi <= hi)) {
        std::ostringstream msg;
        msg << "slopes [" << r.lo << ", " << r.hi << "] left the CFL budget [" << lo << ", " << hi
            << "] at step " << step;
        throw CFLViolation(msg.str());
    }
}

void store_snapshot(GridSolution& sol, double t, const JunctionField& u) {
    sol.times.push_back(t);
    sol.values.push_back(u);
}

// Viscous update for one branch; the vertex is handled by the caller.
void viscous_branch_step(const Hamiltonian1D& h, const JunctionField& u, JunctionField& out,
                         int branch, double dt, double eps, FarBoundary far_bc) {
    const auto& g = u.grid();
    const double dx = g.dx;
    const int last = g.nodes_per_branch - 1;
    for (int k = 1; k <= last; ++k) {
        const double sm = (u.at(branch, k) - u.at(branch, k - 1)) / dx;
        double sp;
        double diff;
        if (k < last) {
            sp = (u.at(branch, k + 1) - u.at(branch, k)) / dx;
            diff = (u.at(branch, k + 1) - 2.0 * u.at(branch, k) + u.at(branch, k - 1)) / (dx * dx);
        } else if (far_bc == FarBoundary::SlopeExtrapolation) {
            sp = sm;     // ghost node continues the last slope
            diff = 0.0;  // which zeroes the second difference
        } else {
            out.at(branch, k) = u.at(branch, k);
            continue;
        }
        const double conv = std::max(h.monotone_part(BranchSign::Increasing, sm),
                                     h.monotone_part(BranchSign::Decreasing, sp));
        out.at(branch, k) = u.at(branch, k) - dt * conv + dt * eps * diff;
    }
}

} // namespace

JunctionField flux_limited_step(std::span<const Hamiltonian1D> branch_h, double limiter,
                                const JunctionField& u, double dt, FarBoundary far_bc) {
    const auto& g = u.grid();
    require_shape(branch_h, g);

    JunctionField out = u;
    const double dx = g.dx;
    const int last = g.nodes_per_branch - 1;

    double vertex_flux = limiter;
    for (int i = 0; i < g.branches; ++i) {
        const double s = (u.at(i, 1) - u.vertex()) / dx;
        vertex_flux = std::max(vertex_flux, branch_h[i].monotone_part(BranchSign::Decreasing, s));
    }
    out.vertex() = u.vertex() - dt * vertex_flux;

    for (int i = 0; i < g.branches; ++i) {
        for (int k = 1; k <= last; ++k) {
            const double sm = (u.at(i, k) - u.at(i, k - 1)) / dx;
            double sp;
            if (k < last) {
                sp = (u.at(i, k + 1) - u.at(i, k)) / dx;
            } else if (far_bc == FarBoundary::SlopeExtrapolation) {
                sp = sm;
            } else {
                out.at(i, k) = u.at(i, k);
                continue;
            }
            const double flux = std::max(branch_h[i].monotone_part(BranchSign::Increasing, sm),
                                         branch_h[i].monotone_part(BranchSign::Decreasing, sp));
            out.at(i, k) = u.at(i, k) - dt * flux;
        }
    }
    return out;
}

GridSolution solve_flux_limited(std::span<const Hamiltonian1D> branch_h, double limiter,
                                const JunctionField& u0, double horizon, FarBoundary far_bc,
                                const TimeStepOptions& opts) {
    const auto& g = u0.grid();
    require_shape(branch_h, g);
    if (!(horizon >= 0.0)) throw std::invalid_argument("horizon must be nonnegative");
    if (!(opts.cfl > 0.0 && opts.cfl <= 1.0)) throw std::invalid_argument("cfl must lie in (0, 1]");

    GridSolution sol;
    sol.grid = g;
    sol.meta.far_bc = far_bc;

    std::vector<Hamiltonian1D> hs(branch_h.begin(), branch_h.end());
    const double a0 = compute_A0(hs);
    sol.meta.limiter = limiter;
    if (limiter < a0) {
        sol.meta.limiter = a0;
        sol.meta.limiter_clamped = true;
    }
    const double A = sol.meta.limiter;

    SlopeRange base = symmetric_hull(slope_range(u0));
    for (const auto& h : branch_h) {
        base.hi = std::max(base.hi, h.pi_plus_hat(A));             // steepest up-slope at level A
        base.lo = std::min(base.lo, -h.reflected().pi_plus_hat(A)); // steepest down-slope
    }
    const auto [blo, bhi] = inflate_budget(base);
    sol.meta.slope_budget_lo = blo;
    sol.meta.slope_budget_hi = bhi;

    double max_lip = 0.0;
    double flux_mag = std::abs(A);
    for (const auto& h : branch_h) {
        max_lip = std::max(max_lip, h.lipschitz_bound(blo, bhi));
        flux_mag = std::max(flux_mag, magnitude_bound(h, blo, bhi));
    }
    sol.meta.max_lip = max_lip;

    const auto [u_min, u_max] = std::minmax_element(u0.data().begin(), u0.data().end());
    sol.meta.sup_bound_lo = *u_min - flux_mag * horizon;
    sol.meta.sup_bound_hi = *u_max + flux_mag * horizon;

    const double dt = max_lip > 0.0 ? opts.cfl * g.dx / max_lip : horizon;
    sol.meta.dt = dt;

    store_snapshot(sol, 0.0, u0);
    if (horizon == 0.0) return sol;

    JunctionField u = u0;
    double t = 0.0;
    int step = 0;
    while (t < horizon - 1e-14 * (1.0 + horizon)) {
        const double dts = std::min(dt, horizon - t);
        u = flux_limited_step(branch_h, A, u, dts, far_bc);
        t += dts;
        ++step;
        check_budget(u, branch_h, far_bc, blo, bhi, step);
        if (opts.store_every > 0 && step % opts.store_every == 0 && t < horizon - 1e-14)
            store_snapshot(sol, t, u);
    }
    sol.meta.steps = step;
    store_snapshot(sol, horizon, u);
    return sol;
}

GridSolution solve_viscous_kirchhoff(std::span<const Hamiltonian1D> branch_h,
                                     std::span<const double> beta, double viscosity,
                                     const JunctionField& u0, double horizon, FarBoundary far_bc,
                                     const TimeStepOptions& opts) {
    const auto& g = u0.grid();
    require_shape(branch_h, g);
    if (static_cast<int>(beta.size()) != g.branches)
        throw ArityMismatch("one Kirchhoff weight per branch required");
    double beta_sum = 0.0;
    for (double b : beta) {
        if (!(b > 0.0)) throw std::invalid_argument("Kirchhoff weights must be positive");
        beta_sum += b;
    }
    if (!(viscosity > 0.0)) throw NonpositiveViscosity("viscosity must be positive");
    if (!(horizon >= 0.0)) throw std::invalid_argument("horizon must be nonnegative");
    if (!(opts.cfl > 0.0 && opts.cfl <= 1.0)) throw std::invalid_argument("cfl must lie in (0, 1]");

    GridSolution sol;
    sol.grid = g;
    sol.meta.far_bc = far_bc;
    sol.meta.viscosity = viscosity;

    const auto [blo, bhi] = inflate_budget(symmetric_hull(slope_range(u0)));
    sol.meta.slope_budget_lo = blo;
    sol.meta.slope_budget_hi = bhi;

    double max_lip = 0.0;
    double flux_mag = 0.0;
    for (const auto& h : branch_h) {
        max_lip = std::max(max_lip, h.lipschitz_bound(blo, bhi));
        flux_mag = std::max(flux_mag, magnitude_bound(h, blo, bhi));
    }
    sol.meta.max_lip = max_lip;

    const auto [u_min, u_max] = std::minmax_element(u0.data().begin(), u0.data().end());
    sol.meta.sup_bound_lo = *u_min - flux_mag * horizon;
    sol.meta.sup_bound_hi = *u_max + flux_mag * horizon;

    // Harmonic combination: dt <= cfl * dx/maxLip and dt <= cfl * dx^2/(2 eps)
    // both hold, and so does the joint explicit stability bound.
    const double rate = max_lip / g.dx + 2.0 * viscosity / (g.dx * g.dx);
    const double dt = opts.cfl / rate;
    sol.meta.dt = dt;

    store_snapshot(sol, 0.0, u0);
    if (horizon == 0.0) return sol;

    JunctionField u = u0;
    double t = 0.0;
    int step = 0;
    while (t < horizon - 1e-14 * (1.0 + horizon)) {
        const double dts = std::min(dt, horizon - t);
        JunctionField next = u;
        for (int i = 0; i < g.branches; ++i)
            viscous_branch_step(branch_h[i], u, next, i, dts, viscosity, far_bc);
        double acc = 0.0;
        for (int i = 0; i < g.branches; ++i) acc += beta[i] * next.at(i, 1);
        next.vertex() = acc / beta_sum;
        u = std::move(next);
        t += dts;
        ++step;
        check_budget(u, branch_h, far_bc, blo, bhi, step);
        if (opts.store_every > 0 && step % opts.store_every == 0 && t < horizon - 1e-14)
            store_snapshot(sol, t, u);
    }
    sol.meta.steps = step;
    store_snapshot(sol, horizon, u);
    return sol;
}

double windowed_sup_diff(const JunctionField& a, const JunctionField& b, double trim) {
    if (!(a.grid() == b.grid())) throw GridMismatch("fields live on different junction grids");
    if (!(trim >= 0.0 && trim < 1.0)) throw std::invalid_argument("trim must lie in [0, 1)");
    const auto& g = a.grid();
    const int k_max = static_cast<int>(std::floor((1.0 - trim) * (g.nodes_per_branch - 1) + 1e-9));
    double sup = std::abs(a.vertex() - b.vertex());
    for (int i = 0; i < g.branches; ++i)
        for (int k = 1; k <= k_max; ++k) sup = std::max(sup, std::abs(a.at(i, k) - b.at(i, k)));
    return sup;
}

std::vector<VvlRow> vvl_sweep(const Hamiltonian1D& h1, const Hamiltonian1D& h2,
                              std::span<const double> beta, std::span<const double> eps_list,
                              const JunctionField& u0, double horizon, FarBoundary far_bc,
                              const TimeStepOptions& opts, double trim) {
    if (u0.grid().branches != 2) throw ArityMismatch("the vanishing-viscosity sweep is a two-branch comparison");
    if (eps_list.empty()) throw std::invalid_argument("need at least one viscosity");
    for (std::size_t j = 0; j < eps_list.size(); ++j) {
        if (!(eps_list[j] > 0.0)) throw NonpositiveViscosity("viscosities must be positive");
        if (j > 0 && !(eps_list[j] < eps_list[j - 1]))
            throw std::invalid_argument("viscosities must be strictly decreasing");
    }

    const KirchhoffLimiter ae = compute_Ae(h1, h2);
    const Hamiltonian1D hs[] = {h1, h2};
    const GridSolution limit = solve_flux_limited(hs, ae.level, u0, horizon, far_bc, opts);

    std::vector<VvlRow> rows;
    rows.reserve(eps_list.size());
    for (double eps : eps_list) {
        const GridSolution vis = solve_viscous_kirchhoff(hs, beta, eps, u0, horizon, far_bc, opts);
        VvlRow row;
        row.epsilon = eps;
        row.sup_error = windowed_sup_diff(vis.final_field(), limit.final_field(), trim);
        row.dx = u0.grid().dx;
        row.dt = vis.meta.dt;
        row.a_e = ae.level;
        rows.push_back(row);
    }
    return rows;
}

FoldedProblem fold_line_problem(const LineProblem& line, const Hamiltonian1D& h1_tilde,
                                const Hamiltonian1D& h2_tilde) {
    if (line.half_nodes < 2) throw GridMismatch("need at least two nodes per half-line");
    if (!(line.dx > 0.0)) throw GridMismatch("dx must be positive");
    const std::size_t expected = 2 * static_cast<std::size_t>(line.half_nodes) - 1;
    if (line.values.size() != expected) {
        std::ostringstream msg;
        msg << "line data has " << line.values.size() << " samples, expected " << expected;
        throw GridMismatch(msg.str());
    }

    FoldedProblem folded;
    folded.hamiltonians = {h1_tilde.reflected(), h2_tilde};

    JunctionGrid grid;
    grid.branches = 2;
    grid.dx = line.dx;
    grid.nodes_per_branch = line.half_nodes;
    JunctionField u(grid);
    const int center = line.half_nodes - 1; // index of y = 0 in the line data
    u.vertex() = line.values[center];
    for (int k = 1; k < line.half_nodes; ++k) {
        u.at(0, k) = line.values[center - k]; // branch 1 runs down the negative axis
        u.at(1, k) = line.values[center + k];
    }
    folded.u0 = std::move(u);
    return folded;
}

LineProblem unfold_to_line(const JunctionField& u) {
    const auto& g = u.grid();
    if (g.branches != 2) throw GridMismatch("only two-branch fields unfold to a line");
    LineProblem line;
    line.dx = g.dx;
    line.half_nodes = g.nodes_per_branch;
    line.values.assign(2 * static_cast<std::size_t>(g.nodes_per_branch) - 1, 0.0);
    const int center = g.nodes_per_branch - 1;
    line.values[center] = u.vertex();
    for (int k = 1; k < g.nodes_per_branch; ++k) {
        line.values[center - k] = u.at(0, k);
        line.values[center + k] = u.at(1, k);
    }
    return line;
}

} // namespace junctionhj
