#pragma once

#include <span>
#include <vector>

#include "junctionhj/hamiltonian.hpp"

namespace junctionhj {

// N half-lines glued at a single vertex; node k on branch i sits at x = k*dx
// and node 0 is the shared vertex.
struct JunctionGrid {
    int branches = 2;
    double dx = 0.01;
    int nodes_per_branch = 101; // including the vertex

    int total_unknowns() const { return 1 + branches * (nodes_per_branch - 1); }
    bool operator==(const JunctionGrid&) const = default;
};

// Nodal values; the vertex value is stored once.
class JunctionField {
public:
    JunctionField() = default;
    JunctionField(const JunctionGrid& grid, double fill = 0.0)
        : grid_(grid), data_(static_cast<std::size_t>(grid.total_unknowns()), fill) {}

    const JunctionGrid& grid() const { return grid_; }

    double vertex() const { return data_[0]; }
    double& vertex() { return data_[0]; }

    double at(int branch, int node) const { return data_[index(branch, node)]; }
    double& at(int branch, int node) { return data_[index(branch, node)]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

private:
    std::size_t index(int branch, int node) const {
        if (node == 0) return 0;
        return 1 + static_cast<std::size_t>(branch) * static_cast<std::size_t>(grid_.nodes_per_branch - 1) +
               static_cast<std::size_t>(node - 1);
    }

    JunctionGrid grid_;
    std::vector<double> data_;
};

enum class FarBoundary { SlopeExtrapolation, Frozen };

struct TimeStepOptions {
    double cfl = 0.9;
    int store_every = 0; // 0 keeps only the initial and final fields
};

struct SchemeMeta {
    double dt = 0.0;
    double max_lip = 0.0;
    double limiter = 0.0; // flux limiter actually used
    bool limiter_clamped = false;
    double viscosity = 0.0;
    int steps = 0;
    double slope_budget_lo = 0.0; // inflated slope range the CFL was sized for
    double slope_budget_hi = 0.0;
    double sup_bound_lo = 0.0; // maximum principle envelope min u0 - C T
    double sup_bound_hi = 0.0;
    FarBoundary far_bc = FarBoundary::SlopeExtrapolation;
};

struct GridSolution {
    JunctionGrid grid;
    std::vector<double> times;
    std::vector<JunctionField> values;
    SchemeMeta meta;

    const JunctionField& final_field() const { return values.back(); }
};

// One explicit step of the flux-limited scheme:
//   vertex:   u0 -= dt * max(A, max_i H_i^-((u_{i,1} - u0)/dx))
//   interior: u  -= dt * max(H_i^+(backward), H_i^-(forward))
// Monotone for dt * maxLip <= dx; exposed so property tests can drive u and v
// through the identical map.
JunctionField flux_limited_step(std::span<const Hamiltonian1D> branch_h, double limiter,
                                const JunctionField& u, double dt, FarBoundary far_bc);

// Godunov scheme for the junction HJ problem with flux limiter A >= A0
// (values below A0 are clamped up, flagged in meta.limiter_clamped).
// dt = cfl * dx / maxLip over the initial slope range inflated by 50%;
// a step whose slopes leave that budget throws CFLViolation.
GridSolution solve_flux_limited(std::span<const Hamiltonian1D> branch_h, double limiter,
                                const JunctionField& u0, double horizon,
                                FarBoundary far_bc = FarBoundary::SlopeExtrapolation,
                                const TimeStepOptions& opts = {});

// Explicit viscous scheme: Godunov convection plus centered eps * second
// difference, vertex closed by the algebraic Kirchhoff relation
// u0 = sum beta_i u_{i,1} / sum beta_i after every step.
// dt satisfies dt <= cfl * min(dx/maxLip, dx^2/(2 eps)) via the harmonic
// combination cfl / (maxLip/dx + 2 eps/dx^2).
GridSolution solve_viscous_kirchhoff(std::span<const Hamiltonian1D> branch_h,
                                     std::span<const double> beta, double viscosity,
                                     const JunctionField& u0, double horizon,
                                     FarBoundary far_bc = FarBoundary::SlopeExtrapolation,
                                     const TimeStepOptions& opts = {});

struct VvlRow {
    double epsilon = 0.0;
    double sup_error = 0.0;
    double dx = 0.0;
    double dt = 0.0;
    double a_e = 0.0;
};

// For each viscosity in the strictly decreasing list: solve the viscous
// Kirchhoff problem, compare at t = horizon against the flux-limited
// solution with A = A_e on the same grid, sup over the centered window that
// drops the outer trim fraction (default 10%) of every branch.
std::vector<VvlRow> vvl_sweep(const Hamiltonian1D& h1, const Hamiltonian1D& h2,
                              std::span<const double> beta, std::span<const double> eps_list,
                              const JunctionField& u0, double horizon,
                              FarBoundary far_bc = FarBoundary::SlopeExtrapolation,
                              const TimeStepOptions& opts = {}, double trim = 0.1);

double windowed_sup_diff(const JunctionField& a, const JunctionField& b, double trim = 0.1);

// Whole-line problem sampled on a symmetric grid: values at
// y = -(M-1) dx, ..., (M-1) dx with M = half_nodes.
struct LineProblem {
    double dx = 0.0;
    int half_nodes = 0;
    std::vector<double> values; // size 2 half_nodes - 1, ascending y
};

struct FoldedProblem {
    JunctionField u0;                      // branch 1 carries y < 0 reversed
    std::vector<Hamiltonian1D> hamiltonians; // {H~1 reflected, H~2}
};

FoldedProblem fold_line_problem(const LineProblem& line, const Hamiltonian1D& h1_tilde,
                                const Hamiltonian1D& h2_tilde);

// Exact inverse of the fold for a two-branch field.
LineProblem unfold_to_line(const JunctionField& u);

} // namespace junctionhj
