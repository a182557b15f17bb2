#pragma once

#include <functional>
#include <vector>

#include "junctionhj/hamiltonian.hpp"
#include "junctionhj/junction_pde.hpp"

namespace junctionhj {

// Piecewise diffusion on the line: dX = b(X) dt + sqrt(eps a(X)) dW with
// constant coefficients per half-line. Side 1 is y < 0, side 2 is y > 0.
struct QuadraticSideData {
    double a = 1.0; // diffusion coefficient, positive
    double b = 0.0; // drift
};

/// H~(p) = a p^2 / 2 - b p as a quadratic family member.
Hamiltonian1D side_hamiltonian(const QuadraticSideData& side);

/// Running cost L~(q) = (q - b)^2 / (2a), the convex conjugate of p -> a p^2/2 + b p.
double lagrangian_side(const QuadraticSideData& side, double q);

struct InterfaceValue {
    double value = 0.0;
    double lambda = 0.0; // optimal time fraction charged to side 1
    double q1 = 0.0;     // side-1 velocity component (>= 0)
    double q2 = 0.0;     // side-2 velocity component (<= 0)
};

// Effective running cost for a path sitting at the interface with net
// velocity q:
//   L0(q) = inf { l L1(q1) + (1-l) L2(q2) : l in [0,1], q1 >= 0, q2 <= 0,
//                 l q1 + (1-l) q2 = q }.
// Inner problem solved in closed form, outer minimized over l (convex).
InterfaceValue interface_lagrangian(const QuadraticSideData& side1, const QuadraticSideData& side2,
                                    double q);

/// Brute-force check value on an n-point lambda grid (diagnostic oracle).
double interface_lagrangian_scan(const QuadraticSideData& side1, const QuadraticSideData& side2,
                                 double q, int lambda_points = 2001, int velocity_points = 2001,
                                 double velocity_span = 8.0);

struct PathSample {
    std::vector<double> times;     // uniform, strictly increasing
    std::vector<double> positions; // same length
};

// Action integral of a sampled path: left-endpoint Riemann sum with each
// segment classified by its midpoint (interface band |y| <= band_halfwidth).
double rate_function(const QuadraticSideData& side1, const QuadraticSideData& side2,
                     const PathSample& path, double band_halfwidth);

struct DpGridSpec {
    double x_lo = -6.0;
    double x_hi = 6.0;
    int nx = 601;
    int nt = 50;
    int velocities = 41;
    double refine_tol = 0.02; // flag if halving dx moves the value more than this
};

struct VariationalResult {
    double value = 0.0;
    double refined_value = 0.0;
    bool grid_too_coarse = false;
    double velocity_bound = 0.0;
};

// U(horizon, x0) = inf { h(phi(horizon)) + integral of L~ } over paths from
// x0, by backward value iteration on an x-grid with a finite velocity fan.
VariationalResult variational_value(const QuadraticSideData& side1, const QuadraticSideData& side2,
                                    const std::function<double(double)>& terminal_cost,
                                    double horizon, double x0, const DpGridSpec& spec = {});

struct HopfColeSpec {
    double y_half = 6.0;  // line domain [-y_half, y_half]
    int half_nodes = 241; // nodes per half-line including the origin
    double cfl = 0.9;
    double trim = 0.1; // fraction of each half excluded from the sup window
};

struct HopfColeReport {
    double epsilon = 0.0;
    double horizon = 0.0;
    double v_eps_origin = 0.0;
    double v_hj_origin = 0.0;
    double v_dp = 0.0;
    double sup_diff = 0.0;      // windowed sup |v_eps - v_hj|
    double origin_gap_dp = 0.0; // |v_eps(0) - v_dp|
    bool grid_too_coarse = false;
    LineProblem v_eps;
    LineProblem v_hj;
};

// Sample-path yardstick at fixed noise level eps:
//   v_eps = -eps log u with u solving u_t = (eps a / 2) u_yy + b(y) u_y,
//           interface node set to the average of its neighbours each step;
//   v_hj  = viscous Kirchhoff junction solve of the folded HJ problem with
//           viscosity eps a / 2 (requires a1 == a2);
//   v_dp  = variational value at the origin.
HopfColeReport hopf_cole_pipeline(const QuadraticSideData& side1, const QuadraticSideData& side2,
                                  const std::function<double(double)>& terminal_cost, double epsilon,
                                  double horizon, const HopfColeSpec& spec = {},
                                  const DpGridSpec& dp_spec = {});

} // namespace junctionhj
