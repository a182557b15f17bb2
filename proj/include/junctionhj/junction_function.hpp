#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "junctionhj/hamiltonian.hpp"
#include "junctionhj/validation.hpp"

namespace junctionhj {

enum class JunctionFamily { Kirchhoff, Neumann, FluxLimited, Affine, Tabulated };

// Rectangular table over (p0, p1, ..., pN) with multilinear interpolation.
// Evaluation clamps to the grid hull; callers that care (the limiter root
// finder) watch the clamped flag.
struct TabulatedGrid {
    std::vector<std::vector<double>> axes; // axis 0 is p0
    std::vector<double> values;            // row-major over the axes

    double interpolate(std::span<const double> coords, bool* clamped) const;
};

// Junction condition germ L(p0, p1, ..., pN), nonincreasing in every slope.
// Instances are immutable and re-entrant.
class JunctionFunction {
public:
    // L = -sum_i beta_i p_i (branch slopes only; constant in p0)
    static JunctionFunction kirchhoff(std::vector<double> beta);
    // L = sum_i (g_i - p_i); for N = 1 this is the classical -p1 + g
    static JunctionFunction neumann(std::vector<double> target_flux);
    // L_A = -p0 + max(A, max_i H_i^-(p_i))
    static JunctionFunction flux_limited(double level, std::vector<Hamiltonian1D> branches);
    // L = offset + gamma_0 p0 + sum_i gamma_i p_i, all gamma expected < 0
    // (the validator reports wrong signs; construction only checks shape)
    static JunctionFunction affine(std::vector<double> gamma, double offset);
    static JunctionFunction tabulated(TabulatedGrid grid);

    JunctionFamily family() const { return family_; }
    int arity() const; // number of branches N

    // params is carried for interface symmetry with the sweep layer; the
    // builtin families are evaluated at frozen parameters and ignore it.
    double evaluate(double p0, std::span<const double> p,
                    const ParamPoint& params = {}, bool* clamped = nullptr) const;

    // Samples the structural assumptions: continuity, monotonicity in each
    // slope, strict decrease under simultaneous slope increase, divergence
    // at -1e6 / +1e6.  Bounded tables cannot pass the divergence checks and
    // are reported as such.
    ValidationReport validate_assumptions(int samples = 200, std::uint64_t seed = 42) const;

    const std::vector<double>& weights() const { return weights_; } // beta / g / gamma
    double offset() const { return offset_; }
    double level() const { return level_; }
    const std::vector<Hamiltonian1D>& branches() const { return branches_; }
    const TabulatedGrid& grid() const { return grid_; }

private:
    JunctionFunction() = default;

    JunctionFamily family_ = JunctionFamily::Kirchhoff;
    std::vector<double> weights_;
    double offset_ = 0.0;
    double level_ = 0.0;
    std::vector<Hamiltonian1D> branches_;
    TabulatedGrid grid_;
};

} // namespace junctionhj
