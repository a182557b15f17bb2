#include "junctionhj/effective_limiter.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>

#include "junctionhj/errors.hpp"
#include "junctionhj/numerics.hpp"

namespace junctionhj {

namespace {

constexpr double kRootTol = 1e-10;
constexpr double kBracketCeiling = 1e6;
constexpr int kMaxIter = 200;

// slopes pi^+(level) (or pihat^+) across all branches
std::vector<double> inverse_slopes(std::span<const Hamiltonian1D> branches, double level, bool hat) {
    std::vector<double> p(branches.size());
    for (std::size_t i = 0; i < branches.size(); ++i)
        p[i] = hat ? branches[i].pi_plus_hat(level) : branches[i].pi_plus(level);
    return p;
}

} // namespace

double compute_A0(std::span<const Hamiltonian1D> branches) {
    if (branches.empty()) throw std::invalid_argument("compute_A0: no branches");
    double a0 = branches[0].min_value();
    for (const auto& h : branches) a0 = std::max(a0, h.min_value());
    return a0;
}

FluxLimiterReport compute_AL(const JunctionFunction& L,
                             std::span<const Hamiltonian1D> branches,
                             const ParamPoint& params) {
    if (static_cast<int>(branches.size()) != L.arity())
        throw ArityMismatch("compute_AL: " + std::to_string(branches.size()) +
                            " Hamiltonians for a junction function of arity " +
                            std::to_string(L.arity()));

    if (L.family() != JunctionFamily::Tabulated) {
        ValidationReport v = L.validate_assumptions();
        if (!v.all_passed())
            throw AssumptionViolated("junction function failed assumption sampling:\n" + v.summary());
    }

    FluxLimiterReport rep;
    rep.A0 = compute_A0(branches);

    bool clamped = false;
    auto g = [&](double level) {
        auto p = inverse_slopes(branches, level, false);
        return L.evaluate(level, p, params, &clamped);
    };
    auto g_hat = [&](double level) {
        auto p = inverse_slopes(branches, level, true);
        return L.evaluate(level, p, params, &clamped);
    };

    const double g_a0 = g(rep.A0);
    if (g_a0 <= 0.0) {
        // Def. case i: the minimal level already satisfies the condition.
        rep.AL = rep.A0;
        rep.bracket_lo = rep.bracket_hi = rep.A0;
        rep.branch_slopes = inverse_slopes(branches, rep.A0, false);
        rep.took_A0_branch = true;
        rep.rep_sup = rep.rep_inf = rep.A0;
        rep.certification_residual = g_a0;
        rep.hull_clamped = clamped;
        return rep;
    }

    // bracket the sign change of the strictly decreasing g
    double step = 1.0;
    double hi = rep.A0 + step;
    int bracket_iters = 0;
    while (g(hi) > 0.0) {
        step *= 2.0;
        if (step > kBracketCeiling)
            throw BracketNotFound("compute_AL: no sign change of L below A0 + 1e6; "
                                  "divergence assumption (L5) likely fails");
        hi = rep.A0 + step;
        ++bracket_iters;
    }

    BracketResult root = bisect_decreasing(g, rep.A0, hi, kRootTol, kMaxIter);
    rep.AL = root.midpoint();
    rep.bracket_lo = root.lo;
    rep.bracket_hi = root.hi;
    rep.iterations = root.iterations + bracket_iters;

    // Certifying slopes.  The admissible interval for branch i is
    // [pi^+(AL), pihat^+(AL)]; the one-sided bracket endpoints give the
    // stable evaluation when a plateau sits exactly at the root level.
    std::vector<double> q_lo = inverse_slopes(branches, root.lo, false);
    std::vector<double> q_hi = inverse_slopes(branches, root.hi, true);
    rep.branch_slopes = q_lo;
    for (std::size_t i = 0; i < branches.size(); ++i) {
        auto phi = [&](double x) {
            double saved = rep.branch_slopes[i];
            rep.branch_slopes[i] = x;
            double v = L.evaluate(rep.AL, rep.branch_slopes, params, &clamped);
            rep.branch_slopes[i] = saved;
            return v;
        };
        if (phi(q_lo[i]) <= 0.0) {
            rep.branch_slopes[i] = q_lo[i];
            break; // already at or below zero; later coordinates stay low
        }
        if (phi(q_hi[i]) >= 0.0) {
            rep.branch_slopes[i] = q_hi[i]; // push this coordinate fully, continue
            continue;
        }
        BracketResult c = bisect_decreasing(phi, q_lo[i], q_hi[i],
                                            1e-13 * (1.0 + std::abs(q_hi[i])), kMaxIter);
        rep.branch_slopes[i] = c.midpoint();
        break;
    }
    rep.certification_residual = L.evaluate(rep.AL, rep.branch_slopes, params, &clamped);

    // Representation (sup form), rebracketed independently with a different
    // initial search so agreement is evidence of uniqueness.
    {
        double s = 1.0, hi2 = rep.A0 + s;
        while (g(hi2) > 0.0) {
            s *= 3.0;
            if (s > kBracketCeiling)
                throw BracketNotFound("compute_AL: sup-representation bracket exceeded A0 + 1e6");
            hi2 = rep.A0 + s;
        }
        BracketResult b = bisect_predicate([&](double l) { return g(l) > 0.0; },
                                           rep.A0, hi2, kRootTol, kMaxIter);
        rep.rep_sup = b.midpoint();
    }

    // Representation (inf form) built on pihat^+.
    {
        if (g_hat(rep.A0) < 0.0) {
            rep.rep_inf = rep.A0;
        } else {
            double s = 1.0, hi3 = rep.A0 + s;
            while (!(g_hat(hi3) < 0.0)) {
                s *= 2.0;
                if (s > kBracketCeiling)
                    throw BracketNotFound("compute_AL: inf-representation bracket exceeded A0 + 1e6");
                hi3 = rep.A0 + s;
            }
            BracketResult b = bisect_predicate([&](double l) { return g_hat(l) >= 0.0; },
                                               rep.A0, hi3, kRootTol, kMaxIter);
            rep.rep_inf = b.midpoint();
        }
    }

    rep.hull_clamped = clamped;
    return rep;
}

RepresentationCheck check_representations(const FluxLimiterReport& report,
                                          const JunctionFunction& L,
                                          std::span<const Hamiltonian1D> branches,
                                          const ParamPoint& params) {
    RepresentationCheck c;
    if (report.took_A0_branch) {
        c.skipped = true;
        c.passed = true;
        return c;
    }
    auto p_lo = inverse_slopes(branches, report.bracket_lo, false);
    auto p_hi = inverse_slopes(branches, report.bracket_hi, true);
    c.view_def = L.evaluate(report.bracket_lo, p_lo, params);
    c.view_def_plus = L.evaluate(report.bracket_hi, p_hi, params);
    c.sup_gap = std::abs(report.AL - report.rep_sup);
    c.inf_gap = std::abs(report.AL - report.rep_inf);
    c.passed = c.view_def >= -1e-8 && c.view_def_plus <= 1e-8 &&
               c.sup_gap <= 1e-8 && c.inf_gap <= 1e-8;
    return c;
}

KirchhoffLimiter compute_Ae(const Hamiltonian1D& h1, const Hamiltonian1D& h2) {
    KirchhoffLimiter out;
    const double a0 = std::max(h1.min_value(), h2.min_value());
    const double p10 = h1.pi_plus(a0);
    const double p20 = h2.pi_plus(a0);
    if (p10 + p20 >= 0.0) {
        out.level = a0;
        out.p1_plus = p10;
        out.p2_plus = p20;
        out.took_A0_branch = true;
        return out;
    }

    auto sigma = [&](double level) { return -(h1.pi_plus(level) + h2.pi_plus(level)); };
    double step = 1.0, hi = a0 + step;
    while (sigma(hi) > 0.0) {
        step *= 2.0;
        if (step > kBracketCeiling)
            throw BracketNotFound("compute_Ae: pi_1^+ + pi_2^+ stayed negative below A0 + 1e6");
        hi = a0 + step;
    }
    BracketResult root = bisect_decreasing(sigma, a0, hi, kRootTol, kMaxIter);
    out.level = root.midpoint();
    out.iterations = root.iterations;

    // pick p1 in [pi_1^+, pihat_1^+] such that -p1 lies in branch 2's interval
    const double lo1 = std::max(h1.pi_plus(root.lo), -h2.pi_plus_hat(root.hi));
    const double hi1 = std::min(h1.pi_plus_hat(root.hi), -h2.pi_plus(root.lo));
    out.p1_plus = std::min(lo1, hi1); // lower end of the intersection, robust to rounding
    out.p2_plus = -out.p1_plus;
    return out;
}

IshiiReport compute_ishii(const Hamiltonian1D& h1_tilde, const Hamiltonian1D& h2_tilde) {
    const Hamiltonian1D h1 = h1_tilde.reflected();
    const Hamiltonian1D& h2 = h2_tilde;

    IshiiReport rep;
    rep.A0 = std::max(h1.min_value(), h2.min_value());
    const double pi10 = h1.minimal_minimizer();
    const double pi20 = h2.minimal_minimizer();
    rep.pi_sum = pi10 + pi20;
    rep.interval_lo = std::min(-pi10, pi20);
    rep.interval_hi = std::max(-pi10, pi20);

    // On I one graph is nonincreasing and the other nondecreasing, so the max
    // of their lower envelope sits at an endpoint or at the crossing, and the
    // difference between the graphs is monotone there.  Golden section is the
    // wrong tool for this: a minimizer plateau (trapezoids, tables) ties its
    // probes and the bracket collapses into the flat part.
    auto objective = [&](double q) { return std::min(h2.evaluate(q), h1.evaluate(-q)); };
    auto diff = [&](double q) { return h1.evaluate(-q) - h2.evaluate(q); };
    const double qa = rep.interval_lo, qb = rep.interval_hi;
    ScalarOptimum best{qa, objective(qa)};
    if (const double vb = objective(qb); vb > best.value) best = {qb, vb};
    const double da = diff(qa);
    if (qb > qa && (da > 0.0) != (diff(qb) > 0.0)) {
        const BracketResult cross =
            bisect_predicate([&](double q) { return (diff(q) > 0.0) == (da > 0.0); }, qa, qb,
                             1e-12 * (1.0 + std::abs(qb - qa)), kMaxIter);
        for (double q : {cross.lo, cross.midpoint(), cross.hi})
            if (const double v = objective(q); v > best.value) best = {q, v};
    }
    rep.A_star = best.value;
    rep.maximizer = best.arg;
    rep.A_I_plus = std::max(rep.A0, rep.A_star);
    if (rep.pi_sum >= 0.0) {
        rep.A_I_minus = rep.A0;
        rep.branch = IshiiBranch::UsedA0;
    } else {
        rep.A_I_minus = rep.A_I_plus;
        rep.branch = IshiiBranch::UsedAIplus;
    }
    return rep;
}

EqualityReport verify_Ae_equals_AIminus(const Hamiltonian1D& h1_tilde,
                                        const Hamiltonian1D& h2_tilde) {
    const Hamiltonian1D h1 = h1_tilde.reflected();
    const Hamiltonian1D& h2 = h2_tilde;

    EqualityReport out;
    const KirchhoffLimiter ae = compute_Ae(h1, h2);
    const IshiiReport ish = compute_ishii(h1_tilde, h2_tilde);
    out.A_e = ae.level;
    out.A_I_minus = ish.A_I_minus;
    out.gap = std::abs(out.A_e - out.A_I_minus);
    out.equal = out.gap <= 1e-8;

    if (ish.pi_sum >= 0.0) {
        out.proof_case = EqualityCase::PiSumNonnegative;
        return out;
    }
    // here I = [pi20, -pi10]; compare the reflected-left and right graphs at
    // the endpoints (one is nonincreasing, the other nondecreasing on I)
    const double qL = ish.interval_lo;
    const double qR = ish.interval_hi;
    const double tol = 1e-10;
    const double fold1_L = h1.evaluate(-qL), fold1_R = h1.evaluate(-qR);
    const double h2_L = h2.evaluate(qL), h2_R = h2.evaluate(qR);
    if (fold1_L <= h2_L + tol)
        out.proof_case = EqualityCase::SeparatedBelow;
    else if (fold1_R >= h2_R - tol)
        out.proof_case = EqualityCase::SeparatedAbove;
    else
        out.proof_case = EqualityCase::Crossing;
    return out;
}

std::vector<Hamiltonian1D> ParametricFamily::at(const ParamPoint& point) const {
    std::vector<Hamiltonian1D> out;
    out.reserve(base.size());
    const double dm = offset == Offset::PPrimeSquared ? point.p_prime_norm2() : 0.0;
    for (const auto& h : base) out.push_back(h.with_min_offset(dm));
    return out;
}

SweepTable sweep_limiter(const ParametricFamily& family, const JunctionFunction& L,
                         std::span<const ParamPoint> grid, int threads) {
    SweepTable table;
    table.rows.resize(grid.size());

    auto run_range = [&](std::size_t beg, std::size_t end) {
        for (std::size_t k = beg; k < end; ++k) {
            auto branches = family.at(grid[k]);
            table.rows[k] = SweepRow{grid[k], compute_AL(L, branches, grid[k])};
        }
    };

    const std::size_t n = grid.size();
    const std::size_t nthreads =
        std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), n));
    if (nthreads <= 1) {
        run_range(0, n);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(nthreads);
        const std::size_t chunk = (n + nthreads - 1) / nthreads;
        for (std::size_t t = 0; t < nthreads; ++t) {
            pool.emplace_back([&, t]() {
                try {
                    run_range(t * chunk, std::min(n, (t + 1) * chunk));
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    // finite-difference continuity modulus along the grid ordering
    for (std::size_t k = 0; k + 1 < table.rows.size(); ++k) {
        const ParamPoint& a = table.rows[k].point;
        const ParamPoint& b = table.rows[k + 1].point;
        if (a.x_prime.size() != b.x_prime.size() || a.p_prime.size() != b.p_prime.size()) continue;
        double d2 = (a.t - b.t) * (a.t - b.t);
        for (std::size_t j = 0; j < a.x_prime.size(); ++j)
            d2 += (a.x_prime[j] - b.x_prime[j]) * (a.x_prime[j] - b.x_prime[j]);
        for (std::size_t j = 0; j < a.p_prime.size(); ++j)
            d2 += (a.p_prime[j] - b.p_prime[j]) * (a.p_prime[j] - b.p_prime[j]);
        const double dist = std::sqrt(d2);
        if (dist < 1e-15) continue;
        table.continuity_modulus =
            std::max(table.continuity_modulus,
                     std::abs(table.rows[k].report.AL - table.rows[k + 1].report.AL) / dist);
    }

    // coercivity curve: min AL per |p'| sphere
    std::map<double, double> mins;
    for (const auto& row : table.rows) {
        const double r = std::sqrt(row.point.p_prime_norm2());
        const double key = std::round(r * 1e9) / 1e9;
        auto it = mins.find(key);
        if (it == mins.end())
            mins.emplace(key, row.report.AL);
        else
            it->second = std::min(it->second, row.report.AL);
    }
    table.coercivity_curve.assign(mins.begin(), mins.end());
    return table;
}

} // namespace junctionhj
