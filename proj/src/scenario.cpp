#include "junctionhj/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"

#include "junctionhj/errors.hpp"
#include "junctionhj/junction_function.hpp"
#include "junctionhj/junction_pde.hpp"
#include "junctionhj/large_deviations.hpp"

namespace junctionhj {

namespace {

using nlohmann::json;

std::string join_path(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

const json& need(const json& j, const std::string& path, const std::string& key) {
    if (!j.is_object()) throw ConfigError(path.empty() ? "config must be an object" : path + " must be an object");
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(join_path(path, key) + " is required");
    return *it;
}

double need_num(const json& j, const std::string& path, const std::string& key) {
    const json& v = need(j, path, key);
    if (!v.is_number()) throw ConfigError(join_path(path, key) + " must be a number");
    return v.get<double>();
}

double opt_num(const json& j, const std::string& path, const std::string& key, double fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number()) throw ConfigError(join_path(path, key) + " must be a number");
    return v.get<double>();
}

int need_int(const json& j, const std::string& path, const std::string& key) {
    const json& v = need(j, path, key);
    if (!v.is_number_integer()) throw ConfigError(join_path(path, key) + " must be an integer");
    return v.get<int>();
}

int opt_int(const json& j, const std::string& path, const std::string& key, int fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer()) throw ConfigError(join_path(path, key) + " must be an integer");
    return v.get<int>();
}

std::string need_str(const json& j, const std::string& path, const std::string& key) {
    const json& v = need(j, path, key);
    if (!v.is_string()) throw ConfigError(join_path(path, key) + " must be a string");
    return v.get<std::string>();
}

std::string opt_str(const json& j, const std::string& path, const std::string& key,
                    const std::string& fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_string()) throw ConfigError(join_path(path, key) + " must be a string");
    return v.get<std::string>();
}

std::vector<double> need_num_array(const json& j, const std::string& path, const std::string& key) {
    const json& v = need(j, path, key);
    if (!v.is_array() || v.empty()) throw ConfigError(join_path(path, key) + " must be a nonempty array");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_number()) throw ConfigError(join_path(path, key) + " must contain numbers only");
        out.push_back(e.get<double>());
    }
    return out;
}

Hamiltonian1D hamiltonian_from_json(const json& j, const std::string& path) {
    const std::string family = need_str(j, path, "family");
    try {
        if (family == "quadratic")
            return Hamiltonian1D::quadratic(need_num(j, path, "a"), need_num(j, path, "c"),
                                            need_num(j, path, "m"));
        if (family == "absolute-value")
            return Hamiltonian1D::absolute_value(need_num(j, path, "a"), need_num(j, path, "c"),
                                                 need_num(j, path, "m"));
        if (family == "trapezoid")
            return Hamiltonian1D::trapezoid(need_num(j, path, "w"), need_num(j, path, "s"),
                                            need_num(j, path, "m"));
        if (family == "piecewise-linear") {
            const json& pts = need(j, path, "points");
            if (!pts.is_array() || pts.empty())
                throw ConfigError(join_path(path, "points") + " must be a nonempty array");
            std::vector<Breakpoint> table;
            for (const auto& e : pts) {
                if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                    throw ConfigError(join_path(path, "points") + " entries must be [p, h] pairs");
                table.push_back({e[0].get<double>(), e[1].get<double>()});
            }
            return Hamiltonian1D::piecewise_linear(table, need_num(j, path, "left_slope"),
                                                   need_num(j, path, "right_slope"));
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path + ": " + e.what());
    }
    throw ConfigError(join_path(path, "family") + " must be one of quadratic, absolute-value, "
                      "trapezoid, piecewise-linear");
}

std::vector<Hamiltonian1D> hamiltonians_from_json(const json& cfg) {
    const json& arr = need(cfg, "", "hamiltonians");
    if (!arr.is_array() || arr.empty())
        throw ConfigError("hamiltonians must be a nonempty array");
    std::vector<Hamiltonian1D> out;
    for (std::size_t i = 0; i < arr.size(); ++i)
        out.push_back(hamiltonian_from_json(arr[i], "hamiltonians[" + std::to_string(i) + "]"));
    return out;
}

JunctionFunction junction_from_json(const json& cfg, const std::vector<Hamiltonian1D>& branches) {
    const json& j = need(cfg, "", "junction");
    const std::string type = need_str(j, "junction", "type");
    try {
        if (type == "kirchhoff") return JunctionFunction::kirchhoff(need_num_array(j, "junction", "beta"));
        if (type == "neumann")
            return JunctionFunction::neumann(need_num_array(j, "junction", "target_flux"));
        if (type == "flux-limited")
            return JunctionFunction::flux_limited(need_num(j, "junction", "level"), branches);
        if (type == "affine")
            return JunctionFunction::affine(need_num_array(j, "junction", "gamma"),
                                            opt_num(j, "junction", "offset", 0.0));
        if (type == "tabulated") {
            const json& axes = need(j, "junction", "axes");
            if (!axes.is_array() || axes.size() < 2)
                throw ConfigError("junction.axes needs at least two axes (p0 plus one branch)");
            TabulatedGrid grid;
            for (std::size_t k = 0; k < axes.size(); ++k) {
                if (!axes[k].is_array() || axes[k].size() < 2)
                    throw ConfigError("junction.axes[" + std::to_string(k) + "] needs two or more points");
                grid.axes.push_back(axes[k].get<std::vector<double>>());
            }
            grid.values = need_num_array(j, "junction", "values");
            return JunctionFunction::tabulated(std::move(grid));
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("junction: ") + e.what());
    }
    throw ConfigError("junction.type must be one of kirchhoff, neumann, flux-limited, affine, tabulated");
}

JunctionGrid grid_from_json(const json& cfg) {
    const json& j = need(cfg, "", "grid");
    JunctionGrid g;
    g.branches = need_int(j, "grid", "branches");
    g.dx = need_num(j, "grid", "dx");
    g.nodes_per_branch = need_int(j, "grid", "nodes_per_branch");
    if (g.branches < 1) throw ConfigError("grid.branches must be at least 1");
    if (!(g.dx > 0.0)) throw ConfigError("grid.dx must be positive");
    if (g.nodes_per_branch < 2) throw ConfigError("grid.nodes_per_branch must be at least 2");
    return g;
}

JunctionField initial_from_json(const json& cfg, const JunctionGrid& grid) {
    const json& j = need(cfg, "", "initial");
    const std::string type = need_str(j, "initial", "type");
    JunctionField u(grid);
    if (type == "zero") return u;
    if (type == "cone") {
        std::vector<double> slopes;
        if (j.contains("slopes")) {
            slopes = need_num_array(j, "initial", "slopes");
            if (static_cast<int>(slopes.size()) != grid.branches)
                throw ConfigError("initial.slopes must list one slope per branch");
        } else {
            slopes.assign(grid.branches, need_num(j, "initial", "slope"));
        }
        const double v0 = opt_num(j, "initial", "vertex_value", 0.0);
        u.vertex() = v0;
        for (int i = 0; i < grid.branches; ++i)
            for (int k = 1; k < grid.nodes_per_branch; ++k) u.at(i, k) = v0 + slopes[i] * k * grid.dx;
        return u;
    }
    if (type == "bump") {
        const double amp = need_num(j, "initial", "amplitude");
        const double center = need_num(j, "initial", "center");
        const double width = need_num(j, "initial", "width");
        if (!(width > 0.0)) throw ConfigError("initial.width must be positive");
        const auto profile = [&](double x) {
            const double r = (x - center) / width;
            return amp * std::exp(-r * r);
        };
        u.vertex() = profile(0.0);
        for (int i = 0; i < grid.branches; ++i)
            for (int k = 1; k < grid.nodes_per_branch; ++k) u.at(i, k) = profile(k * grid.dx);
        return u;
    }
    throw ConfigError("initial.type must be one of zero, cone, bump");
}

FarBoundary far_boundary_from_json(const json& cfg) {
    const std::string s = opt_str(cfg, "", "far_boundary", "slope-extrapolation");
    if (s == "slope-extrapolation") return FarBoundary::SlopeExtrapolation;
    if (s == "frozen") return FarBoundary::Frozen;
    throw ConfigError("far_boundary must be slope-extrapolation or frozen");
}

TimeStepOptions step_options_from_json(const json& cfg) {
    TimeStepOptions opts;
    opts.cfl = opt_num(cfg, "", "cfl", 0.9);
    opts.store_every = opt_int(cfg, "", "store_every", 0);
    return opts;
}

std::function<double(double)> terminal_from_json(const json& cfg) {
    const json& j = need(cfg, "", "terminal");
    const std::string type = need_str(j, "terminal", "type");
    const double scale = opt_num(j, "terminal", "scale", 1.0);
    if (type == "square") return [scale](double y) { return scale * y * y; };
    if (type == "abs") return [scale](double y) { return scale * std::abs(y); };
    throw ConfigError("terminal.type must be square or abs");
}

QuadraticSideData side_from_json(const json& cfg, const std::string& key) {
    const json& j = need(cfg, "", key);
    QuadraticSideData side;
    side.a = need_num(j, key, "a");
    side.b = need_num(j, key, "b");
    if (!(side.a > 0.0)) throw ConfigError(key + ".a must be positive");
    return side;
}

// ---------------------------------------------------------------------------
// CSV assembly

void csv_cell(std::string& out, double v) {
    out += format_sci(v);
}

std::string limiter_csv(const LimiterRun& run) {
    std::string out = "A0,AL,rep_sup,rep_inf,certification_residual,took_A0_branch,view_def,view_def_plus";
    for (std::size_t i = 0; i < run.report.branch_slopes.size(); ++i)
        out += ",p_plus_" + std::to_string(i + 1);
    out += "\n";
    csv_cell(out, run.report.A0);
    out += ",";
    csv_cell(out, run.report.AL);
    out += ",";
    csv_cell(out, run.report.rep_sup);
    out += ",";
    csv_cell(out, run.report.rep_inf);
    out += ",";
    csv_cell(out, run.report.certification_residual);
    out += run.report.took_A0_branch ? ",1," : ",0,";
    csv_cell(out, run.rep.view_def);
    out += ",";
    csv_cell(out, run.rep.view_def_plus);
    for (double p : run.report.branch_slopes) {
        out += ",";
        csv_cell(out, p);
    }
    out += "\n";
    return out;
}

std::string sweep_csv(const SweepTable& table) {
    std::string out = "p_prime,A0,AL,rep_sup,rep_inf,took_A0_branch\n";
    for (const auto& row : table.rows) {
        const double r = std::sqrt(row.point.p_prime_norm2());
        csv_cell(out, r);
        out += ",";
        csv_cell(out, row.report.A0);
        out += ",";
        csv_cell(out, row.report.AL);
        out += ",";
        csv_cell(out, row.report.rep_sup);
        out += ",";
        csv_cell(out, row.report.rep_inf);
        out += row.report.took_A0_branch ? ",1\n" : ",0\n";
    }
    return out;
}

std::string solution_csv(const GridSolution& sol) {
    std::string out = "time,branch,node,x,value\n";
    const auto& g = sol.grid;
    for (std::size_t s = 0; s < sol.times.size(); ++s) {
        const JunctionField& u = sol.values[s];
        for (int i = 0; i < g.branches; ++i) {
            for (int k = 0; k < g.nodes_per_branch; ++k) {
                csv_cell(out, sol.times[s]);
                out += "," + std::to_string(i) + "," + std::to_string(k) + ",";
                csv_cell(out, k * g.dx);
                out += ",";
                csv_cell(out, u.at(i, k));
                out += "\n";
            }
        }
    }
    return out;
}

std::string vvl_csv(const std::vector<VvlRow>& rows) {
    std::string out = "epsilon,sup_error,dx,dt,a_e\n";
    for (const auto& r : rows) {
        csv_cell(out, r.epsilon);
        out += ",";
        csv_cell(out, r.sup_error);
        out += ",";
        csv_cell(out, r.dx);
        out += ",";
        csv_cell(out, r.dt);
        out += ",";
        csv_cell(out, r.a_e);
        out += "\n";
    }
    return out;
}

json meta_to_json(const SchemeMeta& meta) {
    return json{{"dt", meta.dt},
                {"steps", meta.steps},
                {"max_lip", meta.max_lip},
                {"limiter", meta.limiter},
                {"limiter_clamped", meta.limiter_clamped},
                {"viscosity", meta.viscosity},
                {"slope_budget", {meta.slope_budget_lo, meta.slope_budget_hi}},
                {"sup_bounds", {meta.sup_bound_lo, meta.sup_bound_hi}}};
}

struct Artifact {
    std::string name;
    std::string content;
};

struct KindResult {
    std::vector<Artifact> artifacts;
    json extras;
};

LimiterRun run_limiter(const json& cfg, std::uint64_t seed) {
    const auto hs = hamiltonians_from_json(cfg);
    const JunctionFunction L = junction_from_json(cfg, hs);
    // Surface assumption failures before the root finder does, with the seed
    // the config asked for.
    if (L.family() != JunctionFamily::Tabulated) {
        const auto report = L.validate_assumptions(200, seed);
        if (!report.all_passed()) throw AssumptionViolated(report.summary());
    }
    LimiterRun run;
    run.report = compute_AL(L, hs);
    run.rep = check_representations(run.report, L, hs);
    return run;
}

KindResult handle_limiter(const json& cfg, std::uint64_t seed) {
    const LimiterRun run = run_limiter(cfg, seed);
    KindResult out;
    out.artifacts.push_back({"limiter.csv", limiter_csv(run)});
    out.extras = {{"A0", run.report.A0},
                  {"AL", run.report.AL},
                  {"took_A0_branch", run.report.took_A0_branch},
                  {"representation_passed", run.rep.passed || run.rep.skipped}};
    return out;
}

KindResult handle_limiter_sweep(const json& cfg, std::uint64_t) {
    ParametricFamily family;
    family.base = hamiltonians_from_json(cfg);
    const std::string offset = opt_str(cfg, "", "offset", "p-prime-squared");
    if (offset == "p-prime-squared")
        family.offset = ParametricFamily::Offset::PPrimeSquared;
    else if (offset == "none")
        family.offset = ParametricFamily::Offset::None;
    else
        throw ConfigError("offset must be p-prime-squared or none");

    const JunctionFunction L = junction_from_json(cfg, family.base);

    const json& pp = need(cfg, "", "p_prime");
    const double lo = need_num(pp, "p_prime", "lo");
    const double hi = need_num(pp, "p_prime", "hi");
    const int count = need_int(pp, "p_prime", "count");
    if (count < 2) throw ConfigError("p_prime.count must be at least 2");
    if (!(hi > lo)) throw ConfigError("p_prime.hi must exceed p_prime.lo");

    std::vector<ParamPoint> grid(count);
    for (int k = 0; k < count; ++k)
        grid[k].p_prime = {lo + (hi - lo) * k / (count - 1)};

    const int threads = resolve_threads(opt_int(cfg, "", "threads", 1));
    const SweepTable table = sweep_limiter(family, L, grid, threads);

    KindResult out;
    out.artifacts.push_back({"sweep.csv", sweep_csv(table)});
    json curve = json::array();
    for (const auto& [r, a] : table.coercivity_curve) curve.push_back({r, a});
    out.extras = {{"rows", table.rows.size()},
                  {"continuity_modulus", table.continuity_modulus},
                  {"coercivity_curve", curve},
                  {"threads", threads}};
    return out;
}

KindResult handle_solve_hj(const json& cfg, std::uint64_t) {
    const auto hs = hamiltonians_from_json(cfg);
    const JunctionGrid grid = grid_from_json(cfg);
    if (static_cast<int>(hs.size()) != grid.branches)
        throw ConfigError("grid.branches must match the number of hamiltonians");
    const JunctionField u0 = initial_from_json(cfg, grid);
    const double limiter = need_num(cfg, "", "limiter");
    const double horizon = need_num(cfg, "", "horizon");
    const GridSolution sol =
        solve_flux_limited(hs, limiter, u0, horizon, far_boundary_from_json(cfg), step_options_from_json(cfg));
    KindResult out;
    out.artifacts.push_back({"solution.csv", solution_csv(sol)});
    out.extras = meta_to_json(sol.meta);
    return out;
}

KindResult handle_solve_viscous(const json& cfg, std::uint64_t) {
    const auto hs = hamiltonians_from_json(cfg);
    const JunctionGrid grid = grid_from_json(cfg);
    if (static_cast<int>(hs.size()) != grid.branches)
        throw ConfigError("grid.branches must match the number of hamiltonians");
    const auto beta = need_num_array(cfg, "", "beta");
    if (static_cast<int>(beta.size()) != grid.branches)
        throw ConfigError("beta must list one weight per branch");
    const JunctionField u0 = initial_from_json(cfg, grid);
    const double viscosity = need_num(cfg, "", "viscosity");
    const double horizon = need_num(cfg, "", "horizon");
    const GridSolution sol = solve_viscous_kirchhoff(hs, beta, viscosity, u0, horizon,
                                                     far_boundary_from_json(cfg), step_options_from_json(cfg));
    KindResult out;
    out.artifacts.push_back({"solution.csv", solution_csv(sol)});
    out.extras = meta_to_json(sol.meta);
    return out;
}

KindResult handle_vvl_sweep(const json& cfg, std::uint64_t) {
    const auto hs = hamiltonians_from_json(cfg);
    if (hs.size() != 2) throw ConfigError("hamiltonians must list exactly two branches for vvl-sweep");
    const JunctionGrid grid = grid_from_json(cfg);
    if (grid.branches != 2) throw ConfigError("grid.branches must be 2 for vvl-sweep");
    const auto beta = need_num_array(cfg, "", "beta");
    if (beta.size() != 2) throw ConfigError("beta must list two weights");
    const auto eps = need_num_array(cfg, "", "viscosities");
    const JunctionField u0 = initial_from_json(cfg, grid);
    const double horizon = need_num(cfg, "", "horizon");
    const double trim = opt_num(cfg, "", "trim", 0.1);
    const auto rows = vvl_sweep(hs[0], hs[1], beta, eps, u0, horizon, far_boundary_from_json(cfg),
                                step_options_from_json(cfg), trim);
    KindResult out;
    out.artifacts.push_back({"vvl.csv", vvl_csv(rows)});
    out.extras = {{"a_e", rows.front().a_e}, {"final_sup_error", rows.back().sup_error}};
    return out;
}

KindResult handle_ldp(const json& cfg, std::uint64_t) {
    const QuadraticSideData side1 = side_from_json(cfg, "side1");
    const QuadraticSideData side2 = side_from_json(cfg, "side2");
    const auto terminal = terminal_from_json(cfg);
    const double epsilon = need_num(cfg, "", "epsilon");
    const double horizon = need_num(cfg, "", "horizon");

    HopfColeSpec spec;
    if (cfg.contains("line")) {
        const json& line = cfg.at("line");
        spec.y_half = opt_num(line, "line", "y_half", spec.y_half);
        spec.half_nodes = opt_int(line, "line", "half_nodes", spec.half_nodes);
        spec.trim = opt_num(line, "line", "trim", spec.trim);
    }
    DpGridSpec dp;
    if (cfg.contains("dp")) {
        const json& d = cfg.at("dp");
        dp.x_lo = opt_num(d, "dp", "x_lo", dp.x_lo);
        dp.x_hi = opt_num(d, "dp", "x_hi", dp.x_hi);
        dp.nx = opt_int(d, "dp", "nx", dp.nx);
        dp.nt = opt_int(d, "dp", "nt", dp.nt);
        dp.velocities = opt_int(d, "dp", "velocities", dp.velocities);
        dp.refine_tol = opt_num(d, "dp", "refine_tol", dp.refine_tol);
    }

    const HopfColeReport report = hopf_cole_pipeline(side1, side2, terminal, epsilon, horizon, spec, dp);

    std::string profiles = "y,v_eps,v_hj\n";
    const int j0 = report.v_eps.half_nodes - 1;
    for (std::size_t j = 0; j < report.v_eps.values.size(); ++j) {
        csv_cell(profiles, (static_cast<int>(j) - j0) * report.v_eps.dx);
        profiles += ",";
        csv_cell(profiles, report.v_eps.values[j]);
        profiles += ",";
        csv_cell(profiles, report.v_hj.values[j]);
        profiles += "\n";
    }

    const json report_json = {{"schema", kSchemaVersion},
                              {"kind", "ldp"},
                              {"epsilon", report.epsilon},
                              {"horizon", report.horizon},
                              {"v_eps_origin", report.v_eps_origin},
                              {"v_hj_origin", report.v_hj_origin},
                              {"v_dp", report.v_dp},
                              {"sup_diff", report.sup_diff},
                              {"origin_gap_dp", report.origin_gap_dp},
                              {"grid_too_coarse", report.grid_too_coarse}};

    KindResult out;
    out.artifacts.push_back({"ldp_report.json", report_json.dump(2) + "\n"});
    out.artifacts.push_back({"profiles.csv", profiles});
    out.extras = {{"v_eps_origin", report.v_eps_origin},
                  {"v_hj_origin", report.v_hj_origin},
                  {"v_dp", report.v_dp},
                  {"sup_diff", report.sup_diff}};
    return out;
}

} // namespace

std::string fnv1a_hex(std::string_view data) {
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string format_sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

int resolve_threads(int fallback) {
    if (const char* env = std::getenv("JUNCTIONHJ_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0 && n <= 1024) return static_cast<int>(n);
    }
    return fallback > 0 ? fallback : 1;
}

LimiterRun limiter_from_config_text(const std::string& config_text) {
    json cfg;
    try {
        cfg = json::parse(config_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    const std::uint64_t seed = cfg.contains("seed") ? cfg.at("seed").get<std::uint64_t>() : 42;
    return run_limiter(cfg, seed);
}

RunOutputs run_scenario_text(const std::string& config_text, const std::filesystem::path& out_dir) {
    json cfg;
    try {
        cfg = json::parse(config_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    const int schema = need_int(cfg, "", "schema");
    if (schema != kSchemaVersion)
        throw ConfigError("schema must be " + std::to_string(kSchemaVersion));
    const std::string kind = need_str(cfg, "", "kind");
    std::uint64_t seed = 42;
    if (cfg.contains("seed")) {
        if (!cfg.at("seed").is_number_unsigned())
            throw ConfigError("seed must be a nonnegative integer");
        seed = cfg.at("seed").get<std::uint64_t>();
    }

    KindResult result;
    if (kind == "limiter")
        result = handle_limiter(cfg, seed);
    else if (kind == "limiter-sweep")
        result = handle_limiter_sweep(cfg, seed);
    else if (kind == "solve-hj")
        result = handle_solve_hj(cfg, seed);
    else if (kind == "solve-viscous")
        result = handle_solve_viscous(cfg, seed);
    else if (kind == "vvl-sweep")
        result = handle_vvl_sweep(cfg, seed);
    else if (kind == "ldp")
        result = handle_ldp(cfg, seed);
    else
        throw ConfigError("kind must be one of limiter, limiter-sweep, solve-hj, solve-viscous, "
                          "vvl-sweep, ldp");

    std::filesystem::create_directories(out_dir);

    RunOutputs outputs;
    outputs.kind = kind;
    outputs.config_hash = fnv1a_hex(cfg.dump());

    json names = json::array();
    for (const auto& artifact : result.artifacts) {
        const auto path = out_dir / artifact.name;
        atomic_write_text(path, artifact.content);
        outputs.files.push_back(path);
        names.push_back(artifact.name);
    }

    const json manifest = {{"schema", kSchemaVersion},
                           {"tool_version", kToolVersion},
                           {"kind", kind},
                           {"seed", seed},
                           {"config_hash", outputs.config_hash},
                           {"tolerances",
                            {{"root", 1e-10}, {"certification", 1e-8}, {"envelope", 1e-9}}},
                           {"outputs", names},
                           {"extras", result.extras}};
    const auto manifest_path = out_dir / "manifest.json";
    atomic_write_text(manifest_path, manifest.dump(2) + "\n");
    outputs.files.push_back(manifest_path);
    return outputs;
}

RunOutputs run_scenario_file(const std::filesystem::path& config_path,
                             const std::filesystem::path& out_dir) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file " + config_path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return run_scenario_text(buf.str(), out_dir);
}

} // namespace junctionhj
