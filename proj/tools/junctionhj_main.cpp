#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"

#include "junctionhj/errors.hpp"
#include "junctionhj/scenario.hpp"
#include "junctionhj/self_test.hpp"

namespace {

int run_command(const std::string& config_path, const std::string& out_dir) {
    const auto outputs = junctionhj::run_scenario_file(config_path, out_dir);
    std::printf("kind: %s\nconfig_hash: %s\n", outputs.kind.c_str(), outputs.config_hash.c_str());
    for (const auto& file : outputs.files) std::printf("wrote %s\n", file.string().c_str());
    return 0;
}

int self_test_command(const std::string& suite, std::uint64_t seed) {
    const auto report = junctionhj::run_self_test(suite, seed);
    int passed = 0;
    for (const auto& criterion : report.criteria) {
        std::puts(junctionhj::format_criterion_line(criterion).c_str());
        if (!criterion.detail.empty()) std::printf("       %s\n", criterion.detail.c_str());
        if (criterion.passed) ++passed;
    }
    std::printf("self-test(%s): %d/%zu criteria passed\n", suite.c_str(), passed,
                report.criteria.size());
    return report.all_passed() ? 0 : 1;
}

int limiter_command(const std::string& inline_json) {
    const junctionhj::LimiterRun run = junctionhj::limiter_from_config_text(inline_json);
    std::printf("A0 = %.16e\n", run.report.A0);
    std::printf("AL = %.16e\n", run.report.AL);
    std::printf("rep_sup = %.16e\n", run.report.rep_sup);
    std::printf("rep_inf = %.16e\n", run.report.rep_inf);
    std::printf("residual = %.16e\n", run.report.certification_residual);
    for (std::size_t i = 0; i < run.report.branch_slopes.size(); ++i)
        std::printf("p_plus_%zu = %.16e\n", i + 1, run.report.branch_slopes[i]);
    std::printf("case: %s\n", run.report.took_A0_branch ? "base-level" : "root");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Effective junction conditions for quasi-convex Hamilton-Jacobi equations"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    auto* run = app.add_subcommand("run", "Execute a JSON scenario and write its artifacts");
    run->add_option("config", config_path, "Path to a schema-1 JSON config")->required();
    run->add_option("--out-dir", out_dir, "Output directory (default: out)");

    std::string suite = "all";
    std::uint64_t seed = 42;
    auto* self_test = app.add_subcommand("self-test", "Run the acceptance criteria");
    self_test->add_option("suite", suite,
                          "envelopes, representations, ae-ishii, vvl, ldp, or all (default)");
    self_test->add_option("--seed", seed, "Seed for randomized instances (default: 42)");

    std::string inline_json;
    auto* limiter = app.add_subcommand("limiter", "Compute the effective flux limiter, no files");
    limiter->add_option("--inline", inline_json, "Config JSON as a literal argument")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // malformed invocations are config errors
    }

    try {
        if (run->parsed()) return run_command(config_path, out_dir);
        if (self_test->parsed()) return self_test_command(suite, seed);
        if (limiter->parsed()) return limiter_command(inline_json);
    } catch (const junctionhj::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const junctionhj::AssumptionViolated& e) {
        std::fprintf(stderr, "assumption violated: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    }
    return 0;
}
