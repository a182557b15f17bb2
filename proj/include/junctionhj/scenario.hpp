#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "junctionhj/effective_limiter.hpp"

namespace junctionhj {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

// Everything a run left on disk; the manifest is always the last entry.
struct RunOutputs {
    std::string kind;
    std::string config_hash;
    std::vector<std::filesystem::path> files;
};

// Parses a schema-1 config and executes it, writing CSV/JSON artifacts plus a
// manifest into out_dir. Recognized kinds: limiter, limiter-sweep, solve-hj,
// solve-viscous, vvl-sweep, ldp. Malformed configs throw ConfigError naming
// the offending field by path ("junction.beta").
RunOutputs run_scenario_text(const std::string& config_text, const std::filesystem::path& out_dir);
RunOutputs run_scenario_file(const std::filesystem::path& config_path,
                             const std::filesystem::path& out_dir);

struct LimiterRun {
    FluxLimiterReport report;
    RepresentationCheck rep;
};

/// Limiter computation from an inline config (the "limiter" kind without IO).
LimiterRun limiter_from_config_text(const std::string& config_text);

/// 64-bit FNV-1a as 16 hex digits; used to fingerprint configs in manifests.
std::string fnv1a_hex(std::string_view data);

/// Full-precision scientific text, round-trip safe ("%.16e").
std::string format_sci(double v);

// Write-to-temporary-then-rename so readers never observe partial files.
void atomic_write_text(const std::filesystem::path& path, const std::string& content);

// Worker count for sweeps: JUNCTIONHJ_THREADS if set and positive, otherwise
// the given fallback.
int resolve_threads(int fallback = 1);

} // namespace junctionhj
