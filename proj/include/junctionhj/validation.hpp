#pragma once

#include <string>
#include <vector>

namespace junctionhj {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail; // first offending sample or a short note
};

struct ValidationReport {
    std::vector<CheckResult> checks;

    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }

    std::string summary() const {
        std::string s;
        for (const auto& c : checks) {
            s += (c.passed ? "[ok]   " : "[FAIL] ");
            s += c.name;
            if (!c.detail.empty()) {
                s += ": ";
                s += c.detail;
            }
            s += '\n';
        }
        return s;
    }
};

} // namespace junctionhj
