#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace tscale {

/// Outcome of one named property check evaluated over many samples.
struct CheckResult {
    std::string name;
    bool passed = true;
    std::size_t evaluated = 0;
    double worst = 0.0;   // largest observed residual (or smallest margin, per check)
    std::string witness;  // first failing sample, human readable

    void fail(std::string w) {
        if (passed) witness = std::move(w);
        passed = false;
    }
};

struct CheckReport {
    std::vector<CheckResult> checks;
    unsigned long long seed = 0;

    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }

    const CheckResult* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }

    CheckResult& add(std::string name) {
        CheckResult r;
        r.name = std::move(name);
        checks.push_back(std::move(r));
        return checks.back();
    }
};

}  // namespace tscale
