#pragma once

#include <string>
#include <vector>

namespace pmet {

/// Outcome of one randomized or exhaustive property check.
struct CheckItem {
    std::string name;
    bool passed = true;
    std::string witness;  // human-readable counterexample, empty when passed
};

struct CheckReport {
    std::vector<CheckItem> items;

    bool all_passed() const {
        for (const auto& item : items)
            if (!item.passed) return false;
        return true;
    }

    std::string first_failure() const {
        for (const auto& item : items)
            if (!item.passed) return item.name + ": " + item.witness;
        return {};
    }
};

}  // namespace pmet
