#pragma once

#include <string>
#include <vector>

namespace magsteer::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Runs the full acceptance suite (criteria 1-10) and reports one result
/// per criterion. Deterministic; takes a few seconds.
std::vector<CriterionResult> run_all();

bool all_pass(const std::vector<CriterionResult>& results);

}  // namespace magsteer::acceptance
