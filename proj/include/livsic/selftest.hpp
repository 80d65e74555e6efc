#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace livsic::selftest {

struct CriterionResult {
    int index;
    std::string name;
    bool pass;
    std::string detail;
};

/// Runs the full quantitative acceptance suite (criteria 1-11), printing one
/// pass/fail line per criterion to `progress` when given.
std::vector<CriterionResult> run_acceptance(std::ostream* progress = nullptr);

bool all_passed(const std::vector<CriterionResult>& results);

} // namespace livsic::selftest
