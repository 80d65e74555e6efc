#pragma once

#include <string>

namespace livsic::cli {

struct RunOptions {
    std::string config_path;
    std::string out_dir;  // overrides the config's out_dir when non-empty
    int threads = 0;      // 0 = auto
    std::string variant;  // vexp-certify override: printed | reciprocal
    std::string method;   // recover override: cauchy | resolvent
    bool dump_operator = false;
};

/// Executes one experiment subcommand (density, lambda-curve, detect,
/// recover, periodic, vexp-certify, selftest). Returns the process exit code:
/// 0 success, 1 inconclusive / negative-certificate results, 2 errors.
int run(const std::string& subcommand, const RunOptions& options);

} // namespace livsic::cli
