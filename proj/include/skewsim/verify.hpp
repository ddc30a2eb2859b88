#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace skewsim {

struct CheckResult {
    std::string id;
    bool pass = false;
    // Worst observed value of the checked quantity and the limit it is compared with.
    double measured = 0.0;
    double threshold = 0.0;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyOptions {
    // Additive slack in the oracle comparison.
    double oracle_slack = 1e-7;
    std::uint64_t seed = 20240613;
    unsigned threads = 0;
    int ks_runs = 5;
    std::size_t ks_samples = 10000;
};

// Individual checks by id; see check_ids().
CheckResult run_check(const std::string& id, const VerifyOptions& opt = {});
const std::vector<std::string>& check_ids();

// Named groups of checks: geometry, oracle, normalization, ck, ainvariance, truncation,
// bounds, l1, convergence, grs, sim, and "all".
const std::vector<std::string>& suite_names();
std::vector<std::string> suite_checks(const std::string& suite);

std::string format_check(const CheckResult& r);

}  // namespace skewsim
