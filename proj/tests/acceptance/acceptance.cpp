// Acceptance runner: prints one PASS/FAIL line per criterion.
// Usage: acceptance [criterion ...]   (default: all 13)

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "skewsim/verify.hpp"

using namespace skewsim;

namespace {

struct Criterion {
    int number;
    const char* title;
    std::vector<std::string> checks;
    double max_seconds;
};

const std::vector<Criterion> criteria{
    {1, "geometry table", {"geometry"}, 1.0},
    {2, "oracle equivalence", {"oracle_theta", "oracle_beta"}, 120.0},
    {3, "normalization", {"normalization_theta", "normalization_bridge"}, 120.0},
    {4, "Chapman-Kolmogorov", {"chapman_kolmogorov"}, 120.0},
    {5, "a-invariance", {"a_invariance"}, 120.0},
    {6, "certified truncation", {"truncation"}, 120.0},
    {7, "L1 identities", {"l1_identity"}, 120.0},
    {8, "acceptance rates on the b1 workload", {"grs_reference_rates"}, 60.0},
    {9, "end-to-end law against Euler", {"sim_euler_law"}, 600.0},
    {10, "constant drift terminal law", {"sim_constant_law"}, 600.0},
    {11, "small-skew convergence", {"small_skew_convergence"}, 120.0},
    {12, "inexact-decision rate", {"grs_inexact_rate"}, 120.0},
    {13, "CPU shape", {"sim_cpu_shape"}, 600.0},
};

}  // namespace

int main(int argc, char** argv) {
    VerifyOptions opt;
    opt.oracle_slack = 1e-7;
    opt.seed = 20240613;
    opt.threads = 0;
    opt.ks_runs = 5;
    opt.ks_samples = 10000;

    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
    if (wanted.empty())
        for (const auto& c : criteria) wanted.push_back(c.number);

    int failed = 0;
    for (int w : wanted) {
        const Criterion* c = nullptr;
        for (const auto& k : criteria)
            if (k.number == w) c = &k;
        if (!c) {
            std::cerr << "unknown criterion " << w << '\n';
            return 2;
        }
        bool pass = true;
        double secs = 0.0;
        std::string detail;
        for (const auto& id : c->checks) {
            const CheckResult r = run_check(id, opt);
            pass = pass && r.pass;
            secs += r.seconds;
            detail += (detail.empty() ? "" : " | ") + format_check(r);
        }
        const bool in_time = secs <= c->max_seconds;
        pass = pass && in_time;
        std::printf("[%s] criterion %d (%s): %s; runtime %.2f s (limit %.0f s)\n", pass ? "PASS" : "FAIL", c->number,
                    c->title, detail.c_str(), secs, c->max_seconds);
        std::fflush(stdout);
        if (!pass) ++failed;
    }
    return failed ? 1 : 0;
}
