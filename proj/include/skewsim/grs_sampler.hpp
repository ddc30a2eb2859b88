#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "skewsim/drift_model.hpp"
#include "skewsim/skew_density.hpp"

namespace skewsim {

using Rng = std::mt19937_64;

double draw_uniform(Rng& rng);
double draw_normal(Rng& rng, double mean = 0.0, double sd = 1.0);

// N_max is the first index whose remainder is <= remainder_goal; targets whose
// remainders stay above it for n_cap terms are rejected.
struct TargetLimits {
    double remainder_goal = 5e-5;
    int n_cap = 64;
};

// Rejection target whose acceptance probability f(y) is known only through partial
// sums f_N(y) with |f - f_N| <= remainder[N].
class SeriesTarget {
public:
    using PartialSums = std::function<double(int)>;

    SeriesTarget(std::function<double(Rng&)> instrumental, std::function<PartialSums(double)> partial_sums,
                 const std::function<double(int)>& remainder, TargetLimits limits = {});

    double sample_instrumental(Rng& rng) const { return instrumental_(rng); }
    PartialSums partial_sums(double y) const { return partial_sums_(y); }
    double partial_sum(int N, double y) const { return partial_sums_(y)(N); }
    double remainder(int N) const;
    const std::vector<double>& remainders() const noexcept { return remainder_; }
    int remainder_inverse(double u) const;
    int n_max() const noexcept { return n_max_; }

private:
    std::function<double(Rng&)> instrumental_;
    std::function<PartialSums(double)> partial_sums_;
    std::vector<double> remainder_;
    int n_max_ = 0;
};

struct GrsOutcome {
    double value = 0.0;
    bool exact = true;
    std::uint64_t proposals = 0;
    int max_terms_used = 0;
    std::uint64_t terms_total = 0;
};

struct GrsStats {
    std::uint64_t samples = 0;
    std::uint64_t proposals = 0;
    std::uint64_t inexact = 0;
    std::uint64_t terms_total = 0;
    std::uint64_t max_terms_sum = 0;

    void record(const GrsOutcome& o);
    double acceptance_rate() const { return proposals ? double(samples) / double(proposals) : 0.0; }
    double mean_proposals() const { return samples ? double(proposals) / double(samples) : 0.0; }
    double mean_terms() const { return proposals ? double(terms_total) / double(proposals) : 0.0; }
    double mean_max_terms() const { return samples ? double(max_terms_sum) / double(samples) : 0.0; }
};

inline constexpr std::uint64_t grs_proposal_cap = 1000000;

GrsOutcome grs(const SeriesTarget& target, Rng& rng, bool fail_on_inexact = false);

// Endpoint target for the horizon T started at x0 (original coordinates). `spec` must
// outlive the target. M_B defaults to b_sup^2 T / (2 delta); tighten_mb maximises the
// exponent numerically instead.
SeriesTarget make_h_target(const DriftSpec& spec, const ThetaParams& theta, double x0, double T, double delta,
                           bool tighten_mb = false, TargetLimits limits = {});
double default_mb(const DriftSpec& spec, double T, double delta);
double tightened_mb(const DriftSpec& spec, double x0, double T, double delta);

// Bridge value at time t of the instrumental process pinned at (0, x1) and (T, x2).
// `origin` is the lower barrier; the upper one sits at origin + theta.z.
SeriesTarget make_bridge_target(const ThetaParams& theta, double t, double T, double x1, double x2,
                                double origin = 0.0, TargetLimits limits = {});

}  // namespace skewsim
