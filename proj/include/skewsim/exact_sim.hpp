#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "skewsim/drift_model.hpp"
#include "skewsim/grs_sampler.hpp"
#include "skewsim/skew_density.hpp"

namespace skewsim {

struct PoissonField {
    double T = 0.0;
    double m = 0.0;
    // (time, height), sorted by time
    std::vector<std::pair<double, double>> points;
};

PoissonField sample_poisson_field(double T, double m, Rng& rng);

struct Skeleton {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<bool> exact_flags;
    std::uint64_t seed = 0;

    std::size_t size() const noexcept { return times.size(); }
    double terminal() const { return values.back(); }
};

struct SimConfig {
    double T = 1.0;
    // Split length for srrs; capped at 1 / phi_sup.
    double T_el = 0.55;
    double delta = 0.75;
    std::uint64_t seed = 0;
    int n_cap = 64;
    // Remainder goal defining N_max in the rejection targets.
    double tol = 5e-5;
    bool progressive_poisson = false;
    bool tighten_mb = false;
};

struct SimStats {
    std::uint64_t skeletons = 0;
    std::uint64_t path_restarts = 0;
    std::uint64_t field_points = 0;
    GrsStats endpoint;
    GrsStats bridge;

    SimStats& operator+=(const SimStats& o);
    double mean_restarts() const { return skeletons ? double(path_restarts) / double(skeletons) : 0.0; }
    // Endpoint proposals per accepted skeleton.
    double mean_endpoint_proposals() const {
        return skeletons ? double(endpoint.proposals) / double(skeletons) : 0.0;
    }
};

inline constexpr std::uint64_t rrs_restart_cap = 1000000;

Skeleton rrs(const DriftSpec& spec, double x0, double t0, double T, const SimConfig& cfg, Rng& rng,
             SimStats* stats = nullptr);
Skeleton srrs(const DriftSpec& spec, double x0, double t0, double T, const SimConfig& cfg, Rng& rng,
              SimStats* stats = nullptr);
double effective_split(const DriftSpec& spec, const SimConfig& cfg);
int split_count(double T, double T_el);

// Inserts bridge values at `times`; `origin` is the lower barrier location.
Skeleton fill_path(const Skeleton& skeleton, const std::vector<double>& times, const ThetaParams& theta,
                   double origin, Rng& rng);
Skeleton fill_path(const Skeleton& skeleton, const std::vector<double>& times, const DriftSpec& spec, Rng& rng);

double euler_maruyama(const DriftSpec& spec, double x0, double T, double step, Rng& rng);

// Independent stream for sample `index` of a batch seeded with `seed`.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);
Rng make_stream(std::uint64_t seed, std::uint64_t index);

enum class Method { rrs, srrs, euler };

struct BatchRequest {
    Method method = Method::srrs;
    double x0 = 0.0;
    SimConfig cfg;
    double euler_step = 1e-3;
    std::size_t n = 1;
    unsigned threads = 0;  // 0: hardware concurrency
};

// Terminal values X_T; output is independent of the worker count.
std::vector<double> sample_terminal_batch(const DriftSpec& spec, const BatchRequest& req, SimStats* stats = nullptr);

}  // namespace skewsim
