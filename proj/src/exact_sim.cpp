#include "skewsim/exact_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace skewsim {

PoissonField sample_poisson_field(double T, double m, Rng& rng) {
    if (!(T > 0.0)) throw std::invalid_argument("sample_poisson_field: T must be positive");
    if (!(m >= 0.0)) throw std::invalid_argument("sample_poisson_field: m must be non-negative");
    PoissonField f{T, m, {}};
    if (m == 0.0) return f;
    const auto count = std::poisson_distribution<long>(T * m)(rng);
    f.points.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
        const double tau = T * draw_uniform(rng);
        const double height = m * draw_uniform(rng);
        f.points.emplace_back(tau, height);
    }
    std::stable_sort(f.points.begin(), f.points.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    return f;
}

SimStats& SimStats::operator+=(const SimStats& o) {
    skeletons += o.skeletons;
    path_restarts += o.path_restarts;
    field_points += o.field_points;
    for (auto [dst, src] : {std::pair{&endpoint, &o.endpoint}, std::pair{&bridge, &o.bridge}}) {
        dst->samples += src->samples;
        dst->proposals += src->proposals;
        dst->inexact += src->inexact;
        dst->terms_total += src->terms_total;
        dst->max_terms_sum += src->max_terms_sum;
    }
    return *this;
}

namespace {

// Draws the next field point after time `from`, or returns false past the horizon.
bool next_progressive_point(double from, double T, double m, Rng& rng, std::pair<double, double>& out) {
    if (m == 0.0) return false;
    const double tau = from + std::exponential_distribution<double>(m)(rng);
    if (tau >= T) return false;
    out = {tau, m * draw_uniform(rng)};
    return true;
}

}  // namespace

Skeleton rrs(const DriftSpec& spec, double x0, double t0, double T, const SimConfig& cfg, Rng& rng, SimStats* stats) {
    if (!(T > 0.0)) throw std::invalid_argument("rrs: T must be positive");
    const ThetaParams theta = theta_params(spec);
    const TargetLimits limits{cfg.tol, cfg.n_cap};
    const SeriesTarget h = make_h_target(spec, theta, x0, T, cfg.delta, cfg.tighten_mb, limits);
    const double m = spec.phi_sup();
    const double origin = spec.z1();
    SimStats local;

    for (std::uint64_t attempt = 0; attempt < rrs_restart_cap; ++attempt) {
        PoissonField field;
        if (!cfg.progressive_poisson) field = sample_poisson_field(T, m, rng);
        const GrsOutcome end = grs(h, rng);
        local.endpoint.record(end);

        Skeleton sk;
        sk.seed = cfg.seed;
        sk.times.push_back(0.0);
        sk.values.push_back(x0);
        sk.exact_flags.push_back(true);
        double prev_t = 0.0, prev_y = x0;
        bool accepted = true;

        auto visit = [&](double tau, double height) {
            ++local.field_points;
            double y = prev_y;
            bool exact = true;
            if (tau > prev_t) {
                const SeriesTarget q = make_bridge_target(theta, tau - prev_t, T - prev_t, prev_y, end.value, origin, limits);
                const GrsOutcome o = grs(q, rng);
                local.bridge.record(o);
                y = o.value;
                exact = o.exact;
            }
            sk.times.push_back(tau);
            sk.values.push_back(y);
            sk.exact_flags.push_back(exact);
            prev_t = tau;
            prev_y = y;
            return height > eval_phi_plus(spec, y);
        };

        if (cfg.progressive_poisson) {
            std::pair<double, double> pt;
            double from = 0.0;
            while (next_progressive_point(from, T, m, rng, pt)) {
                from = pt.first;
                if (!visit(pt.first, pt.second)) {
                    accepted = false;
                    break;
                }
            }
        } else {
            for (const auto& [tau, height] : field.points) {
                if (!visit(tau, height)) {
                    accepted = false;
                    break;
                }
            }
        }

        if (accepted) {
            sk.times.push_back(T);
            sk.values.push_back(end.value);
            sk.exact_flags.push_back(end.exact);
            for (double& t : sk.times) t += t0;
            ++local.skeletons;
            if (stats) *stats += local;
            return sk;
        }
        ++local.path_restarts;
    }
    throw std::runtime_error("rrs: restart cap of 1e6 exceeded");
}

double effective_split(const DriftSpec& spec, const SimConfig& cfg) {
    if (!(cfg.T_el > 0.0)) throw std::invalid_argument("srrs: T_el must be positive");
    if (spec.phi_sup() > 0.0) return std::min(cfg.T_el, 1.0 / spec.phi_sup());
    return cfg.T_el;
}

int split_count(double T, double T_el) {
    return std::max(1, static_cast<int>(std::ceil(T / T_el - 1e-12)));
}

Skeleton srrs(const DriftSpec& spec, double x0, double t0, double T, const SimConfig& cfg, Rng& rng, SimStats* stats) {
    if (!(T > 0.0)) throw std::invalid_argument("srrs: T must be positive");
    const int pieces = split_count(T, effective_split(spec, cfg));
    const double L = T / pieces;
    Skeleton out;
    double x = x0;
    for (int i = 0; i < pieces; ++i) {
        const double start = t0 + L * i;
        const double len = (i + 1 == pieces) ? (t0 + T) - start : L;
        Skeleton part = rrs(spec, x, start, len, cfg, rng, stats);
        const std::size_t skip = out.times.empty() ? 0 : 1;
        out.times.insert(out.times.end(), part.times.begin() + skip, part.times.end());
        out.values.insert(out.values.end(), part.values.begin() + skip, part.values.end());
        out.exact_flags.insert(out.exact_flags.end(), part.exact_flags.begin() + skip, part.exact_flags.end());
        x = part.values.back();
    }
    out.seed = cfg.seed;
    return out;
}

Skeleton fill_path(const Skeleton& skeleton, const std::vector<double>& times, const ThetaParams& theta, double origin,
                   Rng& rng) {
    if (skeleton.times.empty()) throw std::invalid_argument("fill_path: empty skeleton");
    if (!std::is_sorted(times.begin(), times.end())) throw std::invalid_argument("fill_path: times must be sorted");
    Skeleton out = skeleton;
    for (double t : times) {
        if (t < out.times.front() || t > out.times.back())
            throw std::out_of_range("fill_path: time outside the skeleton span");
        const auto it = std::lower_bound(out.times.begin(), out.times.end(), t);
        const std::size_t i = static_cast<std::size_t>(it - out.times.begin());
        const double eps = 1e-12 * std::max(1.0, std::abs(t));
        if (std::abs(out.times[i] - t) <= eps || (i > 0 && std::abs(out.times[i - 1] - t) <= eps)) continue;
        const double tl = out.times[i - 1], tr = out.times[i];
        const SeriesTarget q = make_bridge_target(theta, t - tl, tr - tl, out.values[i - 1], out.values[i], origin);
        const GrsOutcome o = grs(q, rng);
        out.times.insert(out.times.begin() + static_cast<std::ptrdiff_t>(i), t);
        out.values.insert(out.values.begin() + static_cast<std::ptrdiff_t>(i), o.value);
        out.exact_flags.insert(out.exact_flags.begin() + static_cast<std::ptrdiff_t>(i), o.exact);
    }
    return out;
}

Skeleton fill_path(const Skeleton& skeleton, const std::vector<double>& times, const DriftSpec& spec, Rng& rng) {
    return fill_path(skeleton, times, theta_params(spec), spec.z1(), rng);
}

double euler_maruyama(const DriftSpec& spec, double x0, double T, double step, Rng& rng) {
    if (!(step > 0.0 && step <= T)) throw std::invalid_argument("euler_maruyama: requires 0 < step <= T");
    const long n = std::max(1L, static_cast<long>(std::ceil(T / step - 1e-9)));
    const double h = T / static_cast<double>(n);
    const double sh = std::sqrt(h);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double x = x0;
    for (long k = 0; k < n; ++k) x += eval_b(spec, x) * h + sh * gauss(rng);
    return x;
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
    auto splitmix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return splitmix(seed ^ splitmix(index));
}

Rng make_stream(std::uint64_t seed, std::uint64_t index) { return Rng(stream_seed(seed, index)); }

std::vector<double> sample_terminal_batch(const DriftSpec& spec, const BatchRequest& req, SimStats* stats) {
    std::vector<double> out(req.n);
    unsigned workers = req.threads ? req.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, req.n)));
    std::vector<SimStats> partial(workers);
    std::vector<std::exception_ptr> errors(workers);

    auto work = [&](unsigned w) {
        try {
            for (std::size_t i = w; i < req.n; i += workers) {
                Rng rng = make_stream(req.cfg.seed, i);
                switch (req.method) {
                    case Method::rrs: out[i] = rrs(spec, req.x0, 0.0, req.cfg.T, req.cfg, rng, &partial[w]).terminal(); break;
                    case Method::srrs: out[i] = srrs(spec, req.x0, 0.0, req.cfg.T, req.cfg, rng, &partial[w]).terminal(); break;
                    case Method::euler: out[i] = euler_maruyama(spec, req.x0, req.cfg.T, req.euler_step, rng); break;
                }
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    if (stats)
        for (const auto& p : partial) *stats += p;
    return out;
}

}  // namespace skewsim
