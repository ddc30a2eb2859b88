#include "skewsim/grs_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>

namespace skewsim {

double draw_uniform(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

double draw_normal(Rng& rng, double mean, double sd) { return std::normal_distribution<double>(mean, sd)(rng); }

SeriesTarget::SeriesTarget(std::function<double(Rng&)> instrumental, std::function<PartialSums(double)> partial_sums,
                           const std::function<double(int)>& remainder, TargetLimits limits)
    : instrumental_(std::move(instrumental)), partial_sums_(std::move(partial_sums)) {
    if (!(limits.remainder_goal > 0.0) || limits.n_cap < 1) throw std::invalid_argument("SeriesTarget: bad limits");
    for (int N = 0;; ++N) {
        const double r = remainder(N);
        if (!(r >= 0.0)) throw std::invalid_argument("SeriesTarget: remainder must be non-negative");
        if (!remainder_.empty() && r > remainder_.back())
            throw std::invalid_argument("SeriesTarget: remainder must be non-increasing");
        remainder_.push_back(r);
        if (r <= limits.remainder_goal) break;
        if (N + 1 >= limits.n_cap) throw std::invalid_argument("SeriesTarget: remainder does not reach its goal");
    }
    n_max_ = static_cast<int>(remainder_.size()) - 1;
}

double SeriesTarget::remainder(int N) const {
    if (N < 0) throw std::out_of_range("SeriesTarget: negative index");
    return remainder_[std::min(N, n_max_)];
}

int SeriesTarget::remainder_inverse(double u) const {
    for (int N = 0; N <= n_max_; ++N)
        if (remainder_[N] <= u) return N;
    return n_max_;
}

void GrsStats::record(const GrsOutcome& o) {
    ++samples;
    proposals += o.proposals;
    terms_total += o.terms_total;
    max_terms_sum += static_cast<std::uint64_t>(o.max_terms_used);
    if (!o.exact) ++inexact;
}

GrsOutcome grs(const SeriesTarget& target, Rng& rng, bool fail_on_inexact) {
    GrsOutcome out;
    while (out.proposals < grs_proposal_cap) {
        const double y = target.sample_instrumental(rng);
        const double u = draw_uniform(rng);
        ++out.proposals;
        const auto f = target.partial_sums(y);
        int N = 0;
        double fN = f(0);
        int used = 1;
        while (std::abs(fN - u) < target.remainder(N) && N < target.n_max()) {
            N = target.remainder_inverse(std::abs(fN - u));
            fN = f(N);
            used = N + 1;
        }
        out.terms_total += static_cast<std::uint64_t>(used);
        out.max_terms_used = std::max(out.max_terms_used, used);
        if (std::abs(fN - u) < target.remainder(N)) {
            if (fail_on_inexact) throw std::runtime_error("grs: undecidable proposal at N_max");
            out.value = y;
            out.exact = false;
            return out;
        }
        if (fN > u) {
            out.value = y;
            return out;
        }
    }
    throw std::runtime_error("grs: proposal cap of 1e6 exceeded");
}

double default_mb(const DriftSpec& spec, double T, double delta) {
    return spec.b_sup() * spec.b_sup() * T / (2.0 * delta);
}

double tightened_mb(const DriftSpec& spec, double x0, double T, double delta) {
    const double B0 = eval_B(spec, x0);
    auto g = [&](double y) { return eval_B(spec, y) - B0 - delta * (y - x0) * (y - x0) / (2.0 * T); };
    const double R = std::max(1e-3, 2.0 * T * spec.b_sup() / delta);
    constexpr int n = 2000;
    int best = 0;
    double gbest = -INFINITY;
    const double h = 2.0 * R / n;
    for (int i = 0; i <= n; ++i) {
        const double v = g(x0 - R + h * i);
        if (v > gbest) {
            gbest = v;
            best = i;
        }
    }
    const double lo = x0 - R + h * std::max(0, best - 1);
    const double hi = x0 - R + h * std::min(n, best + 1);
    const auto r = boost::math::tools::brent_find_minima([&](double y) { return -g(y); }, lo, hi, 50);
    return std::max({0.0, gbest, -r.second}) + 1e-10;
}

SeriesTarget make_h_target(const DriftSpec& spec, const ThetaParams& theta, double x0, double T, double delta,
                           bool tighten_mb, TargetLimits limits) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("make_h_target: delta must lie in (0, 1)");
    if (!(T > 0.0)) throw std::invalid_argument("make_h_target: T must be positive");
    theta.validate();
    const double mb = tighten_mb ? tightened_mb(spec, x0, T, delta) : default_mb(spec, T, delta);
    const double sd = std::sqrt(T / (1.0 - delta));
    const double B0 = eval_B(spec, x0);
    const double factor = v_bar_factor(theta, T);
    const double origin = spec.z1();
    const DriftSpec* sp = &spec;
    auto partial = [=](double y) -> SeriesTarget::PartialSums {
        const double w = std::exp(eval_B(*sp, y) - B0 - delta * (y - x0) * (y - x0) / (2.0 * T) - mb);
        auto series = std::make_shared<ThetaSeries>(T, x0 - origin, y - origin, theta);
        return [series, w, factor](int N) { return factor * series->partial_sum(N) * w; };
    };
    return SeriesTarget([x0, sd](Rng& rng) { return draw_normal(rng, x0, sd); }, partial,
                        [theta, T](int N) { return v_bar_remainder(theta, T, N); }, limits);
}

SeriesTarget make_bridge_target(const ThetaParams& theta, double t, double T, double x1, double x2, double origin,
                                TargetLimits limits) {
    if (!(t > 0.0 && t < T)) throw std::invalid_argument("make_bridge_target: requires 0 < t < T");
    theta.validate();
    const double mean = x1 + (t / T) * (x2 - x1);
    const double sd = std::sqrt(t * (T - t) / T);
    const double fa = v_bar_factor(theta, t);
    const double fb = v_bar_factor(theta, T - t);
    auto partial = [=](double y) -> SeriesTarget::PartialSums {
        auto a = std::make_shared<ThetaSeries>(t, x1 - origin, y - origin, theta);
        auto b = std::make_shared<ThetaSeries>(T - t, y - origin, x2 - origin, theta);
        return [a, b, fa, fb](int N) { return fa * a->partial_sum(N) * fb * b->partial_sum(N); };
    };
    auto remainder = [theta, t, T](int N) {
        const double ra = v_bar_remainder(theta, t, N);
        const double rb = v_bar_remainder(theta, T - t, N);
        return ra + rb + ra * rb;
    };
    return SeriesTarget([mean, sd](Rng& rng) { return draw_normal(rng, mean, sd); }, partial, remainder, limits);
}

}  // namespace skewsim
