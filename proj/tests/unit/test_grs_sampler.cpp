#include <cmath>
#include <random>

#include <boost/math/distributions/normal.hpp>
#include <doctest.h>

#include "skewsim/analysis.hpp"
#include "skewsim/grs_sampler.hpp"

using namespace skewsim;
using doctest::Approx;

namespace {

SeriesTarget constant_target(double f, double r0 = 0.0) {
    return SeriesTarget([](Rng& rng) { return draw_normal(rng, 2.0, 0.5); },
                        [f](double) { return [f](int) { return f; }; },
                        [r0](int N) { return r0 * std::exp(-double(N)); });
}

double normal_cdf(double x, double mean, double sd) {
    return boost::math::cdf(boost::math::normal_distribution<double>(mean, sd), x);
}

}  // namespace

TEST_CASE("SeriesTarget: N_max and remainder lookup") {
    const SeriesTarget t = constant_target(0.5, 1.0);
    // e^{-N} <= 5e-5 first at N = 10
    CHECK(t.n_max() == 10);
    CHECK(t.remainder(0) == 1.0);
    CHECK(t.remainder(50) == t.remainder(10));
    CHECK(t.remainder_inverse(0.5) == 1);
    CHECK(t.remainder_inverse(0.0) == 10);
    CHECK_THROWS_AS(t.remainder(-1), std::out_of_range);
    CHECK_THROWS_AS(SeriesTarget([](Rng&) { return 0.0; }, [](double) { return [](int) { return 1.0; }; },
                                 [](int N) { return N == 0 ? 1.0 : 2.0; }),
                    std::invalid_argument);
    CHECK_THROWS_AS(SeriesTarget([](Rng&) { return 0.0; }, [](double) { return [](int) { return 1.0; }; },
                                 [](int) { return 1.0; }),
                    std::invalid_argument);
}

TEST_CASE("grs: f == 1 accepts the first proposal and returns the instrumental law") {
    const SeriesTarget t = constant_target(1.0);
    Rng rng(1);
    std::vector<double> xs;
    for (int i = 0; i < 10000; ++i) {
        const GrsOutcome o = grs(t, rng);
        REQUIRE(o.proposals == 1);
        REQUIRE(o.exact);
        xs.push_back(o.value);
    }
    CHECK(ks_one_sample(xs, [](double x) { return normal_cdf(x, 2.0, 0.5); }).p_value > 0.01);
}

TEST_CASE("grs: f == 1/2 accepts half of the proposals") {
    const SeriesTarget t = constant_target(0.5);
    Rng rng(2);
    GrsStats s;
    for (int i = 0; i < 10000; ++i) s.record(grs(t, rng));
    CHECK(std::abs(s.acceptance_rate() - 0.5) <= 0.02);
    CHECK(s.inexact == 0);
}

TEST_CASE("grs: a target that never decides reports an inexact outcome") {
    const SeriesTarget t([](Rng&) { return 0.0; }, [](double) { return [](int) { return 0.5; }; },
                         [](int) { return 0.0; }, TargetLimits{1e-3, 4});
    CHECK(t.n_max() == 0);
    const SeriesTarget wide([](Rng&) { return 0.0; }, [](double) { return [](int) { return 0.5; }; },
                            [](int N) { return N < 3 ? 1.0 : 0.6; }, TargetLimits{0.7, 8});
    Rng rng(3);
    const GrsOutcome o = grs(wide, rng);
    CHECK_FALSE(o.exact);
    CHECK(o.proposals == 1);
    CHECK(o.max_terms_used == wide.n_max() + 1);
    CHECK_THROWS_AS(grs(wide, rng, true), std::runtime_error);
}

TEST_CASE("grs: zero acceptance hits the proposal cap") {
    const SeriesTarget t([](Rng&) { return 0.0; }, [](double) { return [](int) { return -1.0; }; },
                         [](int) { return 0.0; });
    Rng rng(4);
    CHECK_THROWS_AS(grs(t, rng), std::runtime_error);
}

TEST_CASE("h-target for the indicator drift") {
    const DriftSpec b1 = drifts::indicator();
    CHECK(default_mb(b1, 0.55, 0.75) == Approx(0.55 / 1.5));
    CHECK(default_mb(b1, 0.55, 0.75) == Approx(0.3667).epsilon(1e-4));
    const SeriesTarget h = make_h_target(b1, theta_params(b1), 0.5, 0.55, 0.75);
    CHECK(h.n_max() == 2);
    CHECK(h.remainder(0) == Approx(std::exp(-2.0 / 0.55)));
    CHECK(tightened_mb(b1, 0.5, 0.55, 0.75) <= default_mb(b1, 0.55, 0.75));
    CHECK_THROWS_AS(make_h_target(b1, theta_params(b1), 0.5, 0.55, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_h_target(b1, theta_params(b1), 0.5, 0.0, 0.5), std::invalid_argument);
}

TEST_CASE("property: banded partial sums stay within [-r_N, 1 + r_N]") {
    const DriftSpec b1 = drifts::indicator();
    const SeriesTarget h = make_h_target(b1, theta_params(b1), 0.5, 0.55, 0.75);
    const SeriesTarget q = make_bridge_target(theta_params(b1), 0.2, 0.55, 0.3, 1.1);
    Rng rng(5);
    for (const SeriesTarget* t : {&h, &q})
        for (int i = 0; i < 3000; ++i) {
            const double y = t->sample_instrumental(rng);
            const auto f = t->partial_sums(y);
            for (int N = 0; N <= t->n_max(); ++N) {
                REQUIRE(f(N) >= -t->remainder(N));
                REQUIRE(f(N) <= 1.0 + t->remainder(N));
            }
        }
}

TEST_CASE("h-target for a constant drift samples the drifted Gaussian") {
    const DriftSpec c = drifts::constant(0.7);
    const double x0 = 0.3, T = 1.0;
    const SeriesTarget h = make_h_target(c, theta_params(c), x0, T, 0.75);
    CHECK(h.n_max() == 0);
    const double y = 1.2;
    const double mb = default_mb(c, T, 0.75);
    CHECK(h.partial_sum(0, y) == Approx(std::exp(0.7 * (y - x0) - 0.75 * (y - x0) * (y - x0) / (2 * T) - mb)).epsilon(1e-13));
    Rng rng(6);
    std::vector<double> xs;
    for (int i = 0; i < 10000; ++i) xs.push_back(grs(h, rng).value);
    CHECK(ks_one_sample(xs, [&](double v) { return normal_cdf(v, x0 + 0.7 * T, std::sqrt(T)); }).p_value > 0.01);
}

TEST_CASE("bridge target") {
    const ThetaParams th = theta_params(drifts::indicator());
    const SeriesTarget q = make_bridge_target(th, 0.2, 0.55, 0.0, 1.0);
    CHECK(q.remainder(0) == Approx(std::exp(-10.0) + std::exp(-40.0 / 7.0) + std::exp(-10.0 - 40.0 / 7.0)).epsilon(1e-14));
    CHECK_THROWS_AS(make_bridge_target(th, 0.55, 0.55, 0.0, 1.0), std::invalid_argument);

    const SeriesTarget free = make_bridge_target(ThetaParams::make(0.0, 0.0, 1.0), 0.2, 0.55, 0.0, 1.0);
    CHECK(free.partial_sum(0, 0.37) == 1.0);
    Rng rng(7);
    std::vector<double> xs;
    for (int i = 0; i < 10000; ++i) {
        const GrsOutcome o = grs(free, rng);
        REQUIRE(o.proposals == 1);
        xs.push_back(o.value);
    }
    const double mean = 0.2 / 0.55, sd = std::sqrt(0.2 * 0.35 / 0.55);
    CHECK(ks_one_sample(xs, [&](double v) { return normal_cdf(v, mean, sd); }).p_value > 0.01);
}

TEST_CASE("GrsStats bookkeeping") {
    GrsStats s;
    GrsOutcome a;
    a.proposals = 3;
    a.max_terms_used = 2;
    a.terms_total = 4;
    GrsOutcome b;
    b.proposals = 1;
    b.max_terms_used = 1;
    b.terms_total = 1;
    b.exact = false;
    s.record(a);
    s.record(b);
    CHECK(s.samples == 2);
    CHECK(s.acceptance_rate() == Approx(0.5));
    CHECK(s.mean_proposals() == Approx(2.0));
    CHECK(s.mean_terms() == Approx(1.25));
    CHECK(s.mean_max_terms() == Approx(1.5));
    CHECK(s.inexact == 1);
}
