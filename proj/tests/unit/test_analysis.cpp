#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <doctest.h>

#include "skewsim/analysis.hpp"

using namespace skewsim;
using doctest::Approx;

namespace {

double trapezoid(const std::vector<std::pair<double, double>>& curve) {
    double s = 0.0;
    for (std::size_t i = 1; i < curve.size(); ++i)
        s += 0.5 * (curve[i].second + curve[i - 1].second) * (curve[i].first - curve[i - 1].first);
    return s;
}

// Brute-force sup distance between two empirical CDFs over all sample points.
double brute_ks(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    auto ecdf = [](const std::vector<double>& v, double x) {
        return double(std::count_if(v.begin(), v.end(), [x](double u) { return u <= x; })) / double(v.size());
    };
    for (const auto* v : {&a, &b})
        for (double x : *v) d = std::max(d, std::abs(ecdf(a, x) - ecdf(b, x)));
    return d;
}

}  // namespace

TEST_CASE("kde: single sample is the kernel") {
    const auto grid = linear_grid(-4.0, 4.0, 0.5);
    CHECK(grid.size() == 17);
    const auto curve = kde({0.0}, 1.0, grid);
    for (const auto& [x, d] : curve) CHECK(d == Approx(std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi)).epsilon(1e-15));
}

TEST_CASE("kde: symmetric bimodal estimate") {
    const auto curve = kde({-1.0, 1.0}, 0.3, linear_grid(-3.0, 3.0, 0.01));
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const auto& mirror = curve[curve.size() - 1 - i];
        CHECK(std::abs(curve[i].second - mirror.second) <= 1e-12);
    }
    CHECK(curve[curve.size() / 2].second < curve[200].second);
}

TEST_CASE("property: kde mass on the padded grid") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g(0.3, 1.7);
    for (int n : {1, 10, 1000}) {
        std::vector<double> xs;
        for (int i = 0; i < n; ++i) xs.push_back(g(rng));
        for (double bw : {0.05, default_bandwidth, 0.5}) {
            const auto curve = kde(xs, bw, kde_grid(xs, bw, bw / 10.0));
            const double m = trapezoid(curve);
            CHECK(m >= 0.999);
            CHECK(m <= 1.001);
        }
    }
    CHECK_THROWS(kde({}, 0.1, {0.0}));
    CHECK_THROWS(kde({0.0}, 0.0, {0.0}));
}

TEST_CASE("ks_two_sample examples") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> a, b;
    for (int i = 0; i < 1000; ++i) {
        a.push_back(g(rng));
        b.push_back(g(rng) + 1.0);
    }
    const KsResult same = ks_two_sample(a, a);
    CHECK(same.statistic == 0.0);
    CHECK(same.p_value == Approx(1.0));
    const KsResult shifted = ks_two_sample(a, b);
    CHECK(shifted.statistic == Approx(brute_ks(a, b)).epsilon(1e-14));
    CHECK(shifted.statistic == Approx(0.38).epsilon(0.15));
    CHECK(shifted.p_value < 1e-6);
}

TEST_CASE("ks_two_sample: statistic with ties matches brute force") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> u(0, 9);
    for (int r = 0; r < 50; ++r) {
        std::vector<double> a, b;
        for (int i = 0; i < 30; ++i) a.push_back(u(rng));
        for (int i = 0; i < 45; ++i) b.push_back(u(rng) + (r % 3));
        CHECK(ks_two_sample(a, b).statistic == Approx(brute_ks(a, b)).epsilon(1e-14));
    }
}

TEST_CASE("ks_two_sample: calibration under the null") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g(0.0, 1.0);
    int rejected = 0;
    for (int r = 0; r < 100; ++r) {
        std::vector<double> a(2000), b(2000);
        for (auto& v : a) v = g(rng);
        for (auto& v : b) v = g(rng);
        if (ks_two_sample(a, b).p_value < 0.01) ++rejected;
    }
    CHECK(rejected <= 5);
}

TEST_CASE("kolmogorov_q reference values") {
    CHECK(kolmogorov_q(0.0) == 1.0);
    CHECK(kolmogorov_q(1.36) == Approx(0.0494).epsilon(1e-2));
    CHECK(kolmogorov_q(1.63) == Approx(0.0098).epsilon(2e-2));
    CHECK(kolmogorov_q(0.5) == Approx(0.9639452436648751).epsilon(1e-12));
    CHECK(kolmogorov_q(1.0) == Approx(0.26999967167735456).epsilon(1e-12));
    for (double l = 0.05; l < 3.0; l += 0.05) CHECK(kolmogorov_q(l) <= kolmogorov_q(l - 0.05));
}

TEST_CASE("CSV round-trip") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(0.0, 1e3);
    CsvTable t;
    t.header = {"a", "b"};
    std::vector<double> vals;
    for (int i = 0; i < 200; ++i) {
        const double a = g(rng), b = std::ldexp(g(rng), -900);
        vals.push_back(a);
        vals.push_back(b);
        t.rows.push_back({format_double(a), format_double(b)});
    }
    std::stringstream ss;
    write_csv(ss, t);
    const CsvTable back = read_csv(ss);
    REQUIRE(back.header == t.header);
    REQUIRE(back.rows.size() == 200);
    for (std::size_t i = 0; i < 200; ++i) {
        CHECK(back.number(i, back.column("a")) == vals[2 * i]);
        CHECK(back.number(i, back.column("b")) == vals[2 * i + 1]);
    }
    CHECK_THROWS(back.column("missing"));
    std::stringstream crlf("x,y\r\n1,2\r\n");
    CHECK(read_csv(crlf).number(0, 1) == 2.0);
    std::stringstream ragged("x,y\n1\n");
    CHECK_THROWS(read_csv(ragged));
    CsvTable bad;
    bad.header = {"x"};
    bad.rows = {{"a,b"}};
    std::stringstream out;
    CHECK_THROWS(write_csv(out, bad));
    CHECK(parse_double("+1.5") == 1.5);
    CHECK_THROWS(parse_double("1.5x"));
    CHECK_THROWS(parse_double(""));
}

TEST_CASE("table builders") {
    Skeleton s;
    s.times = {0.0, 0.3, 1.0};
    s.values = {0.5, 0.7, 0.1};
    s.exact_flags = {true, false, true};
    const CsvTable sk = skeleton_table({s, s});
    CHECK(sk.header == std::vector<std::string>{"sample_id", "time", "value", "exact_flag"});
    CHECK(sk.rows.size() == 6);
    CHECK(sk.rows[4][0] == "1");
    CHECK(sk.rows[1][3] == "0");
    const CsvTable term = terminal_table({1.0, 2.0}, 42);
    CHECK(term.header == std::vector<std::string>{"sample_id", "value", "stream_seed"});
    CHECK(term.rows[1][2] == std::to_string(stream_seed(42, 1)));
    const CsvTable k = kde_table({{0.0, 0.4}});
    CHECK(k.header == std::vector<std::string>{"x", "density"});
    BenchmarkRow r{"srrs", 2.0, 0.1, 0.01, 0.05};
    CHECK(benchmark_table({r}).rows[0][0] == "srrs");
}

TEST_CASE("benchmark smoke test") {
    BenchmarkRequest req;
    req.method = Method::srrs;
    req.horizons = {0.1};
    req.n = 1;
    req.warmup = 0;
    req.cfg.seed = 3;
    const auto rows = benchmark(drifts::constant(0.4), req);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].method == "srrs");
    CHECK(rows[0].T == 0.1);
    CHECK(rows[0].mean_seconds < 1.0);
    CHECK(rows[0].time_per_T == Approx(rows[0].mean_seconds / 0.1));
    CHECK(parse_method("euler") == Method::euler);
    CHECK(method_name(Method::rrs) == "rrs");
    CHECK_THROWS(parse_method("milstein"));
}

TEST_CASE("SampleBatch validation and JSON") {
    SampleBatch b;
    CHECK_THROWS(b.validate());
    b.values = {1.0, std::nan("")};
    CHECK_THROWS(b.validate());
    b.values = {1.0, 2.0};
    CHECK_NOTHROW(b.validate());
    GrsStats g;
    g.samples = 2;
    g.proposals = 8;
    const auto j = to_json(g);
    CHECK(j.at("acceptance_rate").get<double>() == Approx(0.25));
    SimConfig c;
    c.T = 3.0;
    CHECK(to_json(c).at("T").get<double>() == 3.0);
}

TEST_CASE("output_path honours the environment") {
    const auto dir = std::filesystem::temp_directory_path() / "skewsim_out_test";
    ::setenv(output_dir_env, dir.c_str(), 1);
    CHECK(output_path("x.csv") == dir / "x.csv");
    CHECK(output_path("/abs/x.csv") == std::filesystem::path("/abs/x.csv"));
    ::unsetenv(output_dir_env);
    CHECK(output_path("x.csv") == std::filesystem::path("x.csv"));
}
