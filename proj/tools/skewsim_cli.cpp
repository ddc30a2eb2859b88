#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skewsim/analysis.hpp"
#include "skewsim/drift_config.hpp"
#include "skewsim/exact_sim.hpp"
#include "skewsim/verify.hpp"

using namespace skewsim;

namespace {

struct Globals {
    std::string drift = "b1";
    std::uint64_t seed = 7;
    double T = 1.0;
    double T_el = 0.55;
    double delta = 0.75;
    double x0 = 0.5;
    double tol = 0.0;
    int n_cap = 64;
    unsigned threads = 0;
    std::string output;
    CLI::Option* tol_opt = nullptr;
    CLI::Option* T_el_opt = nullptr;
    CLI::Option* delta_opt = nullptr;
};

SimConfig sim_config(const Globals& g) {
    SimConfig cfg;
    cfg.T = g.T;
    cfg.T_el = g.T_el;
    cfg.delta = g.delta;
    cfg.seed = g.seed;
    cfg.n_cap = g.n_cap;
    if (g.tol_opt->count()) cfg.tol = g.tol;
    return cfg;
}

// Writes to the output path (with a JSON sidecar) or to stdout.
void emit(const Globals& g, const CsvTable& table, const nlohmann::json& meta) {
    if (g.output.empty()) {
        write_csv(std::cout, table);
        if (!meta.is_null()) std::cerr << meta.dump(2) << '\n';
        return;
    }
    const auto path = output_path(g.output);
    write_csv(path, table);
    if (!meta.is_null()) write_json(path.string() + ".json", meta);
    std::cerr << "wrote " << path.string() << '\n';
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(item));
    return out;
}

std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(parse_double(item));
    if (parts.size() != 3) throw std::invalid_argument("grid must be lo:hi:step, got '" + s + "'");
    return linear_grid(parts[0], parts[1], parts[2]);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"skewsim: exact simulation of diffusions with a two-jump drift"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--drift", g.drift, "b1, b2, constant:<mu> or a drift config file")->capture_default_str();
    app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
    app.add_option("--T", g.T, "Time horizon")->capture_default_str();
    g.T_el_opt = app.add_option("--T-el", g.T_el, "Split length for srrs")->capture_default_str();
    g.delta_opt = app.add_option("--delta", g.delta, "Instrumental variance parameter in (0, 1)")->capture_default_str();
    app.add_option("--x0", g.x0, "Starting point")->capture_default_str();
    g.tol_opt = app.add_option("--tol", g.tol,
                               "Tolerance: remainder goal when sampling, series tolerance for density, "
                               "oracle slack for verify");
    app.add_option("--n-cap", g.n_cap, "Maximum number of series terms")->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads (0: all cores)")->capture_default_str();
    app.add_option("-o,--output", g.output, "Output CSV path (relative paths honour SKEWSIM_OUTPUT_DIR)");
    app.fallthrough();

    // density
    auto* density = app.add_subcommand("density", "Evaluate v, p (and optionally q) on a y grid");
    std::string theta_s, beta_s, ygrid = "-2:3:0.05", bridge_s;
    double z = 1.0, t = 0.55, x = 0.5, mu = 0.0;
    auto* theta_opt = density->add_option("--theta", theta_s, "theta1,theta2 (default: from the drift)");
    auto* beta_opt = density->add_option("--beta", beta_s, "beta1,beta2 (skew BM with constant drift --mu)");
    theta_opt->excludes(beta_opt);
    density->add_option("--mu", mu, "Constant drift for --beta");
    auto* z_opt = density->add_option("--z", z, "Barrier gap (barriers at 0 and z)");
    density->add_option("--t", t, "Time")->capture_default_str();
    density->add_option("--x", x, "Starting point")->capture_default_str();
    density->add_option("--y-grid", ygrid, "lo:hi:step")->capture_default_str();
    density->add_option("--bridge", bridge_s, "T2,x2: add the bridge density q(t, T2, x, x2, y)");

    // sample
    auto* sample = app.add_subcommand("sample", "Terminal values X_T");
    std::string method_s = "srrs";
    std::size_t n = 1000;
    double step = 1e-3, bandwidth = default_bandwidth;
    std::string kde_out;
    sample->add_option("--method", method_s, "srrs, rrs or euler")->capture_default_str();
    sample->add_option("--n", n, "Number of samples")->capture_default_str();
    sample->add_option("--step", step, "Euler step")->capture_default_str();
    sample->add_option("--kde", kde_out, "Also write a kernel density estimate to this CSV path");
    sample->add_option("--bandwidth", bandwidth, "KDE bandwidth")->capture_default_str();

    // path
    auto* path = app.add_subcommand("path", "Exact skeletons refined by bridge sampling");
    double fill_step = 0.0;
    std::size_t n_paths = 1;
    path->add_option("--n", n_paths, "Number of paths")->capture_default_str();
    path->add_option("--fill-step", fill_step, "Refine the skeleton on this time grid (0: skeleton only)");

    // benchmark
    auto* bench = app.add_subcommand("benchmark", "Wall-clock cost per terminal sample");
    std::string horizons_s = "1,2,4";
    std::size_t bench_n = 100;
    bench->add_option("--method", method_s, "srrs, rrs or euler")->capture_default_str();
    bench->add_option("--horizons", horizons_s, "Comma-separated horizons")->capture_default_str();
    bench->add_option("--n", bench_n, "Timed samples per horizon")->capture_default_str();
    bench->add_option("--step", step, "Euler step")->capture_default_str();

    // verify
    auto* verify = app.add_subcommand("verify", "Run the verification suites");
    std::vector<std::string> suites_sel;
    int runs = 5;
    verify->add_option("--suite", suites_sel, "Suite name (repeatable): " + [] {
        std::string s;
        for (const auto& n : suite_names()) s += (s.empty() ? "" : ", ") + n;
        return s;
    }());
    verify->add_option("--runs", runs, "Independent runs for KS votes")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*density) {
            std::vector<double> ys = parse_grid(ygrid);
            CsvTable table{{"t", "x", "y", "v", "p", "n_terms", "remainder_bound"}, {}};
            const double series_tol = g.tol_opt->count() ? g.tol : 1e-12;
            std::vector<double> bridge;
            if (!bridge_s.empty()) {
                bridge = parse_list(bridge_s);
                if (bridge.size() != 2) throw std::invalid_argument("--bridge expects T2,x2");
                table.header.push_back("q");
            }
            auto row = [&](double y, const TruncatedValue& v, double p) {
                return std::vector<std::string>{format_double(t), format_double(x), format_double(y),
                                                format_double(v.value), format_double(p), std::to_string(v.n_terms),
                                                format_double(v.remainder_bound)};
            };
            if (beta_opt->count()) {
                const auto b = parse_list(beta_s);
                if (b.size() != 2) throw std::invalid_argument("--beta expects beta1,beta2");
                const BetaParams bp = BetaParams::make(b[0], b[1], mu, z);
                for (double y : ys) {
                    const auto v = v_beta(t, x, y, bp, series_tol, g.n_cap);
                    table.rows.push_back(row(y, v, gaussian_kernel(t, x, y, mu) * v.value));
                    if (!bridge.empty()) throw std::invalid_argument("--bridge is available in theta mode only");
                }
            } else {
                ThetaParams th;
                if (theta_opt->count()) {
                    const auto v = parse_list(theta_s);
                    if (v.size() != 2) throw std::invalid_argument("--theta expects theta1,theta2");
                    th = ThetaParams::make(v[0], v[1], z);
                } else {
                    const DriftSpec spec = resolve_drift(g.drift);
                    th = theta_params(spec);
                    if (z_opt->count()) th = ThetaParams::make(th.theta1, th.theta2, z);
                }
                for (double y : ys) {
                    const auto v = v_theta(t, x, y, th, series_tol, g.n_cap);
                    auto r = row(y, v, gaussian_kernel(t, x, y) * v.value);
                    if (!bridge.empty()) r.push_back(format_double(bridge_density_q(t, bridge[0], x, bridge[1], y, th)));
                    table.rows.push_back(std::move(r));
                }
            }
            emit(g, table, nullptr);
            return 0;
        }

        const DriftSpec spec = resolve_drift(g.drift);

        if (*sample) {
            BatchRequest req;
            req.method = parse_method(method_s);
            req.x0 = g.x0;
            req.cfg = sim_config(g);
            req.euler_step = step;
            req.n = n;
            req.threads = g.threads;
            SimStats stats;
            const auto start = std::chrono::steady_clock::now();
            const auto values = sample_terminal_batch(spec, req, &stats);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            SampleBatch batch{values, method_s, to_json(req.cfg), secs / static_cast<double>(n)};
            batch.validate();
            nlohmann::json meta{{"drift", g.drift},
                                {"method", method_s},
                                {"x0", g.x0},
                                {"n", n},
                                {"config", batch.config},
                                {"wall_seconds", secs},
                                {"seconds_per_sample", batch.seconds_per_sample},
                                {"effective_T_el", effective_split(spec, req.cfg)},
                                {"diagnostics", to_json(stats)}};
            if (req.method == Method::euler) meta["euler_step"] = step;
            emit(g, terminal_table(values, req.cfg.seed), meta);
            if (!kde_out.empty()) {
                const auto curve = kde(values, bandwidth, kde_grid(values, bandwidth, bandwidth / 10.0));
                const auto kpath = output_path(kde_out);
                write_csv(kpath, kde_table(curve));
                std::cerr << "wrote " << kpath.string() << '\n';
            }
            return 0;
        }

        if (*path) {
            const SimConfig cfg = sim_config(g);
            const ThetaParams th = theta_params(spec);
            std::vector<Skeleton> paths;
            SimStats stats;
            for (std::size_t i = 0; i < n_paths; ++i) {
                Rng rng = make_stream(cfg.seed, i);
                Skeleton s = srrs(spec, g.x0, 0.0, cfg.T, cfg, rng, &stats);
                if (fill_step > 0.0) s = fill_path(s, linear_grid(0.0, cfg.T, fill_step), th, spec.z1(), rng);
                paths.push_back(std::move(s));
            }
            nlohmann::json meta{{"drift", g.drift}, {"x0", g.x0},           {"paths", n_paths},
                                {"fill_step", fill_step}, {"config", to_json(cfg)}, {"diagnostics", to_json(stats)}};
            emit(g, skeleton_table(paths), meta);
            return 0;
        }

        if (*bench) {
            BenchmarkRequest req;
            req.method = parse_method(method_s);
            req.euler_step = step;
            req.horizons = parse_list(horizons_s);
            req.n = bench_n;
            req.x0 = g.x0;
            req.cfg = sim_config(g);
            const auto rows = benchmark(spec, req);
            emit(g, benchmark_table(rows), nlohmann::json{{"drift", g.drift}, {"config", to_json(req.cfg)}});
            return 0;
        }

        if (*verify) {
            VerifyOptions opt;
            opt.seed = g.seed;
            opt.threads = g.threads;
            opt.ks_runs = runs;
            if (g.tol_opt->count()) opt.oracle_slack = g.tol;
            if (suites_sel.empty()) suites_sel.push_back("all");
            std::vector<std::string> ids;
            for (const auto& s : suites_sel)
                for (const auto& id : suite_checks(s))
                    if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
            int failed = 0;
            for (const auto& id : ids) {
                const CheckResult r = run_check(id, opt);
                std::cout << format_check(r) << std::endl;
                if (!r.pass) ++failed;
            }
            std::cout << (failed ? "FAILED " : "OK ") << (ids.size() - failed) << "/" << ids.size() << " checks passed"
                      << std::endl;
            return failed ? 1 : 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
