#include "skewsim/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace skewsim {

void SampleBatch::validate() const {
    if (values.empty()) throw std::invalid_argument("SampleBatch: empty batch");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("SampleBatch: non-finite value");
}

std::vector<std::pair<double, double>> kde(const std::vector<double>& values, double bandwidth,
                                           const std::vector<double>& grid) {
    if (values.empty()) throw std::invalid_argument("kde: empty batch");
    if (!(bandwidth > 0.0)) throw std::invalid_argument("kde: bandwidth must be positive");
    const double norm = 1.0 / (static_cast<double>(values.size()) * bandwidth * std::sqrt(2.0 * std::numbers::pi));
    std::vector<std::pair<double, double>> out;
    out.reserve(grid.size());
    for (double x : grid) {
        double s = 0.0;
        for (double v : values) {
            const double u = (x - v) / bandwidth;
            s += std::exp(-0.5 * u * u);
        }
        out.emplace_back(x, s * norm);
    }
    return out;
}

std::vector<double> linear_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi >= lo)) throw std::invalid_argument("linear_grid: need lo <= hi and step > 0");
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5));
    std::vector<double> g(n + 1);
    for (std::size_t i = 0; i <= n; ++i) g[i] = lo + step * static_cast<double>(i);
    return g;
}

std::vector<double> kde_grid(const std::vector<double>& values, double bandwidth, double step,
                             double pad_bandwidths) {
    if (values.empty()) throw std::invalid_argument("kde_grid: empty batch");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return linear_grid(*lo - pad_bandwidths * bandwidth, *hi + pad_bandwidths * bandwidth, step);
}

double kolmogorov_q(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 1.18) {
        // Jacobi theta form, fast for small lambda.
        const double c = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
        double s = 0.0;
        for (int k = 1; k <= 50; ++k) {
            const double term = std::exp(-(2.0 * k - 1.0) * (2.0 * k - 1.0) * c);
            s += term;
            if (term < 1e-18 * s) break;
        }
        return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * s, 0.0, 1.0);
    }
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        s += (k % 2 ? term : -term);
        if (term < 1e-300) break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

namespace {

double stephens_p(double d, double ne) {
    const double r = std::sqrt(ne);
    return kolmogorov_q((r + 0.12 + 0.11 / r) * d);
}

}  // namespace

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return {d, stephens_p(d, na * nb / (na + nb))};
}

KsResult ks_one_sample(std::vector<double> a, const std::function<double(double)>& cdf) {
    if (a.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
    std::sort(a.begin(), a.end());
    const double n = static_cast<double>(a.size());
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double f = cdf(a[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return {d, stephens_p(d, n)};
}

std::string method_name(Method m) {
    switch (m) {
        case Method::rrs: return "rrs";
        case Method::srrs: return "srrs";
        case Method::euler: return "euler";
    }
    return "unknown";
}

Method parse_method(const std::string& s) {
    if (s == "rrs") return Method::rrs;
    if (s == "srrs") return Method::srrs;
    if (s == "euler") return Method::euler;
    throw std::invalid_argument("unknown method '" + s + "' (expected rrs, srrs or euler)");
}

std::vector<BenchmarkRow> benchmark(const DriftSpec& spec, const BenchmarkRequest& req) {
    if (req.n < 1) throw std::invalid_argument("benchmark: n must be at least 1");
    using clock = std::chrono::steady_clock;
    std::vector<BenchmarkRow> rows;
    for (double T : req.horizons) {
        if (!(T > 0.0)) throw std::invalid_argument("benchmark: horizons must be positive");
        SimConfig cfg = req.cfg;
        cfg.T = T;
        auto one = [&](std::uint64_t index) {
            Rng rng = make_stream(cfg.seed, index);
            switch (req.method) {
                case Method::rrs: return rrs(spec, req.x0, 0.0, T, cfg, rng).terminal();
                case Method::srrs: return srrs(spec, req.x0, 0.0, T, cfg, rng).terminal();
                case Method::euler: return euler_maruyama(spec, req.x0, T, std::min(req.euler_step, T), rng);
            }
            return 0.0;
        };
        volatile double sink = 0.0;
        for (std::size_t i = 0; i < req.warmup; ++i) sink = sink + one(i);
        std::vector<double> secs(req.n);
        for (std::size_t i = 0; i < req.n; ++i) {
            const auto start = clock::now();
            sink = sink + one(req.warmup + i);
            secs[i] = std::chrono::duration<double>(clock::now() - start).count();
        }
        double mean = 0.0;
        for (double s : secs) mean += s;
        mean /= static_cast<double>(req.n);
        double var = 0.0;
        for (double s : secs) var += (s - mean) * (s - mean);
        const double sd = req.n > 1 ? std::sqrt(var / static_cast<double>(req.n - 1)) : 0.0;
        std::string name = method_name(req.method);
        if (req.method == Method::euler) name += "(" + format_double(req.euler_step) + ")";
        rows.push_back({name, T, mean, sd, mean / T});
    }
    return rows;
}

std::size_t CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::out_of_range("CsvTable: no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

double CsvTable::number(std::size_t row, std::size_t col) const { return parse_double(rows.at(row).at(col)); }

std::string format_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    const auto r = std::from_chars(first, last, v);
    if (r.ec != std::errc() || r.ptr != last) throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

void write_csv(std::ostream& os, const CsvTable& table) {
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (cells[i].find_first_of(",\"\n") != std::string::npos)
                throw std::invalid_argument("write_csv: cells may not contain commas, quotes or newlines");
            os << (i ? "," : "") << cells[i];
        }
        os << '\n';
    };
    line(table.header);
    for (const auto& r : table.rows) {
        if (r.size() != table.header.size()) throw std::invalid_argument("write_csv: ragged row");
        line(r);
    }
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_csv: cannot open " + path.string());
    write_csv(os, table);
}

CsvTable read_csv(std::istream& is) {
    CsvTable t;
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!s.empty() && s.back() == ',') cells.emplace_back();
        return cells;
    };
    if (!std::getline(is, line)) throw std::runtime_error("read_csv: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    t.header = split(line);
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != t.header.size()) throw std::runtime_error("read_csv: ragged row");
        t.rows.push_back(std::move(cells));
    }
    return t;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_csv: cannot open " + path.string());
    return read_csv(is);
}

CsvTable skeleton_table(const std::vector<Skeleton>& paths) {
    CsvTable t{{"sample_id", "time", "value", "exact_flag"}, {}};
    for (std::size_t id = 0; id < paths.size(); ++id) {
        const auto& p = paths[id];
        for (std::size_t i = 0; i < p.size(); ++i)
            t.rows.push_back({std::to_string(id), format_double(p.times[i]), format_double(p.values[i]),
                              p.exact_flags[i] ? "1" : "0"});
    }
    return t;
}

CsvTable terminal_table(const std::vector<double>& values, std::uint64_t seed) {
    CsvTable t{{"sample_id", "value", "stream_seed"}, {}};
    t.rows.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        t.rows.push_back({std::to_string(i), format_double(values[i]), std::to_string(stream_seed(seed, i))});
    return t;
}

CsvTable kde_table(const std::vector<std::pair<double, double>>& curve) {
    CsvTable t{{"x", "density"}, {}};
    for (const auto& [x, d] : curve) t.rows.push_back({format_double(x), format_double(d)});
    return t;
}

CsvTable benchmark_table(const std::vector<BenchmarkRow>& rows) {
    CsvTable t{{"method", "T", "mean_seconds", "sd_seconds", "time_per_T"}, {}};
    for (const auto& r : rows)
        t.rows.push_back({r.method, format_double(r.T), format_double(r.mean_seconds), format_double(r.sd_seconds),
                          format_double(r.time_per_T)});
    return t;
}

nlohmann::json to_json(const GrsStats& s) {
    return {{"samples", s.samples},
            {"proposals", s.proposals},
            {"acceptance_rate", s.acceptance_rate()},
            {"mean_proposals", s.mean_proposals()},
            {"mean_terms", s.mean_terms()},
            {"mean_max_terms", s.mean_max_terms()},
            {"inexact", s.inexact}};
}

nlohmann::json to_json(const SimStats& s) {
    return {{"skeletons", s.skeletons},
            {"path_restarts", s.path_restarts},
            {"mean_restarts", s.mean_restarts()},
            {"mean_endpoint_proposals", s.mean_endpoint_proposals()},
            {"field_points", s.field_points},
            {"endpoint", to_json(s.endpoint)},
            {"bridge", to_json(s.bridge)}};
}

nlohmann::json to_json(const SimConfig& c) {
    return {{"T", c.T},
            {"T_el", c.T_el},
            {"delta", c.delta},
            {"seed", c.seed},
            {"n_cap", c.n_cap},
            {"tol", c.tol},
            {"progressive_poisson", c.progressive_poisson},
            {"tighten_mb", c.tighten_mb}};
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_json: cannot open " + path.string());
    os << j.dump(2) << '\n';
}

std::filesystem::path output_path(const std::string& name) {
    std::filesystem::path p(name);
    if (p.is_absolute()) return p;
    if (const char* dir = std::getenv(output_dir_env); dir && *dir) return std::filesystem::path(dir) / p;
    return p;
}

}  // namespace skewsim
