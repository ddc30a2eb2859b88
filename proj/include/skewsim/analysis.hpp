#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "skewsim/exact_sim.hpp"

namespace skewsim {

struct SampleBatch {
    std::vector<double> values;
    std::string method;
    nlohmann::json config;
    double seconds_per_sample = 0.0;

    // Throws when empty or when a value is not finite.
    void validate() const;
};

// Gaussian kernel density estimate evaluated on `grid`.
std::vector<std::pair<double, double>> kde(const std::vector<double>& values, double bandwidth,
                                           const std::vector<double>& grid);
inline constexpr double default_bandwidth = 0.1;
// Uniform grid covering the sample range widened by `pad_bandwidths` bandwidths.
std::vector<double> kde_grid(const std::vector<double>& values, double bandwidth, double step,
                             double pad_bandwidths = 6.0);
// Points lo, lo + step, ... up to hi (inclusive within step / 2).
std::vector<double> linear_grid(double lo, double hi, double step);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

// Q_KS(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);
KsResult ks_one_sample(std::vector<double> a, const std::function<double(double)>& cdf);

struct BenchmarkRow {
    std::string method;
    double T = 0.0;
    double mean_seconds = 0.0;
    double sd_seconds = 0.0;
    double time_per_T = 0.0;
};

struct BenchmarkRequest {
    Method method = Method::srrs;
    double euler_step = 1e-2;
    std::vector<double> horizons{1.0, 2.0, 4.0};
    std::size_t n = 100;
    std::size_t warmup = 10;
    double x0 = 0.0;
    SimConfig cfg;
};

std::string method_name(Method m);
Method parse_method(const std::string& s);

// Single-threaded timing of terminal samples; one row per horizon.
std::vector<BenchmarkRow> benchmark(const DriftSpec& spec, const BenchmarkRequest& req);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;
    double number(std::size_t row, std::size_t col) const;
};

// Shortest representation that parses back to the same double.
std::string format_double(double v);
double parse_double(const std::string& s);

void write_csv(const std::filesystem::path& path, const CsvTable& table);
void write_csv(std::ostream& os, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);
CsvTable read_csv(std::istream& is);

CsvTable skeleton_table(const std::vector<Skeleton>& paths);
CsvTable terminal_table(const std::vector<double>& values, std::uint64_t seed);
CsvTable kde_table(const std::vector<std::pair<double, double>>& curve);
CsvTable benchmark_table(const std::vector<BenchmarkRow>& rows);

nlohmann::json to_json(const GrsStats& s);
nlohmann::json to_json(const SimStats& s);
nlohmann::json to_json(const SimConfig& c);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

// Resolves a relative output name against SKEWSIM_OUTPUT_DIR when it is set.
std::filesystem::path output_path(const std::string& name);
inline constexpr const char* output_dir_env = "SKEWSIM_OUTPUT_DIR";

}  // namespace skewsim
