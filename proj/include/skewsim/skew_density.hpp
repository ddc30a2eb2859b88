#pragma once

#include <array>
#include <optional>
#include <vector>

#include "skewsim/drift_model.hpp"

namespace skewsim {

// Limit-series parameters. Barriers sit at 0 and z.
struct ThetaParams {
    double theta1 = 0.0;
    double theta2 = 0.0;
    double z = 1.0;
    double a_shift = 1.0;

    static ThetaParams make(double theta1, double theta2, double z, std::optional<double> a_shift = {});
    static double default_shift(double theta1, double theta2);
    void validate() const;
};

// Skew Brownian motion with constant drift mu and skewness beta1, beta2.
struct BetaParams {
    double beta1 = 0.0;
    double beta2 = 0.0;
    double mu = 0.0;
    double z = 1.0;
    double a_shift = 1.0;

    static BetaParams make(double beta1, double beta2, double mu, double z, std::optional<double> a_shift = {});
    static double default_shift(double beta1, double beta2, double mu);
    void validate() const;
};

struct TruncatedValue {
    double value = 0.0;
    int n_terms = 0;
    double remainder_bound = 0.0;
    bool converged = true;
    // Set when |theta1 - theta2| sqrt(t) fell below the branch threshold and the
    // equal-parameter formula was used with the mean value.
    bool branch_fallback = false;
};

inline constexpr double branch_threshold = 1e-4;
inline constexpr int default_n_cap = 64;

std::array<double, 4> geometric_terms(double x, double y, double z);
double omega_jk(int j, int k, double x, double y, double z, double t);

// Coefficients (C_{j,0}, C_{j,1}, C_{j,2}) of sum_h C_{j,2-h} (w - a)^h.
std::array<double, 3> coeffs_theta(int j, double y, double z, double t, const ThetaParams& theta);
std::array<double, 3> coeffs_beta(int j, double y, const BetaParams& beta);

// Lazily evaluated series for v^{(theta1,theta2)}(t, x, y); terms are cached.
class ThetaSeries {
public:
    ThetaSeries(double t, double x, double y, const ThetaParams& theta);

    double term(int k);
    double partial_sum(int N);
    // Bound on |v - partial_sum(N)|.
    double remainder_bound(int N) const;
    double bound_constant() const noexcept { return C_; }
    bool branch_fallback() const noexcept { return fallback_; }
    bool terminates() const noexcept { return single_term_; }

private:
    double t_;
    double gap_;  // 2 z^2 / t
    double C_;
    bool fallback_ = false;
    bool single_term_ = false;
    double th1_, th2_, a_, d_;
    double zs_;
    std::array<double, 4> aj_{};
    std::array<std::array<double, 3>, 4> coef_{};
    std::vector<double> terms_;
    std::vector<double> sums_;
};

class BetaSeries {
public:
    BetaSeries(double t, double x, double y, const BetaParams& beta);

    double term(int k);
    double partial_sum(int N);
    double remainder_bound(int N) const;
    bool branch_fallback() const noexcept { return fallback_; }
    bool terminates() const noexcept { return single_term_; }

private:
    double gap_;
    bool fallback_ = false;
    bool single_term_ = false;
    bool no_barrier_ = false;
    double b1_, b2_, prod_, a_, mu_, d_, zs_;
    std::array<double, 4> aj_{};
    std::array<std::array<double, 3>, 4> coef_{};
    std::vector<double> terms_;
    std::vector<double> sums_;
};

TruncatedValue v_theta(double t, double x, double y, const ThetaParams& theta, double tol = 1e-12,
                       int n_cap = default_n_cap);
// Partial sum with exactly N + 1 terms.
TruncatedValue v_theta_terms(double t, double x, double y, const ThetaParams& theta, int N);

TruncatedValue v_beta(double t, double x, double y, const BetaParams& beta, double tol = 1e-12,
                      int n_cap = default_n_cap);
TruncatedValue v_beta_terms(double t, double x, double y, const BetaParams& beta, int N);

struct ContourOptions {
    // Integrate each geometric term on the vertical line through its saddle point;
    // when false every term uses the abscissa a_shift.
    bool saddle = true;
    double tol = 1e-10;
};

double contour_oracle(double t, double x, double y, const BetaParams& beta, const ContourOptions& opt = {});
double contour_oracle(double t, double x, double y, const ThetaParams& theta, const ContourOptions& opt = {});

double bound_C(const ThetaParams& theta, double t);

// Renormalised series taking values in [0, 1] up to its remainder.
TruncatedValue v_bar(double t, double x, double y, const ThetaParams& theta, double tol = 1e-12,
                     int n_cap = default_n_cap);
double v_bar_factor(const ThetaParams& theta, double t);
// Remainder bound of the renormalised series after N + 1 terms.
double v_bar_remainder(const ThetaParams& theta, double t, int N);

double gaussian_kernel(double t, double x, double y, double mu = 0.0);

double transition_density_p(double t, double x, double y, const ThetaParams& theta);
double transition_density_p(double t, double x, double y, const BetaParams& beta);
double bridge_density_q(double t, double T, double x1, double x2, double y, const ThetaParams& theta);

ThetaParams theta_params(const DriftSpec& spec);
BetaParams params_from_kappa(const DriftSpec& spec, double kappa);

}  // namespace skewsim
