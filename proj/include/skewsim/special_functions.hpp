#pragma once

#include <vector>

namespace skewsim {

// Gaussian tail Phi^c(w).
double normal_ccdf(double w);

// Scaled complementary error function exp(x^2) * erfc(x).
double erfcx(double x);

// Mill's ratio sqrt(2 pi) exp(w^2/2) Phi^c(w).
double mills_ratio(double w);

// Tabulated combinatorics. Indices beyond the table range throw std::out_of_range.
double factorial(int n);
double double_factorial(int n);
double binomial(int n, int k);

// Family J_q(omega, tau) = exp(-omega^2/2 + c^2/2) * int_{-inf}^{-c} u^q exp(-u^2/2) du
// with c = omega + tau. Values are held in scaled form exp(omega^2/2) * J_q so
// that large omega does not underflow; value(q) restores the Gaussian factor.
class JqCache {
public:
    JqCache(double omega, double tau, int q_max = 0);

    double omega() const noexcept { return omega_; }
    double tau() const noexcept { return tau_; }

    double scaled(int q);
    double value(int q);
    const std::vector<double>& scaled_values() const noexcept { return values_; }

private:
    void extend(int q_max);

    double omega_;
    double tau_;
    double c_;
    std::vector<double> values_;
};

double jq(int q, double omega, double tau);

// S_{L,n}(omega, a, tau): double binomial sum over J_{n'+L'}.
double s_sum(int L, int n, double omega, double a, double tau);

// G_{K,m,n}(omega, a, tau): Hermite-weighted sum over S_{K+m-2l, n}.
double g_sum(int K, int m, int n, double omega, double a, double tau);

// Variants multiplied by exp(omega^2/2), reusing a caller-owned cache.
double s_sum_scaled(int L, int n, double a, JqCache& cache);
double g_sum_scaled(int K, int m, int n, double a, JqCache& cache);

// Coefficients of He_N: He_N(x) = sum_l hermite_coeff(N, l) x^{N-2l}.
double hermite_coeff(int N, int l);

// f_k(omega, a1, a2); zero for omega >= 0. Requires a1, a2 > 0, a1 != a2, k >= 1.
double fourier_kernel_f(int k, double omega, double a1, double a2);

}  // namespace skewsim
