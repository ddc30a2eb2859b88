#include "skewsim/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace skewsim {

namespace {

constexpr int table_size = 257;
// 171! overflows a double.
constexpr int factorial_limit = 170;

struct Tables {
    std::array<double, table_size> fact{};
    std::array<double, table_size> dfact{};
    std::vector<double> binom;  // row-major (n, k), n, k < table_size

    Tables() : binom(static_cast<std::size_t>(table_size) * table_size, 0.0) {
        fact[0] = 1.0;
        for (int i = 1; i <= factorial_limit; ++i) fact[i] = fact[i - 1] * i;
        dfact[0] = 1.0;
        dfact[1] = 1.0;
        for (int i = 2; i < table_size; ++i) dfact[i] = dfact[i - 2] * i;
        for (int n = 0; n < table_size; ++n) {
            binom[idx(n, 0)] = 1.0;
            for (int k = 1; k <= n; ++k)
                binom[idx(n, k)] = binom[idx(n - 1, k - 1)] + (k < n ? binom[idx(n - 1, k)] : 0.0);
        }
    }

    static std::size_t idx(int n, int k) { return static_cast<std::size_t>(n) * table_size + k; }
};

const Tables& tables() {
    static const Tables t;
    return t;
}

void check_index(int n, int limit, const char* what) {
    if (n < 0 || n > limit)
        throw std::out_of_range(std::string(what) + ": index " + std::to_string(n) + " outside table");
}

double erfcx_continued_fraction(double x) {
    // erfc(x) e^{x^2} sqrt(pi) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), modified Lentz.
    constexpr double tiny = 1e-300;
    double f = x;
    double C = f;
    double D = 0.0;
    for (int n = 1; n < 500; ++n) {
        const double a = 0.5 * n;
        D = x + a * D;
        if (D == 0.0) D = tiny;
        C = x + a / C;
        if (C == 0.0) C = tiny;
        D = 1.0 / D;
        const double delta = C * D;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return 1.0 / (f * std::sqrt(std::numbers::pi));
}

}  // namespace

double normal_ccdf(double w) { return 0.5 * std::erfc(w / std::numbers::sqrt2); }

double erfcx(double x) {
    if (x < 0.0) return 2.0 * std::exp(x * x) - erfcx(-x);
    if (x < 4.0) return std::exp(x * x) * std::erfc(x);
    return erfcx_continued_fraction(x);
}

double mills_ratio(double w) {
    return std::sqrt(std::numbers::pi / 2.0) * erfcx(w / std::numbers::sqrt2);
}

double factorial(int n) {
    check_index(n, factorial_limit, "factorial");
    return tables().fact[n];
}

double double_factorial(int n) {
    if (n == -1) return 1.0;
    check_index(n, table_size - 1, "double_factorial");
    return tables().dfact[n];
}

double binomial(int n, int k) {
    check_index(n, table_size - 1, "binomial");
    if (k < 0 || k > n) return 0.0;
    return tables().binom[Tables::idx(n, k)];
}

double hermite_coeff(int N, int l) {
    if (l < 0 || 2 * l > N) return 0.0;
    const double c = binomial(N, 2 * l) * double_factorial(2 * l - 1);
    return (l % 2 == 0) ? c : -c;
}

JqCache::JqCache(double omega, double tau, int q_max) : omega_(omega), tau_(tau), c_(omega + tau) {
    values_.push_back(mills_ratio(c_));
    values_.push_back(-1.0);
    extend(q_max);
}

void JqCache::extend(int q_max) {
    check_index(q_max, table_size - 1, "jq");
    const double J0 = values_[0];
    const double J1 = values_[1];
    for (int q = static_cast<int>(values_.size()); q <= q_max; ++q) {
        double acc = 0.0;
        if (q % 2 == 0) {
            // J_q = (q-1)!! J_0 - J_1 sum_k c^{q-2k-1} (q-1)!!/(q-2k-1)!!
            for (int k = 0; k < q / 2; ++k)
                acc += std::pow(c_, q - 2 * k - 1) * double_factorial(q - 1) / double_factorial(q - 2 * k - 1);
            values_.push_back(double_factorial(q - 1) * J0 - J1 * acc);
        } else {
            // J_q = J_1 sum_k c^{q-1-2k} (q-1)!!/(q-1-2k)!!
            for (int k = 0; k <= (q - 1) / 2; ++k)
                acc += std::pow(c_, q - 1 - 2 * k) * double_factorial(q - 1) / double_factorial(q - 1 - 2 * k);
            values_.push_back(J1 * acc);
        }
    }
}

double JqCache::scaled(int q) {
    if (q < 0) throw std::out_of_range("jq: negative index");
    if (q >= static_cast<int>(values_.size())) extend(q);
    return values_[q];
}

double JqCache::value(int q) { return std::exp(-0.5 * omega_ * omega_) * scaled(q); }

double jq(int q, double omega, double tau) {
    JqCache cache(omega, tau, q);
    return cache.value(q);
}

double s_sum_scaled(int L, int n, double a, JqCache& cache) {
    const double c = cache.omega() + cache.tau();
    const double at = a + cache.tau();
    double acc = 0.0;
    for (int np = 0; np <= n; ++np) {
        const double outer = binomial(n, np) * std::pow(c, n - np);
        for (int lp = 0; lp <= L; ++lp)
            acc += outer * binomial(L, lp) * std::pow(at, L - lp) * cache.scaled(np + lp);
    }
    return acc;
}

double g_sum_scaled(int K, int m, int n, double a, JqCache& cache) {
    const int N = K + m;
    double acc = 0.0;
    for (int l = 0; 2 * l <= N; ++l) acc += hermite_coeff(N, l) * s_sum_scaled(N - 2 * l, n, a, cache);
    return (K % 2 == 0) ? acc : -acc;
}

double s_sum(int L, int n, double omega, double a, double tau) {
    JqCache cache(omega, tau, L + n);
    return std::exp(-0.5 * omega * omega) * s_sum_scaled(L, n, a, cache);
}

double g_sum(int K, int m, int n, double omega, double a, double tau) {
    JqCache cache(omega, tau, K + m + n);
    return std::exp(-0.5 * omega * omega) * g_sum_scaled(K, m, n, a, cache);
}

double fourier_kernel_f(int k, double omega, double a1, double a2) {
    if (k < 1) throw std::invalid_argument("fourier_kernel_f: k must be >= 1");
    if (!(a1 > 0.0 && a2 > 0.0)) throw std::invalid_argument("fourier_kernel_f: a1, a2 must be positive");
    if (a1 == a2) throw std::invalid_argument("fourier_kernel_f: a1 == a2, use the equal-parameter branch");
    if (omega >= 0.0) return 0.0;
    const int kk = k - 1;
    const double d = a1 - a2;
    // (d omega)^n e^{a omega} in log space so that huge |omega| gives 0, not inf * 0.
    const double log_dw = std::log(std::abs(d * omega));
    const double sign_dw = d * omega < 0.0 ? -1.0 : 1.0;
    double acc = 0.0;
    for (int n = 0; n <= kk; ++n) {
        const double w = factorial(2 * kk - n) / (factorial(n) * factorial(kk - n));
        const double g1 = std::exp(a1 * omega + n * log_dw);
        const double g2 = std::exp(a2 * omega + n * log_dw);
        const double bracket = (n % 2 == 0) ? g2 - g1 : g2 + g1;
        acc += w * (n % 2 ? sign_dw : 1.0) * bracket;
    }
    return std::sqrt(2.0 * std::numbers::pi) / (std::pow(d, 2 * kk + 1) * factorial(kk)) * acc;
}

}  // namespace skewsim
