#include "skewsim/skew_density.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "skewsim/special_functions.hpp"

namespace skewsim {

namespace {

using cplx = std::complex<double>;

// Below this exponent a term is smaller than the smallest normal double.
constexpr double underflow_exponent = -700.0;

// Neumaier summation.
class Accumulator {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double sign_of_indicator(bool b) { return b ? 1.0 : -1.0; }

// Raw theta coefficients (c_{j,0}, c_{j,1}, c_{j,2}) of c_j(w) = c_{j,0} w^2 + c_{j,1} w + c_{j,2},
// with th1, th2 already multiplied by sqrt(t).
std::array<double, 3> raw_theta(int j, double y, double z, double th1, double th2) {
    const double s0 = sign_of_indicator(y > 0.0);
    const double sz = sign_of_indicator(y >= z);
    const double s4 = (y >= 0.0 && y < z) ? -1.0 : 1.0;
    switch (j) {
        case 1: return {1.0, th1 + th2, th1 * th2};
        case 2: return {0.0, -th1, sz * th1 * th2};
        case 3: return {0.0, -th2, -s0 * th1 * th2};
        case 4: return {0.0, 0.0, -s4 * th1 * th2};
        default: throw std::out_of_range("coefficient index j must lie in 1..4");
    }
}

// Table entries c_{j,h} (without mu powers).
std::array<double, 3> raw_beta(int j, double y, double z, double b1, double b2) {
    const double c20 = sign_of_indicator(y > 0.0) * b1;
    const double c30 = sign_of_indicator(y > z) * b2;
    const double c40 = ((y >= 0.0 && y < z) ? -1.0 : 1.0) * b1 * b2;
    switch (j) {
        case 1: return {1.0, b1 + b2, b1 * b2};
        case 2: return {c20, -b1 - c40, b1 * c30};
        case 3: return {c30, -b2 + c40, -b2 * c20};
        case 4: return {c40, 0.0, -c40};
        default: throw std::out_of_range("coefficient index j must lie in 1..4");
    }
}

std::array<double, 3> shift_coeffs(const std::array<double, 3>& c, double a) {
    return {c[0], c[1] + 2.0 * c[0] * a, c[2] + c[1] * a + c[0] * a * a};
}

// Returns out[n] = exp(omega^2/2) * sum_p r[p] G_{p,0,n}(omega, a, tau) for n = 0..n_max.
std::vector<double> g_poly_sums(const std::vector<double>& r, double omega, double a, double tau, int n_max) {
    const int P = static_cast<int>(r.size()) - 1;
    const double x = omega - a;
    std::vector<double> he(P + 1);
    he[0] = 1.0;
    if (P >= 1) he[1] = x;
    for (int p = 1; p < P; ++p) he[p + 1] = x * he[p] - p * he[p - 1];

    // rho_q: coefficients in s of sum_p r_p He_p(x + s).
    std::vector<double> rho(P + 1, 0.0);
    for (int p = 0; p <= P; ++p) {
        if (r[p] == 0.0) continue;
        for (int q = 0; q <= p; ++q) rho[q] += r[p] * binomial(p, q) * he[p - q];
    }

    // I_q(c) = int_0^inf s^q exp(-c s - s^2/2) ds = (-1)^q sum_q' C(q,q') c^{q-q'} J^_q'.
    const int q_max = n_max + P;
    const double c = omega + tau;
    JqCache cache(omega, tau, q_max);
    std::vector<double> I(q_max + 1);
    std::vector<double> cpow(q_max + 1);
    cpow[0] = 1.0;
    for (int q = 1; q <= q_max; ++q) cpow[q] = cpow[q - 1] * c;
    for (int q = 0; q <= q_max; ++q) {
        double acc = 0.0;
        for (int qp = 0; qp <= q; ++qp) acc += binomial(q, qp) * cpow[q - qp] * cache.scaled(qp);
        I[q] = (q % 2 == 0) ? acc : -acc;
    }

    std::vector<double> out(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        double acc = 0.0;
        for (int q = 0; q <= P; ++q) acc += rho[q] * I[n + q];
        out[n] = (n % 2 == 0) ? acc : -acc;
    }
    return out;
}

// Inverse Laplace kernel of 1/((W + b1)(W + b2))^{k+1} against the polynomial r.
double pole_kernel(const std::vector<double>& r, double omega, double a, double b1, double b2, bool equal, int k) {
    if (equal) {
        const auto g = g_poly_sums(r, omega, a, b1, 2 * k + 1);
        return -g[2 * k + 1] / factorial(2 * k + 1);
    }
    const auto g2 = g_poly_sums(r, omega, a, b2, k);
    const auto g1 = g_poly_sums(r, omega, a, b1, k);
    const double delta = b1 - b2;
    Accumulator acc;
    for (int n = 0; n <= k; ++n) {
        const double w = binomial(2 * k - n, k) / factorial(n) / std::pow(delta, 2 * k + 1 - n);
        acc.add(w * (g2[n] - ((n % 2 == 0) ? g1[n] : -g1[n])));
    }
    return (k % 2 == 0) ? acc.value() : -acc.value();
}

std::vector<double> poly_mul(const std::vector<double>& p, const std::vector<double>& q) {
    std::vector<double> out(p.size() + q.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j) out[i + j] += p[i] * q[j];
    return out;
}

double remainder_geometric(double C, double gap, int N) {
    return C / (-std::expm1(-gap)) * std::exp(-gap * (N + 1));
}

int terms_for_tol(double C, double gap, double tol) {
    // smallest N with remainder_geometric(C, gap, N) <= tol
    const double lhs = std::log(C / (-std::expm1(-gap)) / tol) / gap - 1.0;
    int N = std::max(0, static_cast<int>(std::ceil(lhs - 1e-12)));
    while (N > 0 && remainder_geometric(C, gap, N - 1) <= tol) --N;
    while (remainder_geometric(C, gap, N) > tol) ++N;
    return N;
}

template <class Series>
TruncatedValue truncated(Series& s, int N, bool converged) {
    TruncatedValue out;
    out.value = s.partial_sum(N);
    out.n_terms = N + 1;
    out.remainder_bound = s.remainder_bound(N);
    out.converged = converged;
    out.branch_fallback = s.branch_fallback();
    return out;
}

template <class Series>
TruncatedValue evaluate_to_tol(Series& s, double C, double gap, double tol, int n_cap) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (n_cap < 0) throw std::invalid_argument("n_cap must be non-negative");
    if (s.terminates()) return truncated(s, 0, true);
    const int N = terms_for_tol(C, gap, tol);
    if (N > n_cap) return truncated(s, n_cap, false);
    return truncated(s, N, true);
}

}  // namespace

// ---------------------------------------------------------------- parameters

double ThetaParams::default_shift(double theta1, double theta2) {
    return std::max({0.0, -2.0 * theta1, -2.0 * theta2}) + 1.0;
}

ThetaParams ThetaParams::make(double theta1, double theta2, double z, std::optional<double> a_shift) {
    ThetaParams p{theta1, theta2, z, a_shift.value_or(default_shift(theta1, theta2))};
    p.validate();
    return p;
}

void ThetaParams::validate() const {
    if (!(z > 0.0)) throw std::invalid_argument("ThetaParams: z must be positive");
    if (!(std::isfinite(theta1) && std::isfinite(theta2))) throw std::invalid_argument("ThetaParams: non-finite theta");
    if (!(a_shift >= 0.0 && a_shift > -2.0 * theta1 && a_shift > -2.0 * theta2))
        throw std::invalid_argument("ThetaParams: a_shift must be >= 0 and > max(-2 theta1, -2 theta2)");
}

double BetaParams::default_shift(double beta1, double beta2, double mu) {
    return std::max({0.0, -2.0 * beta1 * mu, -2.0 * beta2 * mu}) + 1.0;
}

BetaParams BetaParams::make(double beta1, double beta2, double mu, double z, std::optional<double> a_shift) {
    BetaParams p{beta1, beta2, mu, z, a_shift.value_or(default_shift(beta1, beta2, mu))};
    p.validate();
    return p;
}

void BetaParams::validate() const {
    if (!(z > 0.0)) throw std::invalid_argument("BetaParams: z must be positive");
    if (!(std::abs(beta1) < 1.0 && std::abs(beta2) < 1.0)) throw std::invalid_argument("BetaParams: |beta| must be < 1");
    if (!std::isfinite(mu)) throw std::invalid_argument("BetaParams: non-finite mu");
    if (!(a_shift >= 0.0 && a_shift >= -2.0 * beta1 * mu && a_shift >= -2.0 * beta2 * mu))
        throw std::invalid_argument("BetaParams: a_shift must be >= max(0, -2 beta_i mu)");
}

// ---------------------------------------------------------------- geometry

std::array<double, 4> geometric_terms(double x, double y, double z) {
    if (!(z > 0.0)) throw std::invalid_argument("geometric_terms: z must be positive");
    const double d = std::abs(y - x);
    const double a2 = std::abs(x) + std::abs(y) - d;
    const double a3 = std::abs(x - z) + std::abs(y - z) - d;
    const double a4 = 2.0 * std::max(0.0, z - std::max({x, y, 0.0})) + 2.0 * std::max(0.0, std::min({x, y, z}));
    return {0.0, a2, a3, a4};
}

double omega_jk(int j, int k, double x, double y, double z, double t) {
    if (j < 1 || j > 4) throw std::out_of_range("omega_jk: j must lie in 1..4");
    if (!(t > 0.0)) throw std::invalid_argument("omega_jk: t must be positive");
    const auto a = geometric_terms(x, y, z);
    return (a[j - 1] + 2.0 * z * k + std::abs(y - x)) / std::sqrt(t);
}

std::array<double, 3> coeffs_theta(int j, double y, double z, double t, const ThetaParams& theta) {
    const double s = std::sqrt(t);
    return shift_coeffs(raw_theta(j, y, z, theta.theta1 * s, theta.theta2 * s), theta.a_shift * s);
}

std::array<double, 3> coeffs_beta(int j, double y, const BetaParams& beta) {
    const auto c = raw_beta(j, y, beta.z, beta.beta1, beta.beta2);
    const double mu = beta.mu;
    const double a = beta.a_shift;
    return {c[0], mu * c[1] + 2.0 * c[0] * a, c[2] * mu * mu + c[1] * mu * a + c[0] * a * a};
}

// ---------------------------------------------------------------- bound

double bound_C(const ThetaParams& theta, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("bound_C: t must be positive");
    const double s = std::sqrt(t);
    double a = theta.theta1 * s;
    double b = theta.theta2 * s;
    if (a == 0.0 && b == 0.0) return 1.0;
    if (std::abs(a - b) < branch_threshold) {
        const double m = 0.5 * (a + b);
        return 1.0 + 2.0 * std::abs(m) * mills_ratio(m) + 3.0 * m * m;
    }
    const double pa = mills_ratio(a);
    const double pb = mills_ratio(b);
    const double cross = std::abs(a * b / (a - b));
    const double ratio = std::abs((a + b) / (a - b));
    auto psi = [&](double u, double pu, double v, double pv) {
        return std::abs(u) * pu + std::abs(v) * pv + std::min(2.0, (ratio - 1.0) * std::abs(u) * pu + 2.0 * cross * pv);
    };
    return 1.0 + std::max(psi(a, pa, b, pb), psi(b, pb, a, pa)) + std::min(1.0, cross * std::abs(pa - pb));
}

// ---------------------------------------------------------------- theta series

ThetaSeries::ThetaSeries(double t, double x, double y, const ThetaParams& theta) : t_(t) {
    if (!(t > 0.0)) throw std::invalid_argument("v_theta: t must be positive");
    theta.validate();
    const double s = std::sqrt(t);
    th1_ = theta.theta1 * s;
    th2_ = theta.theta2 * s;
    if (th1_ != th2_ && std::abs(th1_ - th2_) < branch_threshold) {
        fallback_ = true;
        th1_ = th2_ = 0.5 * (th1_ + th2_);
    }
    a_ = theta.a_shift * s;
    const double X = x / s, Y = y / s;
    zs_ = theta.z / s;
    d_ = std::abs(Y - X);
    aj_ = geometric_terms(X, Y, zs_);
    for (int j = 0; j < 4; ++j) coef_[j] = shift_coeffs(raw_theta(j + 1, Y, zs_, th1_, th2_), a_);
    single_term_ = (th1_ * th2_ == 0.0);
    gap_ = 2.0 * theta.z * theta.z / t;
    C_ = bound_C(theta, t);
}

double ThetaSeries::term(int k) {
    if (k < 0) throw std::out_of_range("series index must be non-negative");
    while (static_cast<int>(terms_.size()) <= k) {
        const int kk = static_cast<int>(terms_.size());
        double value = 0.0;
        if (kk == 0 && th1_ == 0.0 && th2_ == 0.0) {
            value = 1.0;
        } else if (!(single_term_ && kk > 0)) {
            const bool equal = (th1_ == th2_);
            Accumulator acc;
            for (int j = 3; j >= 0; --j) {
                const double omega = aj_[j] + 2.0 * zs_ * kk + d_;
                const double expo = 0.5 * (d_ * d_ - omega * omega);
                if (expo < underflow_exponent) continue;
                const std::vector<double> r{coef_[j][2], coef_[j][1], coef_[j][0]};
                if (r[0] == 0.0 && r[1] == 0.0 && r[2] == 0.0) continue;
                acc.add(std::exp(expo) * pole_kernel(r, omega, a_, th1_, th2_, equal, kk));
            }
            value = std::pow(th1_ * th2_, kk) * acc.value();
        }
        terms_.push_back(value);
        sums_.push_back((sums_.empty() ? 0.0 : sums_.back()) + value);
    }
    return terms_[k];
}

double ThetaSeries::partial_sum(int N) {
    term(N);
    return sums_[N];
}

double ThetaSeries::remainder_bound(int N) const {
    if (single_term_) return 0.0;
    return remainder_geometric(C_, gap_, N);
}

// ---------------------------------------------------------------- beta series

namespace {
constexpr double beta_bound_constant = 3.0;
}

BetaSeries::BetaSeries(double t, double x, double y, const BetaParams& beta) {
    if (!(t > 0.0)) throw std::invalid_argument("v_beta: t must be positive");
    beta.validate();
    const double s = std::sqrt(t);
    mu_ = beta.mu * s;
    b1_ = beta.beta1 * mu_;
    b2_ = beta.beta2 * mu_;
    if (b1_ != b2_ && std::abs(b1_ - b2_) < branch_threshold) {
        fallback_ = true;
        b1_ = b2_ = 0.5 * (b1_ + b2_);
    }
    prod_ = beta.beta1 * beta.beta2;
    no_barrier_ = (beta.beta1 == 0.0 && beta.beta2 == 0.0);
    a_ = beta.a_shift * s;
    const double X = x / s, Y = y / s;
    zs_ = beta.z / s;
    d_ = std::abs(Y - X);
    aj_ = geometric_terms(X, Y, zs_);
    BetaParams scaled{beta.beta1, beta.beta2, mu_, zs_, a_};
    for (int j = 0; j < 4; ++j) coef_[j] = coeffs_beta(j + 1, Y, scaled);
    single_term_ = (prod_ == 0.0);
    gap_ = 2.0 * beta.z * beta.z / t;
}

double BetaSeries::term(int k) {
    if (k < 0) throw std::out_of_range("series index must be non-negative");
    while (static_cast<int>(terms_.size()) <= k) {
        const int kk = static_cast<int>(terms_.size());
        double value = 0.0;
        if (kk == 0 && no_barrier_) {
            value = 1.0;
        } else if (!(single_term_ && kk > 0)) {
            const bool equal = (b1_ == b2_);
            // ((a + V)^2 - mu^2)^k in powers of V
            std::vector<double> base{a_ * a_ - mu_ * mu_, 2.0 * a_, 1.0};
            std::vector<double> pw{1.0};
            for (int i = 0; i < kk; ++i) pw = poly_mul(pw, base);
            Accumulator acc;
            for (int j = 3; j >= 0; --j) {
                const double omega = aj_[j] + 2.0 * zs_ * kk + d_;
                const double expo = 0.5 * (d_ * d_ - omega * omega);
                if (expo < underflow_exponent) continue;
                const std::vector<double> cj{coef_[j][2], coef_[j][1], coef_[j][0]};
                if (cj[0] == 0.0 && cj[1] == 0.0 && cj[2] == 0.0) continue;
                acc.add(std::exp(expo) * pole_kernel(poly_mul(cj, pw), omega, a_, b1_, b2_, equal, kk));
            }
            value = std::pow(-prod_, kk) * acc.value();
        }
        terms_.push_back(value);
        sums_.push_back((sums_.empty() ? 0.0 : sums_.back()) + value);
    }
    return terms_[k];
}

double BetaSeries::partial_sum(int N) {
    term(N);
    return sums_[N];
}

double BetaSeries::remainder_bound(int N) const {
    if (single_term_) return 0.0;
    return remainder_geometric(beta_bound_constant, gap_, N);
}

// ---------------------------------------------------------------- evaluators

TruncatedValue v_theta(double t, double x, double y, const ThetaParams& theta, double tol, int n_cap) {
    ThetaSeries s(t, x, y, theta);
    return evaluate_to_tol(s, s.bound_constant(), 2.0 * theta.z * theta.z / t, tol, n_cap);
}

TruncatedValue v_theta_terms(double t, double x, double y, const ThetaParams& theta, int N) {
    ThetaSeries s(t, x, y, theta);
    return truncated(s, N, true);
}

TruncatedValue v_beta(double t, double x, double y, const BetaParams& beta, double tol, int n_cap) {
    BetaSeries s(t, x, y, beta);
    return evaluate_to_tol(s, beta_bound_constant, 2.0 * beta.z * beta.z / t, tol, n_cap);
}

TruncatedValue v_beta_terms(double t, double x, double y, const BetaParams& beta, int N) {
    BetaSeries s(t, x, y, beta);
    return truncated(s, N, true);
}

double v_bar_factor(const ThetaParams& theta, double t) {
    const double C = bound_C(theta, t);
    if (theta.theta1 * theta.theta2 == 0.0) return 1.0 / C;
    return -std::expm1(-2.0 * theta.z * theta.z / t) / C;
}

double v_bar_remainder(const ThetaParams& theta, double t, int N) {
    if (theta.theta1 * theta.theta2 == 0.0) return 0.0;
    return std::exp(-2.0 * theta.z * theta.z * (N + 1) / t);
}

TruncatedValue v_bar(double t, double x, double y, const ThetaParams& theta, double tol, int n_cap) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    ThetaSeries s(t, x, y, theta);
    int N = 0;
    bool converged = true;
    while (v_bar_remainder(theta, t, N) > tol) {
        if (N == n_cap) {
            converged = false;
            break;
        }
        ++N;
    }
    TruncatedValue out = truncated(s, N, converged);
    out.value *= v_bar_factor(theta, t);
    out.remainder_bound = v_bar_remainder(theta, t, N);
    return out;
}

double gaussian_kernel(double t, double x, double y, double mu) {
    const double r = y - x - mu * t;
    return std::exp(-r * r / (2.0 * t)) / std::sqrt(2.0 * std::numbers::pi * t);
}

double transition_density_p(double t, double x, double y, const ThetaParams& theta) {
    return gaussian_kernel(t, x, y) * v_theta(t, x, y, theta).value;
}

double transition_density_p(double t, double x, double y, const BetaParams& beta) {
    return gaussian_kernel(t, x, y, beta.mu) * v_beta(t, x, y, beta).value;
}

double bridge_density_q(double t, double T, double x1, double x2, double y, const ThetaParams& theta) {
    if (!(t > 0.0 && t < T)) throw std::invalid_argument("bridge_density_q: requires 0 < t < T");
    const double vT = v_theta(T, x1, x2, theta).value;
    if (!(vT >= 1e-12)) throw std::domain_error("bridge_density_q: v(T, x1, x2) below 1e-12");
    const double mean = x1 + (t / T) * (x2 - x1);
    const double var = t * (T - t) / T;
    const double q0 = std::exp(-(y - mean) * (y - mean) / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
    return q0 * v_theta(t, x1, y, theta).value * v_theta(T - t, y, x2, theta).value / vT;
}

// ---------------------------------------------------------------- contour oracle

namespace {

template <class Numer, class Denom>
double contour_integral(double t, double x, double y, double z, double a_shift, double mu_scale, Numer numer,
                        Denom denom, const ContourOptions& opt) {
    if (!(t > 0.0)) throw std::invalid_argument("contour_oracle: t must be positive");
    const double d = std::abs(y - x);
    const auto aj = geometric_terms(x, y, z);
    const double s = std::sqrt(t);
    const double U0 = (12.0 + 2.0 * std::max({d / s, mu_scale * s, a_shift * s})) / s;

    double total = 0.0;
    for (int j = 0; j < 4; ++j) {
        const double sigma = opt.saddle ? std::max(a_shift, (d + aj[j]) / t) : a_shift;
        const double shift = d + aj[j];
        auto f = [&](double u) {
            const cplx W(sigma, u);
            const cplx e = std::exp(W * W * (0.5 * t) - W * shift + d * d / (2.0 * t));
            const cplx den = denom(W);
            return (e * numer(j + 1, W) / den).real();
        };
        auto integrate = [&](double U) {
            double err = 0.0;
            const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, U, 20, 1e-13, &err);
            return 2.0 * v;
        };
        double U = U0;
        double prev = integrate(U);
        bool ok = false;
        for (int it = 0; it < 8; ++it) {
            U *= 2.0;
            const double cur = integrate(U);
            const bool agree = std::abs(cur - prev) <= opt.tol;
            prev = cur;
            if (agree) {
                ok = true;
                break;
            }
        }
        if (!ok || !std::isfinite(prev)) throw std::runtime_error("contour_oracle: quadrature did not converge");
        total += prev;
    }
    return s / std::sqrt(2.0 * std::numbers::pi) * total;
}

}  // namespace

double contour_oracle(double t, double x, double y, const BetaParams& beta, const ContourOptions& opt) {
    beta.validate();
    if (!(std::abs(beta.beta1 * beta.beta2) < 1.0)) throw std::invalid_argument("contour_oracle: |beta1 beta2| >= 1");
    const double b1 = beta.beta1, b2 = beta.beta2, mu = beta.mu, z = beta.z;
    const double s0 = sign_of_indicator(y > 0.0);
    const double sz = sign_of_indicator(y > z);
    const double s4 = (y >= 0.0 && y < z) ? -1.0 : 1.0;
    auto numer = [&](int j, cplx W) -> cplx {
        switch (j) {
            case 1: return (W + b1 * mu) * (W + b2 * mu);
            case 2: return s0 * (b1 * W - s0 * b1 * mu) * (W - sz * b2 * mu);
            case 3: return sz * (b2 * W - sz * b2 * mu) * (W + s0 * b1 * mu);
            default: return s4 * (b1 * b2 * W * W - b1 * b2 * mu * mu);
        }
    };
    auto denom = [&](cplx W) { return b1 * b2 * std::exp(-2.0 * W * z) * (W * W - mu * mu) + (W + b1 * mu) * (W + b2 * mu); };
    return contour_integral(t, x, y, z, beta.a_shift, std::abs(mu), numer, denom, opt);
}

double contour_oracle(double t, double x, double y, const ThetaParams& theta, const ContourOptions& opt) {
    theta.validate();
    const double t1 = theta.theta1, t2 = theta.theta2, z = theta.z;
    const double s0 = sign_of_indicator(y > 0.0);
    const double sz = sign_of_indicator(y > z);
    const double s4 = (y >= 0.0 && y < z) ? -1.0 : 1.0;
    auto numer = [&](int j, cplx W) -> cplx {
        switch (j) {
            case 1: return (W + t1) * (W + t2);
            case 2: return -t1 * (W - sz * t2);
            case 3: return -t2 * (W + s0 * t1);
            default: return cplx(-s4 * t1 * t2, 0.0);
        }
    };
    auto denom = [&](cplx W) { return (W + t1) * (W + t2) - t1 * t2 * std::exp(-2.0 * W * z); };
    return contour_integral(t, x, y, z, theta.a_shift, 0.0, numer, denom, opt);
}

// ---------------------------------------------------------------- drift link

ThetaParams theta_params(const DriftSpec& spec) {
    return ThetaParams::make(spec.theta1(), spec.theta2(), spec.gap());
}

BetaParams params_from_kappa(const DriftSpec& spec, double kappa) {
    if (!(kappa > 1.0)) throw std::invalid_argument("params_from_kappa: kappa must exceed 1");
    if (spec.theta1() == 0.0) throw std::invalid_argument("params_from_kappa: theta1 must be nonzero");
    const double denom = kappa * spec.theta1() + spec.b_at_z1() - spec.b_at_z2();
    if (denom == 0.0) throw std::domain_error("params_from_kappa: beta2 denominator vanishes");
    const double beta1 = 1.0 / kappa;
    const double beta2 = spec.theta2() / denom;
    if (!(std::abs(beta2) < 1.0)) throw std::domain_error("params_from_kappa: |beta2| >= 1");
    const double mu = spec.b_at_z1() + kappa * spec.theta1();
    return BetaParams::make(beta1, beta2, mu, spec.gap());
}

}  // namespace skewsim
