#include "skewsim/drift_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

namespace skewsim {

namespace {

constexpr int grid_points = 10000;
constexpr double scan_margin = 10.0;
constexpr double far_offset = 1000.0;
constexpr double quad_tol = 1e-10;

int piece_index(double x, double z1, double z2) {
    if (x < z1) return 0;
    if (x > z2) return 2;
    return 1;
}

double reference_point(int i, double z1, double z2) { return i == 2 ? z2 : z1; }

// Antiderivative of piece i, F_i(ref_i) arbitrary but fixed.
double piece_antiderivative(const DriftPiece& p, double ref, double x) {
    if (p.primitive) return p.primitive(x);
    if (x == ref) return 0.0;
    double err = 0.0;
    const double lo = std::min(ref, x);
    const double hi = std::max(ref, x);
    const double val =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(p.value, lo, hi, 20, quad_tol, &err);
    if (!(err <= quad_tol * std::max(1.0, std::abs(val))))
        throw std::runtime_error("eval_B: quadrature did not converge (error " + std::to_string(err) + ")");
    return x >= ref ? val : -val;
}

struct Extremes {
    double abs_b_max = 0.0;
    double energy_max = -std::numeric_limits<double>::infinity();
    double energy_min = std::numeric_limits<double>::infinity();
};

// Maximize f on [lo, hi] around the grid optimum by Brent's method.
double refine_max(const std::function<double(double)>& f, double lo, double hi) {
    auto neg = [&](double x) { return -f(x); };
    const auto r = boost::math::tools::brent_find_minima(neg, lo, hi, 40);
    return -r.second;
}

void scan_piece(const DriftPiece& p, double lo, double hi, Extremes& ex) {
    auto energy = [&](double x) { return p.value(x) * p.value(x) + p.derivative(x); };
    auto absb = [&](double x) { return std::abs(p.value(x)); };
    auto neg_energy = [&](double x) { return -energy(x); };

    std::vector<double> xs(grid_points);
    const double h = (hi - lo) / (grid_points - 1);
    for (int i = 0; i < grid_points; ++i) xs[i] = lo + h * i;

    int i_abs = 0, i_emax = 0, i_emin = 0;
    double v_abs = -1.0, v_emax = -std::numeric_limits<double>::infinity();
    double v_emin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_points; ++i) {
        const double b = p.value(xs[i]);
        const double db = p.derivative(xs[i]);
        if (!std::isfinite(b) || !std::isfinite(db))
            throw std::invalid_argument("make_drift: non-finite piece value at x = " + std::to_string(xs[i]));
        const double e = b * b + db;
        if (std::abs(b) > v_abs) { v_abs = std::abs(b); i_abs = i; }
        if (e > v_emax) { v_emax = e; i_emax = i; }
        if (e < v_emin) { v_emin = e; i_emin = i; }
    }
    auto bracket = [&](int i) {
        return std::pair{xs[std::max(0, i - 1)], xs[std::min(grid_points - 1, i + 1)]};
    };
    auto [a0, a1] = bracket(i_abs);
    auto [b0, b1] = bracket(i_emax);
    auto [c0, c1] = bracket(i_emin);
    ex.abs_b_max = std::max({ex.abs_b_max, v_abs, refine_max(absb, a0, a1)});
    ex.energy_max = std::max({ex.energy_max, v_emax, refine_max(energy, b0, b1)});
    ex.energy_min = std::min({ex.energy_min, v_emin, -refine_max(neg_energy, c0, c1)});
}

void probe_far(const DriftPiece& p, double x, Extremes& ex) {
    const double b = p.value(x);
    const double db = p.derivative(x);
    if (!std::isfinite(b) || !std::isfinite(db))
        throw std::invalid_argument("make_drift: non-finite piece value at x = " + std::to_string(x));
    ex.abs_b_max = std::max(ex.abs_b_max, std::abs(b));
    ex.energy_max = std::max(ex.energy_max, b * b + db);
    ex.energy_min = std::min(ex.energy_min, b * b + db);
}

}  // namespace

DriftSpec make_drift(std::array<DriftPiece, 3> pieces, double z1, double z2) {
    if (!(std::isfinite(z1) && std::isfinite(z2)) || !(z1 < z2))
        throw std::invalid_argument("make_drift: requires z1 < z2");
    for (const auto& p : pieces)
        if (!p.value || !p.derivative) throw std::invalid_argument("make_drift: piece lacks value or derivative");

    DriftSpec s;
    s.pieces_ = std::move(pieces);
    s.z1_ = z1;
    s.z2_ = z2;

    const double b1m = s.pieces_[0].value(z1), b1p = s.pieces_[1].value(z1);
    const double b2m = s.pieces_[1].value(z2), b2p = s.pieces_[2].value(z2);
    if (!std::isfinite(b1m + b1p + b2m + b2p)) throw std::invalid_argument("make_drift: non-finite jump limits");
    s.theta1_ = 0.5 * (b1p - b1m);
    s.theta2_ = 0.5 * (b2p - b2m);
    s.b_at_z1_ = 0.5 * (b1p + b1m);
    s.b_at_z2_ = 0.5 * (b2p + b2m);

    Extremes ex;
    scan_piece(s.pieces_[0], z1 - scan_margin, z1, ex);
    scan_piece(s.pieces_[1], z1, z2, ex);
    scan_piece(s.pieces_[2], z2, z2 + scan_margin, ex);
    probe_far(s.pieces_[0], z1 - far_offset, ex);
    probe_far(s.pieces_[2], z2 + far_offset, ex);

    s.b_sup_ = ex.abs_b_max;
    s.energy_inf_ = ex.energy_min;
    double emax = ex.energy_max;
    for (double z : {z1, z2}) {
        const double b = eval_b(s, z);
        emax = std::max(emax, b * b + eval_b_prime(s, z));
    }
    s.phi_sup_ = 0.5 * (emax - s.energy_inf_);

    // Continuity glue with B(0) = 0.
    const auto F = [&](int i, double x) {
        return piece_antiderivative(s.pieces_[i], reference_point(i, z1, z2), x);
    };
    s.offset_[0] = -F(0, z1);
    s.offset_[1] = -F(1, z1);
    s.offset_[2] = F(1, z2) + s.offset_[1] - F(2, z2);
    const int i0 = piece_index(0.0, z1, z2);
    const double at0 = F(i0, 0.0) + s.offset_[i0];
    for (double& o : s.offset_) o -= at0;
    return s;
}

double eval_b(const DriftSpec& spec, double x) {
    if (x == spec.z1()) return spec.b_at_z1();
    if (x == spec.z2()) return spec.b_at_z2();
    return spec.pieces()[piece_index(x, spec.z1(), spec.z2())].value(x);
}

double eval_b_prime(const DriftSpec& spec, double x) {
    const auto& p = spec.pieces();
    if (x == spec.z1()) return 0.5 * (p[0].derivative(x) + p[1].derivative(x));
    if (x == spec.z2()) return 0.5 * (p[1].derivative(x) + p[2].derivative(x));
    return p[piece_index(x, spec.z1(), spec.z2())].derivative(x);
}

double eval_B(const DriftSpec& spec, double x) {
    const int i = piece_index(x, spec.z1_, spec.z2_);
    return piece_antiderivative(spec.pieces_[i], reference_point(i, spec.z1_, spec.z2_), x) + spec.offset_[i];
}

double eval_phi_plus(const DriftSpec& spec, double x) {
    const double b = eval_b(spec, x);
    const double v = 0.5 * (b * b + eval_b_prime(spec, x) - spec.energy_inf());
    return std::clamp(v, 0.0, spec.phi_sup());
}

namespace drifts {

DriftSpec indicator() {
    auto zero = [](double) { return 0.0; };
    return make_drift({DriftPiece{zero, zero, zero},
                       DriftPiece{[](double) { return 1.0; }, zero, [](double x) { return x; }},
                       DriftPiece{zero, zero, zero}},
                      0.0, 1.0);
}

DriftSpec trigonometric() {
    const double s1 = std::sin(1.0);
    return make_drift(
        {DriftPiece{[](double x) { return -2.0 * std::cos(x); }, [](double x) { return 2.0 * std::sin(x); },
                    [](double x) { return -2.0 * std::sin(x); }},
         DriftPiece{[](double x) { return std::sin(x); }, [](double x) { return std::cos(x); },
                    [](double x) { return -std::cos(x); }},
         DriftPiece{[s1](double x) { return std::cos(x - 1.0) + s1; }, [](double x) { return -std::sin(x - 1.0); },
                    [s1](double x) { return std::sin(x - 1.0) + s1 * x; }}},
        0.0, 1.0);
}

DriftSpec constant(double mu, double z1, double z2) {
    DriftPiece p{[mu](double) { return mu; }, [](double) { return 0.0; }, [mu](double x) { return mu * x; }};
    return make_drift({p, p, p}, z1, z2);
}

}  // namespace drifts

}  // namespace skewsim
