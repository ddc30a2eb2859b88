#pragma once

#include <array>
#include <functional>

namespace skewsim {

// One smooth branch of the drift. `primitive` may be left empty, in which case
// the antiderivative is obtained by quadrature.
struct DriftPiece {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
    std::function<double(double)> primitive;
};

// Piecewise C^1 drift on (-inf, z1), (z1, z2), (z2, inf). Immutable once built.
class DriftSpec {
public:
    const std::array<DriftPiece, 3>& pieces() const noexcept { return pieces_; }
    double z1() const noexcept { return z1_; }
    double z2() const noexcept { return z2_; }
    double gap() const noexcept { return z2_ - z1_; }
    double theta1() const noexcept { return theta1_; }
    double theta2() const noexcept { return theta2_; }
    double b_at_z1() const noexcept { return b_at_z1_; }
    double b_at_z2() const noexcept { return b_at_z2_; }
    double b_sup() const noexcept { return b_sup_; }
    double phi_sup() const noexcept { return phi_sup_; }
    // inf over the real line minus {z1, z2} of b^2 + b'.
    double energy_inf() const noexcept { return energy_inf_; }

private:
    friend DriftSpec make_drift(std::array<DriftPiece, 3> pieces, double z1, double z2);
    friend double eval_B(const DriftSpec& spec, double x);

    std::array<DriftPiece, 3> pieces_;
    double z1_ = 0.0;
    double z2_ = 1.0;
    double theta1_ = 0.0;
    double theta2_ = 0.0;
    double b_at_z1_ = 0.0;
    double b_at_z2_ = 0.0;
    double b_sup_ = 0.0;
    double phi_sup_ = 0.0;
    double energy_inf_ = 0.0;
    // Primitive glue: B(x) = F_i(x) + offset_[i].
    std::array<double, 3> offset_{};
};

DriftSpec make_drift(std::array<DriftPiece, 3> pieces, double z1, double z2);

double eval_b(const DriftSpec& spec, double x);
double eval_b_prime(const DriftSpec& spec, double x);
double eval_B(const DriftSpec& spec, double x);
double eval_phi_plus(const DriftSpec& spec, double x);

namespace drifts {

// 0, 1, 0 with jumps at 0 and 1.
DriftSpec indicator();
// -2 cos x, sin x, cos(x - 1) + sin 1 with jumps at 0 and 1.
DriftSpec trigonometric();
// b == mu with artificial jump points z1 < z2.
DriftSpec constant(double mu, double z1 = 0.0, double z2 = 1.0);

}  // namespace drifts

}  // namespace skewsim
