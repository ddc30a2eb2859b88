#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "skewsim/drift_config.hpp"
#include "skewsim/drift_model.hpp"

using namespace skewsim;
using doctest::Approx;

namespace {

DriftSpec negated(const DriftSpec& s) {
    std::array<DriftPiece, 3> p;
    for (int i = 0; i < 3; ++i) {
        const DriftPiece& q = s.pieces()[i];
        p[i].value = [f = q.value](double x) { return -f(x); };
        p[i].derivative = [f = q.derivative](double x) { return -f(x); };
    }
    return make_drift(p, s.z1(), s.z2());
}

}  // namespace

TEST_CASE("jump heights of the built-in drifts") {
    const DriftSpec b1 = drifts::indicator();
    CHECK(b1.theta1() == Approx(0.5));
    CHECK(b1.theta2() == Approx(-0.5));
    const DriftSpec b2 = drifts::trigonometric();
    CHECK(b2.theta1() == Approx(1.0).epsilon(1e-14));
    CHECK(b2.theta2() == Approx(0.5).epsilon(1e-14));
    const DriftSpec c = drifts::constant(0.7, -1.0, 2.0);
    CHECK(c.theta1() == 0.0);
    CHECK(c.theta2() == 0.0);
    CHECK(c.gap() == 3.0);
}

TEST_CASE("eval_b uses midpoint values at the jumps") {
    const DriftSpec b1 = drifts::indicator();
    CHECK(eval_b(b1, 0.5) == 1.0);
    CHECK(eval_b(b1, 0.0) == 0.5);
    CHECK(eval_b(b1, 1.0) == 0.5);
    CHECK(eval_b(b1, -3.0) == 0.0);
    CHECK(eval_b(b1, 7.0) == 0.0);
    const DriftSpec b2 = drifts::trigonometric();
    CHECK(eval_b(b2, 0.0) == Approx(-1.0).epsilon(1e-15));
    CHECK(eval_b(b2, 1.0) == Approx(0.5 * (std::sin(1.0) + 1.0 + std::sin(1.0))).epsilon(1e-15));
    CHECK(b2.b_at_z1() == Approx(-1.0));
}

TEST_CASE("eval_B examples") {
    const DriftSpec b1 = drifts::indicator();
    CHECK(eval_B(b1, 0.0) == 0.0);
    CHECK(eval_B(b1, 0.5) == Approx(0.5).epsilon(1e-12));
    CHECK(eval_B(b1, 2.0) - eval_B(b1, 1.0) == Approx(0.0).epsilon(1e-12));
    CHECK(eval_B(b1, -4.0) == Approx(0.0).epsilon(1e-12));
    const DriftSpec b2 = drifts::trigonometric();
    CHECK(eval_B(b2, 1.0) - eval_B(b2, 0.0) == Approx(1.0 - std::cos(1.0)).epsilon(1e-12));
}

TEST_CASE("eval_B falls back to quadrature without closed-form primitives") {
    const DriftSpec b2 = drifts::trigonometric();
    std::array<DriftPiece, 3> p = b2.pieces();
    for (auto& q : p) q.primitive = nullptr;
    const DriftSpec numeric = make_drift(p, b2.z1(), b2.z2());
    for (double x : {-3.0, -0.4, 0.3, 0.9, 1.6, 4.0}) {
        const double want = oracle::integrate([&](double u) { return eval_b(b2, u); },
                                              x < 0.0 ? std::vector<double>{x, 0.0} : std::vector<double>{0.0, x});
        CHECK(eval_B(numeric, x) == Approx(x < 0.0 ? -want : want).epsilon(1e-10));
        CHECK(eval_B(numeric, x) == Approx(eval_B(b2, x)).epsilon(1e-10));
    }
}

TEST_CASE("phi_plus examples") {
    const DriftSpec b1 = drifts::indicator();
    CHECK(eval_phi_plus(b1, 0.5) == Approx(0.5));
    CHECK(eval_phi_plus(b1, -3.0) == 0.0);
    CHECK(b1.phi_sup() == Approx(0.5));
    CHECK(1.0 / b1.phi_sup() == Approx(2.0));
    CHECK(b1.b_sup() == Approx(1.0));
    const DriftSpec c = drifts::constant(0.7);
    for (double x : {-2.0, 0.0, 0.5, 1.0, 3.0}) CHECK(eval_phi_plus(c, x) == 0.0);
    CHECK(c.phi_sup() == 0.0);
}

TEST_CASE("b2 sup norms against a dense scan") {
    const DriftSpec b2 = drifts::trigonometric();
    double bsup = 0.0, einf = 1e300;
    for (int i = 0; i <= 200000; ++i) {
        const double x = -12.0 + 25.0 * i / 200000.0;
        if (x == 0.0 || x == 1.0) continue;
        const double b = eval_b(b2, x);
        bsup = std::max(bsup, std::abs(b));
        einf = std::min(einf, b * b + eval_b_prime(b2, x));
    }
    CHECK(b2.b_sup() == Approx(bsup).epsilon(1e-6));
    CHECK(b2.energy_inf() == Approx(einf).epsilon(1e-6));
    CHECK(b2.b_sup() >= bsup - 1e-12);
    CHECK(b2.energy_inf() <= einf + 1e-12);
}

TEST_CASE("property: phi_plus lies in [0, phi_sup]") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-15.0, 16.0);
    for (const DriftSpec& s : {drifts::indicator(), drifts::trigonometric(), drifts::constant(-1.3)})
        for (int i = 0; i < 5000; ++i) {
            const double x = u(rng);
            const double p = eval_phi_plus(s, x);
            REQUIRE(p >= 0.0);
            REQUIRE(p <= s.phi_sup() + 1e-12);
        }
}

TEST_CASE("property: B is continuous and Lipschitz with constant b_sup") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-6.0, 7.0);
    for (const DriftSpec& s : {drifts::indicator(), drifts::trigonometric()}) {
        for (double z : {s.z1(), s.z2()})
            for (double h : {1e-3, 1e-5, 1e-8}) CHECK(std::abs(eval_B(s, z + h) - eval_B(s, z - h)) <= 2.0 * h * s.b_sup() + 1e-14);
        for (int i = 0; i < 500; ++i) {
            const double x = u(rng), y = u(rng);
            CHECK(eval_B(s, y) - eval_B(s, x) <= s.b_sup() * std::abs(y - x) + 1e-12);
        }
    }
}

TEST_CASE("property: flipping the drift sign flips the jump heights") {
    for (const DriftSpec& s : {drifts::indicator(), drifts::trigonometric()}) {
        const DriftSpec n = negated(s);
        CHECK(n.theta1() == Approx(-s.theta1()));
        CHECK(n.theta2() == Approx(-s.theta2()));
        CHECK(n.b_sup() == Approx(s.b_sup()));
    }
}

TEST_CASE("make_drift rejects bad input") {
    const auto zero = DriftPiece{[](double) { return 0.0; }, [](double) { return 0.0; }, {}};
    CHECK_THROWS_AS(make_drift({zero, zero, zero}, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_drift({zero, zero, zero}, 2.0, 1.0), std::invalid_argument);
    const auto bad = DriftPiece{[](double x) { return x > 3.0 ? std::nan("") : 0.0; }, [](double) { return 0.0; }, {}};
    CHECK_THROWS_AS(make_drift({zero, zero, bad}, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_drift({zero, DriftPiece{}, zero}, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("drift config: built-ins") {
    const DriftSpec b1 = parse_drift_config("# indicator\nbuiltin = b1\n");
    CHECK(b1.theta1() == Approx(0.5));
    const DriftSpec c = parse_drift_config("builtin = constant\nmu = -0.25\nz1 = -1\nz2 = 3\n");
    CHECK(eval_b(c, 10.0) == -0.25);
    CHECK(c.z1() == -1.0);
    CHECK(c.z2() == 3.0);
    CHECK_THROWS_AS(parse_drift_config("builtin = b1\nmu = 2\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_drift_config("builtin = b7\n"), std::invalid_argument);
}

TEST_CASE("drift config: custom pieces reproduce b2") {
    const std::string text =
        "z1 = 0\n"
        "z2 = 1\n"
        "left = cos(-2, 1, 0)\n"
        "middle = sin(1, 1, 0)   # sin x\n"
        "right = cos(1, 1, -1) + poly(0.8414709848078965)\n";
    const DriftSpec s = parse_drift_config(text);
    const DriftSpec b2 = drifts::trigonometric();
    CHECK(s.theta1() == Approx(b2.theta1()).epsilon(1e-12));
    CHECK(s.theta2() == Approx(b2.theta2()).epsilon(1e-12));
    for (double x : {-2.0, -0.5, 0.0, 0.3, 1.0, 2.5}) {
        CHECK(eval_b(s, x) == Approx(eval_b(b2, x)).epsilon(1e-12));
        CHECK(eval_b_prime(s, x) == Approx(eval_b_prime(b2, x)).epsilon(1e-12));
        CHECK(eval_B(s, x) == Approx(eval_B(b2, x)).epsilon(1e-10));
    }
}

TEST_CASE("drift config: pieces and their primitives") {
    const DriftPiece p = parse_piece("poly(1, -2, 3) + sin(2, 0.5, 0.1) + cos(0.3, 0, 2)");
    for (double x : {-1.0, 0.0, 0.7, 2.0}) {
        const double v = 1 - 2 * x + 3 * x * x + 2 * std::sin(0.5 * x + 0.1) + 0.3 * std::cos(2.0);
        CHECK(p.value(x) == Approx(v).epsilon(1e-14));
        CHECK(p.derivative(x) == Approx(-2 + 6 * x + std::cos(0.5 * x + 0.1)).epsilon(1e-14));
        const double integral = oracle::integrate(p.value, {0.0, x});
        CHECK(p.primitive(x) - p.primitive(0.0) == Approx(integral).epsilon(1e-12));
    }
    CHECK_THROWS_AS(parse_piece("poly(1, 2)", true), std::invalid_argument);
    CHECK_NOTHROW(parse_piece("poly(1, 0, 0)", true));
    CHECK_THROWS_AS(parse_piece("tan(1, 2, 3)"), std::invalid_argument);
    CHECK_THROWS_AS(parse_piece("sin(1, 2)"), std::invalid_argument);
    CHECK_THROWS_AS(parse_piece(""), std::invalid_argument);
}

TEST_CASE("drift config: malformed files") {
    CHECK_THROWS_AS(parse_drift_config("z1 = 0\nz2 = 1\nleft = poly(0)\nmiddle = poly(1)\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_drift_config("z1 = 0\nz1 = 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_drift_config("colour = red\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_drift_config("z1 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_drift_config("z1 = 0\nz2 = 1\nleft = poly(0, 1)\nmiddle = poly(1)\nright = poly(0)\n"),
                    std::invalid_argument);
}

TEST_CASE("resolve_drift") {
    CHECK(resolve_drift("b1").theta1() == Approx(0.5));
    CHECK(resolve_drift("b2").theta1() == Approx(1.0));
    CHECK(eval_b(resolve_drift("constant:0.7"), 3.0) == 0.7);
    const auto path = std::filesystem::temp_directory_path() / "skewsim_drift_test.cfg";
    {
        std::ofstream f(path);
        f << "z1 = -0.5\nz2 = 0.5\nleft = poly(0)\nmiddle = poly(2)\nright = poly(0)\n";
    }
    const DriftSpec s = resolve_drift(path.string());
    CHECK(s.theta1() == Approx(1.0));
    CHECK(s.theta2() == Approx(-1.0));
    std::filesystem::remove(path);
    CHECK_THROWS(resolve_drift("/nonexistent/drift.cfg"));
}
