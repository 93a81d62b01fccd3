#include "doctest.h"

#include "eqy/numerics.hpp"

#include <cmath>
#include <vector>

namespace {

using eqy::num::CubicSpline;
using eqy::num::DenseOde;
using eqy::num::GaussRule;
using eqy::num::OdeOptions;

constexpr double kPi = 3.14159265358979323846;

}  // namespace

TEST_SUITE("numerics") {

TEST_CASE("adaptive quadrature hits analytic values") {
    const double cubic = eqy::num::integrate([](double x) { return x * x * x; }, 0.0, 1.0);
    CHECK(cubic == doctest::Approx(0.25).epsilon(1e-12));

    const double sine = eqy::num::integrate([](double x) { return std::sin(x); }, 0.0, kPi);
    CHECK(sine == doctest::Approx(2.0).epsilon(1e-12));

    // Integrand with a sharp feature; adaptive splitting has to find it.
    const double bump = eqy::num::integrate(
        [](double x) { return 1.0 / (1e-4 + (x - 0.7) * (x - 0.7)); }, 0.0, 1.0, 1e-11);
    const double exact =
        (std::atan(0.3 / 1e-2) + std::atan(0.7 / 1e-2)) / 1e-2;
    CHECK(bump == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("tail integration reaches infinity exactly") {
    const double inv_sq =
        eqy::num::integrate_to_infinity([](double r) { return 1.0 / (r * r); }, 1.0);
    CHECK(inv_sq == doctest::Approx(1.0).epsilon(1e-11));

    // 1/(r^2 + 1) from 1/2: arctan tail.
    const double lorentz =
        eqy::num::integrate_to_infinity([](double r) { return 1.0 / (r * r + 1.0); }, 0.5);
    CHECK(lorentz == doctest::Approx(kPi / 2.0 - std::atan(0.5)).epsilon(1e-10));
}

TEST_CASE("clamped spline reproduces a cubic and its slope") {
    std::vector<double> x, y;
    auto f = [](double t) { return t * t * t - 2.0 * t + 1.0; };
    auto df = [](double t) { return 3.0 * t * t - 2.0; };
    for (int i = 0; i <= 8; ++i) {
        const double t = -1.0 + 2.0 * i / 8.0;
        x.push_back(t);
        y.push_back(f(t));
    }
    const CubicSpline s = CubicSpline::clamped(x, y, df(-1.0), df(1.0));
    for (double t = -1.0; t <= 1.0; t += 0.05) {
        CHECK(s(t) == doctest::Approx(f(t)).epsilon(1e-12));
        CHECK(s.derivative(t) == doctest::Approx(df(t)).epsilon(1e-10));
    }
}

TEST_CASE("natural spline converges on a smooth function") {
    std::vector<double> x, y;
    const int n = 200;
    for (int i = 0; i <= n; ++i) {
        const double t = kPi * i / n;
        x.push_back(t);
        y.push_back(std::sin(t));
    }
    const CubicSpline s = CubicSpline::natural(x, y);
    double worst = 0.0;
    for (double t = 0.1; t < kPi - 0.1; t += 0.013)
        worst = std::max(worst, std::abs(s(t) - std::sin(t)));
    CHECK(worst < 1e-8);
}

TEST_CASE("rk45 with dense output tracks the exponential") {
    auto rhs = [](double, const std::vector<double>& y, std::vector<double>& dy) {
        dy[0] = y[0];
    };
    // Cubic Hermite interpolation needs modest steps to stay at 1e-8.
    OdeOptions opt;
    opt.max_step = 0.02;
    const auto samples = eqy::num::integrate_ode(rhs, {1.0}, 0.0, 1.0, opt);
    const DenseOde dense(samples);
    CHECK(dense.value(1.0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-9));
    // Dense output between accepted steps, not just at them.
    for (double t = 0.05; t < 1.0; t += 0.083) {
        CHECK(dense.value(t, 0) == doctest::Approx(std::exp(t)).epsilon(1e-8));
        CHECK(dense.derivative(t, 0) == doctest::Approx(std::exp(t)).epsilon(1e-7));
    }
}

TEST_CASE("rk45 conserves oscillator energy over many periods") {
    auto rhs = [](double, const std::vector<double>& y, std::vector<double>& dy) {
        dy[0] = y[1];
        dy[1] = -y[0];
    };
    OdeOptions opt;
    opt.rel_tol = 1e-11;
    const auto samples = eqy::num::integrate_ode(rhs, {1.0, 0.0}, 0.0, 20.0 * kPi, opt);
    const auto& last = samples.back();
    const double energy = last.y[0] * last.y[0] + last.y[1] * last.y[1];
    CHECK(energy == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("bisection finds the cosine root") {
    const double root =
        eqy::num::bisect([](double x) { return std::cos(x); }, 0.0, 2.0, 1e-14);
    CHECK(root == doctest::Approx(kPi / 2.0).epsilon(1e-13));
}

TEST_CASE("line fit recovers slope and intercept") {
    std::vector<double> x, y;
    for (int i = 0; i < 40; ++i) {
        x.push_back(0.1 * i);
        y.push_back(-1.5 * 0.1 * i + 0.75);
    }
    const auto fit = eqy::num::fit_line(x, y);
    CHECK(fit.slope == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(fit.rms_residual < 1e-12);
}

TEST_CASE("gauss rule integrates high-degree monomials exactly") {
    const GaussRule rule = eqy::num::gauss_legendre(24);
    REQUIRE(rule.nodes.size() == 24);
    double weight_sum = 0.0;
    double x8 = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        weight_sum += rule.weights[i];
        x8 += rule.weights[i] * std::pow(rule.nodes[i], 8);
    }
    CHECK(weight_sum == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(x8 == doctest::Approx(2.0 / 9.0).epsilon(1e-13));
}

}  // TEST_SUITE
