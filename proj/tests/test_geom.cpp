#include "doctest.h"

#include "eqy/geom.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace {

using eqy::geom::ClosedModelMetric;
using eqy::geom::ConformalTestFunction;
using eqy::geom::DecayModel;
using eqy::geom::RadialMetric;

constexpr double kPi = 3.14159265358979323846;
constexpr double kSigmaS3 = 43.8232327162506550;

}  // namespace

TEST_SUITE("geom") {

TEST_CASE("closed models carry the right curvature and volume") {
    const auto sphere = ClosedModelMetric::round_sphere(1.0);
    CHECK(sphere.scalar_curvature() == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(sphere.volume() == doctest::Approx(2.0 * kPi * kPi).epsilon(1e-14));

    const auto sphere2 = ClosedModelMetric::round_sphere(2.0);
    CHECK(sphere2.scalar_curvature() == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(sphere2.volume() == doctest::Approx(16.0 * kPi * kPi).epsilon(1e-14));

    const auto rp3 = ClosedModelMetric::projective_space(1.0);
    CHECK(rp3.volume() == doctest::Approx(kPi * kPi).epsilon(1e-14));

    const auto l5 = ClosedModelMetric::lens(5, 1.0);
    CHECK(l5.volume() == doctest::Approx(2.0 * kPi * kPi / 5.0).epsilon(1e-14));
    CHECK_THROWS_AS(ClosedModelMetric::lens(0), std::invalid_argument);
}

TEST_CASE("schwarzschild end has zero scalar curvature and the stated mass") {
    const auto m2 = RadialMetric::schwarzschild(2.0);
    CHECK(m2.mass() == doctest::Approx(2.0));
    CHECK(m2.r_min() == doctest::Approx(1.0));  // horizon at m/2
    CHECK(m2.phi(1.0) == doctest::Approx(2.0));
    for (double r : {1.0, 1.7, 4.0, 25.0, 400.0})
        CHECK(std::abs(eqy::geom::scalar_curvature_radial(m2, r)) < 1e-11);
}

TEST_CASE("flat end is flat and the stereographic chart restores the sphere") {
    const auto flat = RadialMetric::flat(1.0);
    CHECK(flat.mass() == doctest::Approx(0.0));
    for (double r : {1.0, 2.0, 10.0})
        CHECK(std::abs(eqy::geom::scalar_curvature_radial(flat, r)) < 1e-12);
    CHECK(flat.asymptotically_flat());

    const auto round = RadialMetric::round_stereographic(1.0);
    CHECK_FALSE(round.asymptotically_flat());
    for (double r : {0.3, 1.0, 3.0, 12.0}) {
        CHECK(eqy::geom::scalar_curvature_radial(round, r) ==
              doctest::Approx(6.0).epsilon(1e-9));
    }
    // Radius a scales curvature like 1/a^2.
    const auto round3 = RadialMetric::round_stereographic(3.0);
    CHECK(eqy::geom::scalar_curvature_radial(round3, 1.0) ==
          doctest::Approx(6.0 / 9.0).epsilon(1e-9));
}

TEST_CASE("tabulated end reproduces the closed form it sampled") {
    const auto exact = RadialMetric::schwarzschild(1.0);
    std::vector<double> r, phi;
    for (int i = 0; i <= 400; ++i) {
        const double rr = 0.5 * std::pow(60.0 / 0.5, i / 400.0);
        r.push_back(rr);
        phi.push_back(exact.phi(rr));
    }
    const auto tab = RadialMetric::tabulated(r, phi, DecayModel{1.0, 0.5}, 0.5);
    CHECK(tab.mass() == doctest::Approx(1.0).epsilon(1e-9));
    for (double rr : {0.6, 1.3, 7.0, 55.0})
        CHECK(tab.phi(rr) == doctest::Approx(exact.phi(rr)).epsilon(1e-8));
    // Beyond the table the decay model takes over; that tail is exact here.
    CHECK(tab.phi(500.0) == doctest::Approx(exact.phi(500.0)).epsilon(1e-10));
}

TEST_CASE("chart end uses the supplied derivatives verbatim") {
    const double m = 1.5;
    auto phi = [m](double r) { return 1.0 + 0.5 * m / r; };
    auto dphi = [m](double r) { return -0.5 * m / (r * r); };
    auto d2phi = [m](double r) { return m / (r * r * r); };
    const auto chart =
        RadialMetric::chart(phi, dphi, d2phi, 0.75, 1e6, DecayModel{1.0, 0.5 * m});
    for (double r : {0.8, 2.0, 30.0})
        CHECK(std::abs(eqy::geom::scalar_curvature_radial(chart, r)) < 1e-12);
    CHECK(chart.mass() == doctest::Approx(m));
}

TEST_CASE("normalized curvature energy of the round sphere is sharp") {
    const auto sphere = ClosedModelMetric::round_sphere(1.0);
    // R * Vol^{2/3} = 6 (2 pi^2)^{2/3}, and the value is radius independent.
    CHECK(eqy::geom::einstein_hilbert_energy(sphere) ==
          doctest::Approx(kSigmaS3).epsilon(1e-13));
    CHECK(eqy::geom::einstein_hilbert_energy(ClosedModelMetric::round_sphere(3.0)) ==
          doctest::Approx(kSigmaS3).epsilon(1e-13));
}

TEST_CASE("conformal quotient is scale invariant") {
    const auto flat = RadialMetric::flat(0.5);
    ConformalTestFunction u;
    u.u = [](double r) { return std::max(0.0, std::min(1.0, 1.0 / r) - 0.1); };
    u.du = [](double r) { return (r > 1.0 && 1.0 / r > 0.1) ? -1.0 / (r * r) : 0.0; };
    u.support_radius = 10.0;
    u.breakpoints = {1.0};
    const double q1 = eqy::geom::yamabe_quotient(flat, u);

    ConformalTestFunction cu = u;
    cu.u = [&u](double r) { return 7.0 * u.u(r); };
    cu.du = [&u](double r) { return 7.0 * u.du(r); };
    const double q2 = eqy::geom::yamabe_quotient(flat, cu);
    CHECK(q2 == doctest::Approx(q1).epsilon(1e-12));
}

TEST_CASE("flat-space quotients sit above the sharp constant") {
    // The infimum over compactly supported u on flat R^3 is the round sphere
    // constant. Any admissible profile must land at or above it.
    const auto flat = RadialMetric::flat(1e-3);

    const double eps = 1e-3;
    ConformalTestFunction trunc;
    trunc.u = [eps](double r) { return std::max(0.0, std::min(1.0, 1.0 / r) - eps); };
    trunc.du = [eps](double r) {
        if (r <= 1.0) return 0.0;
        return (1.0 / r > eps) ? -1.0 / (r * r) : 0.0;
    };
    trunc.support_radius = 1.0 / eps;
    trunc.breakpoints = {1.0};
    const double q_trunc = eqy::geom::yamabe_quotient(flat, trunc);
    CHECK(q_trunc >= kSigmaS3 * (1.0 - 1e-9));

    // The bubble profile 1/sqrt(1+r^2) is the optimizer; truncated at a
    // height of 1e-3 it should come within a couple percent of sharp.
    const double delta = 1e-3;
    const double cutoff = std::sqrt(1.0 / (delta * delta) - 1.0);
    ConformalTestFunction bubble;
    bubble.u = [delta](double r) {
        return std::max(0.0, 1.0 / std::sqrt(1.0 + r * r) - delta);
    };
    bubble.du = [delta, cutoff](double r) {
        if (r >= cutoff) return 0.0;
        return -r * std::pow(1.0 + r * r, -1.5);
    };
    bubble.support_radius = cutoff;
    const double q_bubble = eqy::geom::yamabe_quotient(flat, bubble);
    CHECK(q_bubble >= kSigmaS3 * (1.0 - 1e-9));
    CHECK(q_bubble <= kSigmaS3 * 1.02);
}

TEST_CASE("radial quotients insist on an explicit derivative") {
    const auto flat = RadialMetric::flat(1.0);
    ConformalTestFunction u;
    u.u = [](double r) { return 1.0 / r; };
    CHECK_THROWS_AS(eqy::geom::yamabe_quotient(flat, u), std::invalid_argument);
}

TEST_CASE("closed-model quotient accepts constants and hits the sharp value") {
    const auto sphere = ClosedModelMetric::round_sphere(1.0);
    ConformalTestFunction u;
    u.u = [](double) { return 1.0; };
    u.du = [](double) { return 0.0; };
    const double q = eqy::geom::yamabe_quotient(sphere, u);
    CHECK(q == doctest::Approx(kSigmaS3).epsilon(1e-10));
}

}  // TEST_SUITE
