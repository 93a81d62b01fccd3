#include "doctest.h"

#include "eqy/blowup.hpp"
#include "eqy/geom.hpp"
#include "eqy/groups.hpp"
#include "eqy/numerics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace {

using eqy::blowup::AveragedGreen;
using eqy::blowup::GreensProfile;
using eqy::geom::ClosedModelMetric;
using eqy::geom::RadialMetric;
using eqy::groups::FiniteGroupAction;
using eqy::groups::Vec4;

constexpr double kPi = 3.14159265358979323846;

// Pole at the first coordinate axis; x(d) walks away from it along a great
// circle, so the geodesic distance to the pole is exactly d.
Vec4 at_distance(double d) {
    return Vec4(std::cos(d), std::sin(d), 0.0, 0.0);
}

double closed_form_unit(double d) { return 1.0 / (2.0 * std::sin(d / 2.0)); }

}  // namespace

TEST_SUITE("blowup") {

TEST_CASE("unit-sphere profile matches the closed form") {
    const auto profile =
        eqy::blowup::greens_round(ClosedModelMetric::round_sphere(1.0), Vec4(1, 0, 0, 0));
    // Frozen point value: 1/(2 sin(pi/4)) = 1/sqrt(2).
    CHECK(profile.value(kPi / 2.0) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-11));

    double worst = 0.0;
    for (double d = 1e-3; d < kPi - 1e-3; d += 0.7e-2)
        worst = std::max(worst, std::abs(profile.value(d) - closed_form_unit(d)));
    CHECK(worst < 1e-10);

    // Derivative against d/dd [1/(2 sin(d/2))].
    auto dclosed = [](double d) {
        return -std::cos(d / 2.0) / (4.0 * eqy::num::sqr(std::sin(d / 2.0)));
    };
    for (double d : {0.05, 0.9, kPi / 2.0, 2.8})
        CHECK(profile.derivative(d) == doctest::Approx(dclosed(d)).epsilon(1e-9));
}

TEST_CASE("profile solves its own equation away from the pole") {
    const auto profile =
        eqy::blowup::greens_round(ClosedModelMetric::round_sphere(1.0), Vec4(1, 0, 0, 0));
    const double lambda = 6.0 / 8.0;
    for (double d : {0.02, 0.4, 1.3, 2.5, kPi - 0.02}) {
        const double res = profile.second_derivative(d) +
                           2.0 / std::tan(d) * profile.derivative(d) -
                           lambda * profile.value(d);
        CHECK(std::abs(res) < 1e-8);
    }
}

TEST_CASE("regular part stays finite through the pole") {
    const auto profile =
        eqy::blowup::greens_round(ClosedModelMetric::round_sphere(1.0), Vec4(1, 0, 0, 0));
    // Near zero the regular part tends to the series constant; through
    // moderate d it must agree with the subtracted closed form.
    CHECK(std::abs(profile.regular_part(1e-8)) < 1e-3);
    for (double d : {0.3, 1.0, 2.0})
        CHECK(profile.regular_part(d) ==
              doctest::Approx(closed_form_unit(d) - 1.0 / d).epsilon(1e-9));
}

TEST_CASE("profile rescales with the sphere radius") {
    const double a = 2.5;
    const auto unit =
        eqy::blowup::greens_round(ClosedModelMetric::round_sphere(1.0), Vec4(1, 0, 0, 0));
    const auto scaled =
        eqy::blowup::greens_round(ClosedModelMetric::round_sphere(a), Vec4(1, 0, 0, 0));
    CHECK(scaled.domain_max() == doctest::Approx(kPi * a));
    for (double d : {0.1, 1.0, 3.0, 7.0})
        CHECK(scaled.value(d) == doctest::Approx(unit.value(d / a) / a).epsilon(1e-10));
}

TEST_CASE("quotient models are rejected as green's function domains") {
    const auto rp3 = ClosedModelMetric::projective_space(1.0);
    CHECK_THROWS_AS(eqy::blowup::greens_round(rp3, Vec4(1, 0, 0, 0)),
                    std::domain_error);
}

TEST_CASE("antipodal average matches the two-pole closed form") {
    const auto sphere = ClosedModelMetric::round_sphere(1.0);
    const Vec4 pole(1, 0, 0, 0);
    const auto profile = eqy::blowup::greens_round(sphere, pole);
    const AveragedGreen avg =
        eqy::blowup::averaged_green(FiniteGroupAction::antipodal(), profile, pole);

    auto closed = [](double d) {
        return 1.0 / (2.0 * std::sin(d / 2.0)) + 1.0 / (2.0 * std::cos(d / 2.0));
    };
    double worst = 0.0;
    for (double d = 1e-3; d < kPi - 1e-3; d += 1.3e-2)
        worst = std::max(worst, std::abs(avg.value(at_distance(d)) - closed(d)));
    CHECK(worst < 1e-10);

    CHECK_THROWS_AS(avg.value(pole), std::domain_error);
}

TEST_CASE("averaged green is group invariant off the orbit") {
    const auto sphere = ClosedModelMetric::round_sphere(1.0);
    const Vec4 pole(1, 0, 0, 0);
    const auto lens3 = FiniteGroupAction::lens(3);
    const auto avg =
        eqy::blowup::averaged_green(lens3, eqy::blowup::greens_round(sphere, pole), pole);

    const std::vector<Vec4> probes = {
        Vec4(0.3, 0.4, 0.5, std::sqrt(1.0 - 0.09 - 0.16 - 0.25)),
        Vec4(0.0, 0.2, -0.7, std::sqrt(1.0 - 0.04 - 0.49)),
    };
    for (const Vec4& x : probes) {
        const double base = avg.value(x);
        for (const auto& g : lens3.elements())
            CHECK(avg.value(Vec4(g * x)) == doctest::Approx(base).epsilon(1e-10));
    }
}

TEST_CASE("antipodal blow-up ends are exactly the unit-mass black hole slice") {
    const auto model = eqy::blowup::build_blowup(ClosedModelMetric::round_sphere(1.0),
                                                 FiniteGroupAction::antipodal(),
                                                 Vec4(1, 0, 0, 0));
    REQUIRE(model.ends.size() == 2);
    const auto reference = RadialMetric::schwarzschild(1.0);
    for (const auto& end : model.ends) {
        CHECK(end.mass == doctest::Approx(1.0).epsilon(1e-8));
        REQUIRE(end.horizon_radius.has_value());
        CHECK(*end.horizon_radius == doctest::Approx(0.5).epsilon(1e-8));
        CHECK(end.anisotropy < 1e-9);
        for (double r = 0.55; r < 40.0; r *= 1.7)
            CHECK(end.metric.phi(r) ==
                  doctest::Approx(reference.phi(r)).epsilon(1e-10));
    }
    // The swap generator exchanges the two ends.
    REQUIRE(model.end_permutation.size() == 1);
    CHECK(model.end_permutation[0][0] == 1);
    CHECK(model.end_permutation[0][1] == 0);
}

TEST_CASE("trivial blow-up is flat with no horizon") {
    const auto model = eqy::blowup::build_blowup(ClosedModelMetric::round_sphere(1.0),
                                                 FiniteGroupAction::trivial(),
                                                 Vec4(0, 0, 0, 1));
    REQUIRE(model.ends.size() == 1);
    const auto& end = model.ends[0];
    CHECK_FALSE(end.horizon_radius.has_value());
    CHECK_FALSE(end.horizon_note.empty());
    CHECK(std::abs(end.mass) < 1e-8);
    for (double r = 0.2; r < 50.0; r *= 2.0)
        CHECK(end.metric.phi(r) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("lens blow-ups share one mass across ends and decay cleanly") {
    const auto model = eqy::blowup::build_blowup(ClosedModelMetric::round_sphere(1.0),
                                                 FiniteGroupAction::lens(3),
                                                 Vec4(1, 0, 0, 0));
    REQUIRE(model.ends.size() == 3);
    const double m0 = model.ends[0].mass;
    CHECK(m0 > 0.0);
    for (const auto& end : model.ends) {
        CHECK(end.mass == doctest::Approx(m0).epsilon(1e-9));
        REQUIRE(end.horizon_radius.has_value());
        CHECK(end.anisotropy > 0.1);  // genuinely averaged, not rotationally symmetric
        CHECK(end.anisotropy < 0.6);
        const auto decay = eqy::blowup::verify_af_decay(end.metric);
        CHECK(decay.pass);
        if (!decay.exact) {
            CHECK(decay.exponent > -1.1);
            CHECK(decay.exponent < -0.9);
        }
    }
}

TEST_CASE("decay certificate recognizes flat ends and fitted tails") {
    const auto flat = eqy::blowup::verify_af_decay(RadialMetric::flat());
    CHECK(flat.exact);
    CHECK(flat.pass);
    CHECK(flat.phi_inf == doctest::Approx(1.0));

    const auto schw = eqy::blowup::verify_af_decay(RadialMetric::schwarzschild(2.0));
    CHECK_FALSE(schw.exact);  // the deviation genuinely varies, so the tail is fitted
    CHECK(schw.pass);
    CHECK(schw.phi_inf == doctest::Approx(1.0));
    CHECK(schw.exponent == doctest::Approx(-1.0).epsilon(0.01));

    // A tail with an extra 1/r^2 correction still fits slope -1.
    auto phi = [](double r) { return 1.0 + 0.5 / r + 0.02 / (r * r); };
    auto dphi = [](double r) { return -0.5 / (r * r) - 0.04 / (r * r * r); };
    auto d2phi = [](double r) { return 1.0 / (r * r * r) + 0.12 / (r * r * r * r); };
    const auto chart = RadialMetric::chart(phi, dphi, d2phi, 0.5, 1e4,
                                           eqy::geom::DecayModel{1.0, 0.5});
    const auto fitted = eqy::blowup::verify_af_decay(chart);
    CHECK_FALSE(fitted.exact);
    CHECK(fitted.pass);
    CHECK(fitted.exponent == doctest::Approx(-1.0).epsilon(0.05));
}

}  // TEST_SUITE
