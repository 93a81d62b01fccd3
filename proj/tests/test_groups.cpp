#include "doctest.h"

#include "eqy/groups.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace {

using eqy::groups::FiniteGroupAction;
using eqy::groups::Mat4;
using eqy::groups::Vec4;

Vec4 unit(double a, double b, double c, double d) {
    Vec4 v(a, b, c, d);
    return v / v.norm();
}

Mat4 plane_rotation(double angle01, double angle23) {
    Mat4 g = Mat4::Identity();
    g(0, 0) = std::cos(angle01);
    g(0, 1) = -std::sin(angle01);
    g(1, 0) = std::sin(angle01);
    g(1, 1) = std::cos(angle01);
    g(2, 2) = std::cos(angle23);
    g(2, 3) = -std::sin(angle23);
    g(3, 2) = std::sin(angle23);
    g(3, 3) = std::cos(angle23);
    return g;
}

}  // namespace

TEST_SUITE("groups") {

TEST_CASE("builtin actions have the expected orders") {
    CHECK(FiniteGroupAction::trivial().order() == 1);
    CHECK(FiniteGroupAction::antipodal().order() == 2);
    CHECK(FiniteGroupAction::lens(5).order() == 5);
    CHECK(FiniteGroupAction::lens(7, 3).order() == 7);
    // p = 1 degenerates to the trivial action rather than erroring.
    CHECK(FiniteGroupAction::lens(1).order() == 1);
    CHECK_THROWS_AS(FiniteGroupAction::lens(4, 2), std::invalid_argument);
    CHECK_THROWS_AS(FiniteGroupAction::lens(0), std::invalid_argument);
}

TEST_CASE("custom closure generates the full cyclic group") {
    const Mat4 quarter = plane_rotation(M_PI / 2.0, 0.0);
    const auto g = FiniteGroupAction::custom({quarter});
    CHECK(g.order() == 4);

    Mat4 shear = Mat4::Identity();
    shear(0, 1) = 0.5;
    CHECK_THROWS_AS(FiniteGroupAction::custom({shear}), std::invalid_argument);

    // A rotation by an irrational angle never closes; the order cap fires.
    const Mat4 irr = plane_rotation(1.0, 0.0);
    CHECK_THROWS_AS(FiniteGroupAction::custom({irr}, 64), std::invalid_argument);
}

TEST_CASE("orbit counting satisfies orbit-stabilizer") {
    const auto lens3 = FiniteGroupAction::lens(3);
    const auto data = eqy::groups::orbit(lens3, unit(1, 0, 0, 0));
    CHECK(data.orbit_points.size() == 3);
    CHECK(data.isotropy_order == 1);
    CHECK(data.orbit_points.size() * data.isotropy_order == lens3.order());

    // The quarter-turn around the (2,3) plane fixes that plane pointwise.
    const Mat4 quarter = plane_rotation(M_PI / 2.0, 0.0);
    const auto rot4 = FiniteGroupAction::custom({quarter});
    const auto fixed = eqy::groups::orbit(rot4, unit(0, 0, 1, 0));
    CHECK(fixed.orbit_points.size() == 1);
    CHECK(fixed.isotropy_order == 4);
    const auto moved = eqy::groups::orbit(rot4, unit(1, 0, 0, 0));
    CHECK(moved.orbit_points.size() == 4);
    CHECK(moved.isotropy_order == 1);
}

TEST_CASE("antipodal action is free on the sphere") {
    const auto anti = FiniteGroupAction::antipodal();
    // No nontrivial element fixes anything, so the candidate fallback still
    // produces full orbits.
    const auto candidates = eqy::groups::fixed_point_candidates(anti);
    REQUIRE_FALSE(candidates.empty());
    CHECK(eqy::groups::min_orbit_cardinality(anti, candidates) == 2);
    const std::vector<Vec4> samples = {unit(1, 0, 0, 0), unit(1, 1, 1, 1), unit(0, 0, 0, 1)};
    CHECK(eqy::groups::min_orbit_cardinality(anti, samples) == 2);
}

TEST_CASE("fixed-point candidates expose the cheapest orbit") {
    // Quarter turn in one plane: the complementary plane is fixed, so the
    // minimal orbit has a single point even though generic orbits have 4.
    const Mat4 quarter = plane_rotation(M_PI / 2.0, 0.0);
    const auto rot4 = FiniteGroupAction::custom({quarter});
    auto candidates = eqy::groups::fixed_point_candidates(rot4);
    CHECK_FALSE(candidates.empty());
    std::vector<Vec4> samples = {unit(1, 0, 0, 0), unit(1, 2, 3, 4)};
    samples.insert(samples.end(), candidates.begin(), candidates.end());
    CHECK(eqy::groups::min_orbit_cardinality(rot4, samples) == 1);

    // Free lens actions: every candidate still carries a full orbit.
    const auto lens5 = FiniteGroupAction::lens(5);
    CHECK(eqy::groups::min_orbit_cardinality(
              lens5, eqy::groups::fixed_point_candidates(lens5)) == 5);
}

TEST_CASE("averaged functions are invariant and linear parts cancel") {
    const auto anti = FiniteGroupAction::antipodal();
    auto linear = [](const Vec4& x) { return 0.3 * x[0] - 1.1 * x[2] + 0.7 * x[3]; };
    auto avg = eqy::groups::average_function(anti, linear, 1);
    for (const Vec4& x : {unit(1, 0, 0, 0), unit(1, -2, 0.5, 3)})
        CHECK(avg(x) == doctest::Approx(0.0).epsilon(1e-14));

    const auto lens3 = FiniteGroupAction::lens(3);
    auto f = [](const Vec4& x) { return x[0] * x[0] + 0.25 * x[1] - 0.5 * x[3]; };
    auto avg3 = eqy::groups::average_function(lens3, f, 1);
    const Vec4 x = unit(0.2, -0.4, 0.9, 0.1);
    for (const Mat4& g : lens3.elements())
        CHECK(avg3(Vec4(g * x)) == doctest::Approx(avg3(x)).epsilon(1e-12));
}

TEST_CASE("orbit points returned for the base point are deduplicated") {
    const auto lens2 = FiniteGroupAction::lens(2);
    const Vec4 p = unit(1, 0, 0, 0);
    const auto data = eqy::groups::orbit(lens2, p);
    REQUIRE(data.orbit_points.size() == 2);
    CHECK((data.orbit_points[0] - p).norm() < 1e-12);
    CHECK((data.orbit_points[0] - data.orbit_points[1]).norm() > 1.0);
}

}  // TEST_SUITE
