#include "doctest.h"

#include "eqy/blowup.hpp"
#include "eqy/geom.hpp"
#include "eqy/groups.hpp"
#include "eqy/levelset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using eqy::geom::ClosedModelMetric;
using eqy::geom::DecayModel;
using eqy::geom::RadialMetric;
using eqy::groups::FiniteGroupAction;
using eqy::groups::Vec4;
using eqy::levelset::HarmonicSolution;
using eqy::levelset::LevelSetScan;

constexpr double kPi = 3.14159265358979323846;

double schwarzschild_w(double t) {
    const double s = 2.0 - std::exp(-t);
    return kPi * s * s;
}

}  // namespace

TEST_SUITE("levelset") {

TEST_CASE("closed-form harmonic factors for flat and black-hole ends") {
    const auto flat = eqy::levelset::solve_harmonic_radial(RadialMetric::flat(1.5));
    CHECK(flat.C0 == doctest::Approx(4.0 * kPi * 1.5).epsilon(1e-14));
    CHECK(flat.u(3.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(flat.u(1.5) == doctest::Approx(1.0));

    const auto bh = eqy::levelset::solve_harmonic_radial(RadialMetric::schwarzschild(2.0));
    // u = m/(r + m/2) with u(r_h) = 1 and capacity flux 4 pi m.
    CHECK(bh.C0 == doctest::Approx(8.0 * kPi).epsilon(1e-14));
    for (double r : {1.0, 2.5, 10.0, 300.0})
        CHECK(bh.u(r) == doctest::Approx(2.0 / (r + 1.0)).epsilon(1e-13));
}

TEST_CASE("quadrature route agrees with the closed form it shadows") {
    const auto exact = RadialMetric::schwarzschild(1.0);
    auto phi = [](double r) { return 1.0 + 0.5 / r; };
    auto dphi = [](double r) { return -0.5 / (r * r); };
    auto d2phi = [](double r) { return 1.0 / (r * r * r); };
    const auto chart =
        RadialMetric::chart(phi, dphi, d2phi, 0.5, 1e6, DecayModel{1.0, 0.5});

    const auto ref = eqy::levelset::solve_harmonic_radial(exact);
    const auto quad = eqy::levelset::solve_harmonic_radial(chart);
    CHECK(quad.C0 == doctest::Approx(ref.C0).epsilon(1e-10));
    for (double r : {0.6, 1.0, 4.0, 80.0}) {
        CHECK(quad.u(r) == doctest::Approx(ref.u(r)).epsilon(1e-9));
        CHECK(quad.du(r) == doctest::Approx(ref.du(r)).epsilon(1e-9));
    }
}

TEST_CASE("level energy of the black-hole slice follows the closed form") {
    const auto sol = eqy::levelset::solve_harmonic_radial(RadialMetric::schwarzschild(1.0));
    const auto grid = eqy::levelset::uniform_levels(6.0, 121);
    const auto scan = eqy::levelset::scan_levels(sol, grid);
    REQUIRE(scan.samples.size() == 121);
    CHECK(scan.boundary_minimal);
    CHECK_FALSE(scan.truncated);
    CHECK(scan.W0 == doctest::Approx(kPi).epsilon(1e-12));
    for (const auto& s : scan.samples) {
        CHECK(s.W == doctest::Approx(schwarzschild_w(s.t)).epsilon(1e-10));
        // r(t) = m(e^t - 1/2) for unit mass.
        CHECK(s.r == doctest::Approx(std::exp(s.t) - 0.5).epsilon(1e-10));
    }
}

TEST_CASE("flux times e^{-t} is the capacity constant on every level") {
    for (double mass : {0.5, 1.0, 3.0}) {
        const auto sol =
            eqy::levelset::solve_harmonic_radial(RadialMetric::schwarzschild(mass));
        const auto scan =
            eqy::levelset::scan_levels(sol, eqy::levelset::uniform_levels(8.0, 65));
        for (const auto& s : scan.samples)
            CHECK(s.flux * std::exp(-s.t) == doctest::Approx(scan.C0).epsilon(1e-13));
    }
}

TEST_CASE("level data obeys the flux-area inequality") {
    // W * area >= flux^2 is Cauchy-Schwarz on each level surface and holds
    // with equality for radial data; a strict check guards sign slips.
    const auto sol = eqy::levelset::solve_harmonic_radial(RadialMetric::schwarzschild(2.0));
    const auto scan = eqy::levelset::scan_levels(sol, eqy::levelset::uniform_levels(5.0, 41));
    for (const auto& s : scan.samples)
        CHECK(s.W * s.area >= s.flux * s.flux * (1.0 - 1e-12));
}

TEST_CASE("flat ends sit exactly on the seeded monotonicity bound") {
    const auto sol = eqy::levelset::solve_harmonic_radial(RadialMetric::flat(1.0));
    const auto scan = eqy::levelset::scan_levels(sol, eqy::levelset::uniform_levels(4.0, 33));
    CHECK_FALSE(scan.boundary_minimal);
    const auto check = eqy::levelset::check_monotonicity(scan);
    CHECK(check.pass);
    CHECK(check.near_equality_count == 33);  // W identically 4 pi
    CHECK_THROWS_AS(eqy::levelset::check_minimal_bound(scan), std::domain_error);
}

TEST_CASE("minimal-boundary bound is saturated by the black-hole slice") {
    const auto sol = eqy::levelset::solve_harmonic_radial(RadialMetric::schwarzschild(0.7));
    const auto scan = eqy::levelset::scan_levels(sol, eqy::levelset::uniform_levels(6.0, 61));
    CHECK(scan.boundary_minimal);
    const auto check = eqy::levelset::check_minimal_bound(scan);
    CHECK(check.pass);
    CHECK(check.max_violation < 1e-10);
    CHECK(check.near_equality_count == 61);
}

TEST_CASE("equivariant combination doubles the antipodal scan") {
    const auto model = eqy::blowup::build_blowup(ClosedModelMetric::round_sphere(1.0),
                                                 FiniteGroupAction::antipodal(),
                                                 Vec4(1, 0, 0, 0));
    std::vector<HarmonicSolution> sols;
    for (const auto& end : model.ends)
        sols.push_back(eqy::levelset::solve_harmonic_radial(end.metric));
    const auto grid = eqy::levelset::uniform_levels(6.0, 81);
    const auto eq = eqy::levelset::combine_equivariant(model, sols, grid);
    CHECK(eq.card == 2);
    CHECK(eq.pass);
    for (const auto& s : eq.combined.samples)
        CHECK(s.W == doctest::Approx(2.0 * schwarzschild_w(s.t)).epsilon(1e-8));
    CHECK(eq.combined.C0 == doctest::Approx(2.0 * sols[0].C0).epsilon(1e-10));
}

TEST_CASE("mismatched per-end solutions raise the symmetry error") {
    const auto model = eqy::blowup::build_blowup(ClosedModelMetric::round_sphere(1.0),
                                                 FiniteGroupAction::antipodal(),
                                                 Vec4(1, 0, 0, 0));
    std::vector<HarmonicSolution> sols;
    sols.push_back(eqy::levelset::solve_harmonic_radial(model.ends[0].metric));
    // Wrong physics for the second end: a heavier closed-form slice.
    sols.push_back(eqy::levelset::solve_harmonic_radial(RadialMetric::schwarzschild(2.0)));
    const auto grid = eqy::levelset::uniform_levels(4.0, 17);
    CHECK_THROWS_AS(eqy::levelset::combine_equivariant(model, sols, grid),
                    eqy::levelset::SymmetryError);
}

TEST_CASE("csv export writes the documented columns") {
    const auto sol = eqy::levelset::solve_harmonic_radial(RadialMetric::schwarzschild(1.0));
    const auto scan = eqy::levelset::scan_levels(sol, eqy::levelset::uniform_levels(2.0, 9));
    const std::string path = "eqy_test_scan.csv";
    eqy::levelset::write_scan_csv(path, scan, 1.0);

    std::ifstream in(path);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,r,area,flux,W,bound,slack");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++rows;
        double t, r, area, flux, w, bound, slack;
        const int got = std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf",
                                    &t, &r, &area, &flux, &w, &bound, &slack);
        CHECK(got == 7);
        CHECK(bound == doctest::Approx(schwarzschild_w(t)).epsilon(1e-9));
        CHECK(std::abs(slack - (bound - w)) < 1e-9);
    }
    CHECK(rows == scan.samples.size());
    in.close();
    std::remove(path.c_str());
}

TEST_CASE("cartesian cross-check converges on the black-hole factor") {
    const auto end = RadialMetric::schwarzschild(2.0);
    const auto radial = eqy::levelset::solve_harmonic_radial(end);
    eqy::levelset::GridOptions opt;
    opt.n = 32;
    const std::function<double(double)> ref = radial.u;
    const auto grid = eqy::levelset::solve_harmonic_grid3d(end, opt, &ref);
    CHECK(grid.info.n == 32);
    CHECK(grid.info.iterations > 0);
    CHECK(grid.info.relative_residual <= opt.cg_rel_tol);
    CHECK(grid.info.sup_error < 2e-2);
    REQUIRE(grid.info.residual_history.size() >= 2);
    CHECK(grid.info.residual_history.back() < grid.info.residual_history.front());
    // The read-off solution reproduces u away from the cut cells.
    for (double r : {2.0, 4.0, 7.0})
        CHECK(grid.solution.u(r) == doctest::Approx(radial.u(r)).epsilon(2e-2));
}

}  // TEST_SUITE
