#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "eqy/blowup.hpp"
#include "eqy/geom.hpp"

// Harmonic level-set machinery on asymptotically flat ends: the radial
// Dirichlet problem, the sweep of the level sets of w = -log u, the energy
// W(t) with its monotonicity bounds, and the equivariant combination over
// the ends of a blow-up.

namespace eqy::levelset {

// Raised when the per-end scans of an equivariant family disagree although
// the group action should make them isometric.
struct SymmetryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class HarmonicKind { ClosedForm, RadialOde, Grid3d };

// Solution of Delta_g u = 0 with u = 1 on the boundary sphere r = r_h and
// u -> 0 at infinity. du is the exact radial derivative, not a numerical
// differentiation of u: for the quadrature representation u' =
// -K/(phi^2 r^2), which is what makes the flux identity exact.
struct HarmonicSolution {
    geom::RadialMetric end;
    std::function<double(double)> u;
    std::function<double(double)> du;
    double r_h = 0.0;
    double C0 = 0.0;  // capacity flux, flux(t) = C0 e^t
    HarmonicKind kind = HarmonicKind::ClosedForm;
};

// Closed forms for the flat and Schwarzschild factors; the general radial
// problem reduces exactly to the quadrature u(r) = K int_r^inf ds/(phi s)^2
// after one integration of (phi^2 r^2 u')' = 0. Throws std::domain_error
// when the end has no positive boundary radius and NumericsError when the
// factor is not positive on the integration range.
HarmonicSolution solve_harmonic_radial(const geom::RadialMetric& end);

struct LevelSample {
    double t = 0.0;
    double r = 0.0;
    double area = 0.0;
    double flux = 0.0;
    double W = 0.0;
};

struct LevelSetScan {
    std::vector<LevelSample> samples;
    double t_max = 0.0;
    double C0 = 0.0;
    double W0 = 0.0;
    bool boundary_minimal = false;  // |(r phi^2)'| vanishes at r_h
    bool truncated = false;         // a level radius fell outside the chart
    std::string note;
};

std::vector<double> uniform_levels(double t_max, std::size_t n);

// Sweep the level sets u = e^{-t}: per level the radius from bisection on
// the monotone u, then area = 4 pi r^2 phi^4, |grad w| = |u'|/(u phi^2),
// flux = area |grad w|, W = area |grad w|^2.
LevelSetScan scan_levels(const HarmonicSolution& sol, const std::vector<double>& t_grid);

struct BoundCheck {
    bool pass = false;
    double max_violation = 0.0;  // max over samples of W - bound
    double worst_t = 0.0;
    std::size_t near_equality_count = 0;  // samples with |W - bound| below tol
};

// W(t) <= [e^{-t} sqrt(W0) + (1 - e^{-t}) sqrt(4 pi)]^2 + tol, seeded from
// the scan's own W(0).
BoundCheck check_monotonicity(const LevelSetScan& scan, double tol = 1e-8);

// Minimal-boundary form W(t) <= pi (2 - e^{-t})^2 + tol. Precondition: the
// scan's end had a minimal boundary sphere; throws std::domain_error
// otherwise.
BoundCheck check_minimal_bound(const LevelSetScan& scan, double tol = 1e-8);

struct EquivariantScan {
    LevelSetScan combined;  // columns summed over the ends
    std::vector<LevelSetScan> per_end;
    std::size_t card = 0;
    double max_violation = 0.0;  // against card * pi (2 - e^{-t})^2
    bool pass = false;
};

// Scan every end of the blow-up on a shared level grid and sum. The ends are
// isometric by equivariance, so their scans must agree within 1e-8 relative;
// a larger spread raises SymmetryError. Every boundary must be the minimal
// sphere, as the combined bound assumes it.
EquivariantScan combine_equivariant(const blowup::BlowupModel& model,
                                    const std::vector<HarmonicSolution>& per_end,
                                    const std::vector<double>& t_grid);

// CSV export with header exactly t,r,area,flux,W,bound,slack. The bound
// column is bound_multiplier * pi (2 - e^{-t})^2 when the scan's boundary is
// minimal and the monotonicity bound seeded from W0 otherwise.
void write_scan_csv(const std::string& path, const LevelSetScan& scan,
                    double bound_multiplier = 1.0);

// Cross-validation solver: the same Dirichlet problem discretized on a
// Cartesian grid in the flat chart for v = phi u (flat-harmonic when the end
// is scalar-flat), with cut cells at the inner sphere and a monopole Robin
// condition on the outer box. Conjugate gradients on the SPD system.
struct GridOptions {
    std::size_t n = 64;            // cells per axis
    double outer = 16.0;           // half-width of the box
    double fine = 1.6;             // half-width of the uniformly refined core
    double fine_fraction = 0.625;  // fraction of cells per axis inside the core
    double cg_rel_tol = 1e-8;
    std::size_t max_iterations = 50000;
};

struct GridSolveInfo {
    std::size_t n = 0;
    std::size_t iterations = 0;
    double relative_residual = 0.0;
    double sup_error = 0.0;  // vs the reference solution, when supplied
    std::vector<double> residual_history;
};

struct GridHarmonic {
    HarmonicSolution solution;  // radial read-off along a grid axis
    GridSolveInfo info;
};

// reference: exact u(r) to compare against at the cell centers outside the
// boundary layer; pass nullptr to skip the comparison. Throws NumericsError
// with the residual history embedded in the message on non-convergence.
GridHarmonic solve_harmonic_grid3d(const geom::RadialMetric& end, const GridOptions& options,
                                   const std::function<double(double)>* reference = nullptr);

}  // namespace eqy::levelset
