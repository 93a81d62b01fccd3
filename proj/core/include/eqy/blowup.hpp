#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "eqy/geom.hpp"
#include "eqy/groups.hpp"

// Green's functions of the conformal Laplacian L0 = Lap - R0/8 on round
// spheres, their group averages, and the blow-up construction: conformally
// rescaling by the averaged Green's function to the fourth power sends the
// orbit to infinity and yields scalar-flat asymptotically flat ends, one per
// orbit point, which are read off here as radial metrics in an inverted
// chart.

namespace eqy::blowup {

using groups::Vec4;

// Radial profile d -> Gr(d) of the Green's function with pole normalization
// d * Gr(d) -> 1. Defined on (0, pi * radius); the value at the far endpoint
// is finite (regular antipode). Solved once on the unit sphere by matching a
// Frobenius series at each endpoint through an adaptive RK integration, then
// rescaled. The 1/d part is carried symbolically, so values stay accurate to
// about 1e-10 absolute even where Gr itself is large.
class GreensProfile {
  public:
    double value(double d) const;
    double derivative(double d) const;
    // From the ODE Gr'' = (R0/8) Gr - (2/a) cot(d/a) Gr', exact given the
    // other two; series-evaluated at the endpoints where cot degenerates.
    double second_derivative(double d) const;
    // Gr(d) - 1/d without cancellation, for residual checks that would
    // otherwise lose the smooth part under the pole.
    double regular_part(double d) const;

    double normalization() const { return 1.0; }
    double radius() const;
    double domain_max() const;  // pi * radius
    const groups::OrbitData& singular_orbit() const;

    struct Impl;
    explicit GreensProfile(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  private:
    std::shared_ptr<const Impl> impl_;
};

// Green's profile on a round sphere model. Quotient models are handled by
// averaging the covering-sphere profile, not here; passing one is an error.
GreensProfile greens_round(const geom::ClosedModelMetric& model, const Vec4& pole);

// G-invariant Green's function with poles on the orbit of p: the sum of the
// single-pole profile over the orbit points (the isotropy-normalized group
// average collapses to this).
class AveragedGreen {
  public:
    AveragedGreen(GreensProfile profile, groups::OrbitData orbit);

    // Throws std::domain_error when x lies on the singular orbit.
    double value(const Vec4& x) const;
    double min_orbit_distance(const Vec4& x) const;

    const groups::OrbitData& orbit() const { return orbit_; }
    const GreensProfile& profile() const { return profile_; }

  private:
    GreensProfile profile_;
    groups::OrbitData orbit_;
};

AveragedGreen averaged_green(const groups::FiniteGroupAction& action,
                             const GreensProfile& profile, const Vec4& p);

// One asymptotically flat end of the blow-up, radialized around its orbit
// point. The chart is normalized so the conformal factor tends to 1; the
// mass is read from the monopole fit and is meaningful only relative to that
// normalization.
struct BlowupEnd {
    geom::RadialMetric metric;
    std::optional<double> horizon_radius;
    std::string horizon_note;  // set when no minimal sphere was found
    double mass = 0.0;
    double phi_inf_raw = 0.0;  // chart limit before normalization
    // Relative angular spread of the averaged Green over the chart's geodesic
    // spheres: zero (up to roundoff) when the end is exactly rotationally
    // symmetric, positive for genuinely averaged lens ends.
    double anisotropy = 0.0;
};

struct BlowupModel {
    geom::ClosedModelMetric source;
    groups::FiniteGroupAction action;
    groups::OrbitData orbit;
    std::vector<BlowupEnd> ends;
    // ends[i] is carried to ends[perm[g][i]] by generator g.
    std::vector<std::vector<int>> end_permutation;
};

BlowupModel build_blowup(const geom::ClosedModelMetric& model,
                         const groups::FiniteGroupAction& action, const Vec4& p);

// Asymptotic flatness certificate: least-squares slope of log|phi^4 -
// phi_inf^4| against log r over the outer quarter of the chart. Ends whose
// factor is constant there are reported as exact instead of fitted.
struct DecayReport {
    bool exact = false;
    double exponent = 0.0;
    double rms_residual = 0.0;
    double phi_inf = 1.0;
    bool pass = false;
};

DecayReport verify_af_decay(const geom::RadialMetric& end);

}  // namespace eqy::blowup
