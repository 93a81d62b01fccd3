#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

// Metric representations and the variational functionals of the Yamabe
// problem in dimension 3. Two carrier families are supported: closed round
// models (sphere, projective space, lens quotients) described by constants,
// and asymptotically flat radial metrics g = phi(r)^4 * delta given by a
// conformal factor in a flat chart.

namespace eqy::geom {

enum class ModelKind { RoundSphere, ProjectiveSpace, Lens };

// Constant-curvature closed model: round S^3 of a given radius or a free
// quotient of it. Scalar curvature and volume are determined by the kind
// and the radius, so they are stored rather than computed.
class ClosedModelMetric {
  public:
    static ClosedModelMetric round_sphere(double radius = 1.0);
    static ClosedModelMetric projective_space(double radius = 1.0);
    static ClosedModelMetric lens(int p, double radius = 1.0);

    ModelKind kind() const { return kind_; }
    double radius() const { return radius_; }
    int p() const { return p_; }  // sheet count of the quotient (1 for S^3)
    double scalar_curvature() const { return r0_; }
    double volume() const { return volume_; }

  private:
    ClosedModelMetric(ModelKind kind, int p, double radius);
    ModelKind kind_;
    int p_;
    double radius_;
    double r0_;
    double volume_;
};

enum class RadialKind { Flat, Schwarzschild, RoundStereographic, Tabulated, Chart };

// Expected large-r behaviour of the conformal factor, phi ~ phi_inf + b/r.
// Used to extend tabulated data past the last sample and to pick truncation
// radii for improper integrals.
struct DecayModel {
    double phi_inf = 1.0;
    double monopole = 0.0;  // the coefficient b
};

// One asymptotically flat end in a conformally flat chart, g = phi^4 delta
// on [r_min, infinity). r_min is the horizon radius when the boundary is the
// detected minimal sphere, or simply the inner chart radius otherwise.
//
// phi is one of a few closed forms, a cubic-spline table, or an arbitrary
// chart-backed callable with its own exact derivatives (used by the blow-up
// construction, where naive spline differentiation would be too noisy for
// curvature checks). The stereographic variant closes up at infinity; it
// models a round sphere rather than an AF end and is accepted for curvature
// evaluation only.
class RadialMetric {
  public:
    RadialMetric() = default;

    static RadialMetric flat(double r_min = 0.0);
    static RadialMetric schwarzschild(double mass, double r_min = -1.0);
    static RadialMetric round_stereographic(double radius = 1.0);
    static RadialMetric tabulated(std::vector<double> r, std::vector<double> phi,
                                  DecayModel decay, double r_min);
    static RadialMetric chart(std::function<double(double)> phi,
                              std::function<double(double)> dphi,
                              std::function<double(double)> d2phi,
                              double r_min, double r_max, DecayModel decay);

    double phi(double r) const;
    double dphi(double r) const;
    double d2phi(double r) const;

    RadialKind kind() const { return kind_; }
    double r_min() const { return r_min_; }
    // Largest radius at which phi is directly represented; evaluation past it
    // falls back to the decay model. Infinite for closed forms.
    double r_max() const { return r_max_; }
    double mass() const { return mass_; }  // Schwarzschild parameter, else 2*b/phi_inf
    const DecayModel& decay() const { return decay_; }
    bool asymptotically_flat() const { return kind_ != RadialKind::RoundStereographic; }

  private:
    RadialKind kind_ = RadialKind::Flat;
    double r_min_ = 0.0;
    double r_max_ = 0.0;
    double mass_ = 0.0;
    double radius_ = 1.0;  // stereographic variant only
    DecayModel decay_;
    struct Table;
    std::shared_ptr<const Table> table_;
    struct Callables;
    std::shared_ptr<const Callables> fn_;
};

// Test function for the Yamabe quotient, a nonnegative radial profile on the
// carrier's chart (radius for RadialMetric, geodesic polar distance for a
// closed model). Optional support_radius marks where u vanishes identically;
// breakpoints list interior kinks so quadrature can split there.
struct ConformalTestFunction {
    std::function<double(double)> u;
    std::function<double(double)> du;
    std::optional<double> support_radius;
    std::vector<double> breakpoints;
};

// Scalar curvature of g = phi^4 delta at radius r:
//   R(r) = -8 phi^-5 (phi'' + (2/r) phi').
// Throws std::domain_error for non-positive phi and std::out_of_range for
// r below the chart.
double scalar_curvature_radial(const RadialMetric& metric, double r);

// Einstein-Hilbert energy of a closed model, E = R0 * Vol^(2/3); this is the
// normalized total-curvature functional, invariant under constant scaling of
// the metric.
double einstein_hilbert_energy(const ClosedModelMetric& metric);

// Yamabe quotient Q(u) = (int 8|grad u|^2 + R u^2 dV) / (int u^6 dV)^(1/3).
// The closed-model overload integrates radially in polar distance from a
// pole; lens quotients with p >= 3 have no radial fundamental domain, so only
// constant test functions are accepted there. Throws std::invalid_argument
// for a degenerate (vanishing) denominator.
double yamabe_quotient(const ClosedModelMetric& metric, const ConformalTestFunction& u);
double yamabe_quotient(const RadialMetric& metric, const ConformalTestFunction& u);

}  // namespace eqy::geom
