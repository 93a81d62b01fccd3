#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

// Small numerics toolkit shared by the geometry pipeline: adaptive quadrature,
// cubic splines, an adaptive RK45 integrator with dense output, bisection and
// a least-squares line fit. Everything is deterministic and single-threaded.

namespace eqy::num {

struct NumericsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive Simpson on [a, b]. Recursion splits until the local Richardson
// error estimate meets the mixed tolerance abs_tol + rel_tol*|I|.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, double abs_tol = 1e-14);

// Integral over [a, infinity) of a function that decays at least like 1/r^2.
// The range is split at `split` (default max(2a, 10)); the tail is computed
// exactly via the substitution x = 1/r, which maps it to a finite interval.
double integrate_to_infinity(const std::function<double(double)>& f, double a,
                             double rel_tol = 1e-10, double split = -1.0);

// Natural or clamped cubic spline through (x, y) with strictly increasing x.
// When clamped, d0/d1 are the prescribed end slopes.
class CubicSpline {
  public:
    CubicSpline() = default;
    static CubicSpline natural(std::vector<double> x, std::vector<double> y);
    static CubicSpline clamped(std::vector<double> x, std::vector<double> y,
                               double d0, double d1);

    double operator()(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    bool empty() const { return x_.empty(); }

  private:
    void build(bool clamped, double d0, double d1);
    std::size_t segment(double x) const;
    std::vector<double> x_, y_, m_;  // m_ holds second derivatives at knots
};

// State of one accepted RK45 step: value and first derivative of every
// component, enough for C^1 Hermite dense output.
struct OdeSample {
    double t;
    std::vector<double> y;
    std::vector<double> dy;
};

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-13;
    double max_step = 0.0;  // 0 disables the cap
    std::size_t max_steps = 2'000'000;
};

// Cash-Karp embedded RK45 for y' = f(t, y). Integrates from t0 to t1
// (either direction) and records every accepted step. Throws NumericsError
// if the step count limit is hit or the step size underflows.
std::vector<OdeSample> integrate_ode(
    const std::function<void(double, const std::vector<double>&, std::vector<double>&)>& f,
    std::vector<double> y0, double t0, double t1, const OdeOptions& opt = {});

// Piecewise cubic Hermite interpolant over accepted RK steps.
class DenseOde {
  public:
    DenseOde() = default;
    explicit DenseOde(std::vector<OdeSample> samples);
    double value(double t, std::size_t component) const;
    double derivative(double t, std::size_t component) const;
    double t_min() const { return front_t_; }
    double t_max() const { return back_t_; }

  private:
    std::size_t segment(double t) const;
    std::vector<OdeSample> s_;
    double front_t_ = 0.0, back_t_ = 0.0;
    bool reversed_ = false;
};

// Bisection for a sign change of f on [a, b]; assumes f(a), f(b) have
// opposite signs and refines until the bracket is below tol.
double bisect(const std::function<double(double)>& f, double a, double b,
              double tol = 1e-12, std::size_t max_iter = 200);

// Least-squares fit y = slope*x + intercept.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Gauss-Legendre nodes and weights on [-1, 1]; exact for polynomials of
// degree 2n-1. Nodes are found by Newton iteration on the recurrence.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussRule gauss_legendre(std::size_t n);

inline double sqr(double v) { return v * v; }

}  // namespace eqy::num
