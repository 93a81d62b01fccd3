#include "eqy/geom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "eqy/numerics.hpp"

namespace eqy::geom {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kQuadRelTol = 1e-8;
}  // namespace

// ---------------------------------------------------------------------------
// ClosedModelMetric

ClosedModelMetric::ClosedModelMetric(ModelKind kind, int p, double radius)
    : kind_(kind), p_(p), radius_(radius) {
    if (radius <= 0.0) throw std::invalid_argument("closed model: radius must be positive");
    if (p < 1) throw std::invalid_argument("closed model: sheet count must be >= 1");
    r0_ = 6.0 / (radius * radius);
    volume_ = 2.0 * kPi * kPi * radius * radius * radius / static_cast<double>(p);
}

ClosedModelMetric ClosedModelMetric::round_sphere(double radius) {
    return ClosedModelMetric(ModelKind::RoundSphere, 1, radius);
}

ClosedModelMetric ClosedModelMetric::projective_space(double radius) {
    return ClosedModelMetric(ModelKind::ProjectiveSpace, 2, radius);
}

ClosedModelMetric ClosedModelMetric::lens(int p, double radius) {
    if (p < 2) throw std::invalid_argument("lens model: p must be >= 2");
    return ClosedModelMetric(ModelKind::Lens, p, radius);
}

// ---------------------------------------------------------------------------
// RadialMetric

struct RadialMetric::Table {
    num::CubicSpline spline;
    double first = 0.0, last = 0.0;
};

struct RadialMetric::Callables {
    std::function<double(double)> phi, dphi, d2phi;
};

RadialMetric RadialMetric::flat(double r_min) {
    if (r_min < 0.0) throw std::invalid_argument("flat end: r_min must be >= 0");
    RadialMetric m;
    m.kind_ = RadialKind::Flat;
    m.r_min_ = r_min;
    m.r_max_ = std::numeric_limits<double>::infinity();
    m.decay_ = {1.0, 0.0};
    return m;
}

RadialMetric RadialMetric::schwarzschild(double mass, double r_min) {
    if (mass <= 0.0) throw std::invalid_argument("schwarzschild end: mass must be positive");
    RadialMetric m;
    m.kind_ = RadialKind::Schwarzschild;
    m.mass_ = mass;
    m.r_min_ = r_min < 0.0 ? 0.5 * mass : r_min;
    if (m.r_min_ <= 0.0) throw std::invalid_argument("schwarzschild end: r_min must be positive");
    m.r_max_ = std::numeric_limits<double>::infinity();
    m.decay_ = {1.0, 0.5 * mass};
    return m;
}

RadialMetric RadialMetric::round_stereographic(double radius) {
    if (radius <= 0.0) throw std::invalid_argument("stereographic chart: radius must be positive");
    RadialMetric m;
    m.kind_ = RadialKind::RoundStereographic;
    m.radius_ = radius;
    m.r_min_ = 0.0;
    m.r_max_ = std::numeric_limits<double>::infinity();
    m.decay_ = {0.0, 0.0};  // the factor vanishes at infinity; not an AF end
    return m;
}

RadialMetric RadialMetric::tabulated(std::vector<double> r, std::vector<double> phi,
                                     DecayModel decay, double r_min) {
    if (r.size() != phi.size() || r.size() < 4)
        throw std::invalid_argument("tabulated end: need >= 4 samples");
    for (double v : phi)
        if (v <= 0.0) throw std::domain_error("tabulated end: phi must be positive");
    if (decay.phi_inf <= 0.0)
        throw std::invalid_argument("tabulated end: decay limit must be positive");
    if (r_min < r.front() || r_min >= r.back())
        throw std::invalid_argument("tabulated end: r_min outside the sampled range");
    RadialMetric m;
    m.kind_ = RadialKind::Tabulated;
    m.r_min_ = r_min;
    m.r_max_ = r.back();
    m.decay_ = decay;
    m.mass_ = 2.0 * decay.monopole / decay.phi_inf;
    auto table = std::make_shared<Table>();
    table->first = r.front();
    table->last = r.back();
    table->spline = num::CubicSpline::natural(std::move(r), std::move(phi));
    m.table_ = std::move(table);
    return m;
}

RadialMetric RadialMetric::chart(std::function<double(double)> phi,
                                 std::function<double(double)> dphi,
                                 std::function<double(double)> d2phi,
                                 double r_min, double r_max, DecayModel decay) {
    if (!phi || !dphi || !d2phi)
        throw std::invalid_argument("chart end: all three callables are required");
    if (r_min < 0.0 || r_max <= r_min)
        throw std::invalid_argument("chart end: need 0 <= r_min < r_max");
    if (decay.phi_inf <= 0.0)
        throw std::invalid_argument("chart end: decay limit must be positive");
    RadialMetric m;
    m.kind_ = RadialKind::Chart;
    m.r_min_ = r_min;
    m.r_max_ = r_max;
    m.decay_ = decay;
    m.mass_ = 2.0 * decay.monopole / decay.phi_inf;
    auto fn = std::make_shared<Callables>();
    fn->phi = std::move(phi);
    fn->dphi = std::move(dphi);
    fn->d2phi = std::move(d2phi);
    m.fn_ = std::move(fn);
    return m;
}

double RadialMetric::phi(double r) const {
    switch (kind_) {
        case RadialKind::Flat:
            return 1.0;
        case RadialKind::Schwarzschild:
            if (r <= 0.0) throw std::out_of_range("schwarzschild phi: r must be positive");
            return 1.0 + 0.5 * mass_ / r;
        case RadialKind::RoundStereographic: {
            const double a2 = radius_ * radius_;
            return std::sqrt(2.0 * a2 / (a2 + r * r));
        }
        case RadialKind::Tabulated:
            if (r < table_->first) throw std::out_of_range("tabulated phi: r below the table");
            if (r > table_->last) return decay_.phi_inf + decay_.monopole / r;
            return table_->spline(r);
        case RadialKind::Chart:
            if (r < r_min_) throw std::out_of_range("chart phi: r below the chart");
            if (r > r_max_) return decay_.phi_inf + decay_.monopole / r;
            return fn_->phi(r);
    }
    throw std::logic_error("unreachable radial kind");
}

double RadialMetric::dphi(double r) const {
    switch (kind_) {
        case RadialKind::Flat:
            return 0.0;
        case RadialKind::Schwarzschild:
            if (r <= 0.0) throw std::out_of_range("schwarzschild phi: r must be positive");
            return -0.5 * mass_ / (r * r);
        case RadialKind::RoundStereographic: {
            const double a2 = radius_ * radius_;
            return -std::sqrt(2.0 * a2) * r * std::pow(a2 + r * r, -1.5);
        }
        case RadialKind::Tabulated:
            if (r < table_->first) throw std::out_of_range("tabulated phi: r below the table");
            if (r > table_->last) return -decay_.monopole / (r * r);
            return table_->spline.derivative(r);
        case RadialKind::Chart:
            if (r < r_min_) throw std::out_of_range("chart phi: r below the chart");
            if (r > r_max_) return -decay_.monopole / (r * r);
            return fn_->dphi(r);
    }
    throw std::logic_error("unreachable radial kind");
}

double RadialMetric::d2phi(double r) const {
    switch (kind_) {
        case RadialKind::Flat:
            return 0.0;
        case RadialKind::Schwarzschild:
            if (r <= 0.0) throw std::out_of_range("schwarzschild phi: r must be positive");
            return mass_ / (r * r * r);
        case RadialKind::RoundStereographic: {
            const double a2 = radius_ * radius_;
            const double s = a2 + r * r;
            return std::sqrt(2.0 * a2) * (3.0 * r * r * std::pow(s, -2.5) - std::pow(s, -1.5));
        }
        case RadialKind::Tabulated:
            if (r < table_->first) throw std::out_of_range("tabulated phi: r below the table");
            if (r > table_->last) return 2.0 * decay_.monopole / (r * r * r);
            return table_->spline.second_derivative(r);
        case RadialKind::Chart:
            if (r < r_min_) throw std::out_of_range("chart phi: r below the chart");
            if (r > r_max_) return 2.0 * decay_.monopole / (r * r * r);
            return fn_->d2phi(r);
    }
    throw std::logic_error("unreachable radial kind");
}

// ---------------------------------------------------------------------------
// Functionals

double scalar_curvature_radial(const RadialMetric& metric, double r) {
    if (r < metric.r_min()) throw std::out_of_range("scalar_curvature_radial: r below the boundary");
    if (r <= 0.0) throw std::out_of_range("scalar_curvature_radial: r must be positive");
    const double p = metric.phi(r);
    if (p <= 0.0) throw std::domain_error("scalar_curvature_radial: non-positive conformal factor");
    const double lap = metric.d2phi(r) + 2.0 / r * metric.dphi(r);
    return -8.0 * lap / (p * p * p * p * p);
}

double einstein_hilbert_energy(const ClosedModelMetric& metric) {
    return metric.scalar_curvature() * std::cbrt(metric.volume() * metric.volume());
}

namespace {

// Splits [a, b] at the interior breakpoints and integrates piecewise, so
// kinks in the test function do not stall the adaptive rule.
double integrate_split(const std::function<double(double)>& f, double a, double b,
                       const std::vector<double>& breaks) {
    std::vector<double> cuts;
    cuts.push_back(a);
    for (double c : breaks)
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total += num::integrate(f, cuts[i], cuts[i + 1], kQuadRelTol);
    return total;
}

bool looks_constant(const ConformalTestFunction& u, double lo, double hi) {
    const double v0 = u.u(lo);
    for (int i = 1; i <= 8; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / 8.0;
        if (std::abs(u.u(x) - v0) > 1e-12 * (1.0 + std::abs(v0))) return false;
    }
    return true;
}

}  // namespace

double yamabe_quotient(const ClosedModelMetric& metric, const ConformalTestFunction& u) {
    if (!u.u) throw std::invalid_argument("yamabe_quotient: missing test function");
    const double a = metric.radius();
    // Polar fundamental domain: the full [0, pi a] for the sphere, half of it
    // for the projective space. Lens quotients with p >= 3 are not radially
    // symmetric around any point, so only constants are meaningful there.
    double d_max = kPi * a;
    if (metric.kind() == ModelKind::ProjectiveSpace) d_max *= 0.5;
    if (metric.kind() == ModelKind::Lens) {
        if (!looks_constant(u, 0.0, kPi * a))
            throw std::domain_error(
                "yamabe_quotient: lens quotients accept constant test functions only");
        return einstein_hilbert_energy(metric);
    }
    if (u.support_radius) d_max = std::min(d_max, *u.support_radius);
    const bool constant = looks_constant(u, 0.0, d_max);
    if (!constant && !u.du)
        throw std::invalid_argument("yamabe_quotient: non-constant test function needs du");

    const double r0 = metric.scalar_curvature();
    auto area = [&](double d) {
        const double s = std::sin(d / a);
        return 4.0 * kPi * a * a * s * s;
    };
    auto numer_f = [&](double d) {
        const double uu = u.u(d);
        const double du = constant ? 0.0 : u.du(d);
        return (8.0 * du * du + r0 * uu * uu) * area(d);
    };
    auto denom_f = [&](double d) {
        const double uu = u.u(d);
        const double u2 = uu * uu;
        return u2 * u2 * u2 * area(d);
    };
    const double numer = integrate_split(numer_f, 0.0, d_max, u.breakpoints);
    const double denom = integrate_split(denom_f, 0.0, d_max, u.breakpoints);
    if (denom <= 0.0 || denom < 1e-300)
        throw std::invalid_argument("yamabe_quotient: degenerate denominator");
    return numer / std::cbrt(denom);
}

double yamabe_quotient(const RadialMetric& metric, const ConformalTestFunction& u) {
    if (!u.u) throw std::invalid_argument("yamabe_quotient: missing test function");
    if (!u.du) throw std::invalid_argument("yamabe_quotient: radial quotient needs du");
    const double r_lo = metric.r_min();
    // Closed scalar-flat forms drop the curvature term exactly instead of
    // integrating numerical zeros.
    const bool scalar_flat =
        metric.kind() == RadialKind::Flat || metric.kind() == RadialKind::Schwarzschild;

    auto numer_f = [&](double r) {
        const double p = metric.phi(r);
        const double du = u.du(r);
        double val = 8.0 * du * du * p * p;
        if (!scalar_flat) {
            const double uu = u.u(r);
            const double p3 = p * p * p;
            val += scalar_curvature_radial(metric, r) * p3 * p3 * uu * uu;
        }
        return val * 4.0 * kPi * r * r;
    };
    auto denom_f = [&](double r) {
        const double p = metric.phi(r);
        const double uu = u.u(r);
        const double u2 = uu * uu;
        const double p3 = p * p * p;
        return u2 * u2 * u2 * p3 * p3 * 4.0 * kPi * r * r;
    };

    double numer, denom;
    if (u.support_radius) {
        numer = integrate_split(numer_f, r_lo, *u.support_radius, u.breakpoints);
        denom = integrate_split(denom_f, r_lo, *u.support_radius, u.breakpoints);
    } else {
        double split = std::max(2.0 * std::max(r_lo, 1.0), 10.0);
        for (double c : u.breakpoints) split = std::max(split, 2.0 * c);
        numer = integrate_split(numer_f, r_lo, split, u.breakpoints) +
                num::integrate_to_infinity(numer_f, split, kQuadRelTol);
        denom = integrate_split(denom_f, r_lo, split, u.breakpoints) +
                num::integrate_to_infinity(denom_f, split, kQuadRelTol);
    }
    if (denom <= 0.0 || denom < 1e-300)
        throw std::invalid_argument("yamabe_quotient: degenerate denominator");
    return numer / std::cbrt(denom);
}

}  // namespace eqy::geom
