#include "eqy/quotient.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "eqy/numerics.hpp"

namespace eqy::quotient {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

SigmaConstants sigma_constants() {
    SigmaConstants c;
    c.sigma_s3 = 6.0 * std::pow(2.0 * kPi * kPi, 2.0 / 3.0);
    c.sigma_2 = c.sigma_s3 * improvement_ratio();
    return c;
}

double sigma_p(int p) {
    if (p < 1) throw std::domain_error("lens order p must be a positive integer");
    return sigma_constants().sigma_s3 / std::cbrt(static_cast<double>(p) * static_cast<double>(p));
}

double improvement_ratio() {
    static const double ratio = std::pow(2.0, -2.0 / 3.0);
    return ratio;
}

ModelProfileF ModelProfileF::rp3_model(double mass, std::size_t tab_nodes) {
    if (!(mass > 0.0)) throw std::domain_error("model profile needs a positive mass");
    if (tab_nodes < 9) throw std::domain_error("model profile needs at least 9 tabulation nodes");
    const double m = mass;

    // Closed-form ingredients on the mass-m end: the conformal factor phi,
    // the stereographic factor Phi restoring the round metric of radius 1/m,
    // and their radial derivatives.
    auto phi = [m](double r) { return 1.0 + 0.5 * m / r; };
    auto dphi = [m](double r) { return -0.5 * m / (r * r); };
    auto big_phi = [m](double r) { return 2.0 / std::sqrt(m * m + 4.0 * r * r); };
    auto dbig_phi = [m](double r) {
        const double u = m * m + 4.0 * r * r;
        return -8.0 * r / (u * std::sqrt(u));
    };
    auto u0 = [&](double r) { return big_phi(r) / phi(r); };
    auto du0 = [&](double r) {
        const double p = phi(r);
        return (dbig_phi(r) * p - big_phi(r) * dphi(r)) / (p * p);
    };

    // Certificate: the restored metric (u0 * phi)^4 * delta must have constant
    // scalar curvature 6 m^2. Differentiate the assembled product numerically
    // so a wrong identification (scale, horizon radius, factor ordering) shows
    // up here instead of propagating into the Rayleigh quotient.
    double worst = 0.0;
    const double target = 6.0 * m * m;
    for (int k = 0; k < 25; ++k) {
        const double r = 0.5 * m * std::pow(40.0, k / 24.0);
        const double h = 1e-3 * r;
        auto prod = [&](double rr) { return u0(rr) * phi(rr); };
        const double pm2 = prod(r - 2 * h), pm1 = prod(r - h), p0 = prod(r);
        const double pp1 = prod(r + h), pp2 = prod(r + 2 * h);
        const double d1 = (pm2 - 8 * pm1 + 8 * pp1 - pp2) / (12 * h);
        const double d2 = (-pm2 + 16 * pm1 - 30 * p0 + 16 * pp1 - pp2) / (12 * h * h);
        const double curv = -8.0 * (d2 + 2.0 * d1 / r) / std::pow(p0, 5);
        worst = std::max(worst, std::abs(curv / target - 1.0));
    }
    if (worst > 1e-4) {
        throw num::NumericsError("model profile failed the round-restoration certificate: "
                                 "relative curvature residual " + format_double(worst));
    }

    // Tabulate f(s) = u0 on the level set {u_s = s}, where the closed-form
    // potential gives r(s) = m (2 - s) / (2 s). The end slopes are exact, so
    // the clamped spline keeps full interior accuracy.
    const std::size_t n = tab_nodes;
    std::vector<double> s(n), fv(n);
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = static_cast<double>(i) / static_cast<double>(n - 1);
        if (i == 0) {
            fv[i] = 0.0;
        } else {
            const double r = 0.5 * m * (2.0 - s[i]) / s[i];
            fv[i] = u0(r);
        }
    }
    auto slope = [&](double ss) {
        const double r = 0.5 * m * (2.0 - ss) / ss;
        return du0(r) * (-m / (ss * ss));
    };
    const double d_left = 1.0 / m;  // limit of du0 * dr/ds as s -> 0
    const double d_right = slope(1.0);
    auto spline = std::make_shared<num::CubicSpline>(
        num::CubicSpline::clamped(s, fv, d_left, d_right));

    ModelProfileF out;
    out.fhat_ = [spline](double ss) { return (*spline)(ss); };
    out.dfhat_ = [spline](double ss) { return spline->derivative(ss); };
    out.f0_ = out.fhat_(1.0);
    out.mass_ = m;
    out.model_c0_ = 4.0 * kPi * m;
    out.restoration_residual_ = worst;
    out.source_ = ProfileSource::Rp3Model;
    return out;
}

ModelProfileF ModelProfileF::tabulated(const std::vector<double>& t, const std::vector<double>& f) {
    if (t.size() != f.size() || t.size() < 4)
        throw std::invalid_argument("profile tabulation needs at least 4 matching samples");
    for (std::size_t i = 1; i < t.size(); ++i)
        if (!(t[i] > t[i - 1]))
            throw std::invalid_argument("profile tabulation times must be strictly increasing");

    // Re-grid onto ascending s = e^{-t}; outside the tabulated range the
    // profile continues with its endpoint values.
    std::vector<double> s(t.size()), fv(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        s[i] = std::exp(-t[t.size() - 1 - i]);
        fv[i] = f[t.size() - 1 - i];
    }
    auto spline = std::make_shared<num::CubicSpline>(num::CubicSpline::natural(s, fv));
    const double lo = spline->x_min(), hi = spline->x_max();

    ModelProfileF out;
    out.fhat_ = [spline, lo, hi](double ss) {
        return (*spline)(std::clamp(ss, lo, hi));
    };
    out.dfhat_ = [spline, lo, hi](double ss) {
        if (ss < lo || ss > hi) return 0.0;
        return spline->derivative(ss);
    };
    out.f0_ = out.fhat_(1.0);
    out.source_ = ProfileSource::Tabulated;
    return out;
}

ModelProfileF ModelProfileF::from_function(std::function<double(double)> fhat,
                                           std::function<double(double)> dfhat) {
    if (!fhat || !dfhat) throw std::invalid_argument("profile callables must be non-empty");
    ModelProfileF out;
    out.fhat_ = std::move(fhat);
    out.dfhat_ = std::move(dfhat);
    out.f0_ = out.fhat_(1.0);
    out.source_ = ProfileSource::Tabulated;
    return out;
}

double ModelProfileF::f(double t) const {
    if (t < 0.0) throw std::domain_error("profile parameter t must be non-negative");
    return fhat_(std::exp(-t));
}

double ModelProfileF::df(double t) const {
    if (t < 0.0) throw std::domain_error("profile parameter t must be non-negative");
    const double s = std::exp(-t);
    return -s * dfhat_(s);
}

double ModelProfileF::fhat(double s) const {
    if (s < 0.0 || s > 1.0) throw std::domain_error("profile variable s must lie in [0, 1]");
    return fhat_(s);
}

double ModelProfileF::dfhat(double s) const {
    if (s < 0.0 || s > 1.0) throw std::domain_error("profile variable s must lie in [0, 1]");
    return dfhat_(s);
}

double dirichlet_energy(const ModelProfileF& f, double C0) {
    if (!(C0 > 0.0)) throw std::domain_error("flux constant C0 must be positive");
    // int f'(t)^2 e^t dt turns into int (d fhat/ds)^2 ds under s = e^{-t}.
    const double integral = num::integrate(
        [&](double s) { return num::sqr(f.dfhat(s)); }, 0.0, 1.0, 1e-11, 1e-15);
    return C0 * integral;
}

double l6_lower_bound(const ModelProfileF& f, double C0, std::size_t card) {
    if (!(C0 > 0.0)) throw std::domain_error("flux constant C0 must be positive");
    if (card < 1) throw std::domain_error("orbit cardinality must be positive");
    const double integral = num::integrate(
        [&](double s) {
            if (s < 1e-12) return 0.0;
            const double f2 = num::sqr(f.fhat(s));
            const double den = num::sqr(num::sqr(s * (2.0 - s)));
            return f2 * f2 * f2 / den;
        },
        0.0, 1.0, 1e-11, 1e-15);
    const double cardd = static_cast<double>(card);
    return C0 * C0 * C0 * integral / (cardd * cardd * kPi * kPi);
}

double l6_exact(const ModelProfileF& f, const levelset::LevelSetScan& scan) {
    const auto& sm = scan.samples;
    if (sm.size() < 3) throw std::invalid_argument("coarea integral needs at least 3 levels");
    std::vector<double> y(sm.size());
    for (std::size_t i = 0; i < sm.size(); ++i) {
        if (!(sm[i].flux > 0.0) || !(sm[i].area > 0.0) || !std::isfinite(sm[i].area))
            throw std::invalid_argument("level sample lacks coarea data (area and flux)");
        const double f2 = num::sqr(f.f(sm[i].t));
        y[i] = f2 * f2 * f2 * sm[i].area * sm[i].area / sm[i].flux;
    }

    const double dt0 = sm[1].t - sm[0].t;
    bool uniform = true;
    for (std::size_t i = 1; i + 1 < sm.size(); ++i)
        if (std::abs((sm[i + 1].t - sm[i].t) - dt0) > 1e-9 * dt0) uniform = false;

    if (uniform && sm.size() % 2 == 1) {
        double acc = y.front() + y.back();
        for (std::size_t i = 1; i + 1 < sm.size(); ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * y[i];
        return acc * dt0 / 3.0;
    }
    double acc = 0.0;
    for (std::size_t i = 1; i < sm.size(); ++i)
        acc += 0.5 * (y[i] + y[i - 1]) * (sm[i].t - sm[i - 1].t);
    return acc;
}

RayleighReport rayleigh_model(const ModelProfileF& f, const levelset::LevelSetScan& scan,
                              std::size_t card) {
    if (card < 1) throw std::domain_error("orbit cardinality must be positive");
    if (!(scan.C0 > 0.0)) throw std::domain_error("scan carries no positive flux constant");

    if (f.source() == ProfileSource::Rp3Model) {
        const double per_end = scan.C0 / static_cast<double>(card);
        if (std::abs(per_end - f.model_C0()) > 1e-6 * f.model_C0()) {
            throw std::runtime_error(
                "scan flux constant is inconsistent with the model profile: per-end C0 " +
                format_double(per_end) + " vs model " + format_double(f.model_C0()));
        }
    }

    RayleighReport rep;
    rep.card = card;
    rep.numerator = 8.0 * dirichlet_energy(f, scan.C0);
    rep.denominator_lb = l6_lower_bound(f, scan.C0, card);
    rep.denominator_exact = scan.samples.size() >= 3 ? l6_exact(f, scan) : 0.0;
    rep.quotient_ub = rep.numerator / std::cbrt(rep.denominator_lb);
    const double cardd = static_cast<double>(card);
    rep.bound = sigma_constants().sigma_2 * std::cbrt(cardd * cardd);
    rep.verdict = rep.quotient_ub <= rep.bound * (1.0 + 1e-6);
    return rep;
}

double hebey_vaugon_bound(int n, std::size_t card) {
    if (n != 3)
        throw std::domain_error("no built-in Yamabe constant for this dimension; supply sigma(S^n)");
    if (card < 1) throw std::domain_error("orbit cardinality must be positive");
    const double cardd = static_cast<double>(card);
    return sigma_constants().sigma_s3 * std::cbrt(cardd * cardd);
}

double hebey_vaugon_bound(int n, std::size_t card, double sigma_sn) {
    if (n < 3) throw std::domain_error("the comparison needs dimension at least 3");
    if (card < 1) throw std::domain_error("orbit cardinality must be positive");
    if (!(sigma_sn > 0.0)) throw std::domain_error("sigma(S^n) must be positive");
    return sigma_sn * std::pow(static_cast<double>(card), 2.0 / static_cast<double>(n));
}

}  // namespace eqy::quotient
