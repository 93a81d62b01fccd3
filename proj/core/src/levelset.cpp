#include "eqy/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "eqy/numerics.hpp"

namespace eqy::levelset {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kFourPi = 4.0 * kPi;

// (r phi^2)' / phi^2, dimensionless; zero exactly at a minimal sphere.
double minimal_defect(const geom::RadialMetric& end, double r) {
    return 1.0 + 2.0 * r * end.dphi(r) / end.phi(r);
}

double minimal_bound(double t) { return kPi * num::sqr(2.0 - std::exp(-t)); }

}  // namespace

HarmonicSolution solve_harmonic_radial(const geom::RadialMetric& end) {
    if (!end.asymptotically_flat())
        throw std::domain_error("harmonic solve: metric has no asymptotic end");
    const double r_h = end.r_min();
    if (!(r_h > 0.0))
        throw std::domain_error("harmonic solve: boundary sphere radius must be positive");

    HarmonicSolution sol;
    sol.end = end;
    sol.r_h = r_h;

    switch (end.kind()) {
        case geom::RadialKind::Flat: {
            sol.kind = HarmonicKind::ClosedForm;
            sol.u = [r_h](double r) { return r_h / r; };
            sol.du = [r_h](double r) { return -r_h / (r * r); };
            sol.C0 = kFourPi * r_h;
            break;
        }
        case geom::RadialKind::Schwarzschild: {
            // phi u is flat-harmonic, so u = K/(phi r) with K = phi(r_h) r_h;
            // phi r = r + m/2 makes everything explicit.
            sol.kind = HarmonicKind::ClosedForm;
            const double K = end.phi(r_h) * r_h;
            const double half_m = 0.5 * end.mass();
            sol.u = [K, half_m](double r) { return K / (r + half_m); };
            sol.du = [K, half_m](double r) { return -K / num::sqr(r + half_m); };
            sol.C0 = kFourPi * K;
            break;
        }
        default: {
            // One exact integration of (phi^2 r^2 u')' = 0 leaves the
            // quadrature u(r) = K int_r^inf ds/(phi s)^2. The cumulative
            // integral is tabulated on a log grid and the tail past the chart
            // is closed-form in the decay model.
            sol.kind = HarmonicKind::RadialOde;
            const geom::RadialMetric m = end;
            auto integrand = [m](double s) {
                const double p = m.phi(s);
                if (!(p > 0.0))
                    throw num::NumericsError(
                        "harmonic solve: conformal factor not positive on the end");
                return 1.0 / num::sqr(p * s);
            };

            const double r_top = std::isfinite(m.r_max()) && m.r_max() > r_h
                                     ? m.r_max()
                                     : 200.0 * std::max(1.0, r_h);
            const double a_inf = m.decay().phi_inf;
            const double b_mono = m.decay().monopole;
            if (!(a_inf > 0.0))
                throw num::NumericsError("harmonic solve: decay model must approach "
                                         "a positive constant");

            const std::size_t n = 800;
            std::vector<double> x(n + 1), J(n + 1, 0.0);
            const double lx0 = std::log(r_h), lx1 = std::log(r_top);
            for (std::size_t k = 0; k <= n; ++k)
                x[k] = lx0 + (lx1 - lx0) * double(k) / double(n);
            for (std::size_t k = 1; k <= n; ++k)
                J[k] = J[k - 1] +
                       num::integrate(integrand, std::exp(x[k - 1]), std::exp(x[k]), 1e-12);

            // Tail int_R^inf ds/(a s + b)^2 = 1/(a (a R + b)).
            const double tail = 1.0 / (a_inf * (a_inf * r_top + b_mono));
            const double I_tot = J.back() + tail;

            // Clamped in log r: the end slopes dJ/d(log r) = r * integrand
            // are known exactly, which keeps the interpolation fourth order
            // up to the boundary knots.
            const double s0 = std::exp(x.front()) * integrand(std::exp(x.front()));
            const double s1 = std::exp(x.back()) * integrand(std::exp(x.back()));
            auto spline = std::make_shared<num::CubicSpline>(
                num::CubicSpline::clamped(std::move(x), std::move(J), s0, s1));

            sol.u = [spline, I_tot, r_top, a_inf, b_mono](double r) {
                if (r >= r_top) return 1.0 / (a_inf * (a_inf * r + b_mono) * I_tot);
                return (I_tot - (*spline)(std::log(r))) / I_tot;
            };
            sol.du = [m, I_tot](double r) { return -1.0 / (num::sqr(m.phi(r) * r) * I_tot); };
            sol.C0 = kFourPi / I_tot;
        }
    }
    return sol;
}

std::vector<double> uniform_levels(double t_max, std::size_t n) {
    if (n < 2 || !(t_max > 0.0))
        throw std::invalid_argument("level grid needs t_max > 0 and at least two levels");
    std::vector<double> t(n);
    for (std::size_t k = 0; k < n; ++k) t[k] = t_max * double(k) / double(n - 1);
    return t;
}

LevelSetScan scan_levels(const HarmonicSolution& sol, const std::vector<double>& t_grid) {
    if (t_grid.empty()) throw std::invalid_argument("scan: empty level grid");
    for (std::size_t k = 0; k + 1 < t_grid.size(); ++k)
        if (!(t_grid[k] < t_grid[k + 1]))
            throw std::invalid_argument("scan: levels must increase strictly");
    if (t_grid.front() < 0.0) throw std::invalid_argument("scan: levels start at t >= 0");

    const geom::RadialMetric& end = sol.end;
    LevelSetScan scan;
    scan.t_max = t_grid.back();
    scan.C0 = sol.C0;
    scan.boundary_minimal = std::abs(minimal_defect(end, sol.r_h)) < 1e-6;

    auto sample_at = [&](double t, double r) {
        LevelSample s;
        s.t = t;
        s.r = r;
        const double p2 = num::sqr(end.phi(r));
        const double grad_w = std::abs(sol.du(r)) / (std::exp(-t) * p2);
        s.area = kFourPi * num::sqr(r) * num::sqr(p2);
        s.flux = s.area * grad_w;
        s.W = s.flux * grad_w;
        return s;
    };
    scan.W0 = sample_at(0.0, sol.r_h).W;

    for (const double t : t_grid) {
        if (t == 0.0) {
            scan.samples.push_back(sample_at(0.0, sol.r_h));
            continue;
        }
        const double target = std::exp(-t);
        double hi = std::max(2.0 * sol.r_h, sol.r_h + 1.0);
        bool bracketed = false;
        for (int i = 0; i < 200; ++i) {
            if (sol.u(hi) < target) {
                bracketed = true;
                break;
            }
            hi *= 2.0;
        }
        if (!bracketed) {
            scan.truncated = true;
            std::ostringstream msg;
            msg << "scan truncated: u does not reach e^-t for t = " << t;
            scan.note = msg.str();
            break;
        }
        const double r = num::bisect([&](double rr) { return sol.u(rr) - target; }, sol.r_h,
                                     hi, 1e-13 * std::max(1.0, hi));
        scan.samples.push_back(sample_at(t, r));
    }
    return scan;
}

BoundCheck check_monotonicity(const LevelSetScan& scan, double tol) {
    BoundCheck out;
    out.pass = true;
    const double sw0 = std::sqrt(scan.W0);
    const double s4pi = std::sqrt(kFourPi);
    for (const auto& s : scan.samples) {
        const double e = std::exp(-s.t);
        const double bound = num::sqr(e * sw0 + (1.0 - e) * s4pi);
        const double viol = s.W - bound;
        if (viol > out.max_violation) {
            out.max_violation = viol;
            out.worst_t = s.t;
        }
        if (std::abs(viol) <= tol) out.near_equality_count += 1;
    }
    out.pass = out.max_violation <= tol;
    return out;
}

BoundCheck check_minimal_bound(const LevelSetScan& scan, double tol) {
    if (!scan.boundary_minimal)
        throw std::domain_error("minimal-boundary bound: scan boundary is not minimal");
    BoundCheck out;
    for (const auto& s : scan.samples) {
        const double viol = s.W - minimal_bound(s.t);
        if (viol > out.max_violation) {
            out.max_violation = viol;
            out.worst_t = s.t;
        }
        if (std::abs(viol) <= tol) out.near_equality_count += 1;
    }
    out.pass = out.max_violation <= tol;
    return out;
}

EquivariantScan combine_equivariant(const blowup::BlowupModel& model,
                                    const std::vector<HarmonicSolution>& per_end,
                                    const std::vector<double>& t_grid) {
    if (per_end.size() != model.ends.size())
        throw std::invalid_argument("equivariant combine: one solution per end required");
    if (per_end.empty()) throw std::invalid_argument("equivariant combine: no ends");

    EquivariantScan out;
    out.card = per_end.size();
    for (const auto& sol : per_end) {
        out.per_end.push_back(scan_levels(sol, t_grid));
        if (!out.per_end.back().boundary_minimal)
            throw std::domain_error(
                "equivariant combine: every end boundary must be the minimal sphere");
        if (out.per_end.back().samples.size() != out.per_end.front().samples.size())
            throw SymmetryError("equivariant combine: scans truncated differently");
    }

    // Isometric ends share their capacity constant; the level energies alone
    // cannot see a mass mismatch (W(t) is mass invariant on the closed
    // forms), so C0 is compared directly.
    for (const auto& s : out.per_end) {
        const double ref = out.per_end.front().C0;
        if (std::abs(s.C0 - ref) > 1e-8 * std::max(1.0, std::abs(ref))) {
            std::ostringstream msg;
            msg << "equivariant combine: end capacities disagree (" << s.C0 << " vs " << ref
                << ")";
            throw SymmetryError(msg.str());
        }
    }

    const std::size_t n = out.per_end.front().samples.size();
    LevelSetScan& comb = out.combined;
    comb.t_max = out.per_end.front().t_max;
    comb.boundary_minimal = true;
    for (const auto& s : out.per_end) {
        comb.C0 += s.C0;
        comb.W0 += s.W0;
    }

    for (std::size_t k = 0; k < n; ++k) {
        LevelSample sum = out.per_end.front().samples[k];
        double w_lo = sum.W, w_hi = sum.W;
        for (std::size_t e = 1; e < out.per_end.size(); ++e) {
            const LevelSample& s = out.per_end[e].samples[k];
            sum.area += s.area;
            sum.flux += s.flux;
            sum.W += s.W;
            w_lo = std::min(w_lo, s.W);
            w_hi = std::max(w_hi, s.W);
        }
        if (w_hi - w_lo > 1e-8 * std::max(1.0, w_hi)) {
            std::ostringstream msg;
            msg << "equivariant combine: end profiles disagree by " << (w_hi - w_lo)
                << " at t = " << sum.t;
            throw SymmetryError(msg.str());
        }
        comb.samples.push_back(sum);

        const double viol = sum.W - double(out.card) * minimal_bound(sum.t);
        if (viol > out.max_violation) out.max_violation = viol;
    }
    out.pass = out.max_violation <= 1e-8 * double(out.card);
    return out;
}

void write_scan_csv(const std::string& path, const LevelSetScan& scan,
                    double bound_multiplier) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open scan file for writing: " + path);
    f << "t,r,area,flux,W,bound,slack\n";
    f << std::setprecision(17);
    const double sw0 = std::sqrt(scan.W0);
    const double s4pi = std::sqrt(kFourPi);
    for (const auto& s : scan.samples) {
        const double bound = scan.boundary_minimal
                                 ? bound_multiplier * minimal_bound(s.t)
                                 : num::sqr(std::exp(-s.t) * sw0 +
                                            (1.0 - std::exp(-s.t)) * s4pi);
        f << s.t << ',' << s.r << ',' << s.area << ',' << s.flux << ',' << s.W << ','
          << bound << ',' << (bound - s.W) << '\n';
    }
}

}  // namespace eqy::levelset
