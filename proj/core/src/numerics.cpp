#include "eqy/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eqy::num {

namespace {

double simpson(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double b,
                     double fa, double fm, double fb, double whole,
                     double rel_tol, double abs_tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double delta = left + right - whole;
    if (depth > 60) throw NumericsError("adaptive quadrature: recursion limit");
    const double tol = abs_tol + rel_tol * std::abs(left + right);
    if (std::abs(delta) <= 15.0 * tol || (b - a) < 1e-15 * (1.0 + std::abs(a)))
        return left + right + delta / 15.0;
    return adaptive_step(f, a, m, fa, flm, fm, left, rel_tol, 0.5 * abs_tol, depth + 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, rel_tol, 0.5 * abs_tol, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, double abs_tol) {
    if (a == b) return 0.0;
    if (!(a < b)) return -integrate(f, b, a, rel_tol, abs_tol);
    // Seed with a fixed 8-panel pass so narrow features are not missed by the
    // very first Richardson estimate.
    double total = 0.0;
    const int panels = 8;
    const double h = (b - a) / panels;
    for (int i = 0; i < panels; ++i) {
        const double x0 = a + i * h;
        const double x1 = x0 + h;
        const double xm = 0.5 * (x0 + x1);
        const double f0 = f(x0), fm = f(xm), f1 = f(x1);
        total += adaptive_step(f, x0, x1, f0, fm, f1, simpson(f0, fm, f1, h),
                               rel_tol, abs_tol / panels, 0);
    }
    return total;
}

double integrate_to_infinity(const std::function<double(double)>& f, double a,
                             double rel_tol, double split) {
    if (!(a > 0.0)) throw NumericsError("integrate_to_infinity: lower bound must be positive");
    double s = split > a ? split : std::max(2.0 * a, 10.0);
    const double head = integrate(f, a, s, rel_tol);
    // r = 1/x, dr = -dx/x^2: int_s^inf f(r) dr = int_0^{1/s} f(1/x)/x^2 dx.
    const double tail = integrate(
        [&f](double x) {
            if (x <= 0.0) return 0.0;
            const double r = 1.0 / x;
            return f(r) * r * r;
        },
        0.0, 1.0 / s, rel_tol);
    return head + tail;
}

// ---------------------------------------------------------------------------
// Cubic spline

CubicSpline CubicSpline::natural(std::vector<double> x, std::vector<double> y) {
    CubicSpline s;
    s.x_ = std::move(x);
    s.y_ = std::move(y);
    s.build(false, 0.0, 0.0);
    return s;
}

CubicSpline CubicSpline::clamped(std::vector<double> x, std::vector<double> y,
                                 double d0, double d1) {
    CubicSpline s;
    s.x_ = std::move(x);
    s.y_ = std::move(y);
    s.build(true, d0, d1);
    return s;
}

void CubicSpline::build(bool clamped, double d0, double d1) {
    const std::size_t n = x_.size();
    if (n < 3 || y_.size() != n) throw NumericsError("spline: need >= 3 points");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1])) throw NumericsError("spline: x not increasing");

    // Tridiagonal solve for knot second derivatives (Thomas algorithm).
    std::vector<double> a(n), b(n), c(n), d(n);
    m_.assign(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hl = x_[i] - x_[i - 1];
        const double hr = x_[i + 1] - x_[i];
        a[i] = hl;
        b[i] = 2.0 * (hl + hr);
        c[i] = hr;
        d[i] = 6.0 * ((y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl);
    }
    if (clamped) {
        const double h0 = x_[1] - x_[0];
        const double hn = x_[n - 1] - x_[n - 2];
        b[0] = 2.0 * h0;
        c[0] = h0;
        d[0] = 6.0 * ((y_[1] - y_[0]) / h0 - d0);
        a[n - 1] = hn;
        b[n - 1] = 2.0 * hn;
        d[n - 1] = 6.0 * (d1 - (y_[n - 1] - y_[n - 2]) / hn);
    } else {
        b[0] = 1.0;
        c[0] = 0.0;
        d[0] = 0.0;
        a[n - 1] = 0.0;
        b[n - 1] = 1.0;
        d[n - 1] = 0.0;
    }
    for (std::size_t i = 1; i < n; ++i) {
        const double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        d[i] -= w * d[i - 1];
    }
    m_[n - 1] = d[n - 1] / b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) m_[i] = (d[i] - c[i] * m_[i + 1]) / b[i];
}

std::size_t CubicSpline::segment(double x) const {
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    if (i == 0) return 0;
    if (i >= x_.size()) return x_.size() - 2;
    return i - 1;
}

double CubicSpline::operator()(double x) const {
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - x) / h;
    const double B = (x - x_[i]) / h;
    return A * y_[i] + B * y_[i + 1] +
           ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double x) const {
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - x) / h;
    const double B = (x - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h +
           ((1.0 - 3.0 * A * A) * m_[i] + (3.0 * B * B - 1.0) * m_[i + 1]) * h / 6.0;
}

double CubicSpline::second_derivative(double x) const {
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - x) / h;
    const double B = (x - x_[i]) / h;
    return A * m_[i] + B * m_[i + 1];
}

// ---------------------------------------------------------------------------
// Cash-Karp RK45

namespace {
// clang-format off
constexpr double kA[6]    = {0.0, 1.0/5, 3.0/10, 3.0/5, 1.0, 7.0/8};
constexpr double kB[6][5] = {
    {},
    {1.0/5},
    {3.0/40, 9.0/40},
    {3.0/10, -9.0/10, 6.0/5},
    {-11.0/54, 5.0/2, -70.0/27, 35.0/27},
    {1631.0/55296, 175.0/512, 575.0/13824, 44275.0/110592, 253.0/4096}};
constexpr double kC5[6]  = {37.0/378, 0.0, 250.0/621, 125.0/594, 0.0, 512.0/1771};
constexpr double kC4[6]  = {2825.0/27648, 0.0, 18575.0/48384, 13525.0/55296, 277.0/14336, 1.0/4};
// clang-format on
}  // namespace

std::vector<OdeSample> integrate_ode(
    const std::function<void(double, const std::vector<double>&, std::vector<double>&)>& f,
    std::vector<double> y0, double t0, double t1, const OdeOptions& opt) {
    const std::size_t n = y0.size();
    const double dir = (t1 >= t0) ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    if (span == 0.0) throw NumericsError("integrate_ode: empty interval");

    double h = span / 100.0;
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);

    std::vector<OdeSample> out;
    std::vector<double> y = std::move(y0), dy(n), yt(n), err(n), y5(n);
    std::vector<std::vector<double>> k(6, std::vector<double>(n));

    double t = t0;
    f(t, y, dy);
    out.push_back({t, y, dy});

    std::size_t steps = 0;
    while (dir * (t1 - t) > 0.0) {
        if (++steps > opt.max_steps) throw NumericsError("integrate_ode: step limit reached");
        h = std::min(h, std::abs(t1 - t));
        if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
        if (h < 1e-14 * (1.0 + std::abs(t)))
            throw NumericsError("integrate_ode: step size underflow");

        k[0] = dy;
        for (int s = 1; s < 6; ++s) {
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                for (int j = 0; j < s; ++j) acc += kB[s][j] * k[j][i];
                yt[i] = y[i] + dir * h * acc;
            }
            f(t + dir * h * kA[s], yt, k[s]);
        }
        double err_norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double acc5 = 0.0, acc4 = 0.0;
            for (int s = 0; s < 6; ++s) {
                acc5 += kC5[s] * k[s][i];
                acc4 += kC4[s] * k[s][i];
            }
            y5[i] = y[i] + dir * h * acc5;
            const double e = dir * h * (acc5 - acc4);
            const double scale = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            err_norm = std::max(err_norm, std::abs(e) / scale);
        }
        if (err_norm <= 1.0) {
            t += dir * h;
            y = y5;
            f(t, y, dy);
            out.push_back({t, y, dy});
        }
        const double grow = err_norm > 0.0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
        h *= std::clamp(grow, 0.2, 5.0);
    }
    return out;
}

DenseOde::DenseOde(std::vector<OdeSample> samples) : s_(std::move(samples)) {
    if (s_.size() < 2) throw NumericsError("DenseOde: need >= 2 samples");
    reversed_ = s_.back().t < s_.front().t;
    if (reversed_) std::reverse(s_.begin(), s_.end());
    front_t_ = s_.front().t;
    back_t_ = s_.back().t;
}

std::size_t DenseOde::segment(double t) const {
    std::size_t lo = 0, hi = s_.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (s_[mid].t <= t)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

double DenseOde::value(double t, std::size_t c) const {
    const std::size_t i = segment(t);
    const auto& a = s_[i];
    const auto& b = s_[i + 1];
    const double h = b.t - a.t;
    const double u = (t - a.t) / h;
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    const double h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u);
    const double h11 = u * u * (u - 1);
    return h00 * a.y[c] + h10 * h * a.dy[c] + h01 * b.y[c] + h11 * h * b.dy[c];
}

double DenseOde::derivative(double t, std::size_t c) const {
    const std::size_t i = segment(t);
    const auto& a = s_[i];
    const auto& b = s_[i + 1];
    const double h = b.t - a.t;
    const double u = (t - a.t) / h;
    const double g00 = 6 * u * (u - 1) / h;
    const double g10 = (1 - u) * (1 - 3 * u);
    const double g01 = -6 * u * (u - 1) / h;
    const double g11 = u * (3 * u - 2);
    return g00 * a.y[c] + g10 * a.dy[c] + g01 * b.y[c] + g11 * b.dy[c];
}

// ---------------------------------------------------------------------------

double bisect(const std::function<double(double)>& f, double a, double b,
              double tol, std::size_t max_iter) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw NumericsError("bisect: no sign change on bracket");
    for (std::size_t i = 0; i < max_iter && (b - a) > tol; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if (fa * fm < 0.0) {
            b = m;
            fb = fm;
        } else {
            a = m;
            fa = fm;
        }
    }
    return 0.5 * (a + b);
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw NumericsError("fit_line: need >= 2 points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-300) throw NumericsError("fit_line: degenerate abscissae");
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy * sxx - sx * sxy) / det;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        ss += sqr(y[i] - fit.slope * x[i] - fit.intercept);
    fit.rms_residual = std::sqrt(ss / n);
    return fit;
}



GaussRule gauss_legendre(std::size_t n) {
    if (n == 0) throw NumericsError("gauss_legendre: n must be positive");
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double pi = 3.14159265358979323846;
    // Nodes come in +/- pairs; solve for the non-negative half.
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre recurrence: (k+1)P_{k+1} = (2k+1)x P_k - k P_{k-1}.
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 1; k < n; ++k) {
                const double kk = static_cast<double>(k);
                const double p2 = ((2.0 * kk + 1.0) * x * p1 - kk * p0) / (kk + 1.0);
                p0 = p1;
                p1 = p2;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

}  // namespace eqy::num
