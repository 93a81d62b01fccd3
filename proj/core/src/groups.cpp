#include "eqy/groups.hpp"

#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>

namespace eqy::groups {

namespace {

constexpr double kMatchTol = 1e-12;   // matrix identification
constexpr double kMergeTol = 1e-9;    // orbit point deduplication

bool same_matrix(const Mat4& a, const Mat4& b) {
    return (a - b).cwiseAbs().maxCoeff() < kMatchTol;
}

void check_orthogonal(const Mat4& m) {
    if ((m.transpose() * m - Mat4::Identity()).cwiseAbs().maxCoeff() > kMatchTol)
        throw std::invalid_argument("group action: element is not orthogonal within 1e-12");
}

Mat4 plane_rotation(double alpha, double beta) {
    Mat4 m = Mat4::Zero();
    m(0, 0) = std::cos(alpha);
    m(0, 1) = -std::sin(alpha);
    m(1, 0) = std::sin(alpha);
    m(1, 1) = std::cos(alpha);
    m(2, 2) = std::cos(beta);
    m(2, 3) = -std::sin(beta);
    m(3, 2) = std::sin(beta);
    m(3, 3) = std::cos(beta);
    return m;
}

}  // namespace

void FiniteGroupAction::close_and_check(std::size_t max_order) {
    for (const Mat4& g : generators_) check_orthogonal(g);
    elements_.clear();
    elements_.push_back(Mat4::Identity());
    // Breadth-first closure under right multiplication by generators.
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        for (const Mat4& g : generators_) {
            const Mat4 prod = elements_[i] * g;
            bool known = false;
            for (const Mat4& e : elements_)
                if (same_matrix(prod, e)) {
                    known = true;
                    break;
                }
            if (!known) {
                if (elements_.size() >= max_order)
                    throw std::invalid_argument(
                        "group action: generators do not close within the order cap");
                elements_.push_back(prod);
            }
        }
    }
}

FiniteGroupAction FiniteGroupAction::trivial() {
    FiniteGroupAction a;
    a.label_ = ActionLabel::Trivial;
    a.elements_.push_back(Mat4::Identity());
    return a;
}

FiniteGroupAction FiniteGroupAction::antipodal() {
    FiniteGroupAction a;
    a.label_ = ActionLabel::Antipodal;
    a.generators_.push_back(-Mat4::Identity());
    a.close_and_check(4);
    return a;
}

FiniteGroupAction FiniteGroupAction::lens(int p, int q) {
    if (p < 1) throw std::invalid_argument("lens action: p must be >= 1");
    if (p == 1) return trivial();
    const int q_mod = ((q % p) + p) % p;
    if (std::gcd(p, q_mod) != 1)
        throw std::invalid_argument("lens action: gcd(p, q) must be 1 for a free action");
    FiniteGroupAction a;
    a.label_ = ActionLabel::Lens;
    a.p_ = p;
    a.q_ = q;
    const double step = 2.0 * 3.14159265358979323846 / static_cast<double>(p);
    a.generators_.push_back(plane_rotation(step, step * static_cast<double>(q)));
    a.close_and_check(static_cast<std::size_t>(p) + 1);
    if (a.elements_.size() != static_cast<std::size_t>(p))
        throw std::logic_error("lens action: closure produced the wrong order");
    return a;
}

FiniteGroupAction FiniteGroupAction::custom(const std::vector<Mat4>& generators,
                                            std::size_t max_order) {
    FiniteGroupAction a;
    a.label_ = ActionLabel::Custom;
    for (const Mat4& g : generators)
        if (!same_matrix(g, Mat4::Identity())) a.generators_.push_back(g);
    a.close_and_check(max_order);
    return a;
}

OrbitData orbit(const FiniteGroupAction& action, const Vec4& p) {
    if (std::abs(p.norm() - 1.0) > 1e-9)
        throw std::domain_error("orbit: base point must lie on the unit sphere");
    OrbitData data;
    data.base_point = p;
    for (const Mat4& g : action.elements()) {
        const Vec4 q = g * p;
        bool known = false;
        for (const Vec4& seen : data.orbit_points)
            if ((q - seen).norm() < kMergeTol) {
                known = true;
                break;
            }
        if (!known) data.orbit_points.push_back(q);
    }
    data.isotropy_order =
        static_cast<int>(action.order() / data.orbit_points.size());
    if (data.orbit_points.size() * static_cast<std::size_t>(data.isotropy_order) !=
        action.order())
        throw std::logic_error("orbit: orbit-stabilizer identity violated");
    return data;
}

int min_orbit_cardinality(const FiniteGroupAction& action, const std::vector<Vec4>& samples) {
    if (samples.empty()) throw std::invalid_argument("min_orbit_cardinality: no samples");
    std::size_t best = action.order();
    for (const Vec4& p : samples) {
        const Vec4 unit = p.normalized();
        best = std::min(best, orbit(action, unit).orbit_points.size());
        if (best == 1) break;
    }
    return static_cast<int>(best);
}

namespace {

void append_unit_columns(const Eigen::MatrixXd& basis, std::vector<Vec4>& out) {
    for (Eigen::Index c = 0; c < basis.cols(); ++c) {
        Vec4 v = basis.col(c);
        const double n = v.norm();
        if (n < 1e-9) continue;
        v /= n;
        bool known = false;
        for (const Vec4& seen : out)
            if ((v - seen).norm() < kMergeTol || (v + seen).norm() < kMergeTol) {
                known = true;
                break;
            }
        if (!known) out.push_back(v);
    }
}

Eigen::MatrixXd plus_one_eigenspace(const Mat4& g) {
    Eigen::FullPivLU<Mat4> lu(g - Mat4::Identity());
    lu.setThreshold(1e-8);
    return lu.kernel();
}

// Basis of the intersection of two subspaces given by basis columns, via the
// kernel of [A | -B].
Eigen::MatrixXd intersect_spaces(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.cols() == 0 || b.cols() == 0) return Eigen::MatrixXd(4, 0);
    Eigen::MatrixXd stacked(4, a.cols() + b.cols());
    stacked << a, -b;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(stacked);
    lu.setThreshold(1e-8);
    const Eigen::MatrixXd ker = lu.kernel();
    Eigen::MatrixXd result(4, ker.cols());
    for (Eigen::Index c = 0; c < ker.cols(); ++c)
        result.col(c) = a * ker.col(c).head(a.cols());
    return result;
}

}  // namespace

std::vector<Vec4> fixed_point_candidates(const FiniteGroupAction& action) {
    std::vector<Eigen::MatrixXd> spaces;
    for (const Mat4& g : action.elements()) {
        if (same_matrix(g, Mat4::Identity())) continue;
        spaces.push_back(plus_one_eigenspace(g));
    }
    std::vector<Vec4> out;
    for (const auto& s : spaces) append_unit_columns(s, out);
    for (std::size_t i = 0; i < spaces.size(); ++i)
        for (std::size_t j = i + 1; j < spaces.size(); ++j)
            append_unit_columns(intersect_spaces(spaces[i], spaces[j]), out);
    if (!spaces.empty()) {
        Eigen::MatrixXd joint = spaces[0];
        for (std::size_t i = 1; i < spaces.size() && joint.cols() > 0; ++i)
            joint = intersect_spaces(joint, spaces[i]);
        append_unit_columns(joint, out);
    }
    if (out.empty()) out.push_back(Vec4(1, 0, 0, 0));  // free action: any point works
    return out;
}

std::function<double(const Vec4&)> average_function(const FiniteGroupAction& action,
                                                    std::function<double(const Vec4&)> f,
                                                    int isotropy_order) {
    if (!f) throw std::invalid_argument("average_function: missing function");
    if (isotropy_order <= 0)
        throw std::domain_error("average_function: isotropy order must be positive");
    if (action.order() % static_cast<std::size_t>(isotropy_order) != 0)
        throw std::domain_error("average_function: isotropy order must divide the group order");
    // Copy the elements so the closure owns everything it needs.
    auto elements = std::make_shared<std::vector<Mat4>>(action.elements());
    const double scale = 1.0 / static_cast<double>(isotropy_order);
    return [elements, f = std::move(f), scale](const Vec4& x) {
        double sum = 0.0;
        for (const Mat4& g : *elements) sum += f(g * x);
        return scale * sum;
    };
}

}  // namespace eqy::groups
