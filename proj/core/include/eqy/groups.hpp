#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

// Finite groups of isometries of S^3, represented as orthogonal 4x4 matrices.
// Covers the worked cases (trivial, antipodal, lens actions) plus arbitrary
// finite matrix groups given by generators; orbits, isotropy, fixed-point
// candidates and group averaging of functions.

namespace eqy::groups {

using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;

enum class ActionLabel { Trivial, Antipodal, Lens, Custom };

class FiniteGroupAction {
  public:
    static FiniteGroupAction trivial();
    static FiniteGroupAction antipodal();
    // Standard free lens action on S^3 in C^2 coordinates: the generator
    // rotates the (x1,x2) plane by 2 pi/p and the (x3,x4) plane by 2 pi q/p.
    // Free exactly when gcd(p, q) = 1, which is enforced.
    static FiniteGroupAction lens(int p, int q = 1);
    // Closure of the given generators under multiplication; throws if the
    // generated group exceeds max_order or a generator is not orthogonal.
    static FiniteGroupAction custom(const std::vector<Mat4>& generators,
                                    std::size_t max_order = 512);

    const std::vector<Mat4>& elements() const { return elements_; }
    const std::vector<Mat4>& generators() const { return generators_; }
    std::size_t order() const { return elements_.size(); }
    ActionLabel label() const { return label_; }
    int lens_p() const { return p_; }
    int lens_q() const { return q_; }

  private:
    FiniteGroupAction() = default;
    void close_and_check(std::size_t max_order);
    std::vector<Mat4> elements_;    // element 0 is the identity
    std::vector<Mat4> generators_;  // non-identity generators (empty for trivial)
    ActionLabel label_ = ActionLabel::Custom;
    int p_ = 0, q_ = 0;
};

struct OrbitData {
    Vec4 base_point;
    std::vector<Vec4> orbit_points;
    int isotropy_order = 1;
};

// Orbit of a unit point p, duplicates merged at tolerance 1e-9. The
// orbit-stabilizer identity card(orbit) * isotropy = card(G) holds exactly
// because merging is what defines the isotropy count.
OrbitData orbit(const FiniteGroupAction& action, const Vec4& p);

// Minimum orbit cardinality over the given sample points. Exact when the
// samples include the joint fixed-point candidates below.
int min_orbit_cardinality(const FiniteGroupAction& action, const std::vector<Vec4>& samples);

// Unit vectors spanning the +1 eigenspaces of the non-identity elements and
// of their pairwise and global intersections; any fixed point of a subgroup
// lies in one of these subspaces, so orbits through these candidates witness
// the minimal cardinality for the group families used here.
std::vector<Vec4> fixed_point_candidates(const FiniteGroupAction& action);

// Group average (1/isotropy_order) * sum_{g in G} f(g x). With the uniform
// measure this is the orbit sum, each distinct orbit point counted once.
// isotropy_order must divide card(G).
std::function<double(const Vec4&)> average_function(const FiniteGroupAction& action,
                                                    std::function<double(const Vec4&)> f,
                                                    int isotropy_order);

}  // namespace eqy::groups
