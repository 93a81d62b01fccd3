#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

// Graph-encoded topology scenarios: the regions of a punctured manifold are
// vertices, embedded 2-spheres are edges (a non-separating sphere is a
// self-loop or a parallel edge), and the group acts by a permutation of both.
// On top of this sit the hypothesis checks of the equivariant bound and the
// outermost-horizon count.

namespace eqy::topo {

struct Region {
    std::string name;
    bool is_end = false;  // exterior region of an asymptotically flat end
};

struct Sphere {
    std::string name;
    int u = 0, v = 0;          // incident regions; u == v encodes a self-loop
    std::optional<int> genus;  // 0 for spheres; general labels feed the alpha computation
};

// Action of one group generator on the scenario.
struct GroupPerm {
    std::vector<int> region_map;
    std::vector<int> sphere_map;
};

class TopologyScenario {
  public:
    // Validates: connected multigraph, permutations respect incidence, every
    // end region touches at least one sphere unless the scenario is the
    // trivial one-region picture of R^3.
    static TopologyScenario build(std::vector<Region> regions, std::vector<Sphere> spheres,
                                  std::vector<GroupPerm> perms);

    const std::vector<Region>& regions() const { return regions_; }
    const std::vector<Sphere>& spheres() const { return spheres_; }
    const std::vector<GroupPerm>& perms() const { return perms_; }

    int region_index(const std::string& name) const;
    int sphere_index(const std::string& name) const;
    int end_count() const;

    // Optional encoding of the summand Q in M = P # Q, used by the
    // alpha-based hypothesis check when present.
    void set_q_factor(std::shared_ptr<const TopologyScenario> q) { q_factor_ = std::move(q); }
    const TopologyScenario* q_factor() const { return q_factor_.get(); }

    // Orbit of a sphere under the permutation group generated by the
    // per-generator maps.
    std::set<int> sphere_orbit(int sphere_id) const;

  private:
    std::vector<Region> regions_;
    std::vector<Sphere> spheres_;
    std::vector<GroupPerm> perms_;
    std::shared_ptr<const TopologyScenario> q_factor_;
};

// True iff deleting the sphere disconnects the multigraph. Self-loops are
// never separating. Computed by deletion + reachability and cross-checked
// against a DFS bridge finder on every call; the two must agree.
bool is_separating(const TopologyScenario& scenario, int sphere_id);

// True iff the permutation group acts transitively on the members of the
// set. Spheres are pairwise disjoint surfaces, so the connected components
// of the union are exactly the individual spheres. The set must be invariant
// under every generator.
bool g_connected(const TopologyScenario& scenario, const std::set<int>& sphere_set);

struct ActionSummary {
    int min_card = 1;
    bool has_fixed_point = false;
    bool is_sphere_manifold = false;
};

struct AssumptionVerdict {
    enum class Status { Pass, Fail, NotChecked };
    Status status = Status::NotChecked;
    std::string witness;  // always set when status == Fail
};

struct AssumptionReport {
    AssumptionVerdict finite_orbit;         // (i)  some orbit is finite
    AssumptionVerdict alpha_condition;      // (ii) M = P # Q with alpha(Q) = 2
    AssumptionVerdict sphere_no_fixed;      // (iii) sphere manifolds need min_card >= 2
    AssumptionVerdict nonseparating_union;  // (iv) G-unions of non-separating spheres connected
    std::optional<int> alpha;               // computed alpha(Q) when (ii) was checked

    // NotChecked does not fail the gate; only an explicit Fail does.
    bool all_pass() const;
};

AssumptionReport check_assumptions(const TopologyScenario& scenario,
                                   const ActionSummary& summary);

// Horizon count of the outermost-minimal-sphere picture: horizon spheres are
// the edges incident to end regions, grouped into orbits (the maximal
// G-connected unions). The expected shape is J = 1 orbit of size L1 = k0
// ends, every horizon sphere separating, every end boundary connected.
//
// The single invariant sphere shared by two swapped ends (the antipodal
// picture) is accepted: the orbit counts one sphere but it serves as both
// end boundaries, so both counts are reported.
struct OutermostVerdict {
    int J = 0;
    std::vector<int> L_list;
    int k0 = 0;
    int boundary_copies = 0;  // horizon incidences to end regions, with multiplicity
    bool degenerate_shared_horizon = false;
    bool pass = false;
    std::string violated_clause;  // set when pass is false
};

OutermostVerdict lemma_outermost_verdict(const TopologyScenario& scenario);

// Maximal Euler characteristic sum(2 - 2 genus) over edge subsets whose
// removal leaves exactly two components, by exhaustive enumeration. Needs
// genus labels on all edges; refuses graphs with more than 20 edges.
int alpha_two_region_max(const TopologyScenario& scenario);

}  // namespace eqy::topo
