#include "eqy/topo.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

namespace eqy::topo {

namespace {

// Connected component count with an optional deleted edge (-1 keeps all).
int component_count(const std::vector<Region>& regions, const std::vector<Sphere>& spheres,
                    const std::set<int>& deleted) {
    const int n = static_cast<int>(regions.size());
    std::vector<int> comp(n, -1);
    int count = 0;
    for (int start = 0; start < n; ++start) {
        if (comp[start] >= 0) continue;
        comp[start] = count;
        std::vector<int> stack{start};
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (std::size_t e = 0; e < spheres.size(); ++e) {
                if (deleted.count(static_cast<int>(e))) continue;
                const Sphere& s = spheres[e];
                int other = -1;
                if (s.u == v)
                    other = s.v;
                else if (s.v == v)
                    other = s.u;
                else
                    continue;
                if (comp[other] < 0) {
                    comp[other] = count;
                    stack.push_back(other);
                }
            }
        }
        ++count;
    }
    return count;
}

// Classic low-link bridge finder on the multigraph; parallel edges and
// self-loops are handled by tracking the edge used to enter a vertex.
std::vector<bool> find_bridges(const std::vector<Region>& regions,
                               const std::vector<Sphere>& spheres) {
    const int n = static_cast<int>(regions.size());
    std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, edge id)
    for (std::size_t e = 0; e < spheres.size(); ++e) {
        const Sphere& s = spheres[e];
        if (s.u == s.v) continue;  // self-loops are never bridges
        adj[s.u].push_back({s.v, static_cast<int>(e)});
        adj[s.v].push_back({s.u, static_cast<int>(e)});
    }
    std::vector<bool> bridge(spheres.size(), false);
    std::vector<int> disc(n, -1), low(n, 0);
    int timer = 0;
    std::function<void(int, int)> dfs = [&](int v, int in_edge) {
        disc[v] = low[v] = timer++;
        for (const auto& [to, e] : adj[v]) {
            if (e == in_edge) continue;
            if (disc[to] >= 0) {
                low[v] = std::min(low[v], disc[to]);
            } else {
                dfs(to, e);
                low[v] = std::min(low[v], low[to]);
                if (low[to] > disc[v]) bridge[e] = true;
            }
        }
    };
    for (int v = 0; v < n; ++v)
        if (disc[v] < 0) dfs(v, -1);
    return bridge;
}

std::set<int> nonseparating_spheres(const TopologyScenario& sc) {
    std::set<int> out;
    for (std::size_t e = 0; e < sc.spheres().size(); ++e)
        if (!is_separating(sc, static_cast<int>(e))) out.insert(static_cast<int>(e));
    return out;
}

std::string orbit_names(const TopologyScenario& sc, const std::set<int>& orbit) {
    std::string names;
    for (int e : orbit) {
        if (!names.empty()) names += ", ";
        names += sc.spheres()[e].name;
    }
    return names;
}

}  // namespace

TopologyScenario TopologyScenario::build(std::vector<Region> regions,
                                         std::vector<Sphere> spheres,
                                         std::vector<GroupPerm> perms) {
    if (regions.empty()) throw std::invalid_argument("topology scenario: no regions");
    const int n = static_cast<int>(regions.size());
    const int m = static_cast<int>(spheres.size());
    for (const Sphere& s : spheres)
        if (s.u < 0 || s.u >= n || s.v < 0 || s.v >= n)
            throw std::invalid_argument("topology scenario: sphere references unknown region");
    for (const GroupPerm& p : perms) {
        if (static_cast<int>(p.region_map.size()) != n ||
            static_cast<int>(p.sphere_map.size()) != m)
            throw std::invalid_argument("topology scenario: permutation size mismatch");
        std::vector<bool> seen_r(n, false), seen_s(m, false);
        for (int img : p.region_map) {
            if (img < 0 || img >= n || seen_r[img])
                throw std::invalid_argument("topology scenario: region map is not a permutation");
            seen_r[img] = true;
        }
        for (int img : p.sphere_map) {
            if (img < 0 || img >= m || seen_s[img])
                throw std::invalid_argument("topology scenario: sphere map is not a permutation");
            seen_s[img] = true;
        }
        for (int e = 0; e < m; ++e) {
            const Sphere& s = spheres[e];
            const Sphere& t = spheres[p.sphere_map[e]];
            const int iu = p.region_map[s.u], iv = p.region_map[s.v];
            const bool match = (t.u == iu && t.v == iv) || (t.u == iv && t.v == iu);
            if (!match)
                throw std::invalid_argument(
                    "topology scenario: permutation does not respect incidence");
        }
    }
    if (component_count(regions, spheres, {}) != 1)
        throw std::invalid_argument("topology scenario: incidence graph must be connected");
    // Every end needs a horizon sphere, except the trivial flat picture with
    // a single region and no spheres at all.
    const bool trivial_r3 = regions.size() == 1 && spheres.empty();
    if (!trivial_r3) {
        for (int v = 0; v < n; ++v) {
            if (!regions[v].is_end) continue;
            const bool touched =
                std::any_of(spheres.begin(), spheres.end(),
                            [v](const Sphere& s) { return s.u == v || s.v == v; });
            if (!touched)
                throw std::invalid_argument("topology scenario: end region " +
                                            regions[v].name + " has no incident sphere");
        }
    }
    TopologyScenario sc;
    sc.regions_ = std::move(regions);
    sc.spheres_ = std::move(spheres);
    sc.perms_ = std::move(perms);
    return sc;
}

int TopologyScenario::region_index(const std::string& name) const {
    for (std::size_t i = 0; i < regions_.size(); ++i)
        if (regions_[i].name == name) return static_cast<int>(i);
    throw std::out_of_range("topology scenario: unknown region " + name);
}

int TopologyScenario::sphere_index(const std::string& name) const {
    for (std::size_t i = 0; i < spheres_.size(); ++i)
        if (spheres_[i].name == name) return static_cast<int>(i);
    throw std::out_of_range("topology scenario: unknown sphere " + name);
}

int TopologyScenario::end_count() const {
    int k = 0;
    for (const Region& r : regions_)
        if (r.is_end) ++k;
    return k;
}

std::set<int> TopologyScenario::sphere_orbit(int sphere_id) const {
    if (sphere_id < 0 || sphere_id >= static_cast<int>(spheres_.size()))
        throw std::out_of_range("sphere_orbit: unknown sphere id");
    std::set<int> orbit{sphere_id};
    std::vector<int> stack{sphere_id};
    while (!stack.empty()) {
        const int e = stack.back();
        stack.pop_back();
        for (const GroupPerm& p : perms_) {
            const int img = p.sphere_map[e];
            if (orbit.insert(img).second) stack.push_back(img);
        }
    }
    return orbit;
}

bool is_separating(const TopologyScenario& scenario, int sphere_id) {
    if (sphere_id < 0 || sphere_id >= static_cast<int>(scenario.spheres().size()))
        throw std::out_of_range("is_separating: unknown sphere id");
    const Sphere& s = scenario.spheres()[sphere_id];
    const bool self_loop = s.u == s.v;
    const bool by_deletion =
        !self_loop &&
        component_count(scenario.regions(), scenario.spheres(), {sphere_id}) > 1;
    const bool by_lowlink =
        !self_loop && find_bridges(scenario.regions(), scenario.spheres())[sphere_id];
    if (by_deletion != by_lowlink)
        throw std::logic_error("is_separating: deletion and bridge checks disagree");
    return by_deletion;
}

bool g_connected(const TopologyScenario& scenario, const std::set<int>& sphere_set) {
    if (sphere_set.empty()) throw std::domain_error("g_connected: empty sphere set");
    for (int e : sphere_set) {
        if (e < 0 || e >= static_cast<int>(scenario.spheres().size()))
            throw std::out_of_range("g_connected: unknown sphere id");
        for (const GroupPerm& p : scenario.perms())
            if (!sphere_set.count(p.sphere_map[e]))
                throw std::domain_error("g_connected: set is not invariant under the action");
    }
    const std::set<int> orbit = scenario.sphere_orbit(*sphere_set.begin());
    return orbit == sphere_set;
}

bool AssumptionReport::all_pass() const {
    const auto ok = [](const AssumptionVerdict& v) {
        return v.status != AssumptionVerdict::Status::Fail;
    };
    return ok(finite_orbit) && ok(alpha_condition) && ok(sphere_no_fixed) &&
           ok(nonseparating_union);
}

AssumptionReport check_assumptions(const TopologyScenario& scenario,
                                   const ActionSummary& summary) {
    using Status = AssumptionVerdict::Status;
    AssumptionReport rep;

    // (i) A finite orbit exists; finite matrix groups always provide one.
    if (summary.min_card >= 1) {
        rep.finite_orbit.status = Status::Pass;
    } else {
        rep.finite_orbit.status = Status::Fail;
        rep.finite_orbit.witness = "reported minimal orbit cardinality < 1";
    }

    // (ii) alpha(Q) = 2 for the declared summand; only decidable when a
    // Q-factor graph with complete genus labels was supplied.
    if (scenario.q_factor() != nullptr) {
        const int alpha = alpha_two_region_max(*scenario.q_factor());
        rep.alpha = alpha;
        if (alpha == 2) {
            rep.alpha_condition.status = Status::Pass;
        } else {
            rep.alpha_condition.status = Status::Fail;
            rep.alpha_condition.witness =
                "alpha(Q) = " + std::to_string(alpha) + ", expected 2";
        }
    } else {
        rep.alpha_condition.status = Status::NotChecked;
        rep.alpha_condition.witness = "no Q-factor encoding supplied";
    }

    // (iii) Sphere manifolds must carry a fixed-point-free action.
    if (!summary.is_sphere_manifold) {
        rep.sphere_no_fixed.status = Status::Pass;
    } else if (summary.min_card >= 2 && !summary.has_fixed_point) {
        rep.sphere_no_fixed.status = Status::Pass;
    } else {
        rep.sphere_no_fixed.status = Status::Fail;
        rep.sphere_no_fixed.witness = summary.has_fixed_point
                                          ? "the action has a fixed point"
                                          : "minimal orbit cardinality is 1";
    }

    // (iv) When non-separating spheres exist: no fixed points, and every
    // maximal G-connected union of them must be a single sphere, i.e. every
    // orbit of a non-separating sphere is a singleton.
    const std::set<int> nonsep = nonseparating_spheres(scenario);
    if (nonsep.empty()) {
        rep.nonseparating_union.status = Status::Pass;
    } else if (summary.min_card < 2) {
        rep.nonseparating_union.status = Status::Fail;
        rep.nonseparating_union.witness =
            "non-separating spheres exist but the minimal orbit has cardinality 1";
    } else {
        rep.nonseparating_union.status = Status::Pass;
        for (int e : nonsep) {
            const std::set<int> orbit = scenario.sphere_orbit(e);
            if (orbit.size() > 1) {
                rep.nonseparating_union.status = Status::Fail;
                rep.nonseparating_union.witness =
                    std::to_string(orbit.size()) +
                    "-component non-separating G-union {" + orbit_names(scenario, orbit) +
                    "}";
                break;
            }
        }
    }
    return rep;
}

OutermostVerdict lemma_outermost_verdict(const TopologyScenario& scenario) {
    OutermostVerdict v;
    v.k0 = scenario.end_count();

    // Horizon spheres: edges incident to an end region.
    std::set<int> horizon;
    for (std::size_t e = 0; e < scenario.spheres().size(); ++e) {
        const Sphere& s = scenario.spheres()[e];
        if (scenario.regions()[s.u].is_end || scenario.regions()[s.v].is_end)
            horizon.insert(static_cast<int>(e));
    }
    if (horizon.empty()) {
        v.pass = false;
        v.violated_clause = "no horizon spheres";
        return v;
    }

    // Group into orbits (maximal G-connected unions).
    std::set<int> remaining = horizon;
    while (!remaining.empty()) {
        const std::set<int> orbit = scenario.sphere_orbit(*remaining.begin());
        v.L_list.push_back(static_cast<int>(orbit.size()));
        for (int e : orbit) remaining.erase(e);
    }
    std::sort(v.L_list.rbegin(), v.L_list.rend());
    v.J = static_cast<int>(v.L_list.size());

    for (int e : horizon) {
        const Sphere& s = scenario.spheres()[e];
        if (scenario.regions()[s.u].is_end) ++v.boundary_copies;
        if (scenario.regions()[s.v].is_end) ++v.boundary_copies;
    }

    for (int e : horizon) {
        if (!is_separating(scenario, e)) {
            v.pass = false;
            v.violated_clause =
                "non-separating horizon sphere " + scenario.spheres()[e].name;
            return v;
        }
    }
    for (std::size_t r = 0; r < scenario.regions().size(); ++r) {
        if (!scenario.regions()[r].is_end) continue;
        int incident = 0;
        for (int e : horizon) {
            const Sphere& s = scenario.spheres()[e];
            if (s.u == static_cast<int>(r)) ++incident;
            if (s.v == static_cast<int>(r)) ++incident;
        }
        if (incident != 1) {
            v.pass = false;
            v.violated_clause =
                "end region " + scenario.regions()[r].name + " has a disconnected boundary";
            return v;
        }
    }
    if (v.J != 1) {
        v.pass = false;
        v.violated_clause = "horizon splits into " + std::to_string(v.J) + " G-unions";
        return v;
    }
    if (v.L_list[0] == v.k0) {
        v.pass = true;
    } else if (v.boundary_copies == v.k0) {
        // One invariant sphere shared by several ends: the sphere count is
        // below k0 but each end boundary is that connected sphere.
        v.degenerate_shared_horizon = true;
        v.pass = true;
    } else {
        v.pass = false;
        v.violated_clause = "horizon count L1 = " + std::to_string(v.L_list[0]) +
                            " does not match the end count " + std::to_string(v.k0);
    }
    return v;
}

int alpha_two_region_max(const TopologyScenario& scenario) {
    const int m = static_cast<int>(scenario.spheres().size());
    if (m > 20) throw std::length_error("alpha_two_region_max: more than 20 edges");
    for (const Sphere& s : scenario.spheres())
        if (!s.genus)
            throw std::domain_error("alpha_two_region_max: sphere " + s.name +
                                    " has no genus label");
    bool found = false;
    int best = 0;
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
        std::set<int> cut;
        int chi = 0;
        for (int e = 0; e < m; ++e)
            if (mask & (1u << e)) {
                cut.insert(e);
                chi += 2 - 2 * *scenario.spheres()[e].genus;
            }
        if (component_count(scenario.regions(), scenario.spheres(), cut) != 2) continue;
        if (!found || chi > best) best = chi;
        found = true;
    }
    if (!found)
        throw std::domain_error("alpha_two_region_max: no cut leaves exactly two regions");
    return best;
}

}  // namespace eqy::topo
