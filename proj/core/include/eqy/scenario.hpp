#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eqy/geom.hpp"
#include "eqy/groups.hpp"
#include "eqy/topo.hpp"

// Scenario configuration: everything a run needs, serializable to and from
// JSON. Four pipeline shapes exist: a single explicit radial end, the
// closed-form model profile, the full geometric blow-up of a round model
// under a finite isometry group, and a purely combinatorial topology check.

namespace eqy::scenario {

enum class Pipeline { Radial, Model, Geometric, Topology };

std::string pipeline_name(Pipeline p);
Pipeline pipeline_from_name(const std::string& name);

struct ActionSpec {
    std::string label = "trivial";  // trivial | antipodal | lens | custom
    int lens_p = 2;
    int lens_q = 1;
    std::vector<groups::Mat4> generators;  // custom actions only
    groups::Vec4 base_point = groups::Vec4(1.0, 0.0, 0.0, 0.0);

    groups::FiniteGroupAction build() const;
};

struct RadialSpec {
    std::string kind = "schwarzschild";  // flat | schwarzschild | table
    double mass = 1.0;
    double boundary_radius = 1.0;  // inner radius for flat and tabulated ends
    std::vector<double> r, phi;    // tabulated conformal factor

    geom::RadialMetric build() const;
};

struct RoundModelSpec {
    double radius = 1.0;  // covering round sphere
};

// Graph-encoded topology block. Spheres reference regions by name; each
// generator is given as the image list of the regions and of the spheres.
struct TopologySpec {
    std::vector<topo::Region> regions;
    struct Edge {
        std::string name, u, v;
        std::optional<int> genus;
    };
    std::vector<Edge> spheres;
    struct Perm {
        std::vector<std::string> regions;  // image of regions()[i]
        std::vector<std::string> spheres;
    };
    std::vector<Perm> perms;
    topo::ActionSummary summary;
    // Optional summand Q of M = P # Q for the alpha check.
    std::vector<topo::Region> q_regions;
    std::vector<Edge> q_spheres;
    bool has_q_factor = false;

    topo::TopologyScenario build() const;
};

struct SolverOptions {
    double t_max = 8.0;
    int levels = 321;     // level count of the scan grid (odd keeps Simpson exact)
    double tol = 1e-8;    // slack tolerance for the monotonicity verdicts
    int grid = 0;         // grid3d cross-check resolution, 0 disables
    int quad_refine = 1;  // scales profile tabulation and level density
    unsigned seed = 0;
};

struct ScenarioConfig {
    std::string name = "custom";
    Pipeline pipeline = Pipeline::Radial;
    ActionSpec action;
    RoundModelSpec model;
    double model_mass = 1.0;  // mass of the rp3-model profile
    RadialSpec radial;
    std::optional<TopologySpec> topology;
    SolverOptions solver;
    std::string out_dir = ".";
    std::string note;

    // Field-level validation with the offending key in the message.
    void validate() const;
};

// JSON (de)serialization. parse_config reports the failing field or the
// parser's line diagnostics inside std::invalid_argument.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);
std::string serialize_config(const ScenarioConfig& config);

struct CatalogEntry {
    std::string name;
    std::string summary;
};

// Built-in catalog: schwarzschild(m), rp3-model, antipodal-s3, lens(p),
// s2xs1-sphere-z2, s2xs1-circle-z2, flat-r3, custom.
std::vector<CatalogEntry> list_scenarios();

// Resolve a builtin by name. Parameters are accepted as "lens(3)", "lens-3",
// "lens p=3", or "schwarzschild(m=2)". Unknown names raise
// std::invalid_argument naming the nearest builtin.
ScenarioConfig builtin(const std::string& name);

}  // namespace eqy::scenario
