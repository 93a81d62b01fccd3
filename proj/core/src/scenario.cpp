#include "eqy/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace eqy::scenario {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string format_param(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

[[noreturn]] void fail_field(const std::string& path, const std::string& what) {
    throw std::invalid_argument("config field '" + path + "' " + what);
}

void check_keys(const ordered_json& obj, const std::vector<std::string>& allowed,
                const std::string& path) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw std::invalid_argument("unknown config key '" + it.key() + "' in " + path);
    }
}

double get_num(const ordered_json& obj, const char* key, double def, const std::string& path) {
    if (!obj.contains(key)) return def;
    if (!obj[key].is_number()) fail_field(path + "." + key, "must be a number");
    return obj[key].get<double>();
}

int get_int(const ordered_json& obj, const char* key, int def, const std::string& path) {
    if (!obj.contains(key)) return def;
    if (!obj[key].is_number_integer()) fail_field(path + "." + key, "must be an integer");
    return obj[key].get<int>();
}

std::string get_str(const ordered_json& obj, const char* key, const std::string& def,
                    const std::string& path) {
    if (!obj.contains(key)) return def;
    if (!obj[key].is_string()) fail_field(path + "." + key, "must be a string");
    return obj[key].get<std::string>();
}

bool get_bool(const ordered_json& obj, const char* key, bool def, const std::string& path) {
    if (!obj.contains(key)) return def;
    if (!obj[key].is_boolean()) fail_field(path + "." + key, "must be a boolean");
    return obj[key].get<bool>();
}

std::vector<double> get_num_array(const ordered_json& obj, const char* key,
                                  const std::string& path) {
    std::vector<double> out;
    if (!obj.contains(key)) return out;
    if (!obj[key].is_array()) fail_field(path + "." + key, "must be an array of numbers");
    for (const auto& v : obj[key]) {
        if (!v.is_number()) fail_field(path + "." + key, "must be an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

// Edit distance for the nearest-builtin suggestion.
std::size_t levenshtein(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

const std::vector<std::string>& builtin_bases() {
    static const std::vector<std::string> names = {
        "schwarzschild", "rp3-model", "antipodal-s3",  "lens",
        "s2xs1-sphere-z2", "s2xs1-circle-z2", "flat-r3", "custom"};
    return names;
}

TopologySpec antipodal_topology() {
    TopologySpec t;
    t.regions = {{"N1", true}, {"N2", true}};
    t.spheres = {{"H", "N1", "N2", 0}};
    t.perms = {{{"N2", "N1"}, {"H"}}};
    t.summary = {2, false, true};
    return t;
}

TopologySpec lens_topology(int p) {
    TopologySpec t;
    for (int i = 1; i <= p; ++i) t.regions.push_back({"N" + std::to_string(i), true});
    t.regions.push_back({"C", false});
    for (int i = 1; i <= p; ++i)
        t.spheres.push_back({"H" + std::to_string(i), "N" + std::to_string(i), "C", 0});
    TopologySpec::Perm cyc;
    for (int i = 1; i <= p; ++i) cyc.regions.push_back("N" + std::to_string(i % p + 1));
    cyc.regions.push_back("C");
    for (int i = 1; i <= p; ++i) cyc.spheres.push_back("H" + std::to_string(i % p + 1));
    t.perms = {cyc};
    t.summary = {p, false, true};
    return t;
}

}  // namespace

std::string pipeline_name(Pipeline p) {
    switch (p) {
        case Pipeline::Radial: return "radial";
        case Pipeline::Model: return "model";
        case Pipeline::Geometric: return "geometric";
        case Pipeline::Topology: return "topology";
    }
    throw std::logic_error("unhandled pipeline kind");
}

Pipeline pipeline_from_name(const std::string& name) {
    if (name == "radial") return Pipeline::Radial;
    if (name == "model") return Pipeline::Model;
    if (name == "geometric") return Pipeline::Geometric;
    if (name == "topology") return Pipeline::Topology;
    fail_field("pipeline", "must be one of radial, model, geometric, topology");
}

groups::FiniteGroupAction ActionSpec::build() const {
    if (label == "trivial") return groups::FiniteGroupAction::trivial();
    if (label == "antipodal") return groups::FiniteGroupAction::antipodal();
    if (label == "lens") return groups::FiniteGroupAction::lens(lens_p, lens_q);
    if (label == "custom") return groups::FiniteGroupAction::custom(generators);
    fail_field("action.label", "must be one of trivial, antipodal, lens, custom");
}

geom::RadialMetric RadialSpec::build() const {
    if (kind == "flat") return geom::RadialMetric::flat(boundary_radius);
    if (kind == "schwarzschild") return geom::RadialMetric::schwarzschild(mass);
    if (kind == "table") {
        geom::DecayModel decay;
        decay.phi_inf = 1.0;
        if (!r.empty()) decay.monopole = (phi.back() - 1.0) * r.back();
        return geom::RadialMetric::tabulated(r, phi, decay, boundary_radius);
    }
    fail_field("radial.kind", "must be one of flat, schwarzschild, table");
}

topo::TopologyScenario TopologySpec::build() const {
    auto index_regions = [](const std::vector<topo::Region>& rs) {
        std::map<std::string, int> idx;
        for (std::size_t i = 0; i < rs.size(); ++i) idx[rs[i].name] = static_cast<int>(i);
        return idx;
    };
    auto make_spheres = [&](const std::vector<Edge>& edges,
                            const std::map<std::string, int>& region_idx, const char* where) {
        std::vector<topo::Sphere> out;
        for (const auto& e : edges) {
            const auto u = region_idx.find(e.u);
            const auto v = region_idx.find(e.v);
            if (u == region_idx.end() || v == region_idx.end())
                throw std::invalid_argument(std::string("topology sphere '") + e.name +
                                            "' in " + where + " references an unknown region");
            out.push_back({e.name, u->second, v->second, e.genus});
        }
        return out;
    };

    const auto region_idx = index_regions(regions);
    std::map<std::string, int> sphere_idx;
    for (std::size_t i = 0; i < spheres.size(); ++i)
        sphere_idx[spheres[i].name] = static_cast<int>(i);

    std::vector<topo::GroupPerm> gp;
    for (const auto& perm : perms) {
        if (perm.regions.size() != regions.size() || perm.spheres.size() != spheres.size())
            throw std::invalid_argument(
                "topology generator image lists must match the region and sphere counts");
        topo::GroupPerm g;
        for (const auto& name : perm.regions) {
            const auto it = region_idx.find(name);
            if (it == region_idx.end())
                throw std::invalid_argument("topology generator maps to unknown region '" + name +
                                            "'");
            g.region_map.push_back(it->second);
        }
        for (const auto& name : perm.spheres) {
            const auto it = sphere_idx.find(name);
            if (it == sphere_idx.end())
                throw std::invalid_argument("topology generator maps to unknown sphere '" + name +
                                            "'");
            g.sphere_map.push_back(it->second);
        }
        gp.push_back(std::move(g));
    }

    auto scenario =
        topo::TopologyScenario::build(regions, make_spheres(spheres, region_idx, "topology"), gp);
    if (has_q_factor) {
        const auto q_idx = index_regions(q_regions);
        auto q = topo::TopologyScenario::build(
            q_regions, make_spheres(q_spheres, q_idx, "topology.q_factor"), {});
        scenario.set_q_factor(std::make_shared<topo::TopologyScenario>(std::move(q)));
    }
    return scenario;
}

void ScenarioConfig::validate() const {
    if (trim(name).empty()) fail_field("name", "must be non-empty");
    if (!(solver.t_max > 0.0)) fail_field("solver.t_max", "must be positive");
    if (solver.levels < 3) fail_field("solver.levels", "must be at least 3");
    if (!(solver.tol > 0.0)) fail_field("solver.tol", "must be positive");
    if (solver.quad_refine < 1) fail_field("solver.quad_refine", "must be at least 1");
    if (solver.grid != 0 && (solver.grid < 8 || solver.grid % 2 != 0))
        fail_field("solver.grid", "must be 0 or an even number at least 8");

    if (pipeline == Pipeline::Radial) {
        if (radial.kind != "flat" && radial.kind != "schwarzschild" && radial.kind != "table")
            fail_field("radial.kind", "must be one of flat, schwarzschild, table");
        if (radial.kind == "schwarzschild" && !(radial.mass > 0.0))
            fail_field("radial.mass", "must be positive");
        if (radial.kind != "schwarzschild" && !(radial.boundary_radius > 0.0))
            fail_field("radial.boundary_radius", "must be positive");
        if (radial.kind == "table") {
            if (radial.r.size() != radial.phi.size() || radial.r.size() < 4)
                fail_field("radial.r", "and radial.phi must have equal length of at least 4");
            for (std::size_t i = 1; i < radial.r.size(); ++i)
                if (!(radial.r[i] > radial.r[i - 1]))
                    fail_field("radial.r", "must be strictly increasing");
            for (double v : radial.phi)
                if (!(v > 0.0)) fail_field("radial.phi", "must be positive");
        }
    }
    if (pipeline == Pipeline::Model && !(model_mass > 0.0))
        fail_field("model_mass", "must be positive");
    if (pipeline == Pipeline::Geometric) {
        if (!(model.radius > 0.0)) fail_field("model.radius", "must be positive");
        if (action.label != "trivial" && action.label != "antipodal" && action.label != "lens" &&
            action.label != "custom")
            fail_field("action.label", "must be one of trivial, antipodal, lens, custom");
        if (action.label == "lens" && action.lens_p < 1)
            fail_field("action.lens_p", "must be a positive integer");
        if (action.label == "custom" && action.generators.empty())
            fail_field("action.generators", "must be non-empty for a custom action");
        if (std::abs(action.base_point.norm() - 1.0) > 1e-6)
            fail_field("action.base_point", "must lie on the unit sphere");
    }
    if (pipeline == Pipeline::Topology && !topology.has_value())
        fail_field("topology", "is required for a topology scenario");

    if (topology) {
        std::map<std::string, int> seen;
        for (const auto& r : topology->regions) {
            if (trim(r.name).empty()) fail_field("topology.regions", "names must be non-empty");
            if (seen.count(r.name)) fail_field("topology.regions", "names must be unique");
            seen[r.name] = 1;
        }
        if (topology->summary.min_card < 1)
            fail_field("topology.summary.min_card", "must be at least 1");
    }
}

namespace {

ordered_json action_to_json(const ActionSpec& a) {
    ordered_json j;
    j["label"] = a.label;
    if (a.label == "lens") {
        j["lens_p"] = a.lens_p;
        j["lens_q"] = a.lens_q;
    }
    if (a.label == "custom") {
        ordered_json gens = ordered_json::array();
        for (const auto& m : a.generators) {
            ordered_json row = ordered_json::array();
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) row.push_back(m(r, c));
            gens.push_back(row);
        }
        j["generators"] = gens;
    }
    j["base_point"] = {a.base_point[0], a.base_point[1], a.base_point[2], a.base_point[3]};
    return j;
}

ActionSpec action_from_json(const ordered_json& j) {
    check_keys(j, {"label", "lens_p", "lens_q", "generators", "base_point"}, "'action'");
    ActionSpec a;
    a.label = get_str(j, "label", "trivial", "action");
    a.lens_p = get_int(j, "lens_p", 2, "action");
    a.lens_q = get_int(j, "lens_q", 1, "action");
    if (j.contains("generators")) {
        if (!j["generators"].is_array()) fail_field("action.generators", "must be an array");
        for (const auto& row : j["generators"]) {
            if (!row.is_array() || row.size() != 16)
                fail_field("action.generators", "entries must be arrays of 16 numbers (row-major)");
            groups::Mat4 m;
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) m(r, c) = row[4 * r + c].get<double>();
            a.generators.push_back(m);
        }
    }
    if (j.contains("base_point")) {
        const auto v = get_num_array(j, "base_point", "action");
        if (v.size() != 4) fail_field("action.base_point", "must have 4 components");
        a.base_point = groups::Vec4(v[0], v[1], v[2], v[3]);
    }
    return a;
}

ordered_json edges_to_json(const std::vector<TopologySpec::Edge>& edges) {
    ordered_json arr = ordered_json::array();
    for (const auto& e : edges) {
        ordered_json je;
        je["name"] = e.name;
        je["u"] = e.u;
        je["v"] = e.v;
        if (e.genus)
            je["genus"] = *e.genus;
        else
            je["genus"] = nullptr;
        arr.push_back(je);
    }
    return arr;
}

std::vector<TopologySpec::Edge> edges_from_json(const ordered_json& arr, const std::string& path) {
    std::vector<TopologySpec::Edge> out;
    if (!arr.is_array()) fail_field(path, "must be an array");
    for (const auto& je : arr) {
        check_keys(je, {"name", "u", "v", "genus"}, "'" + path + "'");
        TopologySpec::Edge e;
        e.name = get_str(je, "name", "", path);
        e.u = get_str(je, "u", "", path);
        e.v = get_str(je, "v", "", path);
        if (je.contains("genus") && !je["genus"].is_null()) e.genus = get_int(je, "genus", 0, path);
        if (e.name.empty() || e.u.empty() || e.v.empty())
            fail_field(path, "entries need name, u, and v");
        out.push_back(std::move(e));
    }
    return out;
}

ordered_json regions_to_json(const std::vector<topo::Region>& regions) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : regions) {
        ordered_json jr;
        jr["name"] = r.name;
        jr["is_end"] = r.is_end;
        arr.push_back(jr);
    }
    return arr;
}

std::vector<topo::Region> regions_from_json(const ordered_json& arr, const std::string& path) {
    std::vector<topo::Region> out;
    if (!arr.is_array()) fail_field(path, "must be an array");
    for (const auto& jr : arr) {
        check_keys(jr, {"name", "is_end"}, "'" + path + "'");
        topo::Region r;
        r.name = get_str(jr, "name", "", path);
        r.is_end = get_bool(jr, "is_end", false, path);
        if (r.name.empty()) fail_field(path, "entries need a name");
        out.push_back(std::move(r));
    }
    return out;
}

ordered_json topology_to_json(const TopologySpec& t) {
    ordered_json j;
    j["regions"] = regions_to_json(t.regions);
    j["spheres"] = edges_to_json(t.spheres);
    ordered_json perms = ordered_json::array();
    for (const auto& p : t.perms) {
        ordered_json jp;
        jp["regions"] = p.regions;
        jp["spheres"] = p.spheres;
        perms.push_back(jp);
    }
    j["perms"] = perms;
    ordered_json s;
    s["min_card"] = t.summary.min_card;
    s["has_fixed_point"] = t.summary.has_fixed_point;
    s["is_sphere_manifold"] = t.summary.is_sphere_manifold;
    j["summary"] = s;
    if (t.has_q_factor) {
        ordered_json q;
        q["regions"] = regions_to_json(t.q_regions);
        q["spheres"] = edges_to_json(t.q_spheres);
        j["q_factor"] = q;
    }
    return j;
}

TopologySpec topology_from_json(const ordered_json& j) {
    check_keys(j, {"regions", "spheres", "perms", "summary", "q_factor"}, "'topology'");
    TopologySpec t;
    if (!j.contains("regions") || !j.contains("spheres"))
        fail_field("topology", "needs regions and spheres");
    t.regions = regions_from_json(j["regions"], "topology.regions");
    t.spheres = edges_from_json(j["spheres"], "topology.spheres");
    if (j.contains("perms")) {
        if (!j["perms"].is_array()) fail_field("topology.perms", "must be an array");
        for (const auto& jp : j["perms"]) {
            check_keys(jp, {"regions", "spheres"}, "'topology.perms'");
            TopologySpec::Perm p;
            for (const auto& v : jp.value("regions", ordered_json::array()))
                p.regions.push_back(v.get<std::string>());
            for (const auto& v : jp.value("spheres", ordered_json::array()))
                p.spheres.push_back(v.get<std::string>());
            t.perms.push_back(std::move(p));
        }
    }
    if (j.contains("summary")) {
        const auto& s = j["summary"];
        check_keys(s, {"min_card", "has_fixed_point", "is_sphere_manifold"}, "'topology.summary'");
        t.summary.min_card = get_int(s, "min_card", 1, "topology.summary");
        t.summary.has_fixed_point = get_bool(s, "has_fixed_point", false, "topology.summary");
        t.summary.is_sphere_manifold = get_bool(s, "is_sphere_manifold", false, "topology.summary");
    }
    if (j.contains("q_factor")) {
        const auto& q = j["q_factor"];
        check_keys(q, {"regions", "spheres"}, "'topology.q_factor'");
        t.q_regions = regions_from_json(q["regions"], "topology.q_factor.regions");
        t.q_spheres = edges_from_json(q["spheres"], "topology.q_factor.spheres");
        t.has_q_factor = true;
    }
    return t;
}

}  // namespace

std::string serialize_config(const ScenarioConfig& config) {
    ordered_json j;
    j["name"] = config.name;
    j["pipeline"] = pipeline_name(config.pipeline);
    if (!config.note.empty()) j["note"] = config.note;

    if (config.pipeline == Pipeline::Geometric) {
        j["action"] = action_to_json(config.action);
        ordered_json m;
        m["radius"] = config.model.radius;
        j["model"] = m;
    }
    if (config.pipeline == Pipeline::Model) j["model_mass"] = config.model_mass;
    if (config.pipeline == Pipeline::Radial) {
        ordered_json r;
        r["kind"] = config.radial.kind;
        if (config.radial.kind == "schwarzschild") r["mass"] = config.radial.mass;
        if (config.radial.kind != "schwarzschild")
            r["boundary_radius"] = config.radial.boundary_radius;
        if (config.radial.kind == "table") {
            r["r"] = config.radial.r;
            r["phi"] = config.radial.phi;
        }
        j["radial"] = r;
    }
    if (config.topology) j["topology"] = topology_to_json(*config.topology);

    ordered_json s;
    s["t_max"] = config.solver.t_max;
    s["levels"] = config.solver.levels;
    s["tol"] = config.solver.tol;
    s["grid"] = config.solver.grid;
    s["quad_refine"] = config.solver.quad_refine;
    s["seed"] = config.solver.seed;
    j["solver"] = s;
    j["out_dir"] = config.out_dir;
    return j.dump(2) + "\n";
}

ScenarioConfig parse_config(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const ordered_json::parse_error& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    check_keys(j,
               {"name", "pipeline", "note", "action", "model", "model_mass", "radial", "topology",
                "solver", "out_dir"},
               "the top level");

    ScenarioConfig c;
    c.name = get_str(j, "name", "custom", "config");
    c.pipeline = pipeline_from_name(get_str(j, "pipeline", "radial", "config"));
    c.note = get_str(j, "note", "", "config");
    if (j.contains("action")) c.action = action_from_json(j["action"]);
    if (j.contains("model")) {
        check_keys(j["model"], {"radius"}, "'model'");
        c.model.radius = get_num(j["model"], "radius", 1.0, "model");
    }
    c.model_mass = get_num(j, "model_mass", 1.0, "config");
    if (j.contains("radial")) {
        const auto& r = j["radial"];
        check_keys(r, {"kind", "mass", "boundary_radius", "r", "phi"}, "'radial'");
        c.radial.kind = get_str(r, "kind", "schwarzschild", "radial");
        c.radial.mass = get_num(r, "mass", 1.0, "radial");
        c.radial.boundary_radius = get_num(r, "boundary_radius", 1.0, "radial");
        c.radial.r = get_num_array(r, "r", "radial");
        c.radial.phi = get_num_array(r, "phi", "radial");
    }
    if (j.contains("topology")) c.topology = topology_from_json(j["topology"]);
    if (j.contains("solver")) {
        const auto& s = j["solver"];
        check_keys(s, {"t_max", "levels", "tol", "grid", "quad_refine", "seed"}, "'solver'");
        c.solver.t_max = get_num(s, "t_max", 8.0, "solver");
        c.solver.levels = get_int(s, "levels", 321, "solver");
        c.solver.tol = get_num(s, "tol", 1e-8, "solver");
        c.solver.grid = get_int(s, "grid", 0, "solver");
        c.solver.quad_refine = get_int(s, "quad_refine", 1, "solver");
        c.solver.seed = static_cast<unsigned>(get_int(s, "seed", 0, "solver"));
    }
    c.out_dir = get_str(j, "out_dir", ".", "config");
    c.validate();
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::vector<CatalogEntry> list_scenarios() {
    return {
        {"schwarzschild", "single Schwarzschild end, parameter m (default 2); closed-form checks"},
        {"rp3-model", "closed-form model profile on a mass-m end, parameter m (default 1)"},
        {"antipodal-s3", "antipodal quotient of the round sphere; two-ended blow-up"},
        {"lens", "cyclic quotient of the round sphere, parameter p (default 2); p-ended blow-up"},
        {"s2xs1-sphere-z2", "combinatorial scenario: involution on the sphere factor, passes"},
        {"s2xs1-circle-z2", "combinatorial scenario: involution on the circle factor, fails (iv)"},
        {"flat-r3", "flat exterior with unit boundary sphere; trivial comparison run"},
        {"custom", "editable template with an explicit radial end and topology block"},
    };
}

ScenarioConfig builtin(const std::string& name) {
    std::string base = trim(name);
    std::optional<std::string> param_text;

    const auto lp = base.find('(');
    if (lp != std::string::npos) {
        if (base.back() != ')')
            throw std::invalid_argument("unbalanced parentheses in scenario name '" + name + "'");
        param_text = base.substr(lp + 1, base.size() - lp - 2);
        base = trim(base.substr(0, lp));
    } else if (const auto sp = base.find(' '); sp != std::string::npos) {
        param_text = base.substr(sp + 1);
        base = trim(base.substr(0, sp));
    } else if (const auto dash = base.rfind('-'); dash != std::string::npos) {
        const std::string suffix = base.substr(dash + 1);
        if (!suffix.empty() &&
            std::all_of(suffix.begin(), suffix.end(),
                        [](unsigned char ch) { return std::isdigit(ch) || ch == '.'; })) {
            param_text = suffix;
            base = base.substr(0, dash);
        }
    }
    base = lower(base);

    const auto& bases = builtin_bases();
    if (std::find(bases.begin(), bases.end(), base) == bases.end()) {
        std::string nearest = bases.front();
        std::size_t best = levenshtein(base, nearest);
        for (const auto& cand : bases) {
            const std::size_t d = levenshtein(base, cand);
            if (d < best) {
                best = d;
                nearest = cand;
            }
        }
        throw std::invalid_argument("unknown scenario '" + name + "'; nearest builtin is '" +
                                    nearest + "'");
    }

    std::optional<double> param;
    if (param_text) {
        std::string v = trim(*param_text);
        const auto eq = v.find('=');
        if (eq != std::string::npos) v = trim(v.substr(eq + 1));
        try {
            std::size_t used = 0;
            param = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw std::invalid_argument("could not parse the parameter of scenario '" + name +
                                        "'");
        }
    }
    auto require_no_param = [&]() {
        if (param)
            throw std::invalid_argument("scenario '" + base + "' takes no parameter");
    };

    ScenarioConfig c;
    if (base == "schwarzschild") {
        const double m = param.value_or(2.0);
        if (!(m > 0.0)) throw std::invalid_argument("schwarzschild mass must be positive");
        c.name = "schwarzschild(m=" + format_param(m) + ")";
        c.pipeline = Pipeline::Radial;
        c.radial.kind = "schwarzschild";
        c.radial.mass = m;
    } else if (base == "rp3-model") {
        const double m = param.value_or(1.0);
        if (!(m > 0.0)) throw std::invalid_argument("model mass must be positive");
        c.name = m == 1.0 ? "rp3-model" : "rp3-model(m=" + format_param(m) + ")";
        c.pipeline = Pipeline::Model;
        c.model_mass = m;
    } else if (base == "antipodal-s3") {
        require_no_param();
        c.name = "antipodal-s3";
        c.pipeline = Pipeline::Geometric;
        c.action.label = "antipodal";
        c.topology = antipodal_topology();
    } else if (base == "lens") {
        const double pd = param.value_or(2.0);
        const int p = static_cast<int>(pd);
        if (p < 1 || pd != p) throw std::invalid_argument("lens order must be a positive integer");
        c.name = "lens(" + std::to_string(p) + ")";
        c.pipeline = Pipeline::Geometric;
        c.action.label = "lens";
        c.action.lens_p = p;
        c.topology = lens_topology(p);
    } else if (base == "s2xs1-sphere-z2") {
        require_no_param();
        c.name = "s2xs1-sphere-z2";
        c.pipeline = Pipeline::Topology;
        TopologySpec t;
        t.regions = {{"N1", true}, {"N2", true}, {"C", false}};
        t.spheres = {{"S1", "N1", "C", 0}, {"S2", "N2", "C", 0}, {"SL", "C", "C", 0}};
        t.perms = {{{"N2", "N1", "C"}, {"S2", "S1", "SL"}}};
        t.summary = {2, false, false};
        c.topology = t;
    } else if (base == "s2xs1-circle-z2") {
        require_no_param();
        c.name = "s2xs1-circle-z2";
        c.pipeline = Pipeline::Topology;
        TopologySpec t;
        t.regions = {{"N1", true}, {"N2", true}};
        t.spheres = {{"S1", "N1", "N2", 0}, {"S2", "N1", "N2", 0}};
        t.perms = {{{"N2", "N1"}, {"S2", "S1"}}};
        t.summary = {2, false, false};
        c.topology = t;
    } else if (base == "flat-r3") {
        require_no_param();
        c.name = "flat-r3";
        c.pipeline = Pipeline::Radial;
        c.radial.kind = "flat";
        c.radial.boundary_radius = 1.0;
    } else {
        require_no_param();
        c.name = "custom";
        c.pipeline = Pipeline::Radial;
        c.radial.kind = "schwarzschild";
        c.radial.mass = 1.0;
        c.topology = antipodal_topology();
        c.note = "template: edit the radial end, the topology block, or switch pipeline";
    }
    c.validate();
    return c;
}

}  // namespace eqy::scenario
