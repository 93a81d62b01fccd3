#include "eqy/runner.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "eqy/blowup.hpp"
#include "eqy/geom.hpp"
#include "eqy/groups.hpp"
#include "eqy/numerics.hpp"
#include "json.hpp"

namespace eqy::runner {

using ordered_json = nlohmann::ordered_json;
namespace sc = eqy::scenario;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

StageReport& push_stage(RunReport& rep, const std::string& name) {
    StageReport s;
    s.name = name;
    rep.stages.push_back(std::move(s));
    return rep.stages.back();
}

void skip_stage(RunReport& rep, const std::string& name, const std::string& reason) {
    StageReport& s = push_stage(rep, name);
    s.ran = false;
    s.pass = true;
    s.skip_reason = reason;
}

double flux_deviation(const levelset::LevelSetScan& scan) {
    double worst = 0.0;
    for (const auto& s : scan.samples)
        worst = std::max(worst, std::abs(s.flux * std::exp(-s.t) / scan.C0 - 1.0));
    return worst;
}

std::string verdict_name(topo::AssumptionVerdict::Status s) {
    switch (s) {
        case topo::AssumptionVerdict::Status::Pass: return "pass";
        case topo::AssumptionVerdict::Status::Fail: return "fail";
        case topo::AssumptionVerdict::Status::NotChecked: return "not-checked";
    }
    return "not-checked";
}

std::string format_g(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

// Topology stage shared by every pipeline that carries a block. Returns
// false when an assumption or the outermost-horizon verdict failed, in which
// case the report is already marked for exit code 2.
bool run_topology(RunReport& rep, const sc::ScenarioConfig& config) {
    const auto t0 = Clock::now();
    if (!config.topology) {
        const char* reason = config.pipeline == sc::Pipeline::Model
                                 ? "model scenario asserts the quotient picture; no topology block"
                                 : "no topology block in the config";
        skip_stage(rep, "topology", reason);
        return true;
    }
    StageReport& stage = push_stage(rep, "topology");
    stage.ran = true;

    const auto scenario_graph = config.topology->build();
    rep.assumptions = topo::check_assumptions(scenario_graph, config.topology->summary);
    rep.topology_ran = true;

    if (!rep.assumptions.all_pass()) {
        std::string witness;
        for (const auto* v : {&rep.assumptions.finite_orbit, &rep.assumptions.alpha_condition,
                              &rep.assumptions.sphere_no_fixed,
                              &rep.assumptions.nonseparating_union}) {
            if (v->status == topo::AssumptionVerdict::Status::Fail) {
                witness = v->witness;
                break;
            }
        }
        stage.pass = false;
        stage.detail = "assumption failed: " + witness;
        stage.seconds = seconds_since(t0);
        rep.exit_code = 2;
        rep.failure = "topology assumption failed: " + witness;
        return false;
    }

    rep.outermost = topo::lemma_outermost_verdict(scenario_graph);
    rep.outermost_ran = true;
    if (!rep.outermost.pass) {
        stage.pass = false;
        stage.detail = "outermost-horizon verdict failed: " + rep.outermost.violated_clause;
        stage.seconds = seconds_since(t0);
        rep.exit_code = 2;
        rep.failure = "outermost-horizon verdict failed: " + rep.outermost.violated_clause;
        return false;
    }

    stage.pass = true;
    stage.detail = "assumptions pass; J=" + std::to_string(rep.outermost.J) +
                   ", k0=" + std::to_string(rep.outermost.k0);
    stage.seconds = seconds_since(t0);
    return true;
}

void fill_end_summary(EndSummary& e, const geom::RadialMetric& metric) {
    const auto decay = blowup::verify_af_decay(metric);
    e.mass = metric.mass();
    e.decay_exact = decay.exact;
    e.decay_exponent = decay.exponent;
    e.decay_pass = decay.pass;
    e.phi_inf = decay.phi_inf;
}

}  // namespace

RunReport run(const sc::ScenarioConfig& config) {
    config.validate();
    RunReport rep;
    rep.config = config;

    const int levels_eff = (config.solver.levels - 1) * config.solver.quad_refine + 1;
    const auto t_grid = levelset::uniform_levels(config.solver.t_max,
                                                 static_cast<std::size_t>(levels_eff));
    const std::size_t tab_nodes = 512 * static_cast<std::size_t>(config.solver.quad_refine) + 1;

    try {
        if (!run_topology(rep, config)) {
            const char* reason = "topology stage failed; numerical stages skipped";
            for (const char* name : {"ends", "harmonic", "bounds", "quotient"})
                skip_stage(rep, name, reason);
            return rep;
        }

        if (config.pipeline == sc::Pipeline::Topology) {
            const char* reason = "combinatorial scenario carries no metric data";
            for (const char* name : {"ends", "harmonic", "bounds", "quotient"})
                skip_stage(rep, name, reason);
            return rep;
        }

        // --- ends ---------------------------------------------------------
        std::vector<geom::RadialMetric> metrics;
        std::optional<blowup::BlowupModel> blow;
        {
            const auto t0 = Clock::now();
            StageReport& stage = push_stage(rep, "ends");
            stage.ran = true;

            if (config.pipeline == sc::Pipeline::Radial) {
                metrics.push_back(config.radial.build());
                EndSummary e;
                e.name = "end0";
                e.horizon_radius = metrics[0].r_min();
                fill_end_summary(e, metrics[0]);
                rep.ends.push_back(e);
                rep.card = 1;
                stage.detail = "explicit " + config.radial.kind + " end";
            } else if (config.pipeline == sc::Pipeline::Model) {
                metrics.push_back(geom::RadialMetric::schwarzschild(config.model_mass));
                EndSummary e;
                e.name = "end0";
                e.horizon_radius = metrics[0].r_min();
                fill_end_summary(e, metrics[0]);
                rep.ends.push_back(e);
                rep.card = 1;
                stage.detail = "closed-form model end, mass " + format_g(config.model_mass);
            } else {
                const auto action = config.action.build();
                const auto model = geom::ClosedModelMetric::round_sphere(config.model.radius);
                blow = blowup::build_blowup(model, action, config.action.base_point);
                rep.card = blow->orbit.orbit_points.size();
                for (std::size_t i = 0; i < blow->ends.size(); ++i) {
                    const auto& be = blow->ends[i];
                    metrics.push_back(be.metric);
                    EndSummary e;
                    e.name = "end" + std::to_string(i);
                    e.horizon_radius = be.horizon_radius;
                    e.horizon_note = be.horizon_note;
                    e.anisotropy = be.anisotropy;
                    fill_end_summary(e, be.metric);
                    e.mass = be.mass;
                    rep.ends.push_back(e);
                }
                stage.detail = std::to_string(rep.ends.size()) + " blow-up ends, fitted mass " +
                               format_g(rep.ends.front().mass);
            }

            for (const auto& e : rep.ends) {
                if (!e.decay_pass) {
                    stage.pass = false;
                    rep.exit_code = 3;
                    rep.failure = "end " + e.name + " failed the asymptotic-decay certificate";
                }
            }
            stage.seconds = seconds_since(t0);
        }

        // --- harmonic -------------------------------------------------------
        std::vector<levelset::HarmonicSolution> solutions;
        {
            const auto t0 = Clock::now();
            StageReport& stage = push_stage(rep, "harmonic");
            stage.ran = true;

            for (const auto& m : metrics) solutions.push_back(levelset::solve_harmonic_radial(m));

            if (blow) {
                const auto eq = levelset::combine_equivariant(*blow, solutions, t_grid);
                rep.end_scans = eq.per_end;
                rep.combined = eq.combined;
                rep.equivariant_ran = true;
                rep.equivariant_violation = eq.max_violation;
                rep.equivariant_pass = eq.pass;
            } else {
                rep.end_scans.push_back(levelset::scan_levels(solutions[0], t_grid));
                rep.combined = rep.end_scans[0];
            }
            rep.combined_valid = true;

            double dev = flux_deviation(rep.combined);
            for (std::size_t i = 0; i < rep.end_scans.size(); ++i) {
                dev = std::max(dev, flux_deviation(rep.end_scans[i]));
                rep.ends[i].C0 = rep.end_scans[i].C0;
                rep.ends[i].W0 = rep.end_scans[i].W0;
            }
            rep.flux_max_rel_dev = dev;
            stage.detail = "C0 = " + format_g(rep.combined.C0) +
                           ", flux deviation " + format_g(dev);
            if (dev > 1e-6) {
                stage.pass = false;
                if (rep.exit_code == 0) rep.exit_code = 3;
                rep.failure = "flux constancy violated: relative deviation " + format_g(dev);
            }
            stage.seconds = seconds_since(t0);
        }

        // --- bounds ---------------------------------------------------------
        {
            const auto t0 = Clock::now();
            StageReport& stage = push_stage(rep, "bounds");
            stage.ran = true;

            bool ok = true;
            for (const auto& scan : rep.end_scans) {
                const auto mono = levelset::check_monotonicity(scan, config.solver.tol);
                if (!rep.monotonicity_ran || mono.max_violation > rep.monotonicity.max_violation)
                    rep.monotonicity = mono;
                rep.monotonicity_ran = true;
                ok = ok && mono.pass;
                if (scan.boundary_minimal) {
                    const auto mb = levelset::check_minimal_bound(scan, config.solver.tol);
                    if (!rep.minimal_ran || mb.max_violation > rep.minimal.max_violation)
                        rep.minimal = mb;
                    rep.minimal_ran = true;
                    ok = ok && mb.pass;
                }
            }
            if (rep.equivariant_ran) ok = ok && rep.equivariant_pass;

            stage.pass = ok;
            stage.detail = "max slack " + format_g(rep.monotonicity.max_violation);
            if (!ok) {
                if (rep.exit_code == 0) rep.exit_code = 3;
                rep.failure = "a monotonicity bound was violated; worst slack " +
                              format_g(rep.monotonicity.max_violation);
            }
            stage.seconds = seconds_since(t0);
        }

        // --- quotient -------------------------------------------------------
        if (config.pipeline == sc::Pipeline::Radial) {
            skip_stage(rep, "quotient", "no group action on an explicit radial end");
        } else {
            const auto t0 = Clock::now();
            StageReport& stage = push_stage(rep, "quotient");
            stage.ran = true;

            const double mass =
                config.pipeline == sc::Pipeline::Model ? config.model_mass : rep.ends.front().mass;
            const auto profile = quotient::ModelProfileF::rp3_model(mass, tab_nodes);
            rep.profile_mass = mass;
            rep.profile_residual = profile.restoration_residual();
            rep.rayleigh = quotient::rayleigh_model(profile, rep.combined, rep.card);
            rep.rayleigh_ran = true;
            rep.hv_bound = quotient::hebey_vaugon_bound(3, rep.card);
            rep.improvement = quotient::improvement_ratio();

            stage.pass = rep.rayleigh.verdict;
            stage.detail = "quotient_ub " + format_g(rep.rayleigh.quotient_ub) + " vs bound " +
                           format_g(rep.rayleigh.bound);
            if (!rep.rayleigh.verdict) {
                if (rep.exit_code == 0) rep.exit_code = 3;
                rep.failure = "Rayleigh quotient exceeded the equivariant bound";
            }
            stage.seconds = seconds_since(t0);
        }

        // --- grid cross-check (optional) -------------------------------------
        if (config.solver.grid > 0 && !solutions.empty()) {
            const auto t0 = Clock::now();
            StageReport& stage = push_stage(rep, "grid");
            stage.ran = true;
            levelset::GridOptions go;
            go.n = config.solver.grid;
            const std::function<double(double)> reference = solutions[0].u;
            const auto gh = levelset::solve_harmonic_grid3d(metrics[0], go, &reference);
            rep.grid_ran = true;
            rep.grid_info = gh.info;
            stage.detail = "sup error vs radial " + format_g(gh.info.sup_error) + " after " +
                           std::to_string(gh.info.iterations) + " iterations";
            stage.seconds = seconds_since(t0);
        }
    } catch (const levelset::SymmetryError& e) {
        rep.exit_code = 3;
        rep.failure = std::string("equivariance check failed: ") + e.what();
    } catch (const num::NumericsError& e) {
        rep.exit_code = 4;
        rep.failure = std::string("solver error: ") + e.what();
    } catch (const std::exception& e) {
        rep.exit_code = 4;
        rep.failure = std::string("stage error: ") + e.what();
    }
    return rep;
}

namespace {

ordered_json stage_json(const StageReport& s, bool with_timestamps) {
    ordered_json j;
    j["name"] = s.name;
    j["ran"] = s.ran;
    if (s.ran)
        j["pass"] = s.pass;
    else
        j["skip_reason"] = s.skip_reason;
    if (!s.detail.empty()) j["detail"] = s.detail;
    j["seconds"] = with_timestamps ? s.seconds : 0.0;
    return j;
}

ordered_json bound_check_json(const levelset::BoundCheck& b) {
    ordered_json j;
    j["pass"] = b.pass;
    j["max_violation"] = b.max_violation;
    j["worst_t"] = b.worst_t;
    j["near_equality_count"] = b.near_equality_count;
    return j;
}

}  // namespace

std::string report_json(const RunReport& report, bool with_timestamps) {
    ordered_json j;
    j["name"] = report.config.name;
    j["pipeline"] = sc::pipeline_name(report.config.pipeline);
    if (with_timestamps) {
        const std::time_t now =
            std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        j["generated_at"] = buf;
    }
    j["exit_code"] = report.exit_code;
    if (!report.failure.empty()) j["failure"] = report.failure;

    ordered_json stages = ordered_json::array();
    for (const auto& s : report.stages) stages.push_back(stage_json(s, with_timestamps));
    j["stages"] = stages;

    if (report.topology_ran) {
        ordered_json t;
        ordered_json a;
        a["finite_orbit"] = verdict_name(report.assumptions.finite_orbit.status);
        a["alpha_condition"] = verdict_name(report.assumptions.alpha_condition.status);
        a["sphere_no_fixed"] = verdict_name(report.assumptions.sphere_no_fixed.status);
        a["nonseparating_union"] = verdict_name(report.assumptions.nonseparating_union.status);
        if (report.assumptions.alpha)
            a["alpha"] = *report.assumptions.alpha;
        else
            a["alpha"] = nullptr;
        for (const auto* v :
             {&report.assumptions.finite_orbit, &report.assumptions.alpha_condition,
              &report.assumptions.sphere_no_fixed, &report.assumptions.nonseparating_union}) {
            if (v->status == topo::AssumptionVerdict::Status::Fail) {
                a["witness"] = v->witness;
                break;
            }
        }
        t["assumptions"] = a;
        if (report.outermost_ran) {
            ordered_json o;
            o["J"] = report.outermost.J;
            o["L"] = report.outermost.L_list;
            o["k0"] = report.outermost.k0;
            o["boundary_copies"] = report.outermost.boundary_copies;
            o["degenerate_shared_horizon"] = report.outermost.degenerate_shared_horizon;
            o["pass"] = report.outermost.pass;
            if (!report.outermost.violated_clause.empty())
                o["violated_clause"] = report.outermost.violated_clause;
            t["outermost"] = o;
        }
        j["topology"] = t;
    }

    j["card"] = report.card;

    if (!report.ends.empty()) {
        ordered_json ends = ordered_json::array();
        for (const auto& e : report.ends) {
            ordered_json je;
            je["name"] = e.name;
            je["mass"] = e.mass;
            if (e.horizon_radius)
                je["horizon_radius"] = *e.horizon_radius;
            else
                je["horizon_radius"] = nullptr;
            if (!e.horizon_note.empty()) je["horizon_note"] = e.horizon_note;
            je["decay_exact"] = e.decay_exact;
            je["decay_exponent"] = e.decay_exponent;
            je["decay_pass"] = e.decay_pass;
            je["phi_inf"] = e.phi_inf;
            je["anisotropy"] = e.anisotropy;
            je["C0"] = e.C0;
            je["W0"] = e.W0;
            ends.push_back(je);
        }
        j["ends"] = ends;
    }

    if (report.combined_valid) {
        ordered_json h;
        h["C0_combined"] = report.combined.C0;
        h["W0_combined"] = report.combined.W0;
        h["levels"] = report.combined.samples.size();
        h["t_max"] = report.combined.t_max;
        h["flux_max_rel_dev"] = report.flux_max_rel_dev;
        h["truncated"] = report.combined.truncated;
        if (!report.combined.note.empty()) h["note"] = report.combined.note;
        j["harmonic"] = h;
    }

    {
        ordered_json b;
        if (report.monotonicity_ran) b["monotonicity"] = bound_check_json(report.monotonicity);
        if (report.minimal_ran) b["minimal"] = bound_check_json(report.minimal);
        if (report.equivariant_ran) {
            ordered_json e;
            e["pass"] = report.equivariant_pass;
            e["max_violation"] = report.equivariant_violation;
            e["card"] = report.card;
            b["equivariant"] = e;
        }
        if (!b.empty()) j["bounds"] = b;
    }

    if (report.grid_ran) {
        ordered_json g;
        g["n"] = report.grid_info.n;
        g["iterations"] = report.grid_info.iterations;
        g["relative_residual"] = report.grid_info.relative_residual;
        g["sup_error"] = report.grid_info.sup_error;
        j["grid"] = g;
    }

    if (report.rayleigh_ran) {
        ordered_json q;
        q["numerator"] = report.rayleigh.numerator;
        q["denominator_lb"] = report.rayleigh.denominator_lb;
        q["denominator_exact"] = report.rayleigh.denominator_exact;
        q["quotient_ub"] = report.rayleigh.quotient_ub;
        q["card"] = report.rayleigh.card;
        q["bound"] = report.rayleigh.bound;
        q["verdict"] = report.rayleigh.verdict;
        q["model_mass"] = report.profile_mass;
        q["restoration_residual"] = report.profile_residual;
        q["hebey_vaugon"] = report.hv_bound;
        q["improvement_ratio"] = report.improvement;
        j["quotient"] = q;
    }

    j["config"] = ordered_json::parse(sc::serialize_config(report.config));
    return j.dump(2) + "\n";
}

void write_outputs(const RunReport& report, const std::string& out_dir, bool with_timestamps) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    {
        std::ofstream out(fs::path(out_dir) / "report.json", std::ios::binary);
        if (!out) throw std::runtime_error("cannot write report.json in '" + out_dir + "'");
        out << report_json(report, with_timestamps);
    }
    for (std::size_t i = 0; i < report.end_scans.size(); ++i) {
        const auto path = fs::path(out_dir) / ("scan_end" + std::to_string(i) + ".csv");
        levelset::write_scan_csv(path.string(), report.end_scans[i], 1.0);
    }
    if (report.combined_valid) {
        const auto path = fs::path(out_dir) / "scan_G.csv";
        levelset::write_scan_csv(path.string(), report.combined,
                                 static_cast<double>(report.card));
    }
}

}  // namespace eqy::runner
