#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "eqy/numerics.hpp"
#include "eqy/runner.hpp"
#include "eqy/scenario.hpp"

namespace {

namespace sc = eqy::scenario;

struct Overrides {
    std::optional<double> t_max, tol;
    std::optional<int> grid;
    std::optional<unsigned> seed;
    std::string out_dir;
    bool no_timestamps = false;
};

void register_overrides(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--t-max", [&ov](const CLI::results_t& r) {
        ov.t_max = std::stod(r[0]);
        return true;
    }, "Override the largest level parameter t");
    cmd->add_option("--tol", [&ov](const CLI::results_t& r) {
        ov.tol = std::stod(r[0]);
        return true;
    }, "Override the verdict slack tolerance");
    cmd->add_option("--grid", [&ov](const CLI::results_t& r) {
        ov.grid = std::stoi(r[0]);
        return true;
    }, "Run the 3d grid cross-check at this resolution (0 disables)");
    cmd->add_option("--seed", [&ov](const CLI::results_t& r) {
        ov.seed = static_cast<unsigned>(std::stoul(r[0]));
        return true;
    }, "Seed recorded in the config and report");
    cmd->add_option("--out-dir", ov.out_dir, "Directory for report.json and the scan CSV files");
    cmd->add_flag("--no-timestamps", ov.no_timestamps,
                  "Omit generated_at and zero the stage timings (byte-identical reruns)");
}

// A config argument is a file path when such a file exists, otherwise a
// builtin scenario name.
sc::ScenarioConfig resolve_config(const std::string& arg, const Overrides& ov) {
    sc::ScenarioConfig cfg = std::filesystem::exists(arg) ? sc::load_config(arg)
                                                          : sc::builtin(arg);
    if (ov.t_max) cfg.solver.t_max = *ov.t_max;
    if (ov.tol) cfg.solver.tol = *ov.tol;
    if (ov.grid) cfg.solver.grid = *ov.grid;
    if (ov.seed) cfg.solver.seed = *ov.seed;
    if (!ov.out_dir.empty()) cfg.out_dir = ov.out_dir;
    cfg.validate();
    return cfg;
}

void print_stages(const eqy::runner::RunReport& rep) {
    for (const auto& s : rep.stages) {
        if (s.ran) {
            std::printf("  %-10s %s%s%s\n", s.name.c_str(), s.pass ? "pass" : "FAIL",
                        s.detail.empty() ? "" : "  ", s.detail.c_str());
        } else {
            std::printf("  %-10s skipped: %s\n", s.name.c_str(), s.skip_reason.c_str());
        }
    }
}

int cmd_run(const std::string& arg, const Overrides& ov) {
    const auto cfg = resolve_config(arg, ov);
    const auto rep = eqy::runner::run(cfg);
    eqy::runner::write_outputs(rep, cfg.out_dir, !ov.no_timestamps);

    std::printf("scenario %s\n", cfg.name.c_str());
    print_stages(rep);
    if (!rep.failure.empty()) std::printf("failure: %s\n", rep.failure.c_str());
    std::printf("report written to %s/report.json (exit %d)\n", cfg.out_dir.c_str(),
                rep.exit_code);
    return rep.exit_code;
}

int cmd_scan(const std::string& arg, const Overrides& ov) {
    const auto cfg = resolve_config(arg, ov);
    const auto rep = eqy::runner::run(cfg);
    if (!rep.combined_valid) {
        std::fprintf(stderr, "no scan produced: %s\n",
                     rep.failure.empty() ? "scenario has no numerical stage" : rep.failure.c_str());
        return rep.exit_code != 0 ? rep.exit_code : 2;
    }
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    for (std::size_t i = 0; i < rep.end_scans.size(); ++i) {
        const auto path = fs::path(cfg.out_dir) / ("scan_end" + std::to_string(i) + ".csv");
        eqy::levelset::write_scan_csv(path.string(), rep.end_scans[i], 1.0);
    }
    eqy::levelset::write_scan_csv((fs::path(cfg.out_dir) / "scan_G.csv").string(), rep.combined,
                                  static_cast<double>(rep.card));

    const auto& s = rep.combined.samples;
    std::printf("scenario %s: %zu levels, C0 = %.12g, W(0) = %.12g, W(t_max) = %.12g\n",
                cfg.name.c_str(), s.size(), rep.combined.C0, s.front().W, s.back().W);
    std::printf("scan files written to %s (exit %d)\n", cfg.out_dir.c_str(), rep.exit_code);
    return rep.exit_code;
}

int cmd_check_topology(const std::string& arg, const Overrides& ov) {
    auto cfg = resolve_config(arg, ov);
    if (!cfg.topology) {
        std::fprintf(stderr, "config '%s' has no topology block\n", cfg.name.c_str());
        return 1;
    }
    cfg.pipeline = sc::Pipeline::Topology;
    const auto rep = eqy::runner::run(cfg);
    std::printf("scenario %s\n", cfg.name.c_str());
    print_stages(rep);
    if (rep.outermost_ran) {
        std::printf("  outermost: J = %d, k0 = %d, boundary copies = %d%s\n", rep.outermost.J,
                    rep.outermost.k0, rep.outermost.boundary_copies,
                    rep.outermost.degenerate_shared_horizon ? " (shared invariant horizon)" : "");
    }
    if (!rep.failure.empty()) std::printf("failure: %s\n", rep.failure.c_str());
    return rep.exit_code;
}

int cmd_list() {
    std::printf("built-in scenarios:\n");
    for (const auto& e : sc::list_scenarios())
        std::printf("  %-18s %s\n", e.name.c_str(), e.summary.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Equivariant Yamabe upper-bound laboratory"};
    app.require_subcommand(1);

    std::string run_arg, scan_arg, topo_arg;
    Overrides run_ov, scan_ov, topo_ov;

    CLI::App* run = app.add_subcommand("run", "Execute a scenario and write report.json");
    run->add_option("config", run_arg, "Config file or builtin name")->required();
    register_overrides(run, run_ov);

    CLI::App* scan = app.add_subcommand("scan", "Write the level-set scan CSV files only");
    scan->add_option("config", scan_arg, "Config file or builtin name")->required();
    register_overrides(scan, scan_ov);

    CLI::App* topo = app.add_subcommand("check-topology", "Run only the topology checks");
    topo->add_option("config", topo_arg, "Config file or builtin name")->required();

    CLI::App* list = app.add_subcommand("list", "List the built-in scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) return cmd_run(run_arg, run_ov);
        if (scan->parsed()) return cmd_scan(scan_arg, scan_ov);
        if (topo->parsed()) return cmd_check_topology(topo_arg, topo_ov);
        if (list->parsed()) return cmd_list();
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const eqy::num::NumericsError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    }
    return 0;
}
