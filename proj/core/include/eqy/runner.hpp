#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eqy/levelset.hpp"
#include "eqy/quotient.hpp"
#include "eqy/scenario.hpp"
#include "eqy/topo.hpp"

// Pipeline orchestration: topology checks, blow-up, harmonic scans, the
// monotonicity verdicts, and the Rayleigh report, produced as one RunReport
// plus the JSON/CSV writers the command line tool uses.

namespace eqy::runner {

struct StageReport {
    std::string name;
    bool ran = false;
    bool pass = true;          // meaningful only when the stage ran
    std::string skip_reason;   // structured reason when it did not
    std::string detail;
    double seconds = 0.0;
};

struct EndSummary {
    std::string name;
    double mass = 0.0;
    std::optional<double> horizon_radius;
    std::string horizon_note;
    bool decay_exact = false;
    double decay_exponent = 0.0;
    bool decay_pass = false;
    double phi_inf = 1.0;
    double anisotropy = 0.0;
    double C0 = 0.0;
    double W0 = 0.0;
};

struct RunReport {
    scenario::ScenarioConfig config;
    std::vector<StageReport> stages;

    bool topology_ran = false;
    topo::AssumptionReport assumptions;
    bool outermost_ran = false;
    topo::OutermostVerdict outermost;

    std::size_t card = 1;
    std::vector<EndSummary> ends;

    std::vector<levelset::LevelSetScan> end_scans;
    levelset::LevelSetScan combined;  // sum over ends; equals the single scan otherwise
    bool combined_valid = false;
    double flux_max_rel_dev = 0.0;  // of flux(t) e^{-t} from C0, over all scans

    bool monotonicity_ran = false;
    levelset::BoundCheck monotonicity;  // worst end
    bool minimal_ran = false;
    levelset::BoundCheck minimal;  // worst end, minimal-boundary form
    bool equivariant_ran = false;
    double equivariant_violation = 0.0;
    bool equivariant_pass = false;

    bool grid_ran = false;
    levelset::GridSolveInfo grid_info;

    bool rayleigh_ran = false;
    quotient::RayleighReport rayleigh;
    double profile_mass = 0.0;
    double profile_residual = 0.0;  // round-restoration certificate
    double hv_bound = 0.0;
    double improvement = 0.0;

    // 0 all pass, 2 assumption failure, 3 numerical verdict failure,
    // 4 solver error. Config parse problems throw std::invalid_argument
    // before a report exists.
    int exit_code = 0;
    std::string failure;
};

RunReport run(const scenario::ScenarioConfig& config);

// Serialized report. with_timestamps = false omits the generated_at field
// and zeroes the stage timings so identical runs are byte-identical.
std::string report_json(const RunReport& report, bool with_timestamps);

// report.json, scan_end<i>.csv per end, and scan_G.csv for the combined
// scan, all inside out_dir (created if missing).
void write_outputs(const RunReport& report, const std::string& out_dir, bool with_timestamps);

}  // namespace eqy::runner
