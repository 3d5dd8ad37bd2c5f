#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hch/config.hpp"
#include "hch/diagnostics.hpp"
#include "hch/grid.hpp"
#include "hch/interfaces.hpp"
#include "hch/snapshot.hpp"

namespace hch {

// In-memory product of one orchestrated run; cmd_simulate serializes it.
// When the run aborts mid-way the rows gathered so far are kept and run_csv
// ends with a "FAILED <reason>" sentinel line.
struct SimulateResult {
    bool failed = false;
    std::string failure;
    double dt = 0.0;  // resolved step (after dt: "auto")
    std::size_t steps = 0;
    std::vector<EnergyReport> reports;  // one per recorded stride
    LayerTrack track;                   // layer history (first component)
    bool tracking = true;               // false when the initial I_K is empty
    std::optional<double> exit_time;
    LowerBoundCertificate initial_certificate;
    LowerBoundCertificate final_certificate;
    std::vector<Snapshot> snapshots;  // at the configured times, order kept
    Snapshot final_state;
    std::string run_csv;
    std::string track_csv;
    std::string summary;
};

// Builds the initial data from the config, integrates, and gathers the
// energy/interface record. Configuration errors throw; solver failures are
// captured in the result (partial record + sentinel).
SimulateResult run_simulation(const RunConfig& cfg);

struct SweepPointOutcome {
    double value = 0.0;  // the axis value of this point
    bool failed = false;
    std::string message;
    double excess = 0.0;  // final-state certificate excess
    std::optional<double> exit_time;
    double t_max = 0.0;
};

struct SweepResult {
    bool any_failed = false;
    std::vector<SweepPointOutcome> points;  // in plan order
    std::string csv;                        // sweep.csv content
    std::string summary;
};

// Runs every point on a bounded worker pool (workers = 0 takes the plan's
// count); point outputs land in out_dir/point_<i>/ and the merged table is
// deterministic regardless of worker count. Point failures are flagged and
// the sweep continues.
SweepResult run_sweep(const SweepPlan& plan, const std::string& out_dir, std::size_t workers = 0);

// Subcommand drivers: write files under out_dir and return a process exit
// code (0 iff nothing failed).
int cmd_simulate(const RunConfig& cfg, const std::string& out_dir);
int cmd_sweep(const SweepPlan& plan, const std::string& out_dir, std::size_t workers = 0);
int cmd_profile(const RunConfig& cfg, const std::string& out_dir);

// Stand-alone lower-bound certificate of a saved state against the config's
// profile and potential; the verdict report is returned through `report`.
int cmd_certify(const RunConfig& cfg, const std::string& snapshot_path, std::string& report);

// Standing wave of the scalar potential: dw/dx = sqrt(2 W(w)) from the well
// midpoint at x = 0, classical RK4 on [-xmax, xmax].
GridFunction standing_wave_table(const ScalarPotential& p, double xmax, double dx);

}  // namespace hch
