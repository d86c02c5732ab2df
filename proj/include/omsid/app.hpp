#pragma once

#include "omsid/csv.hpp"
#include "omsid/search.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace omsid {

enum class TraceMode { kAuto, kAll, kNone };

// Everything a run needs; the CLI is a thin parser that fills this in.
struct RunConfig {
  DriftCoeffs beta = DriftCoeffs::Zero();
  double eps = 0.8;

  double x0 = 0.0;
  double xT = 1.4142135623730951;  // sqrt(2)
  double T = 1.0;
  double dt = 1e-3;

  std::uint64_t seed = 1;
  int n_seeds = 1;
  double frac_train = 0.7;

  std::vector<std::pair<double, double>> grid;  // empty: default grid
  HyperParams hp;
  double e3_cap = 1.0;
  int jobs = 0;

  std::string out_dir = "out";
  TraceMode traces = TraceMode::kAuto;
  bool dump_design = false;
};

// Named presets; throws std::invalid_argument for unknown names.
//   I:   0.5 x - 1.2 x^3 + sin x,  eps 0.8
//   II:  0.5 x - 1.2 x^3,          eps 0.8
//   III: cos x,                    eps 0.8
void apply_case(RunConfig& cfg, const std::string& name);

// "k1min:k1step:k1max,k2min:k2step:k2max" -> cells in row-major (k1 outer)
// order.  Values are snapped to 12 significant digits so that e.g. 3*0.025
// comes out as the decimal 0.075.
std::vector<std::pair<double, double>> parse_grid_spec(
    const std::string& spec);
std::vector<std::pair<double, double>> default_grid();

std::string drift_to_string(const DriftCoeffs& beta);
std::string support_to_string(const DriftCoeffs& beta);

struct SimulateResult {
  Trajectory traj;
  double residual = 0.0;  // |z(T) - xT| of the returned path
  std::string path;       // written trajectory file
};

// Solves the boundary value problem for cfg's model and writes
// out_dir/trajectory.csv.
SimulateResult run_simulate(const RunConfig& cfg);

struct SeedOutcome {
  std::uint64_t seed = 0;
  bool selected = false;
  FinalSelection selection;  // valid only when selected
  std::string error;         // reason when !selected
  std::string dir;           // per-seed output directory
};

// Fits the trajectory once per split seed (seed, seed+1, ...).  Each run
// writes grid.csv, final.csv, summary.txt, and optional trace files into its
// directory (out_dir itself for a single seed, out_dir/seed<k> otherwise);
// multi-seed runs also write out_dir/seeds_summary.csv.  A seed whose grid
// has no record under the E3 cap is reported in its outcome, not thrown.
std::vector<SeedOutcome> run_fit(const RunConfig& cfg, const Trajectory& traj);

struct PipelineResult {
  SimulateResult sim;
  std::vector<SeedOutcome> fits;
};

PipelineResult run_pipeline(const RunConfig& cfg);

}  // namespace omsid
