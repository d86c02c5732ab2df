#include "omsid/app.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

namespace {

struct ModelFlags {
  std::string case_name;
  std::vector<double> beta;
  double eps = 0.8;
  bool eps_given = false;
};

void add_model_options(CLI::App* cmd, omsid::RunConfig& cfg, ModelFlags& m) {
  auto* c = cmd->add_option("--case", m.case_name,
                            "Named drift preset: I, II, or III");
  auto* b = cmd->add_option("--beta", m.beta,
                            "Drift coefficients beta0..beta9, comma separated")
                ->delimiter(',')
                ->expected(1, 10);
  auto* e =
      cmd->add_option("--eps", m.eps, "Diffusion coefficient (default 0.8)");
  c->excludes(b);
  c->excludes(e);
  cmd->add_option("--x0", cfg.x0, "Left boundary value (default 0)");
  cmd->add_option("--xT", cfg.xT, "Right boundary value (default sqrt(2))");
  cmd->add_option("--T", cfg.T, "Horizon (default 1)");
  cmd->add_option("--dt", cfg.dt, "Sample spacing (default 1e-3)");
}

void resolve_model(omsid::RunConfig& cfg, const ModelFlags& m,
                   const CLI::App* cmd) {
  if (!m.case_name.empty()) {
    omsid::apply_case(cfg, m.case_name);
    return;
  }
  if (!m.beta.empty()) {
    if (m.beta.size() != omsid::kDriftDim) {
      throw CLI::ValidationError("--beta needs exactly 10 values");
    }
    for (int i = 0; i < omsid::kDriftDim; ++i) cfg.beta[i] = m.beta[i];
  }
  if (cmd->count("--eps") > 0) cfg.eps = m.eps;
  if (m.beta.empty() && cmd->count("--eps") == 0) {
    throw CLI::ValidationError(
        "specify a model with --case or --beta/--eps");
  }
}

void add_fit_options(CLI::App* cmd, omsid::RunConfig& cfg,
                     std::string& grid_spec, std::string& traces) {
  cmd->add_option("--seed", cfg.seed, "Train/test split seed (default 1)")
      ->envname("OMD_SEED");
  cmd->add_option("--seeds", cfg.n_seeds,
                  "Fit this many consecutive split seeds (default 1)");
  cmd->add_option("--frac-train", cfg.frac_train,
                  "Training row fraction (default 0.7)");
  cmd->add_option(
      "--grid", grid_spec,
      "Penalty grid k1min:k1step:k1max,k2min:k2step:k2max "
      "(default 0:0.025:0.4,0.01:0.01:0.3)");
  cmd->add_option("--theta0", cfg.hp.theta_t0,
                  "Initial hard threshold (default 0.05)");
  cmd->add_option("--h0", cfg.hp.h0,
                  "Initial threshold step (default 0.05)");
  cmd->add_option("--eps1", cfg.hp.eps1,
                  "Inner-loop convergence tolerance (default 1e-6)");
  cmd->add_option("--eps2", cfg.hp.eps2,
                  "Threshold-walk stopping step (default 1e-4)");
  cmd->add_option("--inner-cap", cfg.hp.inner_cap,
                  "Inner iteration cap (default 50)");
  cmd->add_option("--outer-cap", cfg.hp.outer_cap,
                  "Threshold-walk iteration cap (default 30)");
  cmd->add_option("--e3cap", cfg.e3_cap,
                  "E3 cap for final selection (default 1.0)");
  cmd->add_option("--jobs", cfg.jobs,
                  "Worker threads for the grid (default: hardware)");
  cmd->add_option("--traces", traces,
                  "Per-cell search traces: auto, all, or none")
      ->check(CLI::IsMember({"auto", "all", "none"}));
  cmd->add_flag("--dump-design", cfg.dump_design,
                "Also write the regression system as design.csv");
}

omsid::TraceMode trace_mode(const std::string& s) {
  if (s == "all") return omsid::TraceMode::kAll;
  if (s == "none") return omsid::TraceMode::kNone;
  return omsid::TraceMode::kAuto;
}

int report_fits(const std::vector<omsid::SeedOutcome>& outcomes) {
  bool all_selected = true;
  for (const omsid::SeedOutcome& oc : outcomes) {
    if (oc.selected) {
      const omsid::CandidateRecord& r = oc.selection.record;
      std::cout << "seed " << oc.seed << ": f(x) = "
                << omsid::drift_to_string(r.beta)
                << "   epsilon = " << r.epsilon << '\n'
                << "seed " << oc.seed << ": support {"
                << omsid::support_to_string(r.beta) << "}, k1 = " << r.k1
                << ", k2 = " << r.k2 << ", theta_t = " << r.theta_t
                << ", E1 = " << r.errors.e1 << ", E3 = " << r.errors.e3
                << '\n';
    } else {
      all_selected = false;
      std::cout << "seed " << oc.seed << ": no model selected (" << oc.error
                << ")\n";
    }
  }
  if (outcomes.size() > 1) {
    bool stable = true;
    for (const omsid::SeedOutcome& oc : outcomes) {
      stable = stable && oc.selected;
    }
    if (stable) {
      for (size_t i = 1; i < outcomes.size(); ++i) {
        for (int j = 0; j < omsid::kDriftDim; ++j) {
          stable = stable && ((outcomes[i].selection.record.beta[j] != 0.0) ==
                              (outcomes[0].selection.record.beta[j] != 0.0));
        }
      }
    }
    std::cout << "support stable across seeds: " << (stable ? "yes" : "no")
              << '\n';
  }
  return all_selected ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Drift and diffusion identification from most-probable-path data"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "INI-style config file ([subcommand] sections, flags win)");

  omsid::RunConfig cfg;
  ModelFlags model;
  std::string grid_spec;
  std::string traces = "auto";
  std::string traj_path;

  CLI::App* sim = app.add_subcommand(
      "simulate", "Solve the boundary value problem and write the path");
  add_model_options(sim, cfg, model);
  sim->add_option("--out", cfg.out_dir, "Output directory (default out)");

  CLI::App* fit = app.add_subcommand(
      "fit", "Recover drift and diffusion from a trajectory file");
  fit->add_option("trajectory", traj_path, "Input trajectory CSV")
      ->required()
      ->check(CLI::ExistingFile);
  add_fit_options(fit, cfg, grid_spec, traces);
  fit->add_option("--out", cfg.out_dir, "Output directory (default out)");

  CLI::App* pipe = app.add_subcommand(
      "pipeline", "Simulate a named or explicit model, then fit it");
  add_model_options(pipe, cfg, model);
  add_fit_options(pipe, cfg, grid_spec, traces);
  pipe->add_option("--out", cfg.out_dir, "Output directory (default out)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!grid_spec.empty()) cfg.grid = omsid::parse_grid_spec(grid_spec);
    cfg.traces = trace_mode(traces);

    if (sim->parsed()) {
      resolve_model(cfg, model, sim);
      const omsid::SimulateResult res = omsid::run_simulate(cfg);
      std::cout << "wrote " << res.path << " (" << res.traj.z.size()
                << " samples), boundary residual " << res.residual << '\n';
      return 0;
    }
    if (fit->parsed()) {
      const omsid::Trajectory traj = omsid::read_trajectory_csv(traj_path);
      return report_fits(omsid::run_fit(cfg, traj));
    }
    resolve_model(cfg, model, pipe);
    const omsid::PipelineResult res = omsid::run_pipeline(cfg);
    std::cout << "wrote " << res.sim.path << ", boundary residual "
              << res.sim.residual << '\n';
    return report_fits(res.fits);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
