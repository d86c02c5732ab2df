#include "omsid/app.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace omsid {
namespace {

namespace fs = std::filesystem;

double snap12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return parse_double(buf);
}

std::vector<double> parse_range(const std::string& spec) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream ss(spec);
  while (std::getline(ss, cur, ':')) parts.push_back(cur);
  if (parts.size() != 3) {
    throw std::invalid_argument("grid range must be min:step:max, got '" +
                                spec + "'");
  }
  const double lo = parse_double(parts[0]);
  const double step = parse_double(parts[1]);
  const double hi = parse_double(parts[2]);

  std::vector<double> vals;
  if (step <= 0.0) {
    if (lo != hi) {
      throw std::invalid_argument("grid range with zero step: '" + spec +
                                  "'");
    }
    vals.push_back(snap12(lo));
    return vals;
  }
  for (int i = 0;; ++i) {
    const double v = lo + i * step;
    if (v > hi + 0.5 * step) break;
    vals.push_back(snap12(v));
  }
  return vals;
}

std::string cell_tag(double k1, double k2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g_%g", k1, k2);
  return buf;
}

std::string pretty(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void write_summary(const std::string& path, const FinalSelection& sel,
                   const DesignSystem& design) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  const CandidateRecord& r = sel.record;
  out << "drift: f(x) = " << drift_to_string(r.beta) << '\n';
  out << "epsilon: " << pretty(r.epsilon) << '\n';
  out << "support: " << support_to_string(r.beta) << '\n';
  out << "k1: " << pretty(r.k1) << "  k2: " << pretty(r.k2)
      << "  theta_t: " << pretty(r.theta_t) << '\n';
  out << "E1: " << pretty(r.errors.e1) << "  E2: " << pretty(r.errors.e2)
      << "  E3: " << pretty(r.errors.e3) << "  E4: " << r.errors.e4
      << "  E5: " << r.errors.e5 << "  E6: " << pretty(r.errors.e6) << '\n';
  out << "pattern group: E4=" << sel.group_e4 << " E5=" << sel.group_e5
      << " size=" << sel.group_size
      << (sel.concentrated ? "" : " (spread above 5%, largest group used)")
      << '\n';
  out << "split seed: " << design.split.seed << '\n';
  out << "train/test rows: " << design.split.train.size() << '/'
      << design.split.test.size() << '\n';
}

}  // namespace

void apply_case(RunConfig& cfg, const std::string& name) {
  cfg.beta = DriftCoeffs::Zero();
  if (name == "I") {
    cfg.beta[1] = 0.5;
    cfg.beta[3] = -1.2;
    cfg.beta[6] = 1.0;
  } else if (name == "II") {
    cfg.beta[1] = 0.5;
    cfg.beta[3] = -1.2;
  } else if (name == "III") {
    cfg.beta[7] = 1.0;
  } else {
    throw std::invalid_argument("unknown case '" + name +
                                "' (expected I, II, or III)");
  }
  cfg.eps = 0.8;
}

std::vector<std::pair<double, double>> parse_grid_spec(
    const std::string& spec) {
  const auto comma = spec.find(',');
  if (comma == std::string::npos) {
    throw std::invalid_argument(
        "grid spec must be k1min:k1step:k1max,k2min:k2step:k2max");
  }
  const auto k1s = parse_range(spec.substr(0, comma));
  const auto k2s = parse_range(spec.substr(comma + 1));

  std::vector<std::pair<double, double>> cells;
  cells.reserve(k1s.size() * k2s.size());
  for (double k1 : k1s) {
    for (double k2 : k2s) cells.emplace_back(k1, k2);
  }
  return cells;
}

std::vector<std::pair<double, double>> default_grid() {
  return parse_grid_spec("0:0.025:0.4,0.01:0.01:0.3");
}

std::string drift_to_string(const DriftCoeffs& beta) {
  std::string s;
  for (int i = 0; i < kDriftDim; ++i) {
    if (beta[i] == 0.0) continue;
    const double v = beta[i];
    if (s.empty()) {
      s += pretty(v);
    } else {
      s += v < 0.0 ? " - " : " + ";
      s += pretty(std::abs(v));
    }
    if (i > 0) {
      s += "*";
      s += kDriftLabels[i];
    }
  }
  return s.empty() ? "0" : s;
}

std::string support_to_string(const DriftCoeffs& beta) {
  std::string s;
  for (int i = 0; i < kDriftDim; ++i) {
    if (beta[i] == 0.0) continue;
    if (!s.empty()) s += ", ";
    s += kDriftLabels[i];
  }
  return s.empty() ? "(empty)" : s;
}

SimulateResult run_simulate(const RunConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  SimulateResult res;
  res.traj = shoot(cfg.beta, cfg.eps, {cfg.x0, cfg.xT}, cfg.T, cfg.dt);
  res.residual = std::abs(res.traj.z.back() - cfg.xT);
  res.path = (fs::path(cfg.out_dir) / "trajectory.csv").string();
  write_trajectory_csv(res.path, res.traj);
  return res;
}

std::vector<SeedOutcome> run_fit(const RunConfig& cfg,
                                 const Trajectory& traj) {
  if (cfg.n_seeds < 1) {
    throw std::invalid_argument("run_fit: need at least one seed");
  }
  const auto cells = cfg.grid.empty() ? default_grid() : cfg.grid;

  std::vector<SeedOutcome> outcomes;
  std::vector<CandidateRecord> summary_rows;
  std::vector<std::uint64_t> summary_seeds;

  for (int k = 0; k < cfg.n_seeds; ++k) {
    SeedOutcome oc;
    oc.seed = cfg.seed + static_cast<std::uint64_t>(k);
    const fs::path dir =
        cfg.n_seeds == 1 ? fs::path(cfg.out_dir)
                         : fs::path(cfg.out_dir) /
                               ("seed" + std::to_string(oc.seed));
    fs::create_directories(dir);
    oc.dir = dir.string();

    const DesignSystem design = build_design(traj, cfg.frac_train, oc.seed);
    if (cfg.dump_design) {
      write_design_csv((dir / "design.csv").string(), design);
    }

    const auto table = grid_search(design, cells, cfg.hp, cfg.jobs);
    write_records_csv((dir / "grid.csv").string(), table);

    const bool trace_all =
        cfg.traces == TraceMode::kAll ||
        (cfg.traces == TraceMode::kAuto && cells.size() <= 4);
    if (trace_all) {
      const InitialFit fit = initial_fit(design);
      for (size_t i = 0; i < cells.size(); ++i) {
        const auto [k1, k2] = cells[i];
        const CandidateRecord init = initial_record(design, fit, k1, k2);
        const CellSearchResult sr =
            threshold_search(design, init, k1, k2, cfg.hp);

        std::vector<CandidateRecord> rows;
        rows.push_back(init);
        rows.insert(rows.end(), sr.trace.begin(), sr.trace.end());
        write_trace_csv(
            (dir / ("trace_" + cell_tag(k1, k2) + ".csv")).string(), rows);

        // Inner-loop evolution at the threshold this cell settled on.
        const CandidateRecord cell_best = select_for_cell(sr.ebest);
        std::vector<FitState> states;
        inner_fixed_point(design, {init.b, init.beta, init.epsilon}, k1, k2,
                          cell_best.theta_t, cfg.hp, &states);
        std::vector<CandidateRecord> inner_rows;
        inner_rows.push_back(init);
        for (const FitState& st : states) {
          CandidateRecord rec;
          rec.beta = st.beta;
          rec.epsilon = st.epsilon;
          rec.b = st.b;
          rec.errors = error_bundle(st.b, st.beta, st.epsilon,
                                    design.theta_test, design.zdd_test, k1,
                                    k2);
          rec.theta_t = cell_best.theta_t;
          rec.k1 = k1;
          rec.k2 = k2;
          inner_rows.push_back(rec);
        }
        write_trace_csv(
            (dir / ("inner_" + cell_tag(k1, k2) + ".csv")).string(),
            inner_rows);
      }
    }

    try {
      oc.selection = select_final(table, cfg.e3_cap);
      oc.selected = true;
      write_records_csv((dir / "final.csv").string(), {oc.selection.record});
      write_summary((dir / "summary.txt").string(), oc.selection, design);
      summary_rows.push_back(oc.selection.record);
      summary_seeds.push_back(oc.seed);
    } catch (const SelectError& err) {
      oc.error = err.what();
    }
    outcomes.push_back(std::move(oc));
  }

  if (cfg.n_seeds > 1 && !summary_rows.empty()) {
    // Same schema as grid.csv plus a seed column.
    const fs::path p = fs::path(cfg.out_dir) / "seeds_summary.csv";
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << "seed," << kRecordHeader << '\n';
    for (size_t i = 0; i < summary_rows.size(); ++i) {
      out << summary_seeds[i] << ',';
      write_record_row(out, summary_rows[i]);
    }
  }
  return outcomes;
}

PipelineResult run_pipeline(const RunConfig& cfg) {
  PipelineResult res;
  res.sim = run_simulate(cfg);
  res.fits = run_fit(cfg, res.sim.traj);
  return res;
}

}  // namespace omsid
