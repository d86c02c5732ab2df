#include "omsid/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

namespace omsid {

ErrorBundle error_bundle(const ElCoeffs& b, const DriftCoeffs& beta,
                         double epsilon, const Eigen::MatrixXd& theta_test,
                         const Eigen::VectorXd& zdd_test, double k1,
                         double k2) {
  const ElCoeffs g = structure_map(beta, epsilon);

  ErrorBundle e;
  e.e1 = (theta_test * b - zdd_test).squaredNorm();
  e.e2 = (b - g).squaredNorm();
  e.e3 = (theta_test * g - zdd_test).squaredNorm();
  for (int i = 0; i < kDriftDim; ++i) e.e4 += beta[i] != 0.0;
  for (int i = 0; i < kElDim; ++i) e.e5 += b[i] != 0.0;
  e.e6 = e.e1 + k1 * e.e2 + k2 * e.e5;
  return e;
}

InitialFit initial_fit(const DesignSystem& design) {
  InitialFit fit;
  fit.b = initial_ls(design.theta_train, design.zdd_train);
  const RecoveredModel m = findbeta1(fit.b);
  fit.beta = m.beta;
  fit.epsilon = m.epsilon;
  return fit;
}

CandidateRecord initial_record(const DesignSystem& design,
                               const InitialFit& fit, double k1, double k2) {
  CandidateRecord rec;
  rec.beta = fit.beta;
  rec.epsilon = fit.epsilon;
  rec.b = fit.b;
  rec.errors = error_bundle(fit.b, fit.beta, fit.epsilon, design.theta_test,
                            design.zdd_test, k1, k2);
  rec.theta_t = 0.0;
  rec.k1 = k1;
  rec.k2 = k2;
  return rec;
}

InnerResult inner_fixed_point(const DesignSystem& design,
                              const FitState& start, double k1, double k2,
                              double theta_t, const HyperParams& hp,
                              std::vector<FitState>* trace) {
  FitState cur = start;
  ElCoeffs gb = structure_map(cur.beta, cur.epsilon);
  DriftCoeffs prev_beta = start.beta;

  int done = 0;
  for (int it = 1; it <= hp.inner_cap; ++it) {
    const SupportMask support = SupportMask::from_nonzeros(gb);
    cur.b = ridge_update_gram(design.gram, design.gram_rhs, gb, support, k1,
                              k2);
    const RecoveredModel free_fit = findbeta1(cur.b);
    const DriftCoeffs kept = hard_threshold(free_fit.beta, theta_t);
    const RecoveredModel pinned_fit = findbeta0(cur.b, kept);
    cur.beta = pinned_fit.beta;
    cur.epsilon = pinned_fit.epsilon;
    gb = structure_map(cur.beta, cur.epsilon);

    if (trace) trace->push_back(cur);
    done = it;
    if ((cur.beta - prev_beta).lpNorm<1>() < hp.eps1) break;
    prev_beta = cur.beta;
  }
  return {cur, done};
}

ThresholdStep threshold_step(const ThresholdStep& s, bool improved) {
  ThresholdStep out = s;
  if (improved) {
    out.theta_t += out.h;
  } else {
    out.theta_t = std::max(0.0, out.theta_t - 2.0 * out.h);
    out.h *= 0.5;
    out.theta_t += out.h;
  }
  return out;
}

CellSearchResult threshold_search(const DesignSystem& design,
                                  const CandidateRecord& init, double k1,
                                  double k2, const HyperParams& hp) {
  CellSearchResult res;
  res.ebest.push_back(init);

  const FitState start{init.b, init.beta, init.epsilon};
  double best_e6 = init.errors.e6;
  ThresholdStep step{hp.theta_t0, hp.h0};

  for (int t = 0; t < hp.outer_cap && step.h >= hp.eps2; ++t) {
    const InnerResult inner =
        inner_fixed_point(design, start, k1, k2, step.theta_t, hp);
    CandidateRecord rec;
    rec.beta = inner.state.beta;
    rec.epsilon = inner.state.epsilon;
    rec.b = inner.state.b;
    rec.errors = error_bundle(rec.b, rec.beta, rec.epsilon, design.theta_test,
                              design.zdd_test, k1, k2);
    rec.theta_t = step.theta_t;
    rec.k1 = k1;
    rec.k2 = k2;
    res.trace.push_back(rec);

    const bool improved = rec.errors.e6 < best_e6;
    if (improved) {
      best_e6 = rec.errors.e6;
      res.ebest.push_back(rec);
    }
    step = threshold_step(step, improved);
  }
  return res;
}

CandidateRecord select_for_cell(const std::vector<CandidateRecord>& ebest) {
  if (ebest.empty()) {
    throw std::invalid_argument("select_for_cell: empty candidate list");
  }
  const CandidateRecord* best = &ebest.front();
  for (const CandidateRecord& rec : ebest) {
    if (rec.errors.e3 < best->errors.e3) best = &rec;
  }
  return *best;
}

std::vector<CandidateRecord> grid_search(
    const DesignSystem& design,
    const std::vector<std::pair<double, double>>& cells,
    const HyperParams& hp, int jobs) {
  const InitialFit fit = initial_fit(design);
  std::vector<CandidateRecord> results(cells.size());

  const auto run_cell = [&](size_t i) {
    const auto [k1, k2] = cells[i];
    try {
      const CandidateRecord init = initial_record(design, fit, k1, k2);
      const CellSearchResult sr = threshold_search(design, init, k1, k2, hp);
      results[i] = select_for_cell(sr.ebest);
    } catch (const std::exception&) {
      CandidateRecord bad;
      bad.epsilon = kSentinel;
      constexpr double inf = std::numeric_limits<double>::infinity();
      bad.errors = {inf, inf, inf, 0, 0, inf};
      bad.k1 = k1;
      bad.k2 = k2;
      results[i] = bad;
    }
  };

  int n_jobs = jobs > 0 ? jobs
                        : static_cast<int>(std::thread::hardware_concurrency());
  n_jobs = std::max(1, std::min<int>(n_jobs, static_cast<int>(cells.size())));

  if (n_jobs == 1) {
    for (size_t i = 0; i < cells.size(); ++i) run_cell(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_jobs);
    for (int w = 0; w < n_jobs; ++w) {
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < cells.size();
             i = next.fetch_add(1)) {
          run_cell(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  return results;
}

FinalSelection select_final(const std::vector<CandidateRecord>& records,
                            double e3_cap) {
  std::vector<const CandidateRecord*> kept;
  for (const CandidateRecord& rec : records) {
    if (rec.errors.e3 < e3_cap) kept.push_back(&rec);
  }
  if (kept.empty()) {
    throw SelectError("select_final: no record has E3 below the cap");
  }

  std::map<std::pair<int, int>, std::vector<const CandidateRecord*>> groups;
  for (const CandidateRecord* rec : kept) {
    groups[{rec->errors.e4, rec->errors.e5}].push_back(rec);
  }

  // Largest group first; sparser pattern breaks size ties.
  std::vector<const std::vector<const CandidateRecord*>*> ordered;
  std::vector<std::pair<int, int>> keys;
  for (const auto& [key, group] : groups) {
    ordered.push_back(&group);
    keys.push_back(key);
  }
  std::vector<size_t> order(ordered.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (ordered[a]->size() != ordered[b]->size()) {
      return ordered[a]->size() > ordered[b]->size();
    }
    return keys[a] < keys[b];
  });

  const auto concentrated = [](const std::vector<const CandidateRecord*>& g) {
    for (int i = 0; i < kDriftDim; ++i) {
      double mean = 0.0;
      bool any = false;
      for (const CandidateRecord* rec : g) {
        mean += rec->beta[i];
        any = any || rec->beta[i] != 0.0;
      }
      if (!any) continue;
      mean /= static_cast<double>(g.size());
      double var = 0.0;
      for (const CandidateRecord* rec : g) {
        const double d = rec->beta[i] - mean;
        var += d * d;
      }
      const double sd = std::sqrt(var / static_cast<double>(g.size()));
      if (!(sd < 0.05 * std::abs(mean))) return false;
    }
    return true;
  };

  size_t chosen = order.front();
  bool found = false;
  for (size_t i : order) {
    if (concentrated(*ordered[i])) {
      chosen = i;
      found = true;
      break;
    }
  }

  const auto& group = *ordered[chosen];
  const CandidateRecord* best = group.front();
  for (const CandidateRecord* rec : group) {
    if (rec->errors.e1 + rec->errors.e3 < best->errors.e1 + best->errors.e3) {
      best = rec;
    }
  }

  FinalSelection sel;
  sel.record = *best;
  sel.group_e4 = keys[chosen].first;
  sel.group_e5 = keys[chosen].second;
  sel.group_size = static_cast<int>(group.size());
  sel.concentrated = found;
  return sel;
}

}  // namespace omsid
