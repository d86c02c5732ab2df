#pragma once

#include "omsid/design.hpp"
#include "omsid/recover.hpp"
#include "omsid/solve.hpp"

#include <stdexcept>
#include <vector>

namespace omsid {

struct HyperParams {
  double theta_t0 = 0.05;  // initial hard threshold
  double h0 = 0.05;        // initial threshold step
  double eps1 = 1e-6;      // inner-loop L1 convergence tolerance
  double eps2 = 1e-4;      // outer loop stops once the step falls below this
  int inner_cap = 50;
  int outer_cap = 30;
};

struct ErrorBundle {
  double e1 = 0.0;  // |theta_test b - zdd_test|^2
  double e2 = 0.0;  // |b - G(beta, eps)|^2
  double e3 = 0.0;  // |theta_test G(beta, eps) - zdd_test|^2
  int e4 = 0;       // |beta|_0
  int e5 = 0;       // |b|_0
  double e6 = 0.0;  // e1 + k1 e2 + k2 e5
};

struct FitState {
  ElCoeffs b = ElCoeffs::Zero();
  DriftCoeffs beta = DriftCoeffs::Zero();
  double epsilon = 0.0;
};

struct CandidateRecord {
  DriftCoeffs beta = DriftCoeffs::Zero();
  double epsilon = 0.0;
  ElCoeffs b = ElCoeffs::Zero();
  ErrorBundle errors;
  double theta_t = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
};

// Thrown by select_final when no grid record clears the E3 cap.
class SelectError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

ErrorBundle error_bundle(const ElCoeffs& b, const DriftCoeffs& beta,
                         double epsilon, const Eigen::MatrixXd& theta_test,
                         const Eigen::VectorXd& zdd_test, double k1,
                         double k2);

// Dense least-squares fit plus its algebraic inversion; every threshold
// search on the same design restarts from this state.
struct InitialFit {
  ElCoeffs b = ElCoeffs::Zero();
  DriftCoeffs beta = DriftCoeffs::Zero();
  double epsilon = 0.0;
};
InitialFit initial_fit(const DesignSystem& design);
CandidateRecord initial_record(const DesignSystem& design,
                               const InitialFit& fit, double k1, double k2);

struct InnerResult {
  FitState state;
  int iterations = 0;
};

// Alternating regression at a fixed threshold: restrict the ridge step to
// the support of G(beta, eps), re-invert, hard-threshold, re-invert with the
// surviving support pinned, and repeat until the drift estimate stops moving
// (L1 change < eps1) or inner_cap rounds pass.  If trace is non-null it
// receives the state after every round.
InnerResult inner_fixed_point(const DesignSystem& design,
                              const FitState& start, double k1, double k2,
                              double theta_t, const HyperParams& hp,
                              std::vector<FitState>* trace = nullptr);

// One move of the adaptive threshold walk: raise theta_t by h after an
// improvement; otherwise back out two steps (clamped at zero), halve h, and
// retry half a step up.
struct ThresholdStep {
  double theta_t = 0.0;
  double h = 0.0;
};
ThresholdStep threshold_step(const ThresholdStep& s, bool improved);

struct CellSearchResult {
  std::vector<CandidateRecord> ebest;  // strictly improving E6, init first
  std::vector<CandidateRecord> trace;  // every evaluated threshold
};

// Adaptive threshold search at fixed (k1, k2), starting every inner run from
// the initial dense fit.  Candidates enter ebest only when they strictly
// lower E6.
CellSearchResult threshold_search(const DesignSystem& design,
                                  const CandidateRecord& init, double k1,
                                  double k2, const HyperParams& hp);

// Smallest E3 wins; ties keep the earlier entry.
CandidateRecord select_for_cell(const std::vector<CandidateRecord>& ebest);

// Runs threshold_search over every (k1, k2) cell and keeps each cell's
// best-E3 record, in grid order.  Cells run on `jobs` worker threads
// (jobs <= 0 picks the hardware count); results do not depend on the
// schedule.  A cell that throws yields a sentinel record with infinite
// errors instead of aborting the sweep.
std::vector<CandidateRecord> grid_search(
    const DesignSystem& design,
    const std::vector<std::pair<double, double>>& cells,
    const HyperParams& hp, int jobs = 0);

struct FinalSelection {
  CandidateRecord record;
  int group_e4 = 0;
  int group_e5 = 0;
  int group_size = 0;
  bool concentrated = false;
};

// Final model choice across the grid: drop records with E3 >= e3_cap, group
// the survivors by the sparsity pattern (E4, E5), and take the largest group
// whose surviving drift coefficients agree to within 5% relative spread;
// inside it the record with the smallest E1 + E3 wins.  If no group is that
// concentrated, the largest group is used and the result is flagged.
// Throws SelectError when the cap filters everything out.
FinalSelection select_final(const std::vector<CandidateRecord>& records,
                            double e3_cap);

}  // namespace omsid
