#pragma once

#include "omsid/model.hpp"

#include <array>

namespace omsid {

struct SupportMask {
  std::array<bool, kElDim> on{};

  static SupportMask from_nonzeros(const ElCoeffs& v) {
    SupportMask m;
    for (int i = 0; i < kElDim; ++i) m.on[i] = v[i] != 0.0;
    return m;
  }
  static SupportMask all() {
    SupportMask m;
    m.on.fill(true);
    return m;
  }
  int count() const {
    int c = 0;
    for (bool b : on) c += b;
    return c;
  }
};

// Minimum-norm least-squares solution of theta * b ~ zdd via SVD; singular
// values below 1e-10 * sigma_max are treated as zero.  The expansion basis
// is heavily collinear on short trajectories, so rank deficiency is the
// normal case, not an error.
ElCoeffs initial_ls(const Eigen::MatrixXd& theta, const Eigen::VectorXd& zdd);

// Support-restricted ridge step: off-support entries are exactly zero and the
// on-support block u minimizes
//   |zdd - theta_S u|^2 + k1 |u - gb_S|^2 + k2 |u|^2,
// solved in closed form from (theta_S' theta_S + (k1+k2) I) u =
// theta_S' zdd + k1 gb_S.  With k1 = k2 = 0 this falls back to the
// minimum-norm least-squares solution on the support.
ElCoeffs ridge_update(const Eigen::MatrixXd& theta, const Eigen::VectorXd& zdd,
                      const ElCoeffs& gb, const SupportMask& support,
                      double k1, double k2);

// Same update from precomputed normal equations (gram = theta' theta,
// gram_rhs = theta' zdd); this is the hot path inside the threshold search.
ElCoeffs ridge_update_gram(const Eigen::MatrixXd& gram,
                           const Eigen::VectorXd& gram_rhs, const ElCoeffs& gb,
                           const SupportMask& support, double k1, double k2);

}  // namespace omsid
