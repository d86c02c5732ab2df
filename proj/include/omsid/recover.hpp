#pragma once

#include "omsid/model.hpp"

namespace omsid {

// Marker written into beta[0] / epsilon when the expansion coefficients carry
// no information about them (e.g. a purely linear drift leaves eps
// unidentifiable).  The companion flags distinguish the marker from a real
// estimate of the same value.
inline constexpr double kSentinel = 10.0;

struct RecoveredModel {
  DriftCoeffs beta = DriftCoeffs::Zero();
  double epsilon = 0.0;
  bool beta0_sentinel = false;
  bool epsilon_sentinel = false;
};

// Inverts the structure map algebraically.  The polynomial part is resolved
// by a cascade keyed on the highest-degree square coefficient (b9 = 5 b5^2,
// then b7 = 4 b4^2, ...), each branch back-substituting the lower
// coefficients and closing with a small least-squares solve for (eps^2, b0).
// The trigonometric part is resolved either by a 20x4 least-squares system
// (when a polynomial coefficient of degree >= 1 survives) or by its own
// quadratic cascade.  A negative eps^2 estimate flips the sign of the
// coefficient chain, which restores the representative with eps^2 > 0 of the
// inherent (beta, eps^2) -> (-beta, -eps^2) degeneracy.  No guards are
// applied to tiny-but-nonzero cascade heads; cleaning those up is the outer
// thresholding loop's job.
RecoveredModel findbeta1(const ElCoeffs& b);

// Same cascade, with every index whose prior entry is exactly zero pinned to
// zero: pinned indices are skipped as cascade heads and their columns are
// dropped from the least-squares solves.
RecoveredModel findbeta0(const ElCoeffs& b, const DriftCoeffs& prior);

// Entries with |beta_i| < theta_t are set to exactly zero.
DriftCoeffs hard_threshold(const DriftCoeffs& beta, double theta_t);

}  // namespace omsid
