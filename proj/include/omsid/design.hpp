#pragma once

#include "omsid/model.hpp"
#include "omsid/simulate.hpp"

#include <cstdint>
#include <vector>

namespace omsid {

// Disjoint row index sets covering 0..N, each sorted ascending.
struct SplitIndices {
  std::vector<int> train;
  std::vector<int> test;
  std::uint64_t seed = 0;
};

// Regression system theta * b ~ zdd over the EL expansion basis, one row per
// trajectory sample.  The *_train/*_test blocks and the train-side normal
// equations (gram = theta_train' theta_train, gram_rhs = theta_train' zdd)
// are materialized once here because the search loops reuse them heavily.
struct DesignSystem {
  Eigen::MatrixXd theta;
  Eigen::VectorXd zdd;
  SplitIndices split;

  Eigen::MatrixXd theta_train;
  Eigen::MatrixXd theta_test;
  Eigen::VectorXd zdd_train;
  Eigen::VectorXd zdd_test;
  Eigen::MatrixXd gram;
  Eigen::VectorXd gram_rhs;
};

// Second time derivative of the samples by central differencing; the two
// boundary rows use the one-sided second-order stencil
// (2 z0 - 5 z1 + 4 z2 - z3) / dt^2 and its mirror.  Needs >= 4 samples.
Eigen::VectorXd second_diff(const Trajectory& traj);

// Row of the 38 expansion basis functions at z (see kElLabels for order).
ElCoeffs feature_row(double z);

// Assembles theta/zdd from the trajectory and splits rows into train/test by
// a seeded Fisher-Yates shuffle; round(frac_train * (N+1)) rows train.
// The shuffle is a fixed in-house implementation so splits are reproducible
// across platforms for the same seed.
DesignSystem build_design(const Trajectory& traj, double frac_train,
                          std::uint64_t seed);

}  // namespace omsid
