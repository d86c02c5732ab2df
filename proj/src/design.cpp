#include "omsid/design.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace omsid {

Eigen::VectorXd second_diff(const Trajectory& traj) {
  const auto& z = traj.z;
  const int n = static_cast<int>(z.size());
  if (n < 4) {
    throw std::invalid_argument("second_diff: need at least 4 samples");
  }
  const double inv = 1.0 / (traj.dt * traj.dt);

  Eigen::VectorXd zdd(n);
  zdd[0] = (2.0 * z[0] - 5.0 * z[1] + 4.0 * z[2] - z[3]) * inv;
  for (int i = 1; i < n - 1; ++i) {
    zdd[i] = (z[i + 1] - 2.0 * z[i] + z[i - 1]) * inv;
  }
  zdd[n - 1] = (2.0 * z[n - 1] - 5.0 * z[n - 2] + 4.0 * z[n - 3] - z[n - 4]) *
               inv;
  return zdd;
}

ElCoeffs feature_row(double z) {
  ElCoeffs row;
  row[0] = 1.0;
  for (int k = 1; k <= 9; ++k) row[k] = row[k - 1] * z;

  const double trig[4] = {std::sin(z), std::cos(z), std::sin(2.0 * z),
                          std::cos(2.0 * z)};
  row[10] = trig[0];
  row[11] = trig[1];
  row[12] = trig[2];
  row[13] = trig[3];
  row[14] = std::sin(3.0 * z);
  row[15] = std::cos(3.0 * z);
  row[16] = std::sin(4.0 * z);
  row[17] = std::cos(4.0 * z);

  for (int k = 1; k <= 5; ++k) {
    const double zk = row[k];  // z^k
    const int base = 18 + 4 * (k - 1);
    for (int j = 0; j < 4; ++j) row[base + j] = zk * trig[j];
  }
  return row;
}

DesignSystem build_design(const Trajectory& traj, double frac_train,
                          std::uint64_t seed) {
  if (!(frac_train > 0.0) || !(frac_train < 1.0)) {
    throw std::invalid_argument("build_design: frac_train must be in (0,1)");
  }
  const int rows = static_cast<int>(traj.z.size());
  if (rows < 4) {
    throw std::invalid_argument("build_design: need at least 4 samples");
  }

  DesignSystem d;
  d.zdd = second_diff(traj);
  d.theta.resize(rows, kElDim);
  for (int i = 0; i < rows; ++i) {
    d.theta.row(i) = feature_row(traj.z[i]).transpose();
  }

  const int n_train = static_cast<int>(std::llround(frac_train * rows));
  if (n_train < 1 || n_train >= rows) {
    throw std::invalid_argument("build_design: degenerate split");
  }

  // Fisher-Yates with explicit modulo draws: std::shuffle's permutation is
  // implementation-defined, and the split must be stable across toolchains.
  std::vector<int> perm(rows);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 gen(seed);
  for (int i = rows - 1; i > 0; --i) {
    const int j = static_cast<int>(gen() % static_cast<std::uint64_t>(i + 1));
    std::swap(perm[i], perm[j]);
  }

  d.split.seed = seed;
  d.split.train.assign(perm.begin(), perm.begin() + n_train);
  d.split.test.assign(perm.begin() + n_train, perm.end());
  std::sort(d.split.train.begin(), d.split.train.end());
  std::sort(d.split.test.begin(), d.split.test.end());

  const auto take = [&](const std::vector<int>& idx, Eigen::MatrixXd& th,
                        Eigen::VectorXd& y) {
    th.resize(static_cast<int>(idx.size()), kElDim);
    y.resize(static_cast<int>(idx.size()));
    for (int i = 0; i < static_cast<int>(idx.size()); ++i) {
      th.row(i) = d.theta.row(idx[i]);
      y[i] = d.zdd[idx[i]];
    }
  };
  take(d.split.train, d.theta_train, d.zdd_train);
  take(d.split.test, d.theta_test, d.zdd_test);

  d.gram = d.theta_train.transpose() * d.theta_train;
  d.gram_rhs = d.theta_train.transpose() * d.zdd_train;
  return d;
}

}  // namespace omsid
