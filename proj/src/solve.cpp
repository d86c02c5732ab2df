#include "omsid/solve.hpp"

#include <Eigen/SVD>

#include <vector>

namespace omsid {
namespace {

constexpr double kRankTol = 1e-10;

std::vector<int> active(const SupportMask& support) {
  std::vector<int> idx;
  idx.reserve(kElDim);
  for (int i = 0; i < kElDim; ++i) {
    if (support.on[i]) idx.push_back(i);
  }
  return idx;
}

Eigen::VectorXd min_norm_ls(const Eigen::MatrixXd& a,
                            const Eigen::VectorXd& y) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU |
                                            Eigen::ComputeThinV);
  svd.setThreshold(kRankTol);
  return svd.solve(y);
}

}  // namespace

ElCoeffs initial_ls(const Eigen::MatrixXd& theta, const Eigen::VectorXd& zdd) {
  return min_norm_ls(theta, zdd);
}

ElCoeffs ridge_update(const Eigen::MatrixXd& theta, const Eigen::VectorXd& zdd,
                      const ElCoeffs& gb, const SupportMask& support,
                      double k1, double k2) {
  ElCoeffs b = ElCoeffs::Zero();
  const std::vector<int> idx = active(support);
  if (idx.empty()) return b;

  const int m = static_cast<int>(idx.size());
  Eigen::MatrixXd theta_s(theta.rows(), m);
  for (int j = 0; j < m; ++j) theta_s.col(j) = theta.col(idx[j]);

  Eigen::VectorXd u;
  if (k1 + k2 == 0.0) {
    u = min_norm_ls(theta_s, zdd);
  } else {
    Eigen::MatrixXd lhs = theta_s.transpose() * theta_s;
    lhs.diagonal().array() += k1 + k2;
    Eigen::VectorXd rhs = theta_s.transpose() * zdd;
    for (int j = 0; j < m; ++j) rhs[j] += k1 * gb[idx[j]];
    u = lhs.ldlt().solve(rhs);
  }
  for (int j = 0; j < m; ++j) b[idx[j]] = u[j];
  return b;
}

ElCoeffs ridge_update_gram(const Eigen::MatrixXd& gram,
                           const Eigen::VectorXd& gram_rhs, const ElCoeffs& gb,
                           const SupportMask& support, double k1, double k2) {
  ElCoeffs b = ElCoeffs::Zero();
  const std::vector<int> idx = active(support);
  if (idx.empty()) return b;

  const int m = static_cast<int>(idx.size());
  Eigen::MatrixXd lhs(m, m);
  Eigen::VectorXd rhs(m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) lhs(i, j) = gram(idx[i], idx[j]);
    rhs[j] = gram_rhs[idx[j]] + k1 * gb[idx[j]];
  }
  lhs.diagonal().array() += k1 + k2;

  Eigen::VectorXd u;
  if (k1 + k2 == 0.0) {
    // Pseudo-inverse through the Gram spectrum; matches the SVD cutoff of
    // the dense path (eigenvalues are squared singular values).
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lhs);
    const Eigen::VectorXd& ev = eig.eigenvalues();
    const double cut = kRankTol * kRankTol * ev.cwiseAbs().maxCoeff();
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(m);
    for (int j = 0; j < m; ++j) {
      if (ev[j] > cut) inv[j] = 1.0 / ev[j];
    }
    u = eig.eigenvectors() *
        (inv.asDiagonal() * (eig.eigenvectors().transpose() * rhs));
  } else {
    u = lhs.ldlt().solve(rhs);
  }
  for (int j = 0; j < m; ++j) b[idx[j]] = u[j];
  return b;
}

}  // namespace omsid
