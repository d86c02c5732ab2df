#include "omsid/recover.hpp"

#include <Eigen/SVD>

#include <array>
#include <cmath>
#include <vector>

namespace omsid {
namespace {

using Pins = std::array<bool, kDriftDim>;

Eigen::VectorXd small_ls(const Eigen::MatrixXd& a, const Eigen::VectorXd& r) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-12);
  return svd.solve(r);
}

// One equation row of a (eps^2, beta0) close-out system.
struct EqRow {
  double c_e2;
  double c_b0;
  double rhs;
};

RecoveredModel cascade(const ElCoeffs& b, const Pins& pinned) {
  RecoveredModel m;
  DriftCoeffs& beta = m.beta;
  bool beta0_set = false;
  bool eps_set = false;

  const auto is_free = [&](int i) { return !pinned[i]; };

  // Least-squares close-out for (eps^2, beta0); a negative eps^2 estimate
  // means the chain resolved the mirrored representative, so flip it.
  const auto close_out = [&](const std::vector<EqRow>& eqs, int flip_lo,
                             int flip_hi) {
    const bool b0_free = is_free(0);
    const int nr = static_cast<int>(eqs.size());
    Eigen::MatrixXd a(nr, b0_free ? 2 : 1);
    Eigen::VectorXd r(nr);
    for (int i = 0; i < nr; ++i) {
      a(i, 0) = eqs[i].c_e2;
      if (b0_free) a(i, 1) = eqs[i].c_b0;
      r[i] = eqs[i].rhs;
    }
    const Eigen::VectorXd x = small_ls(a, r);
    const double e2 = x[0];
    if (b0_free) {
      beta[0] = x[1];
      beta0_set = true;
    }
    m.epsilon = std::sqrt(std::abs(e2));
    eps_set = true;
    if (e2 < 0.0) {
      beta[0] = -beta[0];
      for (int i = flip_lo; i <= flip_hi; ++i) beta[i] = -beta[i];
    }
  };

  // ---- Polynomial cascade.  Heads are keyed on the surviving square
  // coefficients b9 = 5 b5^2, b7 = 4 b4^2, b5 = 3 b3^2, b3 = 2 b2^2,
  // b1 = b1^2; the back-substitutions below read off the mixed products.
  bool poly_branch = false;
  if (is_free(5) && b[9] > 0.0) {
    beta[5] = std::sqrt(b[9] / 5.0);
    if (is_free(4)) beta[4] = b[8] / (9.0 * beta[5]);
    if (is_free(3)) beta[3] = (b[7] - 4.0 * beta[4] * beta[4]) /
                              (8.0 * beta[5]);
    if (is_free(2)) beta[2] = (b[6] - 7.0 * beta[3] * beta[4]) /
                              (7.0 * beta[5]);
    if (is_free(1)) beta[1] = (b[5] - 3.0 * beta[3] * beta[3] -
                               6.0 * beta[2] * beta[4]) / (6.0 * beta[5]);
    close_out(
        {{beta[2], beta[1], b[0]},
         {3.0 * beta[3], 2.0 * beta[2], b[1] - beta[1] * beta[1]},
         {6.0 * beta[4], 3.0 * beta[3], b[2] - 3.0 * beta[1] * beta[2]},
         {10.0 * beta[5], 4.0 * beta[4],
          b[3] - 2.0 * beta[2] * beta[2] - 4.0 * beta[1] * beta[3]},
         {0.0, 5.0 * beta[5],
          b[4] - 5.0 * beta[1] * beta[4] - 5.0 * beta[2] * beta[3]}},
        1, 5);
    poly_branch = true;
  } else if (is_free(4) && b[7] > 0.0) {
    beta[4] = std::sqrt(b[7] / 4.0);
    if (is_free(3)) beta[3] = b[6] / (7.0 * beta[4]);
    if (is_free(2)) beta[2] = (b[5] - 3.0 * beta[3] * beta[3]) /
                              (6.0 * beta[4]);
    if (is_free(1)) beta[1] = (b[4] - 5.0 * beta[2] * beta[3]) /
                              (5.0 * beta[4]);
    close_out(
        {{beta[2], beta[1], b[0]},
         {3.0 * beta[3], 2.0 * beta[2], b[1] - beta[1] * beta[1]},
         {6.0 * beta[4], 3.0 * beta[3], b[2] - 3.0 * beta[1] * beta[2]},
         {0.0, 4.0 * beta[4],
          b[3] - 2.0 * beta[2] * beta[2] - 4.0 * beta[1] * beta[3]}},
        1, 4);
    poly_branch = true;
  } else if (is_free(3) && b[5] > 0.0) {
    beta[3] = std::sqrt(b[5] / 3.0);
    if (is_free(2)) beta[2] = b[4] / (5.0 * beta[3]);
    if (is_free(1)) beta[1] = (b[3] - 2.0 * beta[2] * beta[2]) /
                              (4.0 * beta[3]);
    close_out({{beta[2], beta[1], b[0]},
               {3.0 * beta[3], 2.0 * beta[2], b[1] - beta[1] * beta[1]},
               {0.0, 3.0 * beta[3], b[2] - 3.0 * beta[1] * beta[2]}},
              1, 3);
    poly_branch = true;
  } else if (is_free(2) && b[3] > 0.0) {
    beta[2] = std::sqrt(b[3] / 2.0);
    if (is_free(1)) beta[1] = b[2] / (3.0 * beta[2]);
    if (is_free(0)) {
      beta[0] = (b[1] - beta[1] * beta[1]) / (2.0 * beta[2]);
      beta0_set = true;
    }
    const double e2 = (b[0] - beta[0] * beta[1]) / beta[2];
    m.epsilon = std::sqrt(std::abs(e2));
    eps_set = true;
    if (e2 < 0.0) {
      for (int i = 0; i <= 2; ++i) beta[i] = -beta[i];
    }
    poly_branch = true;
  } else if (is_free(1) && b[1] > 0.0) {
    beta[1] = std::sqrt(b[1]);
    if (is_free(0)) {
      beta[0] = b[0] / beta[1];
      beta0_set = true;
    }
    poly_branch = true;  // a linear drift leaves eps unidentifiable
  }

  if (poly_branch) {
    // ---- Trig part against a surviving polynomial: the mixed-block
    // coefficients are linear in (b6..b9), one 4-row group per degree.
    std::vector<int> cols;
    for (int j = 6; j <= 9; ++j) {
      if (is_free(j)) cols.push_back(j);
    }
    if (!cols.empty()) {
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(20, cols.size());
      Eigen::VectorXd r(20);
      for (int i = 1; i <= 5; ++i) {
        const double pi = beta[i];
        const double dp = (i < 5) ? (i + 1) * beta[i + 1] : 0.0;
        const double coef[4][4] = {{dp, -pi, 0.0, 0.0},
                                   {pi, dp, 0.0, 0.0},
                                   {0.0, 0.0, dp, -2.0 * pi},
                                   {0.0, 0.0, 2.0 * pi, dp}};
        const int r0 = 4 * (i - 1);
        for (int row = 0; row < 4; ++row) {
          for (int c = 0; c < static_cast<int>(cols.size()); ++c) {
            a(r0 + row, c) = coef[row][cols[c] - 6];
          }
          r[r0 + row] = b[18 + r0 + row];
        }
      }
      const Eigen::VectorXd x = small_ls(a, r);
      for (int c = 0; c < static_cast<int>(cols.size()); ++c) {
        beta[cols[c]] = x[c];
      }
    }
  } else {
    // ---- Pure trig cascade: fourth harmonic fixes (b8, b9) up to the
    // mirror, third harmonic (or the second when b8 = b9 = 0) fixes
    // (b6, b7), and the first/second harmonics close out (eps^2, beta0).
    if (is_free(8) && is_free(9)) {
      const double r4 = std::hypot(b[16], b[17]);
      beta[9] = std::sqrt(std::max(r4 - b[16], 0.0) / 2.0);
      beta[8] = beta[9] > 0.0 ? b[17] / (2.0 * beta[9])
                              : std::sqrt(std::max(b[16], 0.0));
    } else if (is_free(8)) {
      beta[8] = std::sqrt(std::max(b[16], 0.0));
    } else if (is_free(9)) {
      beta[9] = std::sqrt(std::max(-b[16], 0.0));
    }

    const double n89 = beta[8] * beta[8] + beta[9] * beta[9];
    if (n89 > 0.0) {
      if (is_free(6)) {
        beta[6] = (2.0 / 3.0) * (b[14] * beta[8] + b[15] * beta[9]) / n89;
      }
      if (is_free(7)) {
        beta[7] = (2.0 / 3.0) * (b[15] * beta[8] - b[14] * beta[9]) / n89;
      }
    } else if (is_free(6) && is_free(7)) {
      const double r2 = std::hypot(b[12], b[13]);
      beta[7] = std::sqrt(std::max(r2 - b[12], 0.0));
      beta[6] = beta[7] > 0.0 ? b[13] / beta[7]
                              : std::sqrt(std::max(2.0 * b[12], 0.0));
    } else if (is_free(6)) {
      beta[6] = std::sqrt(std::max(2.0 * b[12], 0.0));
    } else if (is_free(7)) {
      beta[7] = std::sqrt(std::max(-2.0 * b[12], 0.0));
    }

    if (beta[6] != 0.0 || beta[7] != 0.0 || beta[8] != 0.0 ||
        beta[9] != 0.0) {
      close_out(
          {{-0.5 * beta[6], -beta[7],
            b[10] + 0.5 * beta[6] * beta[8] + 0.5 * beta[7] * beta[9]},
           {-0.5 * beta[7], beta[6],
            b[11] - 0.5 * beta[7] * beta[8] + 0.5 * beta[6] * beta[9]},
           {-2.0 * beta[8], -2.0 * beta[9],
            b[12] - 0.5 * (beta[6] * beta[6] - beta[7] * beta[7])},
           {-2.0 * beta[9], 2.0 * beta[8], b[13] - beta[6] * beta[7]}},
          6, 9);
    }
  }

  if (!beta0_set && is_free(0)) {
    beta[0] = kSentinel;
    m.beta0_sentinel = true;
  }
  if (!eps_set) {
    m.epsilon = kSentinel;
    m.epsilon_sentinel = true;
  }
  for (int i = 0; i < kDriftDim; ++i) {
    if (beta[i] == 0.0) beta[i] = 0.0;  // normalize -0
  }
  return m;
}

}  // namespace

RecoveredModel findbeta1(const ElCoeffs& b) {
  return cascade(b, Pins{});
}

RecoveredModel findbeta0(const ElCoeffs& b, const DriftCoeffs& prior) {
  Pins pinned{};
  for (int i = 0; i < kDriftDim; ++i) pinned[i] = prior[i] == 0.0;
  return cascade(b, pinned);
}

DriftCoeffs hard_threshold(const DriftCoeffs& beta, double theta_t) {
  DriftCoeffs out = beta;
  for (int i = 0; i < kDriftDim; ++i) {
    if (std::abs(out[i]) < theta_t) out[i] = 0.0;
  }
  return out;
}

}  // namespace omsid
