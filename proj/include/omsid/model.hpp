#pragma once

#include <Eigen/Dense>

#include <array>

namespace omsid {

// Drift basis: {1, x, x^2, x^3, x^4, x^5, sin x, cos x, sin 2x, cos 2x}.
inline constexpr int kDriftDim = 10;

// Expansion basis for the Euler-Lagrange right-hand side:
// {1, z, ..., z^9,
//  sin z, cos z, sin 2z, cos 2z, sin 3z, cos 3z, sin 4z, cos 4z,
//  z^k sin z, z^k cos z, z^k sin 2z, z^k cos 2z  for k = 1..5}.
inline constexpr int kElDim = 38;

using DriftCoeffs = Eigen::Matrix<double, kDriftDim, 1>;
using ElCoeffs = Eigen::Matrix<double, kElDim, 1>;

// Column labels for the EL expansion basis, in storage order.
extern const std::array<const char*, kElDim> kElLabels;

// Human-readable names of the drift basis functions, e.g. "x^3", "sin(x)".
extern const std::array<const char*, kDriftDim> kDriftLabels;

struct DriftDerivatives {
  double f;
  double df;
  double ddf;
};

// Drift f(x) = sum_i beta_i * phi_i(x).
double drift_eval(const DriftCoeffs& beta, double x);

// f, f', f'' at x, from the analytic derivatives of the basis.
DriftDerivatives drift_derivatives(const DriftCoeffs& beta, double x);

// Onsager-Machlup integrand ((f(z) - zdot)/eps)^2 + f'(z).  Requires eps > 0.
double om_lagrangian(const DriftCoeffs& beta, double eps, double z,
                     double zdot);

// Right-hand side of the Euler-Lagrange equation for the most probable path:
//   zdd = (eps^2 / 2) f''(z) + f'(z) f(z).
double el_rhs(const DriftCoeffs& beta, double eps, double z);

// Expands el_rhs over the 38-term basis.  The defining identity is
//   feature_row(z) . structure_map(beta, eps) == el_rhs(beta, eps, z)
// for every z; all coefficients are quadratic in (beta, eps^2).
ElCoeffs structure_map(const DriftCoeffs& beta, double eps);

namespace detail {
// Same map with eps^2 passed directly.  Negative values are meaningful for
// algebraic checks (the map is even under (beta, eps^2) -> (-beta, -eps^2)).
ElCoeffs structure_map_eps_sq(const DriftCoeffs& beta, double eps_sq);
}  // namespace detail

}  // namespace omsid
