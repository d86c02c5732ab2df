#include "omsid/model.hpp"

#include <cmath>
#include <stdexcept>

namespace omsid {

const std::array<const char*, kElDim> kElLabels = {
    "b0",  "b1",  "b2",  "b3",  "b4",  "b5",  "b6",  "b7",  "b8",  "b9",
    "b1s", "b1c", "b2s", "b2c", "b3s", "b3c", "b4s", "b4c",
    "b11", "b21", "b31", "b41",
    "b12", "b22", "b32", "b42",
    "b13", "b23", "b33", "b43",
    "b14", "b24", "b34", "b44",
    "b15", "b25", "b35", "b45"};

const std::array<const char*, kDriftDim> kDriftLabels = {
    "1", "x", "x^2", "x^3", "x^4", "x^5",
    "sin(x)", "cos(x)", "sin(2x)", "cos(2x)"};

double drift_eval(const DriftCoeffs& beta, double x) {
  double poly = ((((beta[5] * x + beta[4]) * x + beta[3]) * x + beta[2]) * x +
                 beta[1]) * x + beta[0];
  return poly + beta[6] * std::sin(x) + beta[7] * std::cos(x) +
         beta[8] * std::sin(2.0 * x) + beta[9] * std::cos(2.0 * x);
}

DriftDerivatives drift_derivatives(const DriftCoeffs& beta, double x) {
  const double sx = std::sin(x), cx = std::cos(x);
  const double s2x = std::sin(2.0 * x), c2x = std::cos(2.0 * x);

  DriftDerivatives d;
  d.f = ((((beta[5] * x + beta[4]) * x + beta[3]) * x + beta[2]) * x +
         beta[1]) * x + beta[0];
  d.f += beta[6] * sx + beta[7] * cx + beta[8] * s2x + beta[9] * c2x;

  d.df = (((5.0 * beta[5] * x + 4.0 * beta[4]) * x + 3.0 * beta[3]) * x +
          2.0 * beta[2]) * x + beta[1];
  d.df += beta[6] * cx - beta[7] * sx + 2.0 * beta[8] * c2x -
          2.0 * beta[9] * s2x;

  d.ddf = ((20.0 * beta[5] * x + 12.0 * beta[4]) * x + 6.0 * beta[3]) * x +
          2.0 * beta[2];
  d.ddf += -beta[6] * sx - beta[7] * cx - 4.0 * beta[8] * s2x -
           4.0 * beta[9] * c2x;
  return d;
}

double om_lagrangian(const DriftCoeffs& beta, double eps, double z,
                     double zdot) {
  if (!(eps > 0.0)) {
    throw std::domain_error("om_lagrangian: eps must be positive");
  }
  const DriftDerivatives d = drift_derivatives(beta, z);
  const double r = (d.f - zdot) / eps;
  return r * r + d.df;
}

double el_rhs(const DriftCoeffs& beta, double eps, double z) {
  const DriftDerivatives d = drift_derivatives(beta, z);
  return 0.5 * eps * eps * d.ddf + d.df * d.f;
}

ElCoeffs structure_map(const DriftCoeffs& beta, double eps) {
  return detail::structure_map_eps_sq(beta, eps * eps);
}

namespace detail {

ElCoeffs structure_map_eps_sq(const DriftCoeffs& beta, double e2) {
  const double b0 = beta[0], b1 = beta[1], b2 = beta[2], b3 = beta[3],
               b4 = beta[4], b5 = beta[5], b6 = beta[6], b7 = beta[7],
               b8 = beta[8], b9 = beta[9];

  ElCoeffs g = ElCoeffs::Zero();

  // Polynomial block: collect z^0..z^9 from (e2/2) p'' + (p' + tau')(p + tau),
  // keeping the purely polynomial products.
  g[0] = b0 * b1 + e2 * b2;
  g[1] = 2.0 * b0 * b2 + b1 * b1 + 3.0 * e2 * b3;
  g[2] = 3.0 * b0 * b3 + 3.0 * b1 * b2 + 6.0 * e2 * b4;
  g[3] = 4.0 * b0 * b4 + 4.0 * b1 * b3 + 2.0 * b2 * b2 + 10.0 * e2 * b5;
  g[4] = 5.0 * b0 * b5 + 5.0 * b1 * b4 + 5.0 * b2 * b3;
  g[5] = 6.0 * b1 * b5 + 6.0 * b2 * b4 + 3.0 * b3 * b3;
  g[6] = 7.0 * b2 * b5 + 7.0 * b3 * b4;
  g[7] = 8.0 * b3 * b5 + 4.0 * b4 * b4;
  g[8] = 9.0 * b4 * b5;
  g[9] = 5.0 * b5 * b5;

  // Pure trigonometric block.  Products of the trig parts are reduced to
  // single harmonics (sin^2, cos^2, and cross terms fold into harmonics
  // 2, 3, 4), which is where the half-integer weights come from.
  g[10] = -0.5 * e2 * b6 - b0 * b7 + b1 * b6 - 0.5 * b6 * b8 - 0.5 * b7 * b9;
  g[11] = -0.5 * e2 * b7 + b0 * b6 + b1 * b7 + 0.5 * b7 * b8 - 0.5 * b6 * b9;
  g[12] = -2.0 * e2 * b8 - 2.0 * b0 * b9 + b1 * b8 + 0.5 * (b6 * b6 - b7 * b7);
  g[13] = -2.0 * e2 * b9 + 2.0 * b0 * b8 + b1 * b9 + b6 * b7;
  g[14] = 1.5 * (b6 * b8 - b7 * b9);
  g[15] = 1.5 * (b7 * b8 + b6 * b9);
  g[16] = b8 * b8 - b9 * b9;
  g[17] = 2.0 * b8 * b9;

  // Mixed block z^k * {sin z, cos z, sin 2z, cos 2z}:  p' tau + tau' p.
  const double poly[6] = {b0, b1, b2, b3, b4, b5};
  for (int i = 1; i <= 5; ++i) {
    const double pi = poly[i];
    const double dp = (i < 5) ? (i + 1) * poly[i + 1] : 0.0;
    const int base = 18 + 4 * (i - 1);
    g[base + 0] = dp * b6 - pi * b7;
    g[base + 1] = dp * b7 + pi * b6;
    g[base + 2] = dp * b8 - 2.0 * pi * b9;
    g[base + 3] = dp * b9 + 2.0 * pi * b8;
  }

  return g;
}

}  // namespace detail
}  // namespace omsid
