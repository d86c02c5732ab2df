#include "omsid/simulate.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <utility>

namespace omsid {
namespace {

struct State {
  double z;
  double v;
};

State rk4_step(const DriftCoeffs& beta, double eps, const State& y,
               double dt) {
  const auto accel = [&](double z) { return el_rhs(beta, eps, z); };

  const double k1z = y.v;
  const double k1v = accel(y.z);
  const double k2z = y.v + 0.5 * dt * k1v;
  const double k2v = accel(y.z + 0.5 * dt * k1z);
  const double k3z = y.v + 0.5 * dt * k2v;
  const double k3v = accel(y.z + 0.5 * dt * k2z);
  const double k4z = y.v + dt * k3v;
  const double k4v = accel(y.z + dt * k3z);

  return {y.z + dt / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z),
          y.v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)};
}

int step_count(double T, double dt) {
  if (!(T > 0.0) || !(dt > 0.0)) {
    throw std::invalid_argument("integrate: T and dt must be positive");
  }
  const double ratio = T / dt;
  const long long n = std::llround(ratio);
  if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * ratio) {
    throw std::invalid_argument("integrate: T must be a multiple of dt");
  }
  return static_cast<int>(n);
}

// Endpoint-only integration; nullopt if the state stops being finite.
std::optional<double> endpoint(const DriftCoeffs& beta, double eps, double z0,
                               double v0, double dt, int n) {
  State y{z0, v0};
  for (int i = 0; i < n; ++i) {
    y = rk4_step(beta, eps, y, dt);
    if (!std::isfinite(y.z) || !std::isfinite(y.v)) return std::nullopt;
  }
  return y.z;
}

}  // namespace

Trajectory integrate_ivp(const DriftCoeffs& beta, double eps, double z0,
                         double v0, double dt, double T) {
  const int n = step_count(T, dt);
  Trajectory traj;
  traj.T = T;
  traj.dt = dt;
  traj.z.reserve(n + 1);
  traj.z.push_back(z0);

  State y{z0, v0};
  for (int i = 0; i < n; ++i) {
    y = rk4_step(beta, eps, y, dt);
    if (!std::isfinite(y.z) || !std::isfinite(y.v)) {
      throw DivergenceError(
          "integrate_ivp: state diverged at step " + std::to_string(i + 1),
          i + 1);
    }
    traj.z.push_back(y.z);
  }
  return traj;
}

Trajectory shoot(const DriftCoeffs& beta, double eps,
                 const BoundaryConditions& bc, double T, double dt,
                 const ShootOptions& opts) {
  const int n = step_count(T, dt);
  const auto residual = [&](double v0) -> std::optional<double> {
    const auto zT = endpoint(beta, eps, bc.x0, v0, dt, n);
    if (!zT) return std::nullopt;
    return *zT - bc.xT;
  };

  const double vmag = opts.scan_factor * std::abs(bc.xT - bc.x0) / T;
  const int m = std::max(opts.scan_points, 1);

  std::vector<std::pair<double, double>> scan;  // (v0, residual)
  std::vector<double> roots;
  for (int k = 0; k <= m; ++k) {
    const double v = -vmag + 2.0 * vmag * k / m;
    const auto r = residual(v);
    if (!r) continue;
    if (std::abs(*r) <= opts.tol) {
      roots.push_back(v);
    } else {
      scan.emplace_back(v, *r);
    }
    if (vmag == 0.0) break;  // degenerate range, single candidate
  }

  // Polish every sign-change bracket with a bisection-guarded secant.
  for (size_t i = 0; i + 1 < scan.size(); ++i) {
    auto [lo, rlo] = scan[i];
    auto [hi, rhi] = scan[i + 1];
    if (rlo * rhi > 0.0) continue;

    double prev_v = lo, prev_r = rlo;
    double cur_v = hi, cur_r = rhi;
    for (int it = 0; it < opts.max_iter; ++it) {
      double c = cur_v - cur_r * (cur_v - prev_v) / (cur_r - prev_r);
      if (!std::isfinite(c) || c <= std::min(lo, hi) ||
          c >= std::max(lo, hi)) {
        c = 0.5 * (lo + hi);
      }
      auto rc = residual(c);
      int shrink = 0;
      while (!rc && shrink++ < 50) {  // diverged inside the bracket
        c = 0.5 * (lo + c);
        rc = residual(c);
      }
      if (!rc) break;
      if (std::abs(*rc) <= opts.tol) {
        roots.push_back(c);
        break;
      }
      if ((*rc > 0.0) == (rlo > 0.0)) {
        lo = c;
        rlo = *rc;
      } else {
        hi = c;
        rhi = *rc;
      }
      prev_v = cur_v;
      prev_r = cur_r;
      cur_v = c;
      cur_r = *rc;
    }
  }

  if (roots.empty()) {
    throw ShootError("shoot: no admissible initial slope in scan range [" +
                     std::to_string(-vmag) + ", " + std::to_string(vmag) +
                     "]");
  }
  double best = roots.front();
  for (double v : roots) {
    if (std::abs(v) < std::abs(best) ||
        (std::abs(v) == std::abs(best) && v < best)) {
      best = v;
    }
  }
  return integrate_ivp(beta, eps, bc.x0, best, dt, T);
}

}  // namespace omsid
