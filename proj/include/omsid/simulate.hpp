#pragma once

#include "omsid/model.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace omsid {

// Uniformly sampled path: z[i] is the state at t = i * dt, with
// z.size() == round(T / dt) + 1.
struct Trajectory {
  double T = 0.0;
  double dt = 0.0;
  std::vector<double> z;

  int steps() const { return static_cast<int>(z.size()) - 1; }
  double t(int i) const { return i * dt; }
};

struct BoundaryConditions {
  double x0 = 0.0;
  double xT = 0.0;
};

struct ShootOptions {
  double tol = 1e-10;     // |z(T) - xT| acceptance tolerance
  int scan_points = 64;   // initial-slope scan resolution
  double scan_factor = 10.0;  // scan range: +/- scan_factor*|xT-x0|/T
  int max_iter = 100;     // refinement iterations per bracket
};

// Integration blew up (NaN or overflow); carries the offending step.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, int step)
      : std::runtime_error(what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

// No initial slope in the scanned range drives z(T) across xT, or the
// refinement failed to reach the requested tolerance.
class ShootError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Classic fixed-step RK4 on z'' = el_rhs(beta, eps, z) from (z0, v0).
// Returns the z samples at every step.  Throws DivergenceError if the state
// stops being finite.
Trajectory integrate_ivp(const DriftCoeffs& beta, double eps, double z0,
                         double v0, double dt, double T);

// Solves the two-point boundary value problem z(0) = bc.x0, z(T) = bc.xT by
// shooting on the initial slope: a uniform scan locates sign changes of the
// endpoint residual, each bracket is polished by a bisection-guarded secant
// iteration, and the root with the smallest |v0| wins.
Trajectory shoot(const DriftCoeffs& beta, double eps,
                 const BoundaryConditions& bc, double T, double dt,
                 const ShootOptions& opts = {});

}  // namespace omsid
