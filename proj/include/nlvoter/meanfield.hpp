#pragma once

#include <array>
#include <string>
#include <vector>

namespace nlvoter {

/// Well-mixed rate equation for the +1 fraction rho:
///
///   d rho / dt = [rho^a (1 - rho) - rho (1 - rho)^a] / [rho^a + (1 - rho)^a]
///
/// Both powers are rescaled by the larger of the two in log space, so large
/// |a| neither overflows nor underflows. rhs(0) = rhs(1) = 0 by convention.
/// Throws std::domain_error for rho outside [0, 1] or non-finite alpha.
double mf_rhs(double rho, double alpha);

struct MfTrajectory {
  double alpha = 1.0;
  double dt = 0.01;
  std::vector<double> times;
  std::vector<double> rho_values;
};

/// Classical fixed-step RK4 from t = 0 with ceil(t_max / dt) steps; rho is
/// clamped to [0, 1] after every step.
MfTrajectory mf_integrate(double rho0, double alpha, double dt = 0.01,
                          double t_max = 200.0);

enum class Stability { stable, unstable };

struct FixedPoint {
  double rho;
  Stability stability;
};

/// Fixed points 0, 1/2 and 1 classified from the sign of the rate at the
/// probes 1/4 and 3/4. alpha = 1 is rejected: the rate vanishes identically.
struct FixedPointReport {
  double alpha;
  std::array<FixedPoint, 3> points;
};

FixedPointReport mf_fixed_point_stability(double alpha);

std::string to_string(Stability s);

}  // namespace nlvoter
