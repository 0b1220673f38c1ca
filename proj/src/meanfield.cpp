#include "nlvoter/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlvoter/text.hpp"

namespace nlvoter {

double mf_rhs(double rho, double alpha) {
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw std::domain_error("mf_rhs: rho " + format_shortest(rho) + " outside [0, 1]");
  }
  if (!std::isfinite(alpha)) throw std::domain_error("mf_rhs: alpha must be finite");
  const double other = 1.0 - rho;
  if (rho == 0.0 || other == 0.0) return 0.0;
  const double log_plus = alpha * std::log(rho);
  const double log_minus = alpha * std::log(other);
  const double top = std::max(log_plus, log_minus);
  const double w_plus = std::exp(log_plus - top);
  const double w_minus = std::exp(log_minus - top);
  return (w_plus * other - rho * w_minus) / (w_plus + w_minus);
}

MfTrajectory mf_integrate(double rho0, double alpha, double dt, double t_max) {
  if (!(rho0 >= 0.0 && rho0 <= 1.0)) throw std::domain_error("mf_integrate: rho0 outside [0, 1]");
  if (!std::isfinite(alpha)) throw std::domain_error("mf_integrate: alpha must be finite");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("mf_integrate: dt must be positive");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw std::invalid_argument("mf_integrate: t_max must be positive");
  }
  if (dt > t_max) throw std::invalid_argument("mf_integrate: dt exceeds t_max");

  const auto steps = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
  MfTrajectory traj;
  traj.alpha = alpha;
  traj.dt = dt;
  traj.times.reserve(steps + 1);
  traj.rho_values.reserve(steps + 1);
  double rho = rho0;
  traj.times.push_back(0.0);
  traj.rho_values.push_back(rho);
  auto f = [alpha](double r) { return mf_rhs(std::clamp(r, 0.0, 1.0), alpha); };
  for (std::size_t i = 1; i <= steps; ++i) {
    const double k1 = f(rho);
    const double k2 = f(rho + 0.5 * dt * k1);
    const double k3 = f(rho + 0.5 * dt * k2);
    const double k4 = f(rho + dt * k3);
    rho = std::clamp(rho + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4), 0.0, 1.0);
    traj.times.push_back(static_cast<double>(i) * dt);
    traj.rho_values.push_back(rho);
  }
  return traj;
}

FixedPointReport mf_fixed_point_stability(double alpha) {
  if (!std::isfinite(alpha)) throw std::domain_error("stability: alpha must be finite");
  if (alpha == 1.0) {
    throw std::invalid_argument("stability: alpha = 1 makes the rate vanish identically");
  }
  const double low = mf_rhs(0.25, alpha);
  const double high = mf_rhs(0.75, alpha);
  auto cls = [](bool stable) { return stable ? Stability::stable : Stability::unstable; };
  return FixedPointReport{alpha,
                          {FixedPoint{0.0, cls(low < 0.0)},
                           FixedPoint{0.5, cls(low > 0.0 && high < 0.0)},
                           FixedPoint{1.0, cls(high > 0.0)}}};
}

std::string to_string(Stability s) {
  return s == Stability::stable ? "stable" : "unstable";
}

}  // namespace nlvoter
