#pragma once

// Exact supercritical steady flow on an inclined plane z = alpha x. With
// q = q0 constant, Bernoulli's law gives the cubic
//
//   P(h) = h^3 + b(x) h^2 + q0^2 / (2 g) = 0,
//   b(x) = alpha x - q0^2 / (2 g h0^2) - h0,
//
// whose supercritical root is the one below the critical height.

#include <cmath>
#include <string>
#include <vector>

#include "swb/core.hpp"

namespace swb {

struct SteadyFlowParams {
  double alpha = 0.0;  ///< bed slope dz/dx (negative downhill)
  double h0 = 0.02;
  double q0 = 0.01;
  double g = kDefaultGravity;

  SteadyFlowParams() = default;
  SteadyFlowParams(double slope, double height, double discharge,
                   double gravity = kDefaultGravity)
      : alpha(slope), h0(height), q0(discharge), g(gravity) {
    if (!(h0 > 0.0) || !(q0 > 0.0) || !(g > 0.0)) {
      throw ConfigError("steady flow needs h0 > 0, q0 > 0 and g > 0");
    }
    if (!(inlet_froude() > 1.0)) {
      throw ConfigError("inlet state is not supercritical (Froude = " +
                        std::to_string(inlet_froude()) + ")");
    }
  }

  double inlet_froude() const { return q0 / (h0 * std::sqrt(g * h0)); }
};

inline double cubic_coefficient(double x, const SteadyFlowParams& p) {
  return p.alpha * x - p.q0 * p.q0 / (2.0 * p.g * p.h0 * p.h0) - p.h0;
}

inline double bernoulli_cubic(double h, double b, const SteadyFlowParams& p) {
  return h * h * (h + b) + p.q0 * p.q0 / (2.0 * p.g);
}

inline double critical_height(double q, double g) {
  return std::cbrt(q * q / g);
}

/// Supercritical root of the Bernoulli cubic: bisection on (1e-8, hc) down
/// to a bracket of width 1e-14, then two Newton polish steps.
inline double supercritical_height(double x, const SteadyFlowParams& p) {
  // h0 is a root by construction wherever the bed has not dropped.
  if (p.alpha * x == 0.0) return p.h0;
  const double b = cubic_coefficient(x, p);
  const double hc = critical_height(p.q0, p.g);
  double lo = 1e-8;
  double hi = hc;
  const double p_lo = bernoulli_cubic(lo, b, p);
  const double p_hi = bernoulli_cubic(hi, b, p);
  if (!(p_lo > 0.0) || !(p_hi < 0.0)) {
    throw DomainError("no supercritical root at x = " + std::to_string(x) +
                      " (flow would leave the supercritical regime)");
  }
  while (hi - lo > 1e-14) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (bernoulli_cubic(mid, b, p) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double h = 0.5 * (lo + hi);
  for (int it = 0; it < 2; ++it) {
    const double dp = h * (3.0 * h + 2.0 * b);
    if (dp == 0.0) break;
    const double next = h - bernoulli_cubic(h, b, p) / dp;
    if (!(next > 0.0) || !(next < hc)) break;
    h = next;
  }
  return h;
}

inline std::vector<double> analytic_profile(const Grid& grid,
                                            const SteadyFlowParams& p) {
  std::vector<double> h(grid.n_cells);
  for (std::size_t i = 0; i < grid.n_cells; ++i) {
    h[i] = supercritical_height(grid.center(i), p);
  }
  return h;
}

}  // namespace swb
