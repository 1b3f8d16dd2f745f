#pragma once

// Well-balanced finite-volume update with hydrostatic reconstruction:
//
//   U_i^{n+1} = U_i^n - dt * Phi_i,
//   Phi_i = (F_{i+1/2L} - F_{i-1/2R} - Fc_i) / dx,
//   F_{i+1/2L} = F_{i+1/2} + S_{i+1/2L},  F_{i-1/2R} = F_{i-1/2} + S_{i-1/2R},
//
// together with boundary handling, the CFL time step, Euler/Heun stepping
// and a steady-state driver.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "swb/core.hpp"
#include "swb/flux.hpp"
#include "swb/reconstruct.hpp"

namespace swb {

/// Negative heights down to this magnitude are roundoff and get clipped.
inline constexpr double kClipTolerance = 1e-12;

// -----------------------------------------------------------------------------
// Boundaries and problem description
// -----------------------------------------------------------------------------

enum class BoundaryKind {
  Inflow,   ///< imposed (h, q); only valid for supercritical data
  Outflow,  ///< zero-order extrapolation of the adjacent cell
  Wall,     ///< reflective, no mass crosses the boundary
};

struct Boundary {
  BoundaryKind kind = BoundaryKind::Outflow;
  Conserved inflow{};

  static Boundary outflow() { return {BoundaryKind::Outflow, {}}; }
  static Boundary wall() { return {BoundaryKind::Wall, {}}; }

  /// Imposes both h and q upstream, which requires a supercritical state.
  static Boundary supercritical_inflow(double h0, double q0, double g) {
    if (!(h0 > 0.0)) {
      throw ConfigError("inflow height h0 must be positive");
    }
    const double froude = (q0 / h0) / std::sqrt(g * h0);
    if (!(froude > 1.0)) {
      throw ConfigError("inflow (h0 = " + std::to_string(h0) +
                        ", q0 = " + std::to_string(q0) +
                        ") is not supercritical, Froude = " +
                        std::to_string(froude));
    }
    return {BoundaryKind::Inflow, {h0, q0}};
  }
};

struct Problem {
  Grid grid;
  Topography topo;
  Order order = Order::First;
  double g = kDefaultGravity;
  Boundary left = Boundary::outflow();
  Boundary right = Boundary::outflow();
};

/// Builds the padded cell arrays, ghost cells included.
inline PaddedState apply_boundary(const CellState& state, const Problem& p) {
  const std::size_t n = state.size();
  if (n != p.grid.n_cells || p.topo.size() != n) {
    throw ContractError("apply_boundary: state/grid/topography size mismatch");
  }
  PaddedState out;
  out.h.resize(n + 2);
  out.q.resize(n + 2);
  out.z.resize(n + 2);
  for (std::size_t i = 0; i < n; ++i) {
    out.h[i + 1] = state.h[i];
    out.q[i + 1] = state.q[i];
    out.z[i + 1] = p.topo[i];
  }

  switch (p.left.kind) {
    case BoundaryKind::Inflow:
      out.h[0] = p.left.inflow.h;
      out.q[0] = p.left.inflow.q;
      out.z[0] = p.topo.ghost_left();
      break;
    case BoundaryKind::Outflow:
      out.h[0] = state.h[0];
      out.q[0] = state.q[0];
      out.z[0] = p.topo.ghost_left();
      break;
    case BoundaryKind::Wall:
      out.h[0] = state.h[0];
      out.q[0] = -state.q[0];
      out.z[0] = p.topo[0];
      break;
  }
  switch (p.right.kind) {
    case BoundaryKind::Inflow:
      out.h[n + 1] = p.right.inflow.h;
      out.q[n + 1] = p.right.inflow.q;
      out.z[n + 1] = p.topo.ghost_right();
      break;
    case BoundaryKind::Outflow:
      out.h[n + 1] = state.h[n - 1];
      out.q[n + 1] = state.q[n - 1];
      out.z[n + 1] = p.topo.ghost_right();
      break;
    case BoundaryKind::Wall:
      out.h[n + 1] = state.h[n - 1];
      out.q[n + 1] = -state.q[n - 1];
      out.z[n + 1] = p.topo[n - 1];
      break;
  }
  return out;
}

/// Reconstructed states at the n + 1 interfaces of the problem. At a wall
/// the outer side is the mirror image of the inner side.
inline std::vector<InterfaceStates> problem_interfaces(const CellState& state,
                                                       const Problem& p) {
  auto faces = reconstruct_all(apply_boundary(state, p), p.order, p.grid.dx);
  if (p.left.kind == BoundaryKind::Wall) {
    const InterfaceStates f = faces.front();
    faces.front() = make_interface(f.h_plus, f.h_plus, -f.u_plus, f.u_plus,
                                   f.z_plus, f.z_plus);
    faces.front().q_minus = -f.q_plus;
    faces.front().q_plus = f.q_plus;
  }
  if (p.right.kind == BoundaryKind::Wall) {
    const InterfaceStates f = faces.back();
    faces.back() = make_interface(f.h_minus, f.h_minus, f.u_minus, -f.u_minus,
                                  f.z_minus, f.z_minus);
    faces.back().q_minus = f.q_minus;
    faces.back().q_plus = -f.q_minus;
  }
  return faces;
}

// -----------------------------------------------------------------------------
// Source terms and the spatial operator
// -----------------------------------------------------------------------------

/// S_{k L} = (0, g/2 (h_-^2 - hL^2)),  S_{k R} = (0, g/2 (h_+^2 - hR^2)).
inline std::pair<FluxVector, FluxVector> interface_sources(
    const InterfaceStates& f, double g) {
  return {FluxVector{0.0, 0.5 * g * (f.h_minus * f.h_minus - f.hL * f.hL)},
          FluxVector{0.0, 0.5 * g * (f.h_plus * f.h_plus - f.hR * f.hR)}};
}

/// Momentum component of the centered source
///   Fc_i = -g (h_{i-1/2+} + h_{i+1/2-}) / 2 * (z_{i+1/2-} - z_{i-1/2+}).
inline double centered_source(double h_left_plus, double h_right_minus,
                              double z_right_minus, double z_left_plus,
                              double g) {
  return -g * 0.5 * (h_left_plus + h_right_minus) * (z_right_minus - z_left_plus);
}

/// Rates of change Phi for (h, q), so that dU/dt = -Phi.
struct SpatialOperator {
  std::vector<double> h;
  std::vector<double> q;
};

inline SpatialOperator spatial_operator(const CellState& state,
                                        const Problem& p, double time = 0.0) {
  const std::size_t n = state.size();
  const auto faces = problem_interfaces(state, p);

  std::vector<FluxVector> left_mod(n + 1), right_mod(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const FluxVector f = hll_flux(faces[k].UL(), faces[k].UR(), p.g);
    const auto [s_left, s_right] = interface_sources(faces[k], p.g);
    left_mod[k] = f + s_left;
    right_mod[k] = f + s_right;
  }

  SpatialOperator phi{std::vector<double>(n), std::vector<double>(n)};
  const double dx = p.grid.dx;
  for (std::size_t i = 0; i < n; ++i) {
    const InterfaceStates& west = faces[i];
    const InterfaceStates& east = faces[i + 1];
    const double fc = centered_source(west.h_plus, east.h_minus, east.z_minus,
                                      west.z_plus, p.g);
    phi.h[i] = (left_mod[i + 1].mass - right_mod[i].mass) / dx;
    phi.q[i] = (left_mod[i + 1].momentum - right_mod[i].momentum - fc) / dx;
    if (!std::isfinite(phi.h[i]) || !std::isfinite(phi.q[i])) {
      throw NumericalFailure("non-finite numerical flux", i, time);
    }
  }
  return phi;
}

// -----------------------------------------------------------------------------
// Time stepping
// -----------------------------------------------------------------------------

/// dt = cfl * dx / max_i(|u_i| + sqrt(g h_i)) over wet cells, capped by dt_max.
inline double cfl_dt(const CellState& state, double g, double dx, double cfl,
                     double dt_max = std::numeric_limits<double>::infinity()) {
  double speed = 0.0;
  bool any_wet = false;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (state.h[i] < kDryHeight) continue;
    any_wet = true;
    speed = std::max(speed,
                     std::abs(state.q[i] / state.h[i]) + std::sqrt(g * state.h[i]));
  }
  if (!any_wet) {
    throw NumericalFailure("cannot compute a CFL time step on an all-dry state",
                           0, 0.0);
  }
  return std::min(cfl * dx / speed, dt_max);
}

/// Roundoff clipping record accumulated over a run.
struct ClipStats {
  std::size_t clipped_cells = 0;
  double max_clip = 0.0;  ///< largest |h| of a clipped negative height
};

/// Enforces h >= 0 and q = 0 on dry cells. Negative heights beyond the
/// roundoff tolerance are a numerical failure.
inline void sanitize(CellState& s, double time, ClipStats* stats) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s.h[i]) || !std::isfinite(s.q[i])) {
      throw NumericalFailure("non-finite state", i, time);
    }
    if (s.h[i] < 0.0) {
      if (s.h[i] < -kClipTolerance) {
        throw NumericalFailure("negative water height " + std::to_string(s.h[i]),
                               i, time);
      }
      if (stats != nullptr) {
        ++stats->clipped_cells;
        stats->max_clip = std::max(stats->max_clip, -s.h[i]);
      }
      s.h[i] = 0.0;
    }
    if (s.h[i] < kDryHeight) s.q[i] = 0.0;
  }
}

/// Forward Euler stage U - dt * rate(U), no sanitizing.
template <class RateFn>
CellState euler_stage(const CellState& u, double dt, RateFn&& rate) {
  const SpatialOperator phi = rate(u);
  CellState out = u;
  for (std::size_t i = 0; i < u.size(); ++i) {
    out.h[i] -= dt * phi.h[i];
    out.q[i] -= dt * phi.q[i];
  }
  return out;
}

/// Heun predictor-corrector driven by an arbitrary rate function:
/// U* = U - dt Phi(U), U** = U* - dt Phi(U*), U^{n+1} = (U + U**) / 2.
template <class RateFn>
CellState heun_step_with(const CellState& u, double dt, RateFn&& rate,
                         double time = 0.0, ClipStats* stats = nullptr) {
  CellState predicted = euler_stage(u, dt, rate);
  sanitize(predicted, time, stats);
  CellState corrected = euler_stage(predicted, dt, rate);
  for (std::size_t i = 0; i < u.size(); ++i) {
    corrected.h[i] = 0.5 * (u.h[i] + corrected.h[i]);
    corrected.q[i] = 0.5 * (u.q[i] + corrected.q[i]);
  }
  sanitize(corrected, time, stats);
  return corrected;
}

inline CellState euler_step(const CellState& u, double dt, const Problem& p,
                            double time = 0.0, ClipStats* stats = nullptr) {
  CellState out = euler_stage(
      u, dt, [&](const CellState& s) { return spatial_operator(s, p, time); });
  sanitize(out, time, stats);
  return out;
}

inline CellState heun_step(const CellState& u, double dt, const Problem& p,
                           double time = 0.0, ClipStats* stats = nullptr) {
  return heun_step_with(
      u, dt, [&](const CellState& s) { return spatial_operator(s, p, time); },
      time, stats);
}

/// Order 1 advances with Euler, order 2 with Heun.
inline CellState advance(const CellState& u, double dt, const Problem& p,
                         double time = 0.0, ClipStats* stats = nullptr) {
  return p.order == Order::First ? euler_step(u, dt, p, time, stats)
                                 : heun_step(u, dt, p, time, stats);
}

// -----------------------------------------------------------------------------
// Run configuration and steady-state driver
// -----------------------------------------------------------------------------

struct Region {
  double a = 1.5;
  double b = 3.0;
};

/// Inclined-plane experiment: supercritical inflow at x = 0, free outflow.
struct RunConfig {
  double length = 10.0;
  std::size_t n_cells = 100;
  double slope = 0.0;  ///< magnitude; the bed is z = -slope * x
  Order order = Order::First;
  std::optional<double> cfl;  ///< unset: 0.5 at order 1, 0.25 at order 2
  double h0 = 0.02;
  double q0 = 0.01;
  double g = kDefaultGravity;
  double t_final = 60.0;
  double steady_tol = 1e-10;
  Region region{};

  double alpha() const { return -slope; }
  double cfl_number() const {
    return cfl.value_or(order == Order::First ? 0.5 : 0.25);
  }
  double dx() const { return length / static_cast<double>(n_cells); }

  void validate() const {
    build_grid(length, n_cells);
    if (!(cfl_number() > 0.0 && cfl_number() <= 1.0)) {
      throw ConfigError("cfl must lie in (0, 1], got " +
                        std::to_string(cfl_number()));
    }
    if (!(g > 0.0)) throw ConfigError("g must be positive");
    if (!(t_final >= 0.0)) throw ConfigError("tfinal must be non-negative");
    if (!(steady_tol > 0.0)) throw ConfigError("steady tolerance must be positive");
    if (!(region.a < region.b)) throw ConfigError("region must satisfy a < b");
    Boundary::supercritical_inflow(h0, q0, g);
  }
};

inline Problem make_problem(const RunConfig& c) {
  c.validate();
  Problem p;
  p.grid = build_grid(c.length, c.n_cells);
  p.topo = topo_inclined(c.alpha(), p.grid);
  p.order = c.order;
  p.g = c.g;
  p.left = Boundary::supercritical_inflow(c.h0, c.q0, c.g);
  p.right = Boundary::outflow();
  return p;
}

/// Uniform (h0, q0) over the whole domain.
inline CellState initial_state(const RunConfig& c) {
  return CellState(std::vector<double>(c.n_cells, c.h0),
                   std::vector<double>(c.n_cells, c.q0));
}

struct StopRule {
  double t_final = 60.0;
  double steady_tol = 1e-10;
  double cfl = 0.5;
};

struct RunResult {
  CellState state;
  std::size_t steps = 0;
  double time = 0.0;
  bool steady = false;
  std::vector<double> residuals;  ///< max_i |U^{n+1} - U^n| / dt per step
  ClipStats clips;
};

/// Marches until the residual max_i max(|dh_i|, |dq_i|) / dt drops below
/// steady_tol or t_final is reached. The time step is capped at t_final / 10.
inline RunResult run_to_steady(const Problem& p, CellState initial,
                               const StopRule& rule) {
  RunResult r;
  r.state = std::move(initial);
  sanitize(r.state, 0.0, &r.clips);
  if (!(rule.t_final > 0.0)) return r;

  const double dt_max = rule.t_final / 10.0;
  while (r.time < rule.t_final) {
    double dt = cfl_dt(r.state, p.g, p.grid.dx, rule.cfl, dt_max);
    dt = std::min(dt, rule.t_final - r.time);
    CellState next = advance(r.state, dt, p, r.time, &r.clips);

    double residual = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
      residual = std::max({residual, std::abs(next.h[i] - r.state.h[i]),
                           std::abs(next.q[i] - r.state.q[i])});
    }
    residual /= dt;
    r.residuals.push_back(residual);
    r.state = std::move(next);
    r.time += dt;
    ++r.steps;
    if (residual < rule.steady_tol) {
      r.steady = true;
      break;
    }
  }
  return r;
}

inline RunResult run_to_steady(const RunConfig& c) {
  return run_to_steady(make_problem(c), initial_state(c),
                       StopRule{c.t_final, c.steady_tol, c.cfl_number()});
}

}  // namespace swb
