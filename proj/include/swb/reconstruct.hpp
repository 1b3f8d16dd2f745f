#pragma once

// Interface reconstruction: minmod-limited MUSCL on (u, h, h + z) with the
// discharge-conserving velocity correction, followed by the hydrostatic
// reconstruction of the interface heights.

#include <algorithm>
#include <cmath>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "swb/core.hpp"
#include "swb/flux.hpp"

namespace swb {

enum class Order { First = 1, Second = 2 };

inline Order order_from_int(int order) {
  if (order == 1) return Order::First;
  if (order == 2) return Order::Second;
  throw ConfigError("order must be 1 or 2, got " + std::to_string(order));
}

inline int to_int(Order order) { return static_cast<int>(order); }

/// Reconstructed data at one interface k, between padded cells k and k + 1.
/// "minus" is the value coming from the left cell, "plus" from the right.
struct InterfaceStates {
  double h_minus = 0.0;
  double h_plus = 0.0;
  double u_minus = 0.0;
  double u_plus = 0.0;
  double z_minus = 0.0;
  double z_plus = 0.0;
  double dz = 0.0;  ///< z_plus - z_minus
  double hL = 0.0;  ///< hydrostatically reconstructed left height
  double hR = 0.0;  ///< hydrostatically reconstructed right height
  double q_minus = 0.0;  ///< discharge trace, h_minus * u_minus up to roundoff
  double q_plus = 0.0;

  // An unclipped height keeps its discharge trace, so a flat bed feeds the
  // flux exactly the cell data.
  Conserved UL() const { return {hL, hL == h_minus ? q_minus : hL * u_minus}; }
  Conserved UR() const { return {hR, hR == h_plus ? q_plus : hR * u_plus}; }
};

struct HydrostaticHeights {
  double hL = 0.0;
  double hR = 0.0;
};

/// Per-cell limited slopes and the resulting one-sided face values
/// s_{i-1/2+} (left_face) and s_{i+1/2-} (right_face).
struct MusclValues {
  std::vector<double> slope;
  std::vector<double> left_face;
  std::vector<double> right_face;
};

inline double minmod(double a, double b) {
  if (a >= 0.0 && b >= 0.0) return std::min(a, b);
  if (a <= 0.0 && b <= 0.0) return std::max(a, b);
  return 0.0;
}

/// Minmod slopes; the first and last entries get a zero slope.
inline std::vector<double> limited_slopes(std::span<const double> s, double dx) {
  std::vector<double> ds(s.size(), 0.0);
  if (s.size() < 3) return ds;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    ds[i] = minmod((s[i] - s[i - 1]) / dx, (s[i + 1] - s[i]) / dx);
  }
  return ds;
}

inline MusclValues faces_from_slopes(std::span<const double> s,
                                     std::vector<double> slope, double dx) {
  MusclValues out;
  out.left_face.resize(s.size());
  out.right_face.resize(s.size());
  const double half = 0.5 * dx;
  for (std::size_t i = 0; i < s.size(); ++i) {
    out.left_face[i] = s[i] - half * slope[i];
    out.right_face[i] = s[i] + half * slope[i];
  }
  out.slope = std::move(slope);
  return out;
}

inline MusclValues muscl_scalar(std::span<const double> s, double dx) {
  if (s.size() < 3) {
    throw ContractError("muscl_scalar needs at least 3 cells");
  }
  return faces_from_slopes(s, limited_slopes(s, dx), dx);
}

/// Velocity face values with the height-weighted correction that keeps
/// (h_{i-1/2+} u_{i-1/2+} + h_{i+1/2-} u_{i+1/2-}) / 2 = h_i u_i.
/// Returns {u_{i-1/2+}, u_{i+1/2-}}; a dry cell gives {0, 0}.
inline std::pair<double, double> velocity_reconstruct(double u, double h,
                                                      double h_left_plus,
                                                      double h_right_minus,
                                                      double du, double dx) {
  if (!(h >= 0.0) || !std::isfinite(h)) {
    throw ContractError("velocity_reconstruct: invalid cell height");
  }
  if (h < kDryHeight) return {0.0, 0.0};
  const double half = 0.5 * dx * du;
  return {u - (h_right_minus / h) * half, u + (h_left_plus / h) * half};
}

/// hL = max(h- + z- - max(z-, z+), 0), hR = max(h+ + z+ - max(z-, z+), 0).
/// The bed difference is formed first so that a flat interface returns the
/// heights unchanged, bit for bit.
inline HydrostaticHeights hydrostatic_reconstruct(double h_minus, double h_plus,
                                                  double z_minus, double z_plus) {
  if (!(h_minus >= 0.0) || !(h_plus >= 0.0)) {
    throw ContractError("hydrostatic_reconstruct: negative water height");
  }
  const double z_star = std::max(z_minus, z_plus);
  return {std::max(h_minus - (z_star - z_minus), 0.0),
          std::max(h_plus - (z_star - z_plus), 0.0)};
}

/// Same reconstruction written in terms of the bed jump dz = z+ - z-:
/// hL = max(h- - max(0, dz), 0), hR = max(h+ + min(0, dz), 0).
inline HydrostaticHeights hydrostatic_reconstruct_jump(double h_minus,
                                                       double h_plus, double dz) {
  if (!(h_minus >= 0.0) || !(h_plus >= 0.0)) {
    throw ContractError("hydrostatic_reconstruct_jump: negative water height");
  }
  return {std::max(h_minus - std::max(0.0, dz), 0.0),
          std::max(h_plus + std::min(0.0, dz), 0.0)};
}

/// Cell data with one ghost cell at each end (index 0 and n + 1).
struct PaddedState {
  std::vector<double> h;
  std::vector<double> q;
  std::vector<double> z;

  std::size_t size() const noexcept { return h.size(); }
};

inline InterfaceStates make_interface(double h_minus, double h_plus,
                                      double u_minus, double u_plus,
                                      double z_minus, double z_plus) {
  InterfaceStates s;
  s.h_minus = h_minus;
  s.h_plus = h_plus;
  s.u_minus = u_minus;
  s.u_plus = u_plus;
  s.z_minus = z_minus;
  s.z_plus = z_plus;
  s.dz = z_plus - z_minus;
  const auto [hl, hr] = hydrostatic_reconstruct(h_minus, h_plus, z_minus, z_plus);
  s.hL = hl;
  s.hR = hr;
  s.q_minus = h_minus * u_minus;
  s.q_plus = h_plus * u_plus;
  return s;
}

/// Reconstructs all n + 1 interfaces of a padded state. At first order the
/// one-sided values are the adjacent cell values; at second order h, h + z
/// and u are MUSCL-reconstructed and z_{+-} = (h + z)_{+-} - h_{+-}.
inline std::vector<InterfaceStates> reconstruct_all(const PaddedState& cells,
                                                    Order order, double dx) {
  const std::size_t m = cells.size();
  if (m < 3 || cells.q.size() != m || cells.z.size() != m) {
    throw ContractError("reconstruct_all: inconsistent padded state");
  }
  std::vector<double> u(m);
  for (std::size_t c = 0; c < m; ++c) {
    if (!(cells.h[c] >= 0.0)) {
      throw ContractError("reconstruct_all: negative water height in cell " +
                          std::to_string(c));
    }
    u[c] = cells.h[c] < kDryHeight ? 0.0 : cells.q[c] / cells.h[c];
  }

  std::vector<InterfaceStates> out(m - 1);
  if (order == Order::First) {
    for (std::size_t k = 0; k + 1 < m; ++k) {
      out[k] = make_interface(cells.h[k], cells.h[k + 1], u[k], u[k + 1],
                              cells.z[k], cells.z[k + 1]);
      out[k].q_minus = u[k] == 0.0 ? 0.0 : cells.q[k];
      out[k].q_plus = u[k + 1] == 0.0 ? 0.0 : cells.q[k + 1];
    }
    return out;
  }

  std::vector<double> eta(m);
  for (std::size_t c = 0; c < m; ++c) eta[c] = cells.h[c] + cells.z[c];

  auto dh = limited_slopes(cells.h, dx);
  auto deta = limited_slopes(eta, dx);
  auto du = limited_slopes(u, dx);
  for (std::size_t c = 0; c < m; ++c) {
    if (cells.h[c] < kDryHeight) dh[c] = deta[c] = du[c] = 0.0;
  }
  const MusclValues h_faces = faces_from_slopes(cells.h, std::move(dh), dx);
  const MusclValues eta_faces = faces_from_slopes(eta, std::move(deta), dx);

  std::vector<double> h_left(m), h_right(m), z_left(m), z_right(m);
  std::vector<double> u_left(m), u_right(m);
  for (std::size_t c = 0; c < m; ++c) {
    h_left[c] = std::max(h_faces.left_face[c], 0.0);
    h_right[c] = std::max(h_faces.right_face[c], 0.0);
    z_left[c] = eta_faces.left_face[c] - h_left[c];
    z_right[c] = eta_faces.right_face[c] - h_right[c];
    std::tie(u_left[c], u_right[c]) = velocity_reconstruct(
        u[c], cells.h[c], h_left[c], h_right[c], du[c], dx);
  }
  for (std::size_t k = 0; k + 1 < m; ++k) {
    out[k] = make_interface(h_right[k], h_left[k + 1], u_right[k], u_left[k + 1],
                            z_right[k], z_left[k + 1]);
  }
  return out;
}

}  // namespace swb
