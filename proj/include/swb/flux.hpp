#pragma once

// Physical flux of the homogeneous shallow-water system and the two-state
// numerical fluxes used at cell interfaces.

#include <algorithm>
#include <cmath>

#include "swb/core.hpp"

namespace swb {

/// Conserved state (h, q = h u) on one side of an interface.
struct Conserved {
  double h = 0.0;
  double q = 0.0;

  bool dry() const noexcept { return h < kDryHeight; }
  double velocity() const noexcept { return dry() ? 0.0 : q / h; }

  friend bool operator==(const Conserved&, const Conserved&) = default;
};

struct FluxVector {
  double mass = 0.0;
  double momentum = 0.0;

  FluxVector& operator+=(const FluxVector& o) {
    mass += o.mass;
    momentum += o.momentum;
    return *this;
  }
  friend FluxVector operator+(FluxVector a, const FluxVector& b) { return a += b; }
  friend bool operator==(const FluxVector&, const FluxVector&) = default;
};

struct WaveSpeeds {
  double c1 = 0.0;  ///< leftmost signal speed
  double c2 = 0.0;  ///< rightmost signal speed
};

/// F(U) = (q, q^2/h + g h^2/2); dry states carry no flux.
inline FluxVector physical_flux(double h, double q, double g) {
  if (h < kDryHeight) return {0.0, 0.0};
  return {q, q * q / h + 0.5 * g * h * h};
}

inline FluxVector physical_flux(const Conserved& u, double g) {
  return physical_flux(u.h, u.q, g);
}

namespace detail {

inline void require_nonnegative(const Conserved& left, const Conserved& right,
                                const char* who) {
  if (!(left.h >= 0.0) || !(right.h >= 0.0)) {
    throw ContractError(std::string(who) + ": negative or NaN water height");
  }
}

}  // namespace detail

/// Two-speed estimates min/max of u -+ sqrt(g h) over both states. A dry
/// side contributes u = 0 and a zero celerity.
inline WaveSpeeds hll_wave_speeds(const Conserved& left, const Conserved& right,
                                  double g) {
  const double ul = left.velocity();
  const double ur = right.velocity();
  const double al = left.dry() ? 0.0 : std::sqrt(g * left.h);
  const double ar = right.dry() ? 0.0 : std::sqrt(g * right.h);
  return {std::min(ul - al, ur - ar), std::max(ul + al, ur + ar)};
}

/// HLL flux:
///   F_L                                            if c1 >= 0
///   F_R                                            if c2 <= 0
///   (c2 F_L - c1 F_R + c1 c2 (U_R - U_L)) / (c2 - c1)   otherwise
inline FluxVector hll_flux(const Conserved& left, const Conserved& right,
                           double g) {
  detail::require_nonnegative(left, right, "hll_flux");
  if (left.dry() && right.dry()) return {0.0, 0.0};

  const Conserved l{left.h, left.dry() ? 0.0 : left.q};
  const Conserved r{right.h, right.dry() ? 0.0 : right.q};
  const auto [c1, c2] = hll_wave_speeds(l, r, g);
  const FluxVector fl = physical_flux(l, g);
  const FluxVector fr = physical_flux(r, g);

  if (c1 >= 0.0) return fl;
  if (c2 <= 0.0) return fr;
  const double inv = 1.0 / (c2 - c1);
  return {(c2 * fl.mass - c1 * fr.mass + c1 * c2 * (r.h - l.h)) * inv,
          (c2 * fl.momentum - c1 * fr.momentum + c1 * c2 * (r.q - l.q)) * inv};
}

/// Local Lax-Friedrichs flux, kept as an independent cross-check of hll_flux.
inline FluxVector rusanov_flux(const Conserved& left, const Conserved& right,
                               double g) {
  detail::require_nonnegative(left, right, "rusanov_flux");
  if (left.dry() && right.dry()) return {0.0, 0.0};

  const Conserved l{left.h, left.dry() ? 0.0 : left.q};
  const Conserved r{right.h, right.dry() ? 0.0 : right.q};
  const double c =
      std::max(std::abs(l.velocity()) + (l.dry() ? 0.0 : std::sqrt(g * l.h)),
               std::abs(r.velocity()) + (r.dry() ? 0.0 : std::sqrt(g * r.h)));
  const FluxVector fl = physical_flux(l, g);
  const FluxVector fr = physical_flux(r, g);
  return {0.5 * (fl.mass + fr.mass) - 0.5 * c * (r.h - l.h),
          0.5 * (fl.momentum + fr.momentum) - 0.5 * c * (r.q - l.q)};
}

}  // namespace swb
