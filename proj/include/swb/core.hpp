#pragma once

// Grids, cell states, topography and physical parameters shared by the
// shallow-water well-balanced solver.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace swb {

/// Heights below this value are treated as dry: the velocity is taken as
/// zero and q is forced to zero, but the height itself is kept.
inline constexpr double kDryHeight = 1e-10;

inline constexpr double kDefaultGravity = 9.81;

// -----------------------------------------------------------------------------
// Error types
// -----------------------------------------------------------------------------

/// Invalid user-supplied configuration (bad grid, subcritical inflow, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A precondition on a numerical routine was violated by the caller.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The analytic solver cannot bracket the requested root.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The simulation produced a non-finite value or a large negative height.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, std::size_t cell, double time)
      : std::runtime_error(what + " (cell " + std::to_string(cell) +
                           ", t = " + std::to_string(time) + ")"),
        cell_(cell),
        time_(time) {}

  std::size_t cell() const noexcept { return cell_; }
  double time() const noexcept { return time_; }

 private:
  std::size_t cell_;
  double time_;
};

// -----------------------------------------------------------------------------
// Domain types
// -----------------------------------------------------------------------------

struct PhysParams {
  double g = kDefaultGravity;
};

/// Uniform 1D grid on [0, length] with cell centers at (i + 1/2) dx.
struct Grid {
  double length = 0.0;
  std::size_t n_cells = 0;
  double dx = 0.0;

  double center(std::size_t i) const {
    return (static_cast<double>(i) + 0.5) * dx;
  }
  /// Position of interface k (k = 0 is the inlet, k = n_cells the outlet).
  double interface_position(std::size_t k) const {
    return static_cast<double>(k) * dx;
  }
  std::vector<double> centers() const {
    std::vector<double> x(n_cells);
    for (std::size_t i = 0; i < n_cells; ++i) x[i] = center(i);
    return x;
  }
};

inline Grid build_grid(double length, std::size_t n_cells) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw ConfigError("grid length must be positive, got " +
                      std::to_string(length));
  }
  if (n_cells < 3) {
    throw ConfigError("grid needs at least 3 cells, got " +
                      std::to_string(n_cells));
  }
  return Grid{length, n_cells, length / static_cast<double>(n_cells)};
}

/// Conserved per-cell averages.
struct CellState {
  std::vector<double> h;
  std::vector<double> q;

  CellState() = default;
  explicit CellState(std::size_t n) : h(n, 0.0), q(n, 0.0) {}
  CellState(std::vector<double> heights, std::vector<double> discharges)
      : h(std::move(heights)), q(std::move(discharges)) {
    if (h.size() != q.size()) {
      throw ContractError("CellState: h and q lengths differ");
    }
  }

  std::size_t size() const noexcept { return h.size(); }

  double velocity(std::size_t i) const {
    return h[i] < kDryHeight ? 0.0 : q[i] / h[i];
  }

  double total_volume(double dx) const {
    double sum = 0.0;
    for (double hi : h) sum += hi;
    return sum * dx;
  }

  friend bool operator==(const CellState&, const CellState&) = default;
};

/// Bed elevation. Cell values are fixed after construction; the ghost
/// values extend the bed linearly past both ends of the domain.
class Topography {
 public:
  Topography() = default;
  explicit Topography(std::vector<double> cell_values)
      : z_(std::move(cell_values)) {
    if (z_.size() < 2) {
      throw ContractError("Topography needs at least two cells");
    }
    const std::size_t n = z_.size();
    ghost_left_ = 2.0 * z_[0] - z_[1];
    ghost_right_ = 2.0 * z_[n - 1] - z_[n - 2];
  }

  std::size_t size() const noexcept { return z_.size(); }
  const std::vector<double>& z() const noexcept { return z_; }
  double operator[](std::size_t i) const { return z_[i]; }
  double ghost_left() const noexcept { return ghost_left_; }
  double ghost_right() const noexcept { return ghost_right_; }

  /// First-order one-sided values z_{k-} (left of interface k) over the
  /// n + 1 interfaces, ghosts included.
  std::vector<double> z_minus() const {
    std::vector<double> out(z_.size() + 1);
    out[0] = ghost_left_;
    for (std::size_t k = 1; k <= z_.size(); ++k) out[k] = z_[k - 1];
    return out;
  }
  /// First-order one-sided values z_{k+} (right of interface k).
  std::vector<double> z_plus() const {
    std::vector<double> out(z_.size() + 1);
    for (std::size_t k = 0; k < z_.size(); ++k) out[k] = z_[k];
    out[z_.size()] = ghost_right_;
    return out;
  }

 private:
  std::vector<double> z_;
  double ghost_left_ = 0.0;
  double ghost_right_ = 0.0;
};

/// Inclined plane z(x) = slope * x evaluated at cell centers.
inline Topography topo_inclined(double slope, const Grid& grid) {
  std::vector<double> z(grid.n_cells);
  for (std::size_t i = 0; i < grid.n_cells; ++i) z[i] = slope * grid.center(i);
  return Topography(std::move(z));
}

}  // namespace swb
