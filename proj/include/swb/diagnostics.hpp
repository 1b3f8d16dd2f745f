#pragma once

// Detection of the hydrostatic-reconstruction failure regime, error norms
// against the analytic profile, and the refinement/superposition studies.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "swb/analytic.hpp"
#include "swb/core.hpp"
#include "swb/reconstruct.hpp"
#include "swb/scheme.hpp"

namespace swb {

// -----------------------------------------------------------------------------
// Non-validity criterion
// -----------------------------------------------------------------------------

/// dz >= h_- >= 0: the left height is clipped to zero.
inline bool criterion_left(double dz, double h_minus) {
  return dz >= h_minus && h_minus >= 0.0;
}

/// -dz >= h_+ >= 0: the right height is clipped to zero.
inline bool criterion_right(double dz, double h_plus) {
  return -dz >= h_plus && h_plus >= 0.0;
}

/// First-order bed jump on an inclined plane is |alpha| dx, so a
/// characteristic height h* is invalid once h* <= |alpha| dx.
inline bool slope_violates_criterion(double h_star, double alpha, double dx) {
  return h_star <= std::abs(alpha) * dx;
}

struct CriterionReport {
  std::vector<bool> left_branch;   ///< per interface
  std::vector<bool> right_branch;  ///< per interface
  std::vector<bool> cell_flags;    ///< cell touched by a clipped height
  double flagged_fraction = 0.0;   ///< flagged interfaces / all interfaces
  std::optional<std::pair<double, double>> flagged_range;  ///< interface x

  bool flagged(std::size_t k) const { return left_branch[k] || right_branch[k]; }
  std::size_t flagged_count() const {
    std::size_t c = 0;
    for (std::size_t k = 0; k < left_branch.size(); ++k) c += flagged(k) ? 1 : 0;
    return c;
  }
};

/// Evaluates both branches on the n_cells + 1 interfaces of a grid. A left
/// hit at interface k flags cell k - 1 (the owner of h_-); a right hit flags
/// cell k (the owner of h_+).
inline CriterionReport criterion_flags(std::span<const InterfaceStates> faces,
                                       const Grid& grid) {
  if (faces.size() != grid.n_cells + 1) {
    throw ContractError("criterion_flags: expected n_cells + 1 interfaces");
  }
  CriterionReport r;
  const std::size_t m = faces.size();
  r.left_branch.resize(m);
  r.right_branch.resize(m);
  r.cell_flags.assign(grid.n_cells, false);
  std::size_t count = 0;
  for (std::size_t k = 0; k < m; ++k) {
    r.left_branch[k] = criterion_left(faces[k].dz, faces[k].h_minus);
    r.right_branch[k] = criterion_right(faces[k].dz, faces[k].h_plus);
    if (r.left_branch[k] && k >= 1) r.cell_flags[k - 1] = true;
    if (r.right_branch[k] && k < grid.n_cells) r.cell_flags[k] = true;
    if (r.flagged(k)) {
      ++count;
      const double x = grid.interface_position(k);
      if (!r.flagged_range) {
        r.flagged_range = std::make_pair(x, x);
      } else {
        r.flagged_range->second = x;
      }
    }
  }
  r.flagged_fraction = static_cast<double>(count) / static_cast<double>(m);
  return r;
}

inline CriterionReport criterion_flags(const CellState& state, const Problem& p) {
  const auto faces = problem_interfaces(state, p);
  return criterion_flags(faces, p.grid);
}

// -----------------------------------------------------------------------------
// Error norms
// -----------------------------------------------------------------------------

struct ErrorReport {
  std::size_t cells = 0;
  double l1 = 0.0;    ///< sum |e| dx
  double l2 = 0.0;    ///< sqrt(sum e^2 dx)
  double linf = 0.0;  ///< max |e|
  double rel_l1 = 0.0;
  double rel_l2 = 0.0;
  double rel_linf = 0.0;       ///< max |e_i| / |h_exact_i|
  double max_signed = 0.0;     ///< max (computed - exact)
  double overestimated = 0.0;  ///< fraction of cells with computed > exact
};

/// Indices of cells whose centers lie in [region.a, region.b].
inline std::vector<std::size_t> cells_in_region(const Grid& grid,
                                                const Region& region) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < grid.n_cells; ++i) {
    const double x = grid.center(i);
    if (x >= region.a && x <= region.b) idx.push_back(i);
  }
  return idx;
}

inline Region full_domain(const Grid& grid) { return {0.0, grid.length}; }

inline ErrorReport error_norms(std::span<const double> computed,
                               std::span<const double> exact, const Grid& grid,
                               const Region& region) {
  if (computed.size() != exact.size() || computed.size() != grid.n_cells) {
    throw ContractError("error_norms: array lengths differ from the grid");
  }
  const auto idx = cells_in_region(grid, region);
  if (idx.empty()) {
    throw ConfigError("error_norms: region [" + std::to_string(region.a) + ", " +
                      std::to_string(region.b) + "] contains no cell center");
  }
  ErrorReport r;
  r.cells = idx.size();
  double ref_l1 = 0.0, ref_l2 = 0.0, sq = 0.0;
  std::size_t over = 0;
  r.max_signed = -std::numeric_limits<double>::infinity();
  for (std::size_t i : idx) {
    const double e = computed[i] - exact[i];
    const double ae = std::abs(e);
    r.l1 += ae;
    sq += e * e;
    r.linf = std::max(r.linf, ae);
    r.max_signed = std::max(r.max_signed, e);
    ref_l1 += std::abs(exact[i]);
    ref_l2 += exact[i] * exact[i];
    if (exact[i] != 0.0) r.rel_linf = std::max(r.rel_linf, ae / std::abs(exact[i]));
    if (e > 0.0) ++over;
  }
  r.l1 *= grid.dx;
  r.l2 = std::sqrt(sq * grid.dx);
  ref_l1 *= grid.dx;
  ref_l2 = std::sqrt(ref_l2 * grid.dx);
  r.rel_l1 = ref_l1 > 0.0 ? r.l1 / ref_l1 : 0.0;
  r.rel_l2 = ref_l2 > 0.0 ? r.l2 / ref_l2 : 0.0;
  r.overestimated = static_cast<double>(over) / static_cast<double>(idx.size());
  return r;
}

// -----------------------------------------------------------------------------
// Studies
// -----------------------------------------------------------------------------

/// Steady run of one configuration together with its oracle and diagnostics.
struct ProfileReport {
  RunConfig config;
  Grid grid;
  Problem problem;
  RunResult run;
  std::vector<double> exact;
  CriterionReport criterion;
  ErrorReport region_error;
  ErrorReport domain_error;
};

inline ProfileReport evaluate(const RunConfig& c) {
  ProfileReport r;
  r.config = c;
  r.problem = make_problem(c);
  r.grid = r.problem.grid;
  r.run = run_to_steady(r.problem, initial_state(c),
                        StopRule{c.t_final, c.steady_tol, c.cfl_number()});
  r.exact = analytic_profile(r.grid, SteadyFlowParams(c.alpha(), c.h0, c.q0, c.g));
  r.criterion = criterion_flags(r.run.state, r.problem);
  r.region_error = error_norms(r.run.state.h, r.exact, r.grid, c.region);
  r.domain_error = error_norms(r.run.state.h, r.exact, r.grid, full_domain(r.grid));
  return r;
}

/// Runs independent configurations concurrently; results keep input order.
inline std::vector<ProfileReport> evaluate_all(const std::vector<RunConfig>& cs) {
  std::vector<std::future<ProfileReport>> jobs;
  jobs.reserve(cs.size());
  for (const auto& c : cs) {
    jobs.push_back(std::async(std::launch::async, [c] { return evaluate(c); }));
  }
  std::vector<ProfileReport> out;
  out.reserve(cs.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

/// Cell count for a requested spacing; dx must divide the domain length.
inline std::size_t cells_for_spacing(double length, double dx) {
  if (!(dx > 0.0)) throw ConfigError("dx must be positive");
  const double n = std::round(length / dx);
  if (n < 3 || std::abs(n * dx - length) > 1e-9 * length) {
    throw ConfigError("dx = " + std::to_string(dx) +
                      " does not divide the domain length " +
                      std::to_string(length));
  }
  return static_cast<std::size_t>(n);
}

struct RefinementRow {
  double dx = 0.0;
  std::size_t n_cells = 0;
  double l1 = 0.0;
  double flagged_fraction = 0.0;
  bool steady = false;
};

inline std::vector<RefinementRow> refinement_study(const RunConfig& base,
                                                   const std::vector<double>& dxs) {
  if (dxs.empty()) throw ConfigError("refinement study needs at least one dx");
  for (std::size_t i = 1; i < dxs.size(); ++i) {
    if (!(dxs[i] < dxs[i - 1])) {
      throw ConfigError("dx list must be strictly decreasing");
    }
  }
  std::vector<RunConfig> cs;
  for (double dx : dxs) {
    RunConfig c = base;
    c.n_cells = cells_for_spacing(base.length, dx);
    cs.push_back(c);
  }
  const auto reports = evaluate_all(cs);
  std::vector<RefinementRow> rows;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    rows.push_back({r.grid.dx, r.grid.n_cells, r.region_error.l1,
                    r.criterion.flagged_fraction, r.run.steady});
  }
  return rows;
}

/// max_i |a_i - b_i| / min(|a_i|, |b_i|) over the region cells.
inline double max_relative_difference(std::span<const double> a,
                                      std::span<const double> b,
                                      std::span<const std::size_t> cells) {
  double d = 0.0;
  for (std::size_t i : cells) {
    const double diff = std::abs(a[i] - b[i]);
    if (diff == 0.0) continue;
    d = std::max(d, diff / std::min(std::abs(a[i]), std::abs(b[i])));
  }
  return d;
}

struct SuperpositionReport {
  std::vector<double> slopes;
  std::vector<std::vector<double>> pairwise;  ///< symmetric, zero diagonal
  std::vector<double> rel_linf_error;         ///< vs own analytic profile
  std::vector<ProfileReport> runs;

  double max_pairwise() const {
    double m = 0.0;
    for (const auto& row : pairwise)
      for (double v : row) m = std::max(m, v);
    return m;
  }
  double min_offdiagonal_pairwise() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pairwise.size(); ++i)
      for (std::size_t j = 0; j < pairwise.size(); ++j)
        if (i != j) m = std::min(m, pairwise[i][j]);
    return m;
  }
  double min_error() const {
    return *std::min_element(rel_linf_error.begin(), rel_linf_error.end());
  }
};

/// Steady profiles for several slopes on a shared grid and order, compared
/// against each other and against their own analytic solutions over the
/// base config's region.
inline SuperpositionReport superposition_study(const RunConfig& base,
                                               const std::vector<double>& slopes) {
  if (slopes.empty()) throw ConfigError("superposition study needs slopes");
  std::vector<RunConfig> cs;
  for (double s : slopes) {
    RunConfig c = base;
    c.slope = s;
    cs.push_back(c);
  }
  SuperpositionReport r;
  r.slopes = slopes;
  r.runs = evaluate_all(cs);
  const Grid& grid = r.runs.front().grid;
  const auto cells = cells_in_region(grid, base.region);
  const std::size_t m = slopes.size();
  r.pairwise.assign(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    r.rel_linf_error.push_back(r.runs[i].region_error.rel_linf);
    for (std::size_t j = i + 1; j < m; ++j) {
      const double d = max_relative_difference(r.runs[i].run.state.h,
                                               r.runs[j].run.state.h, cells);
      r.pairwise[i][j] = r.pairwise[j][i] = d;
    }
  }
  return r;
}

}  // namespace swb
