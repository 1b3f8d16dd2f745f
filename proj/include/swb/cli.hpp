#pragma once

// Command-line front end: option/config-file parsing, experiment
// orchestration and report emission.
//
//   swb <run|analytic|compare|criterion|sweep|refine> [options] [PROFILE]
//
// Exit codes: 0 success, 2 usage error, 3 numerical failure, 4 I/O error.

#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "swb/analytic.hpp"
#include "swb/diagnostics.hpp"
#include "swb/io.hpp"
#include "swb/scheme.hpp"

namespace swb::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 2,
  kNumerical = 3,
  kIo = 4,
};

class UsageError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

enum class Subcommand { Run, Analytic, Compare, Criterion, Sweep, Refine };

struct ExperimentSpec {
  Subcommand command = Subcommand::Run;
  RunConfig config;
  std::vector<double> slopes;  ///< sweep members
  std::vector<double> dxs;     ///< refine levels
  std::optional<std::string> out;
  std::optional<std::string> input;  ///< profile file for compare
};

inline const std::vector<double>& default_refinement_levels() {
  static const std::vector<double> levels{0.1, 0.05, 0.025, 0.0125};
  return levels;
}

// -----------------------------------------------------------------------------
// Parsing
// -----------------------------------------------------------------------------

namespace detail {

inline const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "slope", "slopes", "order", "dx",     "cells",      "cfl",    "tfinal",
      "h0",    "q0",     "g",     "region", "out",        "length", "steady-tol"};
  return keys;
}

inline double parse_number(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) {
    throw UsageError("invalid number for '" + key + "': '" + text + "'");
  }
  return v;
}

inline std::vector<double> parse_list(const std::string& key,
                                      const std::string& text) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) out.push_back(parse_number(key, item));
  if (out.empty()) throw UsageError("empty list for '" + key + "'");
  return out;
}

inline std::size_t parse_count(const std::string& key, const std::string& text) {
  const double v = parse_number(key, text);
  if (v < 0 || v != std::floor(v)) {
    throw UsageError("'" + key + "' must be a non-negative integer, got '" +
                     text + "'");
  }
  return static_cast<std::size_t>(v);
}

inline Subcommand parse_subcommand(const std::string& name) {
  static const std::map<std::string, Subcommand> table{
      {"run", Subcommand::Run},         {"analytic", Subcommand::Analytic},
      {"compare", Subcommand::Compare}, {"criterion", Subcommand::Criterion},
      {"sweep", Subcommand::Sweep},     {"refine", Subcommand::Refine}};
  const auto it = table.find(name);
  if (it == table.end()) throw UsageError("unknown subcommand '" + name + "'");
  return it->second;
}

/// Converts merged key/value text into a validated spec.
inline ExperimentSpec build_spec(Subcommand command,
                                 const std::map<std::string, std::string>& kv,
                                 std::optional<std::string> input) {
  for (const auto& [key, value] : kv) {
    if (!known_keys().contains(key)) throw UsageError("unknown key '" + key + "'");
  }
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };

  ExperimentSpec spec;
  spec.command = command;
  spec.input = std::move(input);
  RunConfig& c = spec.config;

  if (auto v = get("length")) c.length = parse_number("length", *v);
  if (auto v = get("order")) {
    const double o = parse_number("order", *v);
    if (o != 1.0 && o != 2.0) throw UsageError("'order' must be 1 or 2, got '" + *v + "'");
    c.order = order_from_int(static_cast<int>(o));
  }
  if (auto v = get("cfl")) c.cfl = parse_number("cfl", *v);
  if (auto v = get("tfinal")) c.t_final = parse_number("tfinal", *v);
  if (auto v = get("h0")) c.h0 = parse_number("h0", *v);
  if (auto v = get("q0")) c.q0 = parse_number("q0", *v);
  if (auto v = get("g")) c.g = parse_number("g", *v);
  if (auto v = get("steady-tol")) c.steady_tol = parse_number("steady-tol", *v);
  if (auto v = get("region")) {
    const auto r = parse_list("region", *v);
    if (r.size() != 2) throw UsageError("'region' needs two values A,B");
    c.region = {r[0], r[1]};
  }
  if (auto v = get("out")) spec.out = *v;

  const auto cells = get("cells");
  const auto dx = get("dx");
  if (cells) c.n_cells = parse_count("cells", *cells);
  if (dx) {
    spec.dxs = parse_list("dx", *dx);
    if (command != Subcommand::Refine) {
      if (spec.dxs.size() != 1) {
        throw UsageError("'dx' takes a list only for the refine subcommand");
      }
      std::size_t n;
      try {
        n = cells_for_spacing(c.length, spec.dxs.front());
      } catch (const ConfigError& e) {
        throw UsageError(std::string("'dx': ") + e.what());
      }
      if (cells && n != c.n_cells) {
        throw UsageError("'dx' and 'cells' are inconsistent");
      }
      c.n_cells = n;
    }
  }
  if (command == Subcommand::Refine && spec.dxs.empty()) {
    spec.dxs = default_refinement_levels();
  }

  const auto slope = get("slope");
  const auto slopes = get("slopes");
  if (slope) c.slope = parse_number("slope", *slope);
  if (slopes) spec.slopes = parse_list("slopes", *slopes);
  if (command == Subcommand::Sweep) {
    if (spec.slopes.empty() && slope) spec.slopes = {c.slope};
    if (spec.slopes.empty()) throw UsageError("missing required key 'slopes'");
    c.slope = spec.slopes.front();
  } else if (!slope) {
    throw UsageError("missing required key 'slope'");
  }
  for (double s : spec.slopes) {
    if (!(s >= 0.0)) throw UsageError("'slopes' entries must be non-negative");
  }
  if (!(c.slope >= 0.0)) {
    throw UsageError("'slope' is a magnitude and must be non-negative");
  }

  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  return spec;
}

}  // namespace detail

/// Parses command-line arguments (without the program name). Explicit
/// flags override the config file, which overrides built-in defaults.
/// Throws UsageError; returns std::nullopt when help was requested.
inline std::optional<ExperimentSpec> parse_config(const std::vector<std::string>& args,
                                                  std::ostream& help_out) {
  CLI::App app{"Well-balanced shallow-water laboratory", "swb"};
  std::string command;
  std::string input;
  std::map<std::string, std::string> flags;
  std::string config_path;

  app.add_option("subcommand", command,
                 "run | analytic | compare | criterion | sweep | refine")
      ->required();
  app.add_option("profile", input, "profile file read by compare");
  app.add_option("--config", config_path, "key = value configuration file");

  struct Flag {
    const char* name;
    const char* key;
    const char* help;
  };
  static const Flag table[] = {
      {"--slope", "slope", "slope magnitude, bed z = -S x"},
      {"--slopes", "slopes", "comma-separated slope magnitudes (sweep)"},
      {"--order", "order", "1 or 2"},
      {"--dx", "dx", "mesh spacing (comma list for refine)"},
      {"--cells", "cells", "number of cells"},
      {"--cfl", "cfl", "CFL number in (0, 1]"},
      {"--tfinal", "tfinal", "final time (s)"},
      {"--h0", "h0", "inflow height (m)"},
      {"--q0", "q0", "inflow discharge (m^2/s)"},
      {"--g", "g", "gravity (m/s^2)"},
      {"--region", "region", "comparison region A,B (m)"},
      {"--out", "out", "output file or directory"},
      {"--length", "length", "domain length (m)"},
      {"--steady-tol", "steady-tol", "steady-state residual tolerance"},
  };
  std::map<std::string, std::string> raw;
  std::vector<std::pair<std::string, CLI::Option*>> opts;
  for (const auto& f : table) {
    opts.emplace_back(f.key, app.add_option(f.name, raw[f.key], f.help));
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    help_out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  for (const auto& [key, opt] : opts) {
    if (opt->count() > 0) flags[key] = raw[key];
  }

  std::map<std::string, std::string> merged;
  if (!config_path.empty()) {
    merged = read_config_file(config_path);
  }
  for (const auto& [key, value] : flags) merged[key] = value;

  const Subcommand sub = detail::parse_subcommand(command);
  if (!input.empty() && sub != Subcommand::Compare) {
    throw UsageError("unexpected argument '" + input + "'");
  }
  return detail::build_spec(sub, merged,
                            input.empty() ? std::nullopt
                                          : std::optional<std::string>(input));
}

// -----------------------------------------------------------------------------
// Emission
// -----------------------------------------------------------------------------

/// Columns x, z, h, q, u, h_exact, flag for a computed steady state.
inline ProfileTable emit_profile(const CellState& state, const Topography& topo,
                                 std::span<const double> exact,
                                 const CriterionReport& criterion,
                                 const Grid& grid) {
  ProfileTable t;
  for (std::size_t i = 0; i < grid.n_cells; ++i) {
    t.x.push_back(grid.center(i));
    t.z.push_back(topo[i]);
    t.h.push_back(state.h[i]);
    t.q.push_back(state.q[i]);
    t.u.push_back(state.velocity(i));
    t.h_exact.push_back(exact[i]);
    t.flag.push_back(criterion.cell_flags[i] ? 1 : 0);
  }
  return t;
}

inline ProfileTable emit_profile(const ProfileReport& r) {
  return emit_profile(r.run.state, r.problem.topo, r.exact, r.criterion, r.grid);
}

/// Analytic-only columns x, z, h_exact.
inline ProfileTable emit_analytic_profile(const Grid& grid, const Topography& topo,
                                          std::span<const double> exact) {
  ProfileTable t;
  for (std::size_t i = 0; i < grid.n_cells; ++i) {
    t.x.push_back(grid.center(i));
    t.z.push_back(topo[i]);
    t.h_exact.push_back(exact[i]);
  }
  return t;
}

inline std::string summary_line(const ProfileReport& r) {
  std::ostringstream s;
  s << "slope " << format_number(r.config.slope) << " order "
    << to_int(r.config.order) << " cells " << r.grid.n_cells << " steady "
    << (r.run.steady ? 1 : 0) << " steps " << r.run.steps << " t "
    << format_number(r.run.time) << " region_rel_linf "
    << format_number(r.region_error.rel_linf) << " region_l1 "
    << format_number(r.region_error.l1) << " max_signed "
    << format_number(r.region_error.max_signed) << " overestimated "
    << format_number(r.region_error.overestimated) << " flagged_fraction "
    << format_number(r.criterion.flagged_fraction);
  return s.str();
}

inline void print_norms(std::ostream& out, const std::string& label,
                        const ErrorReport& e) {
  out << label << " cells " << e.cells << " l1 " << format_number(e.l1) << " l2 "
      << format_number(e.l2) << " linf " << format_number(e.linf) << " rel_l1 "
      << format_number(e.rel_l1) << " rel_l2 " << format_number(e.rel_l2)
      << " rel_linf " << format_number(e.rel_linf) << " max_signed "
      << format_number(e.max_signed) << " overestimated "
      << format_number(e.overestimated) << '\n';
}

inline std::string slope_tag(double slope) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", slope);
  return buf;
}

// -----------------------------------------------------------------------------
// Orchestration
// -----------------------------------------------------------------------------

namespace detail {

inline void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir + "'");
  }
}

inline int compare_file(const ExperimentSpec& spec, std::ostream& out) {
  const ProfileTable t = read_profile(*spec.input);
  if (!t.has_computed()) {
    throw IoError(*spec.input + ": profile has no computed columns");
  }
  if (t.rows() < 3) throw IoError(*spec.input + ": too few rows");
  const RunConfig& c = spec.config;
  const double dx = t.x[1] - t.x[0];
  const Grid grid = build_grid(dx * static_cast<double>(t.rows()), t.rows());
  for (std::size_t i = 0; i < t.rows(); ++i) {
    if (std::abs(t.x[i] - grid.center(i)) > 1e-9 * grid.length) {
      throw IoError(*spec.input + ": non-uniform cell centers");
    }
  }
  const auto exact =
      analytic_profile(grid, SteadyFlowParams(c.alpha(), c.h0, c.q0, c.g));
  out << "profile " << *spec.input << " slope " << format_number(c.slope) << '\n';
  print_norms(out, "region", error_norms(t.h, exact, grid, c.region));
  print_norms(out, "domain", error_norms(t.h, exact, grid, full_domain(grid)));
  return kSuccess;
}

}  // namespace detail

/// Runs one parsed experiment, writing the textual summary to `out`.
inline int run_experiment(const ExperimentSpec& spec, std::ostream& out) {
  const RunConfig& c = spec.config;
  switch (spec.command) {
    case Subcommand::Analytic: {
      const Grid grid = build_grid(c.length, c.n_cells);
      const Topography topo = topo_inclined(c.alpha(), grid);
      const auto exact =
          analytic_profile(grid, SteadyFlowParams(c.alpha(), c.h0, c.q0, c.g));
      const ProfileTable t = emit_analytic_profile(grid, topo, exact);
      if (spec.out) {
        write_profile(*spec.out, t);
      } else {
        write_profile(out, t);
      }
      return kSuccess;
    }
    case Subcommand::Run:
    case Subcommand::Criterion: {
      const ProfileReport r = evaluate(c);
      out << summary_line(r) << '\n';
      if (spec.command == Subcommand::Criterion) {
        const auto& cr = r.criterion;
        std::size_t left = 0, right = 0;
        for (std::size_t k = 0; k < cr.left_branch.size(); ++k) {
          left += cr.left_branch[k] ? 1 : 0;
          right += cr.right_branch[k] ? 1 : 0;
        }
        out << "interfaces " << cr.left_branch.size() << " flagged "
            << cr.flagged_count() << " left_branch " << left << " right_branch "
            << right << '\n';
        if (cr.flagged_range) {
          out << "flagged_range " << format_number(cr.flagged_range->first) << ' '
              << format_number(cr.flagged_range->second) << '\n';
        } else {
          out << "flagged_range none\n";
        }
        out << "whole_profile_invalid (h0 <= |alpha| dx) "
            << (slope_violates_criterion(c.h0, c.alpha(), r.grid.dx) ? 1 : 0)
            << " slope_threshold h0/dx " << format_number(c.h0 / r.grid.dx)
            << '\n';
      }
      if (spec.out) write_profile(*spec.out, emit_profile(r));
      return kSuccess;
    }
    case Subcommand::Compare: {
      if (spec.input) return detail::compare_file(spec, out);
      const ProfileReport r = evaluate(c);
      out << "slope " << format_number(c.slope) << " order " << to_int(c.order)
          << '\n';
      print_norms(out, "region", r.region_error);
      print_norms(out, "domain", r.domain_error);
      if (spec.out) write_profile(*spec.out, emit_profile(r));
      return kSuccess;
    }
    case Subcommand::Sweep: {
      const SuperpositionReport s = superposition_study(c, spec.slopes);
      const std::string dir = spec.out.value_or(".");
      detail::ensure_directory(dir);
      const std::string order = std::to_string(to_int(c.order));
      for (const auto& r : s.runs) {
        out << summary_line(r) << '\n';
        write_profile(dir + "/profile_slope" + slope_tag(r.config.slope) +
                          "_order" + order + ".dat",
                      emit_profile(r));
      }
      std::ostringstream summary;
      summary << "# superposition order " << order << " region "
              << format_number(c.region.a) << ' ' << format_number(c.region.b)
              << '\n';
      summary << "# slope rel_linf_error pairwise_max_relative_difference...\n";
      for (std::size_t i = 0; i < s.slopes.size(); ++i) {
        summary << format_number(s.slopes[i]) << ' '
                << format_number(s.rel_linf_error[i]);
        for (double d : s.pairwise[i]) summary << ' ' << format_number(d);
        summary << '\n';
      }
      const double ratio = s.max_pairwise() > 0.0
                               ? s.min_error() / s.max_pairwise()
                               : std::numeric_limits<double>::infinity();
      summary << "# max_pairwise " << format_number(s.max_pairwise())
              << " min_error " << format_number(s.min_error()) << " ratio "
              << format_number(ratio) << '\n';
      const std::string path = dir + "/superposition_order" + order + ".txt";
      std::ofstream f(path);
      if (!f) throw IoError("cannot write '" + path + "'");
      f << summary.str();
      out << summary.str();
      return kSuccess;
    }
    case Subcommand::Refine: {
      const auto rows = refinement_study(c, spec.dxs);
      std::ostringstream table;
      table << "# dx cells l1 flagged_fraction steady\n";
      for (const auto& r : rows) {
        table << format_number(r.dx) << ' ' << r.n_cells << ' '
              << format_number(r.l1) << ' ' << format_number(r.flagged_fraction)
              << ' ' << (r.steady ? 1 : 0) << '\n';
      }
      out << table.str();
      if (spec.out) {
        std::ofstream f(*spec.out);
        if (!f) throw IoError("cannot write '" + *spec.out + "'");
        f << table.str();
      }
      return kSuccess;
    }
  }
  return kUsage;
}

/// Full CLI entry point with exit-code mapping.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  try {
    const auto spec = parse_config(args, out);
    if (!spec) return kSuccess;
    return run_experiment(*spec, out);
  } catch (const IoError& e) {
    err << "swb: I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const ConfigError& e) {
    err << "swb: usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericalFailure& e) {
    err << "swb: numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const DomainError& e) {
    err << "swb: numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const ContractError& e) {
    err << "swb: numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
}

}  // namespace swb::cli
