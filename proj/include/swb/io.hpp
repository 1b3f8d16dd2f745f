#pragma once

// Plain-text file formats: flat "key = value" configuration files and
// space-separated profile files.

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "swb/core.hpp"

namespace swb {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest text that reads back to the same double (17 significant digits).
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

/// One "key = value" pair per line; '#' starts a comment. Keys are returned
/// as written; duplicate keys keep the last value.
inline std::map<std::string, std::string> parse_key_values(std::istream& in,
                                                           const std::string& source) {
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(lineno) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key");
    }
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

inline std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  return parse_key_values(in, path);
}

/// Columns of a profile file. Computed columns are empty for analytic-only
/// profiles.
struct ProfileTable {
  std::vector<double> x;
  std::vector<double> z;
  std::vector<double> h;
  std::vector<double> q;
  std::vector<double> u;
  std::vector<double> h_exact;
  std::vector<int> flag;

  bool has_computed() const { return !h.empty(); }
  std::size_t rows() const { return x.size(); }
};

inline constexpr const char* kProfileHeader = "# x z h q u h_exact flag";
inline constexpr const char* kAnalyticHeader = "# x z h_exact";

inline void write_profile(std::ostream& out, const ProfileTable& t) {
  const bool computed = t.has_computed();
  out << (computed ? kProfileHeader : kAnalyticHeader) << '\n';
  for (std::size_t i = 0; i < t.rows(); ++i) {
    out << format_number(t.x[i]) << ' ' << format_number(t.z[i]);
    if (computed) {
      out << ' ' << format_number(t.h[i]) << ' ' << format_number(t.q[i]) << ' '
          << format_number(t.u[i]);
    }
    out << ' ' << format_number(t.h_exact[i]);
    if (computed) out << ' ' << t.flag[i];
    out << '\n';
  }
}

inline void write_profile(const std::string& path, const ProfileTable& t) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write profile '" + path + "'");
  write_profile(out, t);
  out.flush();
  if (!out) throw IoError("error while writing profile '" + path + "'");
}

inline ProfileTable read_profile(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw IoError(source + ": empty profile file");
  line = trim(line);
  bool computed;
  if (line == kProfileHeader) {
    computed = true;
  } else if (line == kAnalyticHeader) {
    computed = false;
  } else {
    throw IoError(source + ": unrecognised profile header '" + line + "'");
  }
  ProfileTable t;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::istringstream row(line);
    double x, z, h = 0, q = 0, u = 0, he;
    int flag = 0;
    bool ok = static_cast<bool>(row >> x >> z);
    if (computed) ok = ok && static_cast<bool>(row >> h >> q >> u);
    ok = ok && static_cast<bool>(row >> he);
    if (computed) ok = ok && static_cast<bool>(row >> flag);
    if (!ok) {
      throw IoError(source + ":" + std::to_string(lineno) + ": malformed row");
    }
    t.x.push_back(x);
    t.z.push_back(z);
    t.h_exact.push_back(he);
    if (computed) {
      t.h.push_back(h);
      t.q.push_back(q);
      t.u.push_back(u);
      t.flag.push_back(flag);
    }
  }
  return t;
}

inline ProfileTable read_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open profile '" + path + "'");
  return read_profile(in, path);
}

}  // namespace swb
