#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "superint/ladders.hpp"
#include "superint/phase_point.hpp"
#include "superint/systems.hpp"

namespace superint {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Run configuration, parsed from a strict line-oriented key = value file
/// with bracketed section headers. Unknown sections, unknown keys and
/// duplicate keys are errors.
struct RunConfig {
  SystemSpec system;
  double t_end = 20.0;
  double tolerance = 1e-10;
  std::vector<double> x0;
  std::vector<double> p0;
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::pair<int, int>> exponents;  // [integrals] m
  std::string out_dir = "out";
  std::string basename = "run";
  std::vector<std::string> formats{"csv", "svg"};

  PhasePoint initial_state() const { return PhasePoint(x0, p0); }
  bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline double parse_double(std::string_view tok, int lineno) {
  const std::string s(trim(tok));
  if (s.empty()) throw ConfigError("line " + std::to_string(lineno) +
                                   ": empty numeric value");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size())
    throw ConfigError("line " + std::to_string(lineno) + ": bad number '" +
                      s + "'");
  return v;
}

inline long parse_int(std::string_view tok, int lineno) {
  const std::string s(trim(tok));
  long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ConfigError("line " + std::to_string(lineno) + ": bad integer '" +
                      s + "'");
  return v;
}

inline std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(s.substr(start)));
      break;
    }
    out.push_back(trim(s.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

inline std::vector<double> parse_double_list(std::string_view s, int lineno) {
  std::vector<double> out;
  for (auto tok : split_list(s)) out.push_back(parse_double(tok, lineno));
  return out;
}

inline std::vector<long> parse_int_list(std::string_view s, int lineno) {
  std::vector<long> out;
  for (auto tok : split_list(s)) out.push_back(parse_int(tok, lineno));
  return out;
}

inline std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

inline RunConfig parse_config(std::string_view text) {
  using namespace detail;
  RunConfig cfg;
  cfg.system.axes.clear();

  std::vector<long> ks;
  std::vector<double> bs;
  std::vector<long> eps;
  bool have_omega = false;

  std::string section;
  std::vector<std::string> seen;  // section.key pairs
  std::istringstream is{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) +
                          ": malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "system" && section != "run" && section != "integrals" &&
          section != "outputs")
        throw ConfigError("line " + std::to_string(lineno) +
                          ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key = value, got '" + std::string(line) +
                        "'");
    const std::string key{trim(line.substr(0, eq))};
    const std::string_view value = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError("line " + std::to_string(lineno) +
                        ": key outside any section");
    const std::string qualified = section + "." + key;
    for (const auto& s : seen)
      if (s == qualified)
        throw ConfigError("line " + std::to_string(lineno) +
                          ": duplicate key " + qualified);
    seen.push_back(qualified);

    if (section == "system") {
      if (key == "omega") {
        cfg.system.omega = parse_double(value, lineno);
        have_omega = true;
      } else if (key == "k") {
        ks = parse_int_list(value, lineno);
      } else if (key == "b") {
        bs = parse_double_list(value, lineno);
      } else if (key == "epsilon") {
        eps = parse_int_list(value, lineno);
      } else {
        throw ConfigError("line " + std::to_string(lineno) +
                          ": unknown key '" + key + "' in [system]");
      }
    } else if (section == "run") {
      if (key == "t_end") {
        cfg.t_end = parse_double(value, lineno);
      } else if (key == "tolerance") {
        cfg.tolerance = parse_double(value, lineno);
      } else if (key == "x0") {
        cfg.x0 = parse_double_list(value, lineno);
      } else if (key == "p0") {
        cfg.p0 = parse_double_list(value, lineno);
      } else if (key == "seed") {
        const long s = parse_int(value, lineno);
        if (s < 0)
          throw ConfigError("line " + std::to_string(lineno) +
                            ": seed must be nonnegative");
        cfg.seed = static_cast<std::uint64_t>(s);
      } else {
        throw ConfigError("line " + std::to_string(lineno) +
                          ": unknown key '" + key + "' in [run]");
      }
    } else if (section == "integrals") {
      if (key == "m") {
        const auto ms = parse_int_list(value, lineno);
        if (ms.size() != 2)
          throw ConfigError("line " + std::to_string(lineno) +
                            ": m needs exactly two entries");
        cfg.exponents = {static_cast<int>(ms[0]), static_cast<int>(ms[1])};
      } else {
        throw ConfigError("line " + std::to_string(lineno) +
                          ": unknown key '" + key + "' in [integrals]");
      }
    } else {  // outputs
      if (key == "dir") {
        cfg.out_dir = std::string(value);
      } else if (key == "basename") {
        cfg.basename = std::string(value);
      } else if (key == "formats") {
        cfg.formats.clear();
        for (auto tok : split_list(value)) {
          if (tok != "csv" && tok != "svg")
            throw ConfigError("line " + std::to_string(lineno) +
                              ": unknown format '" + std::string(tok) + "'");
          cfg.formats.emplace_back(tok);
        }
      } else {
        throw ConfigError("line " + std::to_string(lineno) +
                          ": unknown key '" + key + "' in [outputs]");
      }
    }
  }

  if (!have_omega) throw ConfigError("[system] omega is required");
  if (ks.empty()) throw ConfigError("[system] k is required");
  if (bs.size() != ks.size() || eps.size() != ks.size())
    throw ConfigError("[system] k, b, epsilon need matching lengths");
  for (std::size_t j = 0; j < ks.size(); ++j) {
    if (ks[j] < 1) throw ConfigError("[system] k entries must be >= 1");
    if (eps[j] != 1 && eps[j] != -1)
      throw ConfigError("[system] epsilon entries must be +1 or -1");
    cfg.system.axes.push_back(
        {static_cast<int>(ks[j]), bs[j], static_cast<int>(eps[j])});
  }
  const int n = cfg.system.dim();
  if (cfg.x0.empty()) cfg.x0.assign(n, 1.0);
  if (cfg.p0.empty()) cfg.p0.assign(n, 0.0);
  if (static_cast<int>(cfg.x0.size()) != n ||
      static_cast<int>(cfg.p0.size()) != n)
    throw ConfigError("[run] x0/p0 need one entry per axis");
  try {
    validate(cfg.system);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(cfg.tolerance > 0.0)) throw ConfigError("[run] tolerance must be > 0");
  if (cfg.t_end < 0.0) throw ConfigError("[run] t_end must be >= 0");
  return cfg;
}

inline std::string serialize_config(const RunConfig& cfg) {
  using detail::fmt_g;
  std::ostringstream os;
  auto join_d = [&](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
      s += (i ? ", " : "") + fmt_g(v[i]);
    return s;
  };
  os << "[system]\n";
  os << "omega = " << fmt_g(cfg.system.omega) << "\n";
  os << "k = ";
  for (int j = 0; j < cfg.system.dim(); ++j)
    os << (j ? ", " : "") << cfg.system.axes[j].k;
  os << "\nb = ";
  for (int j = 0; j < cfg.system.dim(); ++j)
    os << (j ? ", " : "") << fmt_g(cfg.system.axes[j].b);
  os << "\nepsilon = ";
  for (int j = 0; j < cfg.system.dim(); ++j)
    os << (j ? ", " : "") << cfg.system.axes[j].epsilon;
  os << "\n\n[run]\n";
  os << "t_end = " << fmt_g(cfg.t_end) << "\n";
  os << "tolerance = " << fmt_g(cfg.tolerance) << "\n";
  os << "x0 = " << join_d(cfg.x0) << "\n";
  os << "p0 = " << join_d(cfg.p0) << "\n";
  os << "seed = " << cfg.seed << "\n";
  if (cfg.exponents) {
    os << "\n[integrals]\n";
    os << "m = " << cfg.exponents->first << ", " << cfg.exponents->second
       << "\n";
  }
  os << "\n[outputs]\n";
  os << "dir = " << cfg.out_dir << "\n";
  os << "basename = " << cfg.basename << "\n";
  os << "formats = ";
  for (std::size_t i = 0; i < cfg.formats.size(); ++i)
    os << (i ? ", " : "") << cfg.formats[i];
  os << "\n";
  return os.str();
}

/// Compiled-in figure presets (caption parameters; v_x0 etc. map to p at
/// unit mass).
inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig1", "fig2", "fig3", "fig4"};
  return names;
}

inline RunConfig preset_config(const std::string& name) {
  RunConfig cfg;
  cfg.basename = name;
  cfg.t_end = 20.0;
  cfg.tolerance = 1e-10;
  if (name == "fig1") {
    cfg.system = {3.0, {AxisParams{1, 3.0, 1}, AxisParams{3, 5.0, 1}}};
    cfg.x0 = {1.0, 1.0};
    cfg.p0 = {1.0, -3.0};
  } else if (name == "fig2") {
    cfg.system = {3.0, {AxisParams{3, 3.0, 1}, AxisParams{4, 5.0, 1}}};
    cfg.x0 = {1.0, 1.0};
    cfg.p0 = {1.0, -3.0};
  } else if (name == "fig3") {
    cfg.system = {3.0,
                  {AxisParams{7, 3.0, 1}, AxisParams{11, 5.0, 1},
                   AxisParams{4, 7.0, 1}}};
    cfg.x0 = {1.0, 1.0, 1.0};
    cfg.p0 = {1.0, -3.0, 2.0};
  } else if (name == "fig4") {
    cfg.system = {3.0,
                  {AxisParams{5, 3.0, 1}, AxisParams{6, 5.0, 1},
                   AxisParams{2, 7.0, 1}}};
    cfg.x0 = {1.0, 1.0, 1.0};
    cfg.p0 = {1.0, -3.0, 2.0};
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return cfg;
}

}  // namespace superint
