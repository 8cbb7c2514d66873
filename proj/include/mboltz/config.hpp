#pragma once

// Run configuration as `key = value` text.
//
//   # comment
//   kernel.family = soft
//   kernel.exponent = 0.5
//   kernel.cutoff = inf
//
// Keys not listed in RunConfig::keys() are rejected. Missing keys keep their
// defaults. serialize() writes every key, so parse(serialize(c)) == c.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mboltz/collision.hpp"
#include "mboltz/cosmology.hpp"
#include "mboltz/error.hpp"
#include "mboltz/kernel.hpp"
#include "mboltz/quadrature.hpp"
#include "mboltz/solver.hpp"
#include "mboltz/state.hpp"

namespace mboltz {

struct GridConfig {
  int radial_n = 24;
  double r_max = 20.0;
  RadialMapping mapping = RadialMapping::stretched;
  int direction_degree = 5;
  int q_radial_n = 24;
  int q_direction_degree = 5;
  int omega_degree = 7;

  friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

enum class InitKind { canonical_small, anisotropic, pure_equilibrium };

inline const char* to_string(InitKind k) {
  switch (k) {
    case InitKind::canonical_small: return "canonical_small";
    case InitKind::anisotropic: return "anisotropic";
    case InitKind::pure_equilibrium: return "pure_equilibrium";
  }
  return "?";
}

inline InitKind parse_init_kind(const std::string& name) {
  if (name == "canonical_small") return InitKind::canonical_small;
  if (name == "anisotropic") return InitKind::anisotropic;
  if (name == "pure_equilibrium") return InitKind::pure_equilibrium;
  throw std::invalid_argument("invalid init.family '" + name +
                              "' (expected canonical_small, anisotropic or pure_equilibrium)");
}

struct InitConfig {
  InitKind kind = InitKind::canonical_small;
  double epsilon = 0.01;
  double beta = 1.0;
  Vec3 axis{0.0, 0.0, 1.0};
  double temperature = 1.0;

  InitialFamily family() const {
    switch (kind) {
      case InitKind::canonical_small: return CanonicalSmall{epsilon};
      case InitKind::anisotropic: return Anisotropic{epsilon, beta, axis};
      case InitKind::pure_equilibrium: return PureEquilibrium{temperature};
    }
    return CanonicalSmall{epsilon};
  }

  friend bool operator==(const InitConfig&, const InitConfig&) = default;
};

struct OutputConfig {
  std::string directory = "out";

  friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct RunConfig {
  CosmologyParams cosmology;
  KernelSpec kernel;
  GridConfig grid;
  IntegratorConfig integrator;
  InitConfig init;
  OutputConfig output;
  std::uint64_t seed = 0;
  std::vector<double> study_cutoffs;  // empty: family default ladder

  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Geometric cutoff ladder used when study.cutoffs is not set.
inline std::vector<double> default_cutoffs(KernelFamily family) {
  if (family == KernelFamily::soft) return {2.0, 4.0, 8.0, 16.0, 32.0};
  return {4.0, 8.0, 16.0, 32.0};
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_real(const std::string& v) {
  if (v == "inf" || v == "+inf" || v == "infinity") return std::numeric_limits<double>::infinity();
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw std::invalid_argument("expected a number, got '" + v + "'");
  }
  return out;
}

inline long long parse_integer(const std::string& v) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw std::invalid_argument("expected an integer, got '" + v + "'");
  }
  return out;
}

inline int parse_int(const std::string& v) {
  const long long x = parse_integer(v);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    throw std::invalid_argument("integer out of range: " + v);
  }
  return static_cast<int>(x);
}

inline bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("expected true or false, got '" + v + "'");
}

inline std::vector<double> parse_real_list(const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) throw std::invalid_argument("empty entry in list '" + v + "'");
    out.push_back(parse_real(t));
  }
  return out;
}

inline std::string real_to_string(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt17(v);
}

inline std::string real_list_to_string(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + real_to_string(v[i]);
  return out;
}

}  // namespace detail

inline void RunConfig::validate() const {
  cosmology.validate();
  kernel.validate();
  integrator.validate();
  if (grid.radial_n < 4 || grid.q_radial_n < 4) {
    throw std::invalid_argument("grid.radial_n and grid.q_radial_n must be >= 4");
  }
  if (!(grid.r_max > 0.0) || !std::isfinite(grid.r_max)) {
    throw std::invalid_argument("grid.r_max must be > 0");
  }
  for (int d : {grid.direction_degree, grid.q_direction_degree, grid.omega_degree}) {
    if (d < kMinSphereDegree || d > kMaxSphereDegree) {
      throw std::invalid_argument("sphere degree " + std::to_string(d) + " outside supported range " +
                                  std::to_string(kMinSphereDegree) + ".." +
                                  std::to_string(kMaxSphereDegree));
    }
  }
  validate_family(init.family());
  for (double k : study_cutoffs) {
    if (!(k > 0.0)) throw std::invalid_argument("study.cutoffs entries must be > 0");
  }
}

/// Every accepted key, in serialization order.
inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "cosmology.C",          "cosmology.t0",
      "kernel.family",        "kernel.exponent",
      "kernel.cutoff",        "grid.radial_n",
      "grid.r_max",           "grid.mapping",
      "grid.direction_degree", "grid.q_radial_n",
      "grid.q_direction_degree", "grid.omega_degree",
      "integrator.method",    "integrator.cfl",
      "integrator.t_end",     "integrator.max_steps",
      "integrator.blowup_factor", "integrator.conservative",
      "integrator.freeze_tolerance", "init.family",
      "init.epsilon",         "init.beta",
      "init.axis",            "init.temperature",
      "output.directory",     "output.stride",
      "seed",                 "study.cutoffs"};
  return keys;
}

namespace detail {

inline void set_key(RunConfig& c, const std::string& key, const std::string& v) {
  if (key == "cosmology.C") c.cosmology.C = parse_real(v);
  else if (key == "cosmology.t0") c.cosmology.t0 = parse_real(v);
  else if (key == "kernel.family") {
    if (v == "soft") c.kernel.family = KernelFamily::soft;
    else if (v == "hard") c.kernel.family = KernelFamily::hard;
    else throw std::invalid_argument("invalid kernel.family '" + v + "' (expected soft or hard)");
  } else if (key == "kernel.exponent") c.kernel.exponent = parse_real(v);
  else if (key == "kernel.cutoff") c.kernel.cutoff = parse_real(v);
  else if (key == "grid.radial_n") c.grid.radial_n = parse_int(v);
  else if (key == "grid.r_max") c.grid.r_max = parse_real(v);
  else if (key == "grid.mapping") c.grid.mapping = parse_radial_mapping(v);
  else if (key == "grid.direction_degree") c.grid.direction_degree = parse_int(v);
  else if (key == "grid.q_radial_n") c.grid.q_radial_n = parse_int(v);
  else if (key == "grid.q_direction_degree") c.grid.q_direction_degree = parse_int(v);
  else if (key == "grid.omega_degree") c.grid.omega_degree = parse_int(v);
  else if (key == "integrator.method") c.integrator.method = parse_integrator_method(v);
  else if (key == "integrator.cfl") c.integrator.cfl = parse_real(v);
  else if (key == "integrator.t_end") c.integrator.t_end = parse_real(v);
  else if (key == "integrator.max_steps") c.integrator.max_steps = parse_int(v);
  else if (key == "integrator.blowup_factor") c.integrator.blowup_factor = parse_real(v);
  else if (key == "integrator.conservative") c.integrator.conservative = parse_bool(v);
  else if (key == "integrator.freeze_tolerance") c.integrator.freeze_tolerance = parse_real(v);
  else if (key == "init.family") c.init.kind = parse_init_kind(v);
  else if (key == "init.epsilon") c.init.epsilon = parse_real(v);
  else if (key == "init.beta") c.init.beta = parse_real(v);
  else if (key == "init.axis") {
    const auto xs = parse_real_list(v);
    if (xs.size() != 3) throw std::invalid_argument("init.axis needs three components");
    c.init.axis = {xs[0], xs[1], xs[2]};
  } else if (key == "init.temperature") c.init.temperature = parse_real(v);
  else if (key == "output.directory") c.output.directory = v;
  else if (key == "output.stride") c.integrator.output_stride = parse_int(v);
  else if (key == "seed") {
    const long long s = parse_integer(v);
    if (s < 0) throw std::invalid_argument("seed must be >= 0");
    c.seed = static_cast<std::uint64_t>(s);
  } else if (key == "study.cutoffs") c.study_cutoffs = parse_real_list(v);
  else throw ConfigError("unknown key '" + key + "'");
}

}  // namespace detail

/// Parses and validates; every failure is a ConfigError naming the line or key.
inline RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  std::map<std::string, int> seen;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = detail::trim(std::string_view(t).substr(0, eq));
    const std::string value = detail::trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (auto it = seen.find(key); it != seen.end()) {
      throw ConfigError("line " + std::to_string(line_no) + ": key '" + key +
                        "' already set on line " + std::to_string(it->second));
    }
    seen[key] = line_no;
    try {
      detail::set_key(c, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw ConfigError("line " + std::to_string(line_no) + ", key '" + key + "': " + e.what());
    }
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  return c;
}

inline std::string serialize_config(const RunConfig& c) {
  using detail::real_to_string;
  std::ostringstream os;
  auto kv = [&](const char* k, const std::string& v) { os << k << " = " << v << "\n"; };
  kv("cosmology.C", real_to_string(c.cosmology.C));
  kv("cosmology.t0", real_to_string(c.cosmology.t0));
  kv("kernel.family", to_string(c.kernel.family));
  kv("kernel.exponent", real_to_string(c.kernel.exponent));
  kv("kernel.cutoff", real_to_string(c.kernel.cutoff));
  kv("grid.radial_n", std::to_string(c.grid.radial_n));
  kv("grid.r_max", real_to_string(c.grid.r_max));
  kv("grid.mapping", to_string(c.grid.mapping));
  kv("grid.direction_degree", std::to_string(c.grid.direction_degree));
  kv("grid.q_radial_n", std::to_string(c.grid.q_radial_n));
  kv("grid.q_direction_degree", std::to_string(c.grid.q_direction_degree));
  kv("grid.omega_degree", std::to_string(c.grid.omega_degree));
  kv("integrator.method", to_string(c.integrator.method));
  kv("integrator.cfl", real_to_string(c.integrator.cfl));
  kv("integrator.t_end", real_to_string(c.integrator.t_end));
  kv("integrator.max_steps", std::to_string(c.integrator.max_steps));
  kv("integrator.blowup_factor", real_to_string(c.integrator.blowup_factor));
  kv("integrator.conservative", c.integrator.conservative ? "true" : "false");
  kv("integrator.freeze_tolerance", real_to_string(c.integrator.freeze_tolerance));
  kv("init.family", to_string(c.init.kind));
  kv("init.epsilon", real_to_string(c.init.epsilon));
  kv("init.beta", real_to_string(c.init.beta));
  kv("init.axis", detail::real_list_to_string({c.init.axis.x, c.init.axis.y, c.init.axis.z}));
  kv("init.temperature", real_to_string(c.init.temperature));
  kv("output.directory", c.output.directory);
  kv("output.stride", std::to_string(c.integrator.output_stride));
  kv("seed", std::to_string(c.seed));
  kv("study.cutoffs", detail::real_list_to_string(c.study_cutoffs));
  return os.str();
}

/// The serialized config with every line prefixed by "# ".
inline std::string config_comment_header(const RunConfig& c) {
  std::istringstream is(serialize_config(c));
  std::string line, out;
  while (std::getline(is, line)) out += "# " + line + "\n";
  return out;
}

}  // namespace mboltz
