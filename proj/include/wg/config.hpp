#ifndef WG_CONFIG_HPP
#define WG_CONFIG_HPP

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "wg/mesh.hpp"
#include "wg/raster.hpp"
#include "wg/solver.hpp"

namespace wg {

/// All tunable run parameters, shared by the config file and the command
/// line (explicit flags win over file values).
struct RunConfig {
  int example = 1;
  double a = 10.0;
  double mu = 1.0;
  std::vector<int> sizes = {16, 24, 32, 40, 48, 56, 64};
  int order = 1;
  bool stab_visc = false;
  std::string kappa_sampling = "auto";
  std::string diagonal = "ne_sw";

  std::string method = "minres";
  double tol = 1e-10;
  int max_iterations = 200000;
  std::string precond = "diag";

  std::string perm = "constant:1";
  int n = 100;
  double lid = 1.0;
  bool lid_top_only = false;

  unsigned seed = 20240815;
  std::string out;

  Diagonal diagonal_value() const {
    if (diagonal == "ne_sw") return Diagonal::ne_sw;
    if (diagonal == "nw_se") return Diagonal::nw_se;
    throw ParseError("config key 'diagonal': expected ne_sw or nw_se, got '" + diagonal + "'");
  }

  /// Resolves the sampling mode; "auto" defers to the given mode (quadrature
  /// for analytic convergence runs, centroid for piecewise-constant media).
  KappaSampling kappa_sampling_value(KappaSampling auto_mode) const {
    if (kappa_sampling == "auto") return auto_mode;
    if (kappa_sampling == "quadrature") return KappaSampling::quadrature;
    if (kappa_sampling == "centroid") return KappaSampling::centroid;
    throw ParseError("config key 'kappa_sampling': expected auto, quadrature, or centroid, got '" +
                     kappa_sampling + "'");
  }

  SolveOptions solve_options() const {
    SolveOptions options;
    if (method == "minres") {
      options.method = SolveMethod::krylov_minres;
    } else if (method == "direct") {
      options.method = SolveMethod::direct;
    } else {
      throw ParseError("config key 'method': expected minres or direct, got '" + method + "'");
    }
    if (precond == "diag") {
      options.preconditioner = Preconditioner::diag_A_pressure_mass;
    } else if (precond == "none") {
      options.preconditioner = Preconditioner::none;
    } else {
      throw ParseError("config key 'precond': expected diag or none, got '" + precond + "'");
    }
    options.tolerance = tol;
    options.max_iterations = max_iterations;
    return options;
  }
};

namespace detail {

inline bool parse_on_off(const std::string& key, const std::string& value) {
  if (value == "on" || value == "true" || value == "1") return true;
  if (value == "off" || value == "false" || value == "0") return false;
  throw ParseError("config key '" + key + "': expected on or off, got '" + value + "'");
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  T parsed;
  std::string extra;
  if (!(in >> parsed) || (in >> extra))
    throw ParseError("config key '" + key + "': not a valid number: '" + value + "'");
  return parsed;
}

inline std::vector<int> parse_sizes(const std::string& key, const std::string& value) {
  std::vector<int> sizes;
  std::istringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) sizes.push_back(parse_number<int>(key, item));
  if (sizes.empty()) throw ParseError("config key '" + key + "': empty size list");
  return sizes;
}

}  // namespace detail

/// Applies one key=value setting; unknown keys and malformed values throw
/// ParseError naming the key.
inline void apply_config_entry(RunConfig& config, const std::string& key,
                               const std::string& value) {
  using detail::parse_number;
  if (key == "example") config.example = parse_number<int>(key, value);
  else if (key == "a") config.a = parse_number<double>(key, value);
  else if (key == "mu") config.mu = parse_number<double>(key, value);
  else if (key == "sizes") config.sizes = detail::parse_sizes(key, value);
  else if (key == "order") config.order = parse_number<int>(key, value);
  else if (key == "stab_visc_scaling") config.stab_visc = detail::parse_on_off(key, value);
  else if (key == "kappa_sampling") config.kappa_sampling = value;
  else if (key == "diagonal") config.diagonal = value;
  else if (key == "method") config.method = value;
  else if (key == "tol") config.tol = parse_number<double>(key, value);
  else if (key == "max_iterations") config.max_iterations = parse_number<int>(key, value);
  else if (key == "precond") config.precond = value;
  else if (key == "perm") config.perm = value;
  else if (key == "n") config.n = parse_number<int>(key, value);
  else if (key == "lid") config.lid = parse_number<double>(key, value);
  else if (key == "lid_top_only") config.lid_top_only = detail::parse_on_off(key, value);
  else if (key == "seed") config.seed = parse_number<unsigned>(key, value);
  else if (key == "out") config.out = value;
  else throw ParseError("unknown config key '" + key + "'");
}

/// Loads a key=value file ('#' starts a comment).  Errors name the key or
/// the offending line.
inline void load_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("config: cannot open '" + path + "'");
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    const auto stop = line.find_last_not_of(" \t\r");
    line = line.substr(start, stop - start + 1);
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("config " + path + ":" + std::to_string(line_no) +
                       ": expected key=value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    try {
      apply_config_entry(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ParseError& error) {
      throw ParseError("config " + path + ":" + std::to_string(line_no) + ": " +
                       error.what());
    }
  }
}

/// Builds an inverse-permeability field from a spec string:
///   constant:<value> | sine:<a> | raster:<path> | raster:<path>:<kmin>:<kmax>
inline PermeabilityField parse_permeability_spec(const std::string& spec) {
  const auto fail = [&spec](const std::string& what) {
    throw ParseError("permeability spec '" + spec + "': " + what);
  };
  const size_t colon = spec.find(':');
  if (colon == std::string::npos)
    fail("expected constant:<value>, sine:<a>, or raster:<path>[:<kmin>:<kmax>]");
  const std::string kind = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  if (kind == "constant") {
    const double value = detail::parse_number<double>("perm", rest);
    if (!(value > 0.0)) fail("constant inverse permeability must be positive");
    return PermeabilityField::constant(value);
  }
  if (kind == "sine") {
    const double a = detail::parse_number<double>("perm", rest);
    if (!(a > 0.0)) fail("sine amplitude must be positive");
    return PermeabilityField::sine(a);
  }
  if (kind == "raster") {
    // The path may contain no colon; optional ":kmin:kmax" trails it.
    const size_t c1 = rest.find(':');
    if (c1 == std::string::npos) return raster_permeability(load_raster(rest));
    const size_t c2 = rest.find(':', c1 + 1);
    if (c2 == std::string::npos) fail("expected raster:<path>:<kmin>:<kmax>");
    const std::string path = rest.substr(0, c1);
    const double kmin = detail::parse_number<double>("perm", rest.substr(c1 + 1, c2 - c1 - 1));
    const double kmax = detail::parse_number<double>("perm", rest.substr(c2 + 1));
    return raster_permeability(load_raster(path), std::make_pair(kmin, kmax));
  }
  fail("unknown kind '" + kind + "'");
  return {};
}

}  // namespace wg

#endif
