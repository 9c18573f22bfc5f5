#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bsb/grid.hpp"
#include "bsb/model.hpp"
#include "bsb/policy.hpp"

namespace bsb {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SideChoice { ask, bid, both };

struct PayoffSpec {
  PayoffKind kind = PayoffKind::digital_call;
  double strike = 100.0;
  double strike_lo = 0.0;
  double strike_hi = 0.0;
  std::vector<std::pair<double, double>> breakpoints;

  Payoff build(Side side) const;
};

struct BoundaryConfig {
  std::optional<double> s_max;
  // Explicit far field; when absent the per-payoff default applies.
  std::optional<std::vector<double>> slope;
  std::optional<std::vector<double>> intercept;
  std::optional<double> bound;
};

struct GridConfig {
  std::size_t n_space = 200;
  std::size_t n_time = 200;
  GridSpacing spacing = GridSpacing::uniform();
};

struct SolverConfig {
  double tolerance = 1e-6;
  double scale = 1.0;
  std::size_t max_iter = 100;
  bool serial = false;
  int threads = 0;  // 0 = runtime default

  SolverOptions options() const;
};

struct OutputSpec {
  std::string dir = ".";
  SideChoice side = SideChoice::both;
  std::vector<std::string> formats = {"csv", "json"};
  std::optional<double> spot;
  std::string name;   // output file stem; defaults to the run name
  bool check = false;  // run the structure audits after solving
};

struct RunConfig {
  std::string name = "run";
  double rate = 0.0;
  double sigma_lo = 0.0;
  double sigma_hi = 0.0;
  double maturity = 0.0;
  PayoffSpec payoff;
  BoundaryConfig boundary;
  GridConfig grid;
  SolverConfig solver;
  OutputSpec output;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
nlohmann::json to_json(const RunConfig& config);

/// Everything a solve needs, assembled with defaults applied.
struct Problem {
  ModelParams params;
  Payoff payoff;  // side = ask; callers flip per requested side
  BoundarySpec boundary;
  Grid grid;
  SolverOptions opts;
};

Problem build_problem(const RunConfig& config);

}  // namespace bsb
