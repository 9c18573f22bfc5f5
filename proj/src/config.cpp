#include "bsb/config.hpp"

#include <fstream>

namespace bsb {

Payoff PayoffSpec::build(Side side) const {
  switch (kind) {
    case PayoffKind::vanilla_call:
      return Payoff::vanilla_call(strike, side);
    case PayoffKind::vanilla_put:
      return Payoff::vanilla_put(strike, side);
    case PayoffKind::digital_call:
      return Payoff::digital_call(strike, side);
    case PayoffKind::butterfly:
      return Payoff::butterfly(strike_lo, strike_hi, side);
    case PayoffKind::piecewise_linear:
      return Payoff::piecewise_linear(breakpoints, side);
  }
  throw ConfigError("unknown payoff kind");
}

SolverOptions SolverConfig::options() const {
  SolverOptions opts;
  opts.tolerance = tolerance;
  opts.scale = scale;
  opts.max_iter = max_iter;
  opts.exec = serial ? kernels::Exec::serial : kernels::Exec::parallel;
  return opts;
}

namespace {

PayoffKind payoff_kind_from_string(const std::string& s) {
  if (s == "vanilla_call") return PayoffKind::vanilla_call;
  if (s == "vanilla_put") return PayoffKind::vanilla_put;
  if (s == "digital_call") return PayoffKind::digital_call;
  if (s == "butterfly") return PayoffKind::butterfly;
  if (s == "piecewise_linear") return PayoffKind::piecewise_linear;
  throw ConfigError("unknown payoff kind: " + s);
}

SideChoice side_from_string(const std::string& s) {
  if (s == "ask") return SideChoice::ask;
  if (s == "bid") return SideChoice::bid;
  if (s == "both") return SideChoice::both;
  throw ConfigError("side must be ask, bid or both, got: " + s);
}

template <typename T>
T require(const nlohmann::json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("missing config key: " + key);
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bad value for config key " + key + ": " + e.what());
  }
}

template <typename T>
T get_or(const nlohmann::json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bad value for config key " + key + ": " + e.what());
  }
}

}  // namespace

RunConfig parse_config(const nlohmann::json& j) {
  RunConfig config;
  config.name = get_or<std::string>(j, "name", "run");

  const auto& model = j.contains("model") ? j.at("model") : j;
  config.rate = require<double>(model, "rate");
  config.sigma_lo = require<double>(model, "sigma_lo");
  config.sigma_hi = require<double>(model, "sigma_hi");
  config.maturity = require<double>(model, "maturity");

  if (!j.contains("payoff")) throw ConfigError("missing config key: payoff");
  const auto& payoff = j.at("payoff");
  config.payoff.kind =
      payoff_kind_from_string(require<std::string>(payoff, "kind"));
  switch (config.payoff.kind) {
    case PayoffKind::butterfly:
      config.payoff.strike_lo = require<double>(payoff, "k1");
      config.payoff.strike_hi = require<double>(payoff, "k2");
      break;
    case PayoffKind::piecewise_linear: {
      auto pts = require<std::vector<std::vector<double>>>(payoff, "points");
      for (const auto& p : pts) {
        if (p.size() != 2)
          throw ConfigError("piecewise points must be [s, value] pairs");
        config.payoff.breakpoints.emplace_back(p[0], p[1]);
      }
      break;
    }
    default:
      config.payoff.strike = require<double>(payoff, "strike");
  }

  if (j.contains("boundary")) {
    const auto& b = j.at("boundary");
    if (b.contains("s_max"))
      config.boundary.s_max = require<double>(b, "s_max");
    if (b.contains("b"))
      config.boundary.slope = std::vector<double>{require<double>(b, "b")};
    if (b.contains("c"))
      config.boundary.intercept =
          std::vector<double>{require<double>(b, "c")};
    if (b.contains("b_table"))
      config.boundary.slope = require<std::vector<double>>(b, "b_table");
    if (b.contains("c_table"))
      config.boundary.intercept = require<std::vector<double>>(b, "c_table");
    if (b.contains("c_b")) config.boundary.bound = require<double>(b, "c_b");
  }

  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    config.grid.n_space = get_or<std::size_t>(g, "n_space", 200);
    config.grid.n_time = get_or<std::size_t>(g, "n_time", 200);
    if (g.contains("spacing")) {
      const auto& s = g.at("spacing");
      if (s.is_string()) {
        if (s.get<std::string>() != "uniform")
          throw ConfigError("spacing string must be \"uniform\"");
      } else {
        const auto kind = require<std::string>(s, "kind");
        if (kind == "uniform") {
          config.grid.spacing = GridSpacing::uniform();
        } else if (kind == "geometric") {
          config.grid.spacing = GridSpacing::geometric(
              require<double>(s, "center"), require<double>(s, "ratio"));
        } else {
          throw ConfigError("unknown spacing kind: " + kind);
        }
      }
    }
    if (g.contains("s_max") && !config.boundary.s_max)
      config.boundary.s_max = require<double>(g, "s_max");
  }

  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    config.solver.tolerance = get_or<double>(s, "tolerance", 1e-6);
    config.solver.scale = get_or<double>(s, "scale", 1.0);
    config.solver.max_iter = get_or<std::size_t>(s, "max_iter", 100);
    config.solver.serial = get_or<bool>(s, "serial", false);
    config.solver.threads = get_or<int>(s, "threads", 0);
  }

  if (j.contains("output")) {
    const auto& o = j.at("output");
    config.output.dir = get_or<std::string>(o, "dir", ".");
    config.output.side =
        side_from_string(get_or<std::string>(o, "side", "both"));
    config.output.formats = get_or<std::vector<std::string>>(
        o, "formats", {"csv", "json"});
    if (o.contains("spot")) config.output.spot = require<double>(o, "spot");
    config.output.name = get_or<std::string>(o, "name", "");
  }
  if (config.output.name.empty()) config.output.name = config.name;

  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return parse_config(j);
}

nlohmann::json to_json(const RunConfig& config) {
  nlohmann::json payoff;
  payoff["kind"] = to_string(config.payoff.kind);
  switch (config.payoff.kind) {
    case PayoffKind::butterfly:
      payoff["k1"] = config.payoff.strike_lo;
      payoff["k2"] = config.payoff.strike_hi;
      break;
    case PayoffKind::piecewise_linear: {
      std::vector<std::vector<double>> pts;
      for (const auto& [s, v] : config.payoff.breakpoints)
        pts.push_back({s, v});
      payoff["points"] = pts;
      break;
    }
    default:
      payoff["strike"] = config.payoff.strike;
  }

  nlohmann::json grid = {{"n_space", config.grid.n_space},
                         {"n_time", config.grid.n_time}};
  if (config.grid.spacing.kind == GridSpacing::Kind::geometric)
    grid["spacing"] = {{"kind", "geometric"},
                       {"center", config.grid.spacing.center},
                       {"ratio", config.grid.spacing.ratio}};
  else
    grid["spacing"] = "uniform";

  nlohmann::json boundary;
  if (config.boundary.s_max) boundary["s_max"] = *config.boundary.s_max;
  if (config.boundary.slope) boundary["b_table"] = *config.boundary.slope;
  if (config.boundary.intercept)
    boundary["c_table"] = *config.boundary.intercept;
  if (config.boundary.bound) boundary["c_b"] = *config.boundary.bound;

  nlohmann::json output = {{"dir", config.output.dir},
                           {"side", config.output.side == SideChoice::ask
                                        ? "ask"
                                        : config.output.side == SideChoice::bid
                                              ? "bid"
                                              : "both"},
                           {"formats", config.output.formats},
                           {"name", config.output.name}};
  if (config.output.spot) output["spot"] = *config.output.spot;

  return {{"name", config.name},
          {"model",
           {{"rate", config.rate},
            {"sigma_lo", config.sigma_lo},
            {"sigma_hi", config.sigma_hi},
            {"maturity", config.maturity}}},
          {"payoff", payoff},
          {"boundary", boundary},
          {"grid", grid},
          {"solver",
           {{"tolerance", config.solver.tolerance},
            {"scale", config.solver.scale},
            {"max_iter", config.solver.max_iter},
            {"serial", config.solver.serial},
            {"threads", config.solver.threads}}},
          {"output", output}};
}

Problem build_problem(const RunConfig& config) {
  ModelParams params = [&] {
    try {
      return ModelParams(config.rate, config.sigma_lo, config.sigma_hi,
                         config.maturity);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }();

  Payoff payoff = [&] {
    try {
      return config.payoff.build(Side::ask);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }();

  try {
    const double s_max =
        config.boundary.s_max ? *config.boundary.s_max : default_s_max(payoff);
    FarField far;
    if (config.boundary.slope || config.boundary.intercept) {
      far.slope = config.boundary.slope.value_or(std::vector<double>{0.0});
      far.intercept =
          config.boundary.intercept.value_or(std::vector<double>{0.0});
    } else {
      far = default_far_field(payoff, params, s_max, config.grid.n_time);
    }
    const double bound = config.boundary.bound
                             ? *config.boundary.bound
                             : far_field_bound(far, s_max);
    BoundarySpec boundary(s_max, std::move(far), bound);
    Grid grid = build_grid(params, boundary, config.grid.n_space,
                           config.grid.n_time, config.grid.spacing);
    return Problem{std::move(params), std::move(payoff), std::move(boundary),
                   std::move(grid), config.solver.options()};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace bsb
