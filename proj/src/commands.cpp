#include "bsb/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <ostream>

#include "bsb/oracle.hpp"
#include "bsb/surface_io.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bsb {

namespace {

std::string fmt(double v, const char* spec = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::vector<Side> sides_of(SideChoice choice) {
  switch (choice) {
    case SideChoice::ask: return {Side::ask};
    case SideChoice::bid: return {Side::bid};
    case SideChoice::both: return {Side::ask, Side::bid};
  }
  return {};
}

bool wants_format(const OutputSpec& output, const std::string& f) {
  return std::find(output.formats.begin(), output.formats.end(), f) !=
         output.formats.end();
}

}  // namespace

RunConfig apply_overrides(RunConfig config, const CliOverrides& overrides) {
  if (overrides.out_dir) config.output.dir = *overrides.out_dir;
  if (overrides.side) config.output.side = *overrides.side;
  if (overrides.spot) config.output.spot = *overrides.spot;
  if (overrides.serial) config.solver.serial = true;
  config.output.check = config.output.check || overrides.check;
  return config;
}

int cmd_price(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const Problem problem = build_problem(config);
    if (!problem.grid.quasi_uniform)
      err << "note: partition is not quasi-uniform ("
          << problem.grid.quasi_uniform_note << ")\n";

    const nlohmann::json config_json = to_json(config);
    std::filesystem::path dir(config.output.dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
      err << "error: cannot create output directory " << dir << ": "
          << ec.message() << '\n';
      return exit_io_error;
    }

    for (Side side : sides_of(config.output.side)) {
      Payoff payoff = problem.payoff;
      payoff.set_side(side);
      const PriceSurface surface =
          solve(payoff, problem.params, problem.boundary, problem.grid,
                problem.opts);

      const std::string stem =
          (config.output.name.empty() ? config.name : config.output.name) +
          "_" + to_string(side);
      if (wants_format(config.output, "csv"))
        write_surface_csv((dir / (stem + ".csv")).string(), surface);
      if (wants_format(config.output, "json"))
        write_surface_metadata((dir / (stem + ".json")).string(), surface,
                               config_json);

      std::size_t total_iters = 0;
      std::size_t max_iters = 0;
      for (const auto& r : surface.reports) {
        total_iters += r.iterations;
        max_iters = std::max(max_iters, r.iterations);
      }
      out << to_string(side) << ": " << surface.n_time() << " steps, "
          << total_iters << " policy iterations (max " << max_iters
          << " per step)\n";
      if (config.output.spot) {
        const double tau = problem.params.maturity;
        out << "  t=0 (tau=" << fmt(tau) << ") price at S="
            << fmt(*config.output.spot) << ": "
            << fmt(surface.value_at(surface.n_time(), *config.output.spot),
                   "%.12g")
            << '\n';
      }

      // Structure audits on demand.
      if (config.output.check) {
        out << "  " << m_matrix_audit(surface).to_string() << '\n';
        out << "  " << stability_audit(surface).to_string() << '\n';
      }
    }
    return exit_ok;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << '\n';
    return exit_solver_error;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return exit_io_error;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config_error;
  }
}

namespace {

// sigma of the closed-form reference for this payoff/side, when one exists.
double reference_sigma(const RunConfig& config, const Payoff& payoff,
                       Side side) {
  if (config.sigma_lo == config.sigma_hi) return config.sigma_lo;
  if (payoff.is_convex())
    return side == Side::ask ? config.sigma_hi : config.sigma_lo;
  if (payoff.is_concave())
    return side == Side::ask ? config.sigma_lo : config.sigma_hi;
  throw ConfigError(
      "convergence study needs a closed-form reference: use a convex or "
      "concave payoff, or a degenerate band (sigma_lo == sigma_hi)");
}

double reference_price(const Payoff& payoff, double spot, double rate,
                       double sigma, double tau) {
  double base = 0.0;
  switch (payoff.kind()) {
    case PayoffKind::vanilla_call:
      base = oracle::bs_call(spot, payoff.strike(), rate, sigma, tau);
      break;
    case PayoffKind::vanilla_put:
      base = oracle::bs_put(spot, payoff.strike(), rate, sigma, tau);
      break;
    case PayoffKind::digital_call:
      base = oracle::bs_digital(spot, payoff.strike(), rate, sigma, tau);
      break;
    case PayoffKind::butterfly:
      base = oracle::bs_butterfly(spot, payoff.strike_lo(),
                                  payoff.strike_hi(), rate, sigma, tau);
      break;
    case PayoffKind::piecewise_linear:
      throw ConfigError(
          "no closed-form reference for piecewise payoffs");
  }
  // At a fixed sigma the bid equals the ask, so the side does not enter;
  // only the payoff's own sign does.
  return payoff.sign() * base;
}

}  // namespace

ConvergenceTable converge_study(const RunConfig& config, std::size_t levels,
                                Side side) {
  if (levels < 3) throw ConfigError("converge needs at least 3 levels");
  if (!config.output.spot)
    throw ConfigError("converge needs a spot (output.spot or --spot)");

  const double spot = *config.output.spot;
  ConvergenceTable table;
  table.side = side;
  table.spot = spot;
  {
    const Payoff probe = config.payoff.build(side);
    table.sigma_reference = reference_sigma(config, probe, side);
  }
  table.rows.resize(levels);

  // Levels are independent solves; run them concurrently unless the
  // configuration forces the serial backend.
  std::exception_ptr failure;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) if (!config.solver.serial)
#endif
  for (std::size_t l = 0; l < levels; ++l) {
    try {
      RunConfig refined = config;
      const auto factor = static_cast<std::size_t>(1) << l;
      refined.grid.n_space = config.grid.n_space * factor;
      refined.grid.n_time = config.grid.n_time * factor;
      // Nested parallelism is off by default; inner kernels run serial here.
      const Problem problem = build_problem(refined);
      Payoff payoff = problem.payoff;
      payoff.set_side(side);
      const PriceSurface surface = solve(payoff, problem.params,
                                         problem.boundary, problem.grid,
                                         problem.opts);
      ConvergenceRow row;
      row.n_space = refined.grid.n_space;
      row.n_time = refined.grid.n_time;
      row.price = surface.value_at(surface.n_time(), spot);
      row.reference =
          reference_price(payoff, spot, config.rate, table.sigma_reference,
                          config.maturity);
      row.abs_error = std::abs(row.price - row.reference);
      table.rows[l] = row;
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t l = 1; l < levels; ++l)
    if (table.rows[l].abs_error > 0.0)
      table.rows[l].observed_order =
          std::log2(table.rows[l - 1].abs_error / table.rows[l].abs_error);
  return table;
}

int cmd_converge(const RunConfig& config, std::size_t levels,
                 std::ostream& out, std::ostream& err) {
  try {
    for (Side side : sides_of(config.output.side)) {
      const ConvergenceTable table = converge_study(config, levels, side);
      out << to_string(side) << " side, reference sigma = "
          << fmt(table.sigma_reference) << ", spot = " << fmt(table.spot)
          << '\n';
      out << "  n_space  n_time         price     reference     abs_error  order\n";
      for (const auto& row : table.rows) {
        char line[160];
        std::snprintf(line, sizeof line, "  %7zu %7zu %13.8f %13.8f %13.3e",
                      row.n_space, row.n_time, row.price, row.reference,
                      row.abs_error);
        out << line;
        if (row.observed_order) out << "  " << fmt(*row.observed_order, "%.2f");
        out << '\n';
      }
    }
    return exit_ok;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << '\n';
    return exit_solver_error;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config_error;
  }
}

int cmd_validate(const RunConfig& config, std::ostream& out,
                 std::ostream& err) {
  try {
    const Problem problem = build_problem(config);
    bool hard_fail = false;
    auto line = [&](const std::string& name, bool pass,
                    const std::string& detail) {
      out << (pass ? "[PASS] " : "[FAIL] ") << name;
      if (!detail.empty()) out << " - " << detail;
      out << '\n';
    };

    Payoff ask_payoff = problem.payoff;
    ask_payoff.set_side(Side::ask);
    Payoff bid_payoff = problem.payoff;
    bid_payoff.set_side(Side::bid);
    const PriceSurface ask = solve(ask_payoff, problem.params,
                                   problem.boundary, problem.grid,
                                   problem.opts);
    const PriceSurface bid = solve(bid_payoff, problem.params,
                                   problem.boundary, problem.grid,
                                   problem.opts);

    {
      const MMatrixAudit audit_ask = m_matrix_audit(ask);
      const MMatrixAudit audit_bid = m_matrix_audit(bid);
      const bool pass = audit_ask.pass && audit_bid.pass;
      hard_fail |= !pass;
      line("m-matrix structure at every step", pass,
           pass ? "" : audit_ask.to_string() + "; " + audit_bid.to_string());
    }
    {
      const StabilityReport sa = stability_audit(ask);
      const StabilityReport sb = stability_audit(bid);
      const bool pass = sa.pass && sb.pass;
      hard_fail |= !pass;
      line("max-norm stability bound at every level", pass,
           "ask margin " + fmt(sa.min_margin) + ", bid margin " +
               fmt(sb.min_margin));
    }
    {
      bool pass = true;
      double worst = 0.0;
      for (const PriceSurface* s : {&ask, &bid}) {
        for (std::size_t n = 1; n <= s->n_time(); ++n) {
          const double floor =
              -1e-12 * std::max(1.0, kernels::serial::max_abs(s->level(n)));
          for (double inc : s->reports[n - 1].monotonicity_trace) {
            worst = std::min(worst, inc);
            if (inc < floor) pass = false;
          }
        }
      }
      hard_fail |= !pass;
      line("nondecreasing policy iterates on every step", pass,
           "smallest increment " + fmt(worst, "%.3e"));
    }
    {
      const double worst =
          kernels::serial::max_diff(bid.values, ask.values);
      const bool pass = worst <= 1e-8;
      hard_fail |= !pass;
      line("bid <= ask at every node and level", pass,
           "max(bid - ask) = " + fmt(worst, "%.3e"));
    }
    {
      bool converged = true;
      std::size_t max_iters = 0;
      for (const PriceSurface* s : {&ask, &bid})
        for (const auto& r : s->reports) {
          converged = converged && r.converged;
          max_iters = std::max(max_iters, r.iterations);
        }
      line("policy iteration converged on every step (info)", converged,
           "max " + std::to_string(max_iters) + " iterations per step");
    }
    if (!problem.grid.quasi_uniform)
      out << "[note] partition is not quasi-uniform: "
          << problem.grid.quasi_uniform_note << '\n';

    return hard_fail ? exit_validation_failed : exit_ok;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << '\n';
    return exit_solver_error;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config_error;
  }
}

}  // namespace bsb
