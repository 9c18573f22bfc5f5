#include "bsb/surface_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace bsb {

namespace {

const char* fmt(char* buf, std::size_t cap, double v) {
  std::snprintf(buf, cap, "%.17g", v);
  return buf;
}

}  // namespace

void write_surface_csv(std::ostream& os, const PriceSurface& surface) {
  char buf[64];
  os << "tau,s,value,policy\n";
  const std::size_t n = surface.n_space();
  for (std::size_t lvl = 0; lvl <= surface.n_time(); ++lvl) {
    const auto u = surface.level(lvl);
    for (std::size_t i = 0; i <= n; ++i) {
      os << fmt(buf, sizeof buf, surface.grid.tau[lvl]) << ',';
      os << fmt(buf, sizeof buf, surface.grid.x[i]) << ',';
      os << fmt(buf, sizeof buf, u[i]) << ',';
      if (lvl >= 1 && i >= 1 && i < n)
        os << fmt(buf, sizeof buf, surface.policy_for_level(lvl)[i - 1]);
      os << '\n';
    }
  }
}

void write_surface_csv(const std::string& path, const PriceSurface& surface) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  write_surface_csv(os, surface);
  os.flush();
  if (!os) throw IoError("write failed: " + path);
}

nlohmann::json report_to_json(const PolicyIterationReport& report) {
  return {{"iterations", report.iterations},
          {"final_residual", report.final_residual},
          {"converged", report.converged},
          {"monotonicity_trace", report.monotonicity_trace}};
}

nlohmann::json surface_metadata(const PriceSurface& surface,
                                const nlohmann::json& config) {
  nlohmann::json grid = {
      {"n_space", surface.n_space()},
      {"n_time", surface.n_time()},
      {"s_max", surface.grid.s_max()},
      {"dx_max", surface.grid.dx_max()},
      {"dt_max", surface.grid.dt_max()},
      {"quasi_uniform", surface.grid.quasi_uniform},
  };
  std::vector<std::size_t> iterations;
  iterations.reserve(surface.reports.size());
  bool all_converged = true;
  for (const auto& r : surface.reports) {
    iterations.push_back(r.iterations);
    all_converged = all_converged && r.converged;
  }
  return {
      {"side", to_string(surface.side)},
      {"model",
       {{"rate", surface.params.rate},
        {"sigma_lo", surface.params.sigma_lo},
        {"sigma_hi", surface.params.sigma_hi},
        {"maturity", surface.params.maturity}}},
      {"boundary_bound", surface.c_b},
      {"grid", grid},
      {"solver",
       {{"tolerance", surface.opts.tolerance},
        {"scale", surface.opts.scale},
        {"max_iter", surface.opts.max_iter},
        {"exec",
         surface.opts.exec == kernels::Exec::parallel ? "parallel"
                                                      : "serial"}}},
      {"iterations_per_step", iterations},
      {"all_steps_converged", all_converged},
      {"config", config},
  };
}

void write_surface_metadata(const std::string& path,
                            const PriceSurface& surface,
                            const nlohmann::json& config) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os << surface_metadata(surface, config).dump(2) << '\n';
  os.flush();
  if (!os) throw IoError("write failed: " + path);
}

}  // namespace bsb
