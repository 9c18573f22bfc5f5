// Timing harness comparing the serial reference kernels with the OpenMP
// variants, plus a full solve at a few grid sizes with both backends.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include "bsb/config.hpp"
#include "bsb/kernels.hpp"
#include "bsb/stepper.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using clock_type = std::chrono::steady_clock;

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warm up
  const auto start = clock_type::now();
  for (int r = 0; r < reps; ++r) fn();
  const auto stop = clock_type::now();
  return std::chrono::duration<double, std::milli>(stop - start).count() /
         reps;
}

void bench_kernels(std::size_t n, int reps) {
  namespace k = bsb::kernels;
  std::vector<double> x(n + 1), u(n + 1), out(n + 1), theta(n - 1),
      sigma(n - 1), sub(n + 1), diag(n + 1), super(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    x[i] = static_cast<double>(i);
    u[i] = std::sin(0.01 * static_cast<double>(i));
  }
  const double rate = 0.1, dt = 1e-3;
  k::serial::foot_thetas(x, rate, dt, theta);

  struct Row {
    const char* name;
    std::function<void()> serial;
    std::function<void()> parallel;
  };
  const std::vector<Row> rows = {
      {"select_policy",
       [&] { k::serial::select_policy(x, u, 0.15, 0.25, sigma); },
       [&] { k::par::select_policy(x, u, 0.15, 0.25, sigma); }},
      {"assemble_bands",
       [&] { k::serial::assemble_bands(x, sigma, rate, sub, diag, super); },
       [&] { k::par::assemble_bands(x, sigma, rate, sub, diag, super); }},
      {"interpolate",
       [&] { k::serial::interpolate_interior(u, theta, out); },
       [&] { k::par::interpolate_interior(u, theta, out); }},
      {"apply_bands",
       [&] { k::serial::apply_bands(sub, diag, super, u, out); },
       [&] { k::par::apply_bands(sub, diag, super, u, out); }},
      {"max_abs", [&] { (void)k::serial::max_abs(u); },
       [&] { (void)k::par::max_abs(u); }},
  };

  std::printf("kernels, n = %zu (ms per call)\n", n);
  std::printf("  %-16s %10s %10s %8s\n", "kernel", "serial", "openmp",
              "speedup");
  for (const auto& row : rows) {
    const double ts = time_ms(row.serial, reps);
    const double tp = time_ms(row.parallel, reps);
    std::printf("  %-16s %10.4f %10.4f %7.2fx\n", row.name, ts, tp, ts / tp);
  }
}

void bench_solve(std::size_t n_space, std::size_t n_time) {
  bsb::RunConfig config;
  config.rate = 0.10;
  config.sigma_lo = 0.15;
  config.sigma_hi = 0.25;
  config.maturity = 0.5;
  config.payoff.kind = bsb::PayoffKind::digital_call;
  config.payoff.strike = 100.0;
  config.grid.n_space = n_space;
  config.grid.n_time = n_time;

  auto solve_with = [&](bsb::kernels::Exec exec) {
    const bsb::Problem problem = bsb::build_problem(config);
    bsb::SolverOptions opts = problem.opts;
    opts.exec = exec;
    return time_ms(
        [&] {
          (void)bsb::solve(problem.payoff, problem.params, problem.boundary,
                           problem.grid, opts);
        },
        1);
  };

  const double ts = solve_with(bsb::kernels::Exec::serial);
  const double tp = solve_with(bsb::kernels::Exec::parallel);
  std::printf("full digital solve %zux%zu: serial %.1f ms, openmp %.1f ms "
              "(%.2fx)\n",
              n_space, n_time, ts, tp, ts / tp);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("openmp enabled, max threads %d\n\n", omp_get_max_threads());
#else
  std::printf("built without openmp; parallel variants run serially\n\n");
#endif
  bench_kernels(1 << 14, 2000);
  bench_kernels(1 << 20, 50);
  std::printf("\n");
  bench_solve(200, 200);
  bench_solve(2000, 500);
  bench_solve(20000, 2000);
  return 0;
}
