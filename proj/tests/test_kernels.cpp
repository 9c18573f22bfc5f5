#include <doctest.h>

#include <random>
#include <vector>

#include "bsb/kernels.hpp"
#include "bsb/oracle.hpp"
#include "bsb/stepper.hpp"

using namespace bsb;
namespace k = bsb::kernels;

// The OpenMP kernels must agree with the serial reference bit for bit:
// elementwise maps by construction, min/max reductions because those
// operations are order-independent.

namespace {

struct Arrays {
  std::vector<double> x, u, v, theta, sigma, sub, diag, super, out_a, out_b;

  explicit Arrays(std::size_t n, std::mt19937& rng) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    x.resize(n + 1);
    u.resize(n + 1);
    v.resize(n + 1);
    x[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
      x[i] = x[i - 1] + 0.25 + 0.5 * (unif(rng) + 1.0);
    for (std::size_t i = 0; i <= n; ++i) {
      u[i] = 100.0 * unif(rng);
      v[i] = u[i] + 0.01 * unif(rng);
    }
    theta.resize(n - 1);
    sigma.resize(n - 1);
    sub.resize(n + 1);
    diag.resize(n + 1);
    super.resize(n + 1);
    out_a.resize(n + 1);
    out_b.resize(n + 1);
  }
};

}  // namespace

TEST_CASE("parallel kernels match the serial reference bitwise") {
  std::mt19937 rng(99);
  for (std::size_t n : {64, 1000, 20000}) {
    CAPTURE(n);
    Arrays a(n, rng);
    const double rate = 0.1, dt = 0.003;

    std::vector<double> theta_ref(n - 1), sigma_ref(n - 1);
    k::serial::foot_thetas(a.x, rate, dt, theta_ref);
    k::par::foot_thetas(a.x, rate, dt, a.theta);
    CHECK(a.theta == theta_ref);

    std::vector<double> interp_ref(n + 1, 0.0);
    std::fill(a.out_a.begin(), a.out_a.end(), 0.0);
    k::serial::interpolate_interior(a.u, theta_ref, interp_ref);
    k::par::interpolate_interior(a.u, theta_ref, a.out_a);
    CHECK(a.out_a == interp_ref);

    k::serial::select_policy(a.x, a.u, 0.15, 0.25, sigma_ref);
    k::par::select_policy(a.x, a.u, 0.15, 0.25, a.sigma);
    CHECK(a.sigma == sigma_ref);

    std::vector<double> sub_ref(n + 1), diag_ref(n + 1), super_ref(n + 1);
    k::serial::assemble_bands(a.x, sigma_ref, rate, sub_ref, diag_ref,
                              super_ref);
    k::par::assemble_bands(a.x, sigma_ref, rate, a.sub, a.diag, a.super);
    CHECK(a.sub == sub_ref);
    CHECK(a.diag == diag_ref);
    CHECK(a.super == super_ref);

    std::vector<double> apply_ref(n + 1);
    k::serial::apply_bands(sub_ref, diag_ref, super_ref, a.u, apply_ref);
    k::par::apply_bands(sub_ref, diag_ref, super_ref, a.u, a.out_b);
    CHECK(a.out_b == apply_ref);

    std::vector<double> neg_ref(n + 1), neg_par(n + 1);
    k::serial::negate(a.u, neg_ref);
    k::par::negate(a.u, neg_par);
    CHECK(neg_par == neg_ref);

    CHECK(k::par::max_abs(a.u) == k::serial::max_abs(a.u));
    CHECK(k::par::max_rel_update(a.u, a.v, 1.0) ==
          k::serial::max_rel_update(a.u, a.v, 1.0));
    CHECK(k::par::min_diff(a.u, a.v) == k::serial::min_diff(a.u, a.v));
    CHECK(k::par::max_diff(a.u, a.v) == k::serial::max_diff(a.u, a.v));
  }
}

TEST_CASE("reduction kernels") {
  const std::vector<double> a = {1.0, -3.5, 2.0};
  const std::vector<double> b = {0.5, -3.0, 4.0};
  CHECK(k::serial::max_abs(a) == 3.5);
  CHECK(k::serial::min_diff(a, b) == -2.0);
  CHECK(k::serial::max_diff(a, b) == 0.5);
  // |a-b| / max(scale, |a|): entries 0.5/1, 0.5/3.5, 2/2
  CHECK(k::serial::max_rel_update(a, b, 1.0) == 1.0);
  CHECK(k::serial::max_rel_update(a, b, 4.0) == 0.5);
}

TEST_CASE("full solves agree between backends bit for bit") {
  ModelParams params(0.10, 0.15, 0.25, 0.5);
  Payoff payoff = Payoff::digital_call(100.0);
  FarField far;
  far.slope = {0.0};
  far.intercept = {1.0};
  BoundarySpec boundary(200.0, far, 1.0);
  Grid grid = build_grid(params, boundary, 200, 200);

  SolverOptions serial_opts;
  serial_opts.exec = k::Exec::serial;
  SolverOptions parallel_opts;
  parallel_opts.exec = k::Exec::parallel;

  const PriceSurface a = solve(payoff, params, boundary, grid, serial_opts);
  const PriceSurface b = solve(payoff, params, boundary, grid, parallel_opts);
  CHECK(a.values == b.values);
  CHECK(a.policies == b.policies);
  REQUIRE(a.reports.size() == b.reports.size());
  for (std::size_t n = 0; n < a.reports.size(); ++n)
    CHECK(a.reports[n].iterations == b.reports[n].iterations);
}
