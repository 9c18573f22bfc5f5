#include <algorithm>
#include <cmath>

#include "bsb/kernels.hpp"

// OpenMP twins of the serial kernels. Elementwise maps write disjoint slots
// and min/max reductions are order-independent, so results match the serial
// reference bit for bit. Builds without OpenMP degrade to plain loops.

namespace bsb::kernels::par {

namespace {
using std::ptrdiff_t;
}

void foot_thetas(std::span<const double> x, double rate, double dt,
                 std::span<double> theta) {
  const ptrdiff_t n = static_cast<ptrdiff_t>(x.size()) - 1;
#pragma omp parallel for schedule(static)
  for (ptrdiff_t i = 1; i < n; ++i)
    theta[i - 1] = rate * x[i] * dt / (x[i + 1] - x[i]);
}

void interpolate_interior(std::span<const double> u,
                          std::span<const double> theta,
                          std::span<double> ubar) {
  const ptrdiff_t n = static_cast<ptrdiff_t>(u.size()) - 1;
#pragma omp parallel for schedule(static)
  for (ptrdiff_t i = 1; i < n; ++i) {
    const double t = theta[i - 1];
    ubar[i] = (1.0 - t) * u[i] + t * u[i + 1];
  }
}

void select_policy(std::span<const double> x, std::span<const double> u,
                   double sigma_lo, double sigma_hi, std::span<double> sigma) {
  const ptrdiff_t n = static_cast<ptrdiff_t>(x.size()) - 1;
#pragma omp parallel for schedule(static)
  for (ptrdiff_t i = 1; i < n; ++i) {
    const double fwd = (u[i + 1] - u[i]) / (x[i + 1] - x[i]);
    const double bwd = (u[i] - u[i - 1]) / (x[i] - x[i - 1]);
    const double d = (fwd - bwd) / (x[i + 1] - x[i - 1]);
    sigma[i - 1] = (d >= 0.0) ? sigma_hi : sigma_lo;
  }
}

void assemble_bands(std::span<const double> x, std::span<const double> sigma,
                    double rate, std::span<double> sub, std::span<double> diag,
                    std::span<double> super) {
  const ptrdiff_t n = static_cast<ptrdiff_t>(x.size()) - 1;
  sub[0] = diag[0] = super[0] = 0.0;
  sub[n] = diag[n] = super[n] = 0.0;
#pragma omp parallel for schedule(static)
  for (ptrdiff_t i = 1; i < n; ++i) {
    const double s2x2 = sigma[i - 1] * sigma[i - 1] * x[i] * x[i];
    const double dxm = x[i] - x[i - 1];
    const double dxp = x[i + 1] - x[i];
    const double dx0 = x[i + 1] - x[i - 1];
    const double alpha = s2x2 / (dxm * dx0);
    const double beta = s2x2 / (dxp * dx0);
    sub[i] = alpha;
    super[i] = beta;
    diag[i] = -(alpha + beta + rate);
  }
}

void apply_bands(std::span<const double> sub, std::span<const double> diag,
                 std::span<const double> super, std::span<const double> u,
                 std::span<double> out) {
  const ptrdiff_t n = static_cast<ptrdiff_t>(u.size()) - 1;
  out[0] = 0.0;
  out[n] = 0.0;
#pragma omp parallel for schedule(static)
  for (ptrdiff_t i = 1; i < n; ++i)
    out[i] = sub[i] * u[i - 1] + diag[i] * u[i] + super[i] * u[i + 1];
}

void negate(std::span<const double> in, std::span<double> out) {
  const ptrdiff_t n = static_cast<ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static)
  for (ptrdiff_t i = 0; i < n; ++i) out[i] = -in[i];
}

double max_abs(std::span<const double> v) {
  const ptrdiff_t n = static_cast<ptrdiff_t>(v.size());
  double m = 0.0;
#pragma omp parallel for schedule(static) reduction(max : m)
  for (ptrdiff_t i = 0; i < n; ++i) m = std::max(m, std::abs(v[i]));
  return m;
}

double max_rel_update(std::span<const double> a, std::span<const double> b,
                      double scale) {
  const ptrdiff_t n = static_cast<ptrdiff_t>(a.size());
  double m = 0.0;
#pragma omp parallel for schedule(static) reduction(max : m)
  for (ptrdiff_t i = 0; i < n; ++i)
    m = std::max(m, std::abs(a[i] - b[i]) / std::max(scale, std::abs(a[i])));
  return m;
}

double min_diff(std::span<const double> a, std::span<const double> b) {
  const ptrdiff_t n = static_cast<ptrdiff_t>(a.size());
  double m = a[0] - b[0];
#pragma omp parallel for schedule(static) reduction(min : m)
  for (ptrdiff_t i = 1; i < n; ++i) m = std::min(m, a[i] - b[i]);
  return m;
}

double max_diff(std::span<const double> a, std::span<const double> b) {
  const ptrdiff_t n = static_cast<ptrdiff_t>(a.size());
  double m = a[0] - b[0];
#pragma omp parallel for schedule(static) reduction(max : m)
  for (ptrdiff_t i = 1; i < n; ++i) m = std::max(m, a[i] - b[i]);
  return m;
}

}  // namespace bsb::kernels::par
