#include "bsb/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace bsb::kernels {

namespace serial {

void foot_thetas(std::span<const double> x, double rate, double dt,
                 std::span<double> theta) {
  const std::size_t n = x.size() - 1;
  for (std::size_t i = 1; i < n; ++i)
    theta[i - 1] = rate * x[i] * dt / (x[i + 1] - x[i]);
}

void interpolate_interior(std::span<const double> u,
                          std::span<const double> theta,
                          std::span<double> ubar) {
  const std::size_t n = u.size() - 1;
  for (std::size_t i = 1; i < n; ++i) {
    const double t = theta[i - 1];
    ubar[i] = (1.0 - t) * u[i] + t * u[i + 1];
  }
}

void select_policy(std::span<const double> x, std::span<const double> u,
                   double sigma_lo, double sigma_hi, std::span<double> sigma) {
  const std::size_t n = x.size() - 1;
  for (std::size_t i = 1; i < n; ++i) {
    const double fwd = (u[i + 1] - u[i]) / (x[i + 1] - x[i]);
    const double bwd = (u[i] - u[i - 1]) / (x[i] - x[i - 1]);
    const double d = (fwd - bwd) / (x[i + 1] - x[i - 1]);
    sigma[i - 1] = (d >= 0.0) ? sigma_hi : sigma_lo;
  }
}

void assemble_bands(std::span<const double> x, std::span<const double> sigma,
                    double rate, std::span<double> sub, std::span<double> diag,
                    std::span<double> super) {
  const std::size_t n = x.size() - 1;
  sub[0] = diag[0] = super[0] = 0.0;
  sub[n] = diag[n] = super[n] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
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
  const std::size_t n = u.size() - 1;
  out[0] = 0.0;
  out[n] = 0.0;
  for (std::size_t i = 1; i < n; ++i)
    out[i] = sub[i] * u[i - 1] + diag[i] * u[i] + super[i] * u[i + 1];
}

void negate(std::span<const double> in, std::span<double> out) {
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = -in[i];
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double e : v) m = std::max(m, std::abs(e));
  return m;
}

double max_rel_update(std::span<const double> a, std::span<const double> b,
                      double scale) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]) / std::max(scale, std::abs(a[i])));
  return m;
}

double min_diff(std::span<const double> a, std::span<const double> b) {
  double m = a[0] - b[0];
  for (std::size_t i = 1; i < a.size(); ++i) m = std::min(m, a[i] - b[i]);
  return m;
}

double max_diff(std::span<const double> a, std::span<const double> b) {
  double m = a[0] - b[0];
  for (std::size_t i = 1; i < a.size(); ++i) m = std::max(m, a[i] - b[i]);
  return m;
}

}  // namespace serial

void thomas_solve(std::span<const double> sub, std::span<const double> diag,
                  std::span<const double> super, double dt,
                  std::span<const double> rhs, std::span<double> out) {
  const std::size_t m = rhs.size();
  std::vector<double> cp(m), dp(m);

  double piv = 1.0 - dt * diag[0];
  if (!std::isfinite(piv) || piv == 0.0)
    throw std::runtime_error("tridiagonal solve: bad pivot at row 0");
  cp[0] = -dt * super[0] / piv;
  dp[0] = rhs[0] / piv;

  for (std::size_t i = 1; i < m; ++i) {
    const double lower = -dt * sub[i];
    piv = (1.0 - dt * diag[i]) - lower * cp[i - 1];
    if (!std::isfinite(piv) || piv == 0.0)
      throw std::runtime_error("tridiagonal solve: bad pivot at row " +
                               std::to_string(i));
    cp[i] = -dt * super[i] / piv;
    dp[i] = (rhs[i] - lower * dp[i - 1]) / piv;
  }

  out[m - 1] = dp[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) out[i] = dp[i] - cp[i] * out[i + 1];
}

}  // namespace bsb::kernels
