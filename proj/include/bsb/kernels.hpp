#pragma once

#include <cstddef>
#include <span>

// Low-level array kernels behind the solver modules. Every kernel exists in
// two variants with identical semantics: a serial reference implementation
// and an OpenMP one. The parallel variants are elementwise maps or min/max
// reductions, so both backends produce bit-identical results; the serial
// code is the reference the parallel code is tested against.
//
// Index convention: state vectors have n+1 entries for a grid with n
// sub-intervals; "interior" arrays (policies, thetas) have n-1 entries,
// entry i-1 belonging to node i.

namespace bsb::kernels {

enum class Exec { serial, parallel };

namespace serial {

// theta[i-1] = r*x[i]*dt / (x[i+1]-x[i]) for interior nodes.
void foot_thetas(std::span<const double> x, double rate, double dt,
                 std::span<double> theta);

// ubar[i] = (1-theta[i-1])*u[i] + theta[i-1]*u[i+1], interior nodes only.
void interpolate_interior(std::span<const double> u,
                          std::span<const double> theta,
                          std::span<double> ubar);

// Bang-bang control from the sign of the divided second difference:
// sigma_hi where d_i >= 0, sigma_lo where d_i < 0.
void select_policy(std::span<const double> x, std::span<const double> u,
                   double sigma_lo, double sigma_hi, std::span<double> sigma);

// Tridiagonal bands of the spatial operator for a given control vector.
// Rows 0 and n are left identically zero.
void assemble_bands(std::span<const double> x, std::span<const double> sigma,
                    double rate, std::span<double> sub, std::span<double> diag,
                    std::span<double> super);

// out = A*u with zero entries at rows 0 and n.
void apply_bands(std::span<const double> sub, std::span<const double> diag,
                 std::span<const double> super, std::span<const double> u,
                 std::span<double> out);

void negate(std::span<const double> in, std::span<double> out);

double max_abs(std::span<const double> v);

// max_i |a_i - b_i| / max(scale, |a_i|)
double max_rel_update(std::span<const double> a, std::span<const double> b,
                      double scale);

// min_i (a_i - b_i)
double min_diff(std::span<const double> a, std::span<const double> b);

// max_i (a_i - b_i)
double max_diff(std::span<const double> a, std::span<const double> b);

}  // namespace serial

namespace par {

void foot_thetas(std::span<const double> x, double rate, double dt,
                 std::span<double> theta);
void interpolate_interior(std::span<const double> u,
                          std::span<const double> theta,
                          std::span<double> ubar);
void select_policy(std::span<const double> x, std::span<const double> u,
                   double sigma_lo, double sigma_hi, std::span<double> sigma);
void assemble_bands(std::span<const double> x, std::span<const double> sigma,
                    double rate, std::span<double> sub, std::span<double> diag,
                    std::span<double> super);
void apply_bands(std::span<const double> sub, std::span<const double> diag,
                 std::span<const double> super, std::span<const double> u,
                 std::span<double> out);
void negate(std::span<const double> in, std::span<double> out);
double max_abs(std::span<const double> v);
double max_rel_update(std::span<const double> a, std::span<const double> b,
                      double scale);
double min_diff(std::span<const double> a, std::span<const double> b);
double max_diff(std::span<const double> a, std::span<const double> b);

}  // namespace par

// Below this size the dispatchers stay serial; thread startup dominates on
// short arrays (measured crossover sits near 1e5 elements, see bsb-bench).
// Benchmarks call par:: directly to measure the raw kernels.
inline constexpr std::size_t parallel_cutoff = 131072;

inline void foot_thetas(std::span<const double> x, double rate, double dt,
                        std::span<double> theta, Exec e) {
  if (e == Exec::parallel && x.size() >= parallel_cutoff)
    par::foot_thetas(x, rate, dt, theta);
  else
    serial::foot_thetas(x, rate, dt, theta);
}

inline void interpolate_interior(std::span<const double> u,
                                 std::span<const double> theta,
                                 std::span<double> ubar, Exec e) {
  if (e == Exec::parallel && u.size() >= parallel_cutoff)
    par::interpolate_interior(u, theta, ubar);
  else
    serial::interpolate_interior(u, theta, ubar);
}

inline void select_policy(std::span<const double> x, std::span<const double> u,
                          double sigma_lo, double sigma_hi,
                          std::span<double> sigma, Exec e) {
  if (e == Exec::parallel && x.size() >= parallel_cutoff)
    par::select_policy(x, u, sigma_lo, sigma_hi, sigma);
  else
    serial::select_policy(x, u, sigma_lo, sigma_hi, sigma);
}

inline void assemble_bands(std::span<const double> x,
                           std::span<const double> sigma, double rate,
                           std::span<double> sub, std::span<double> diag,
                           std::span<double> super, Exec e) {
  if (e == Exec::parallel && x.size() >= parallel_cutoff)
    par::assemble_bands(x, sigma, rate, sub, diag, super);
  else
    serial::assemble_bands(x, sigma, rate, sub, diag, super);
}

inline void apply_bands(std::span<const double> sub,
                        std::span<const double> diag,
                        std::span<const double> super,
                        std::span<const double> u, std::span<double> out,
                        Exec e) {
  if (e == Exec::parallel && u.size() >= parallel_cutoff)
    par::apply_bands(sub, diag, super, u, out);
  else
    serial::apply_bands(sub, diag, super, u, out);
}

inline void negate(std::span<const double> in, std::span<double> out, Exec e) {
  if (e == Exec::parallel && in.size() >= parallel_cutoff)
    par::negate(in, out);
  else
    serial::negate(in, out);
}

inline double max_abs(std::span<const double> v, Exec e) {
  return (e == Exec::parallel && v.size() >= parallel_cutoff)
             ? par::max_abs(v)
             : serial::max_abs(v);
}

inline double max_rel_update(std::span<const double> a,
                             std::span<const double> b, double scale, Exec e) {
  return (e == Exec::parallel && a.size() >= parallel_cutoff)
             ? par::max_rel_update(a, b, scale)
             : serial::max_rel_update(a, b, scale);
}

inline double min_diff(std::span<const double> a, std::span<const double> b,
                       Exec e) {
  return (e == Exec::parallel && a.size() >= parallel_cutoff)
             ? par::min_diff(a, b)
             : serial::min_diff(a, b);
}

inline double max_diff(std::span<const double> a, std::span<const double> b,
                       Exec e) {
  return (e == Exec::parallel && a.size() >= parallel_cutoff)
             ? par::max_diff(a, b)
             : serial::max_diff(a, b);
}

// Thomas elimination for [I - dt*A]u = rhs, with A given by its bands and
// rows 0 and n of A identically zero (so those rows of the system are the
// identity). No pivoting: the system is an M-matrix whenever the bands come
// from assemble_bands with nonnegative rate. Pivots are checked finite and
// nonzero. Sequential by nature; shared by both backends.
void thomas_solve(std::span<const double> sub, std::span<const double> diag,
                  std::span<const double> super, double dt,
                  std::span<const double> rhs, std::span<double> out);

}  // namespace bsb::kernels
