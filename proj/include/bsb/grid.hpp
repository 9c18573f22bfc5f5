#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bsb/kernels.hpp"
#include "bsb/model.hpp"

namespace bsb {

struct GridSpacing {
  enum class Kind { uniform, geometric };
  Kind kind = Kind::uniform;
  // Geometric clustering: spacings shrink toward `center`, the widest and
  // narrowest interval on each side differing by factor `ratio`.
  double center = 0.0;
  double ratio = 1.0;

  static GridSpacing uniform() { return {}; }
  static GridSpacing geometric(double center, double ratio) {
    return {Kind::geometric, center, ratio};
  }
};

/// Spatial partition 0 = x_0 < ... < x_N = S_max plus the time partition of
/// [0, T] in time-to-maturity; dt[n] is the step from level n to level n+1.
/// Admissibility (rate*x_i*dt <= x_{i+1}-x_i for interior i) is enforced at
/// build time so every characteristic foot stays in its host interval.
struct Grid {
  std::vector<double> x;
  std::vector<double> dt;
  std::vector<double> tau;  // cumulative levels, tau[0] = 0, tau[M] = T

  std::size_t n_space() const { return x.size() - 1; }
  std::size_t n_time() const { return dt.size(); }
  double s_max() const { return x.back(); }
  double dx_max() const;
  double dt_max() const;

  // Quasi-uniformity of the partition is diagnostic only.
  bool quasi_uniform = true;
  std::string quasi_uniform_note;
};

Grid build_grid(const ModelParams& params, const BoundarySpec& boundary,
                std::size_t n_space, std::size_t n_time,
                const GridSpacing& spacing = GridSpacing::uniform(),
                double c1 = 0.5, double c2 = 2.0);

/// Characteristic feet xbar_i^n = x_i*(1 + rate*dt_{n+1}) with their host
/// interval [x_i, x_{i+1}] and interpolation weight theta. Row n serves the
/// step from level n to n+1. The feet of the boundary nodes are the nodes
/// themselves (their rows are handled by the boundary conventions).
struct CharacteristicFeet {
  std::size_t n_space = 0;
  std::size_t n_time = 0;
  std::vector<double> foot;   // n_time x (n_space-1), interior nodes
  std::vector<double> theta;  // same layout, theta in [0,1]

  std::span<const double> theta_row(std::size_t step) const {
    return {theta.data() + step * (n_space - 1), n_space - 1};
  }
  std::span<const double> foot_row(std::size_t step) const {
    return {foot.data() + step * (n_space - 1), n_space - 1};
  }
  std::size_t host_interval(std::size_t node) const { return node; }
};

CharacteristicFeet characteristic_feet(const Grid& grid, double rate,
                                       kernels::Exec exec = kernels::Exec::serial);

/// ubar for the step from level n to n+1:
///   ubar_0 = u_0 / (1 + rate*dt),
///   ubar_i = (1-theta_i)*u_i + theta_i*u_{i+1} for interior i,
///   ubar_N = dirichlet_next (the far-field value at the NEW level).
void interpolate_at_feet(std::span<const double> values,
                         const CharacteristicFeet& feet, std::size_t step,
                         double dirichlet_next, double rate, double dt,
                         std::span<double> out,
                         kernels::Exec exec = kernels::Exec::serial);

}  // namespace bsb
