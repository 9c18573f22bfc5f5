#include "bsb/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace bsb {

namespace {

// Geometric spacings on one side of the center: k intervals whose sizes grow
// by a constant factor away from the center, widest/narrowest = ratio,
// rescaled to cover `length` exactly.
std::vector<double> one_sided_spacings(double length, std::size_t k,
                                       double ratio, bool growing_away) {
  std::vector<double> w(k);
  if (k == 1) {
    w[0] = length;
    return w;
  }
  const double g = std::pow(ratio, 1.0 / static_cast<double>(k - 1));
  double sum = 0.0;
  double cur = 1.0;
  for (std::size_t j = 0; j < k; ++j) {
    w[j] = cur;
    sum += cur;
    cur *= g;
  }
  for (double& v : w) v *= length / sum;
  if (!growing_away) std::reverse(w.begin(), w.end());
  return w;
}

}  // namespace

double Grid::dx_max() const {
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    m = std::max(m, x[i + 1] - x[i]);
  return m;
}

double Grid::dt_max() const {
  double m = 0.0;
  for (double v : dt) m = std::max(m, v);
  return m;
}

Grid build_grid(const ModelParams& params, const BoundarySpec& boundary,
                std::size_t n_space, std::size_t n_time,
                const GridSpacing& spacing, double c1, double c2) {
  if (n_space < 3) throw std::invalid_argument("n_space must be >= 3");
  if (n_time < 1) throw std::invalid_argument("n_time must be >= 1");

  Grid grid;
  grid.x.resize(n_space + 1);

  if (spacing.kind == GridSpacing::Kind::uniform) {
    const double dx = boundary.s_max / static_cast<double>(n_space);
    for (std::size_t i = 0; i <= n_space; ++i)
      grid.x[i] = static_cast<double>(i) * dx;
  } else {
    if (!(spacing.center > 0.0 && spacing.center < boundary.s_max))
      throw std::invalid_argument("clustering center must lie in (0, S_max)");
    if (!(spacing.ratio >= 1.0))
      throw std::invalid_argument("clustering ratio must be >= 1");
    auto n_left = static_cast<std::size_t>(std::lround(
        static_cast<double>(n_space) * spacing.center / boundary.s_max));
    n_left = std::clamp<std::size_t>(n_left, 1, n_space - 1);
    const auto left =
        one_sided_spacings(spacing.center, n_left, spacing.ratio, false);
    const auto right = one_sided_spacings(boundary.s_max - spacing.center,
                                          n_space - n_left, spacing.ratio,
                                          true);
    std::size_t i = 0;
    grid.x[0] = 0.0;
    for (double w : left) {
      ++i;
      grid.x[i] = grid.x[i - 1] + w;
    }
    grid.x[i] = spacing.center;
    for (double w : right) {
      ++i;
      grid.x[i] = grid.x[i - 1] + w;
    }
  }
  grid.x.front() = 0.0;
  grid.x.back() = boundary.s_max;
  for (std::size_t i = 0; i < n_space; ++i)
    if (!(grid.x[i] < grid.x[i + 1]))
      throw std::invalid_argument("grid nodes must be strictly increasing");

  const double dt_uniform = params.maturity / static_cast<double>(n_time);
  grid.dt.assign(n_time, dt_uniform);
  grid.tau.resize(n_time + 1);
  for (std::size_t n = 0; n <= n_time; ++n)
    grid.tau[n] = params.maturity * static_cast<double>(n) /
                  static_cast<double>(n_time);

  // Characteristic admissibility: the foot of every interior node must stay
  // inside [x_i, x_{i+1}] for every step.
  for (std::size_t n = 0; n < n_time; ++n) {
    for (std::size_t i = 1; i < n_space; ++i) {
      const double drift = params.rate * grid.x[i] * grid.dt[n];
      const double dx = grid.x[i + 1] - grid.x[i];
      if (drift > dx) {
        double dt_allowed = std::numeric_limits<double>::infinity();
        for (std::size_t j = 1; j < n_space; ++j)
          if (params.rate * grid.x[j] > 0.0)
            dt_allowed = std::min(dt_allowed, (grid.x[j + 1] - grid.x[j]) /
                                                  (params.rate * grid.x[j]));
        std::ostringstream msg;
        msg << "characteristic admissibility violated at node i=" << i
            << ", step n=" << n + 1 << ": rate*x_i*dt = " << drift
            << " exceeds x_{i+1}-x_i = " << dx
            << "; largest admissible dt = " << dt_allowed;
        throw std::invalid_argument(msg.str());
      }
    }
  }

  // Quasi-uniformity: C1*h <= dx_i, dt_n <= C2*h, h = max(dx, dt).
  const double h = std::max(grid.dx_max(), grid.dt_max());
  std::ostringstream note;
  for (std::size_t i = 0; i < n_space; ++i) {
    const double dx = grid.x[i + 1] - grid.x[i];
    if (dx < c1 * h || dx > c2 * h) {
      grid.quasi_uniform = false;
      note << "dx_" << i << " = " << dx << " outside [" << c1 * h << ", "
           << c2 * h << "]; ";
      break;
    }
  }
  for (std::size_t n = 0; n < n_time && grid.quasi_uniform; ++n) {
    if (grid.dt[n] < c1 * h || grid.dt[n] > c2 * h) {
      grid.quasi_uniform = false;
      note << "dt_" << n + 1 << " = " << grid.dt[n] << " outside [" << c1 * h
           << ", " << c2 * h << "]; ";
      break;
    }
  }
  grid.quasi_uniform_note = note.str();
  return grid;
}

CharacteristicFeet characteristic_feet(const Grid& grid, double rate,
                                       kernels::Exec exec) {
  CharacteristicFeet feet;
  feet.n_space = grid.n_space();
  feet.n_time = grid.n_time();
  const std::size_t stride = feet.n_space - 1;
  feet.theta.resize(feet.n_time * stride);
  feet.foot.resize(feet.n_time * stride);
  for (std::size_t n = 0; n < feet.n_time; ++n) {
    std::span<double> theta{feet.theta.data() + n * stride, stride};
    kernels::foot_thetas(grid.x, rate, grid.dt[n], theta, exec);
    for (std::size_t i = 1; i < feet.n_space; ++i)
      feet.foot[n * stride + (i - 1)] =
          grid.x[i] + rate * grid.x[i] * grid.dt[n];
  }
  return feet;
}

void interpolate_at_feet(std::span<const double> values,
                         const CharacteristicFeet& feet, std::size_t step,
                         double dirichlet_next, double rate, double dt,
                         std::span<double> out, kernels::Exec exec) {
  const std::size_t n = values.size() - 1;
  kernels::interpolate_interior(values, feet.theta_row(step), out, exec);
  out[0] = values[0] / (1.0 + rate * dt);
  out[n] = dirichlet_next;
}

}  // namespace bsb
