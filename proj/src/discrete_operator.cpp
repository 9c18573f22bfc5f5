#include "bsb/discrete_operator.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bsb {

bool is_bang_bang(const ControlVector& control, const ModelParams& params) {
  for (double s : control.sigma)
    if (s != params.sigma_lo && s != params.sigma_hi) return false;
  return true;
}

DiscreteOperator assemble(const Grid& grid, const ModelParams& params,
                          const ControlVector& control, kernels::Exec exec) {
  const std::size_t n = grid.n_space();
  if (control.sigma.size() != n - 1)
    throw std::invalid_argument(
        "control vector must have one entry per interior node");
  DiscreteOperator op;
  op.sub.resize(n + 1);
  op.diag.resize(n + 1);
  op.super.resize(n + 1);
  kernels::assemble_bands(grid.x, control.sigma, params.rate, op.sub, op.diag,
                          op.super, exec);
  return op;
}

void apply(const DiscreteOperator& op, std::span<const double> u,
           std::span<double> out, kernels::Exec exec) {
  if (u.size() != op.size())
    throw std::invalid_argument("apply: vector length mismatch");
  kernels::apply_bands(op.sub, op.diag, op.super, u, out, exec);
}

std::vector<double> apply(const DiscreteOperator& op,
                          std::span<const double> u, kernels::Exec exec) {
  std::vector<double> out(u.size());
  apply(op, u, out, exec);
  return out;
}

MMatrixReport m_matrix_check(const DiscreteOperator& op, double dt) {
  MMatrixReport report;
  const std::size_t n = op.size() - 1;
  auto flag = [&](std::size_t row, const std::string& what, double value) {
    report.pass = false;
    report.violations.push_back({row, what, value});
  };

  for (std::size_t i = 0; i <= n; ++i) {
    const double lower = -dt * op.sub[i];
    const double diag = 1.0 - dt * op.diag[i];
    const double upper = -dt * op.super[i];
    if (!std::isfinite(lower) || !std::isfinite(diag) || !std::isfinite(upper))
      flag(i, "non-finite entry", diag);
    if (!(diag > 0.0)) flag(i, "non-positive diagonal", diag);
    if (lower > 0.0) flag(i, "positive sub-diagonal", lower);
    if (upper > 0.0) flag(i, "positive super-diagonal", upper);
    const double dominance = diag - std::abs(lower) - std::abs(upper);
    const bool interior = i > 0 && i < n;
    if (interior ? !(dominance > 0.0) : !(dominance >= 0.0))
      flag(i, interior ? "no strict diagonal dominance"
                       : "no weak diagonal dominance",
           dominance);
  }
  return report;
}

std::string MMatrixReport::to_string() const {
  std::ostringstream os;
  if (pass) {
    os << "M-matrix check: pass";
    return os.str();
  }
  os << "M-matrix check: FAIL (" << violations.size() << " violation(s))";
  for (const auto& v : violations)
    os << "\n  row " << v.row << ": " << v.what << " (" << v.value << ")";
  return os.str();
}

}  // namespace bsb
