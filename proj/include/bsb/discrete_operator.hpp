#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bsb/grid.hpp"
#include "bsb/kernels.hpp"
#include "bsb/model.hpp"

namespace bsb {

/// Bang-bang control: one volatility per interior node, each exactly one of
/// the two band endpoints. Entry i-1 belongs to node i.
struct ControlVector {
  std::vector<double> sigma;

  bool operator==(const ControlVector&) const = default;
};

/// True when every entry is exactly sigma_lo or sigma_hi.
bool is_bang_bang(const ControlVector& control, const ModelParams& params);

/// Tridiagonal spatial operator A(sigma): sub_i = alpha_i, super_i = beta_i,
/// diag_i = -(alpha_i + beta_i + rate) at interior rows; rows 0 and N are
/// identically zero. Bands are full-length (n_space+1) vectors.
struct DiscreteOperator {
  std::vector<double> sub;
  std::vector<double> diag;
  std::vector<double> super;

  std::size_t size() const { return diag.size(); }
};

DiscreteOperator assemble(const Grid& grid, const ModelParams& params,
                          const ControlVector& control,
                          kernels::Exec exec = kernels::Exec::serial);

/// out = A*u (zero at rows 0 and N).
void apply(const DiscreteOperator& op, std::span<const double> u,
           std::span<double> out, kernels::Exec exec = kernels::Exec::serial);

std::vector<double> apply(const DiscreteOperator& op,
                          std::span<const double> u,
                          kernels::Exec exec = kernels::Exec::serial);

struct MMatrixViolation {
  std::size_t row;
  std::string what;
  double value;
};

/// Structural audit of I - dt*A: positive diagonal, nonpositive
/// off-diagonals, weak row diagonal dominance (strict at interior rows).
struct MMatrixReport {
  bool pass = true;
  std::vector<MMatrixViolation> violations;

  std::string to_string() const;
};

MMatrixReport m_matrix_check(const DiscreteOperator& op, double dt);

}  // namespace bsb
