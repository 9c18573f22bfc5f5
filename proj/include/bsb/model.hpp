#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bsb {

enum class Side { ask, bid };

std::string to_string(Side side);

/// Market parameters: short rate, the volatility band [sigma_lo, sigma_hi]
/// and the maturity. Validated on construction. Equal band endpoints are
/// accepted: the degenerate band reduces the solver to a single-volatility
/// model, which the validation and convergence tooling rely on.
struct ModelParams {
  double rate;
  double sigma_lo;
  double sigma_hi;
  double maturity;

  ModelParams(double rate_, double sigma_lo_, double sigma_hi_,
              double maturity_);
};

enum class PayoffKind {
  vanilla_call,
  vanilla_put,
  digital_call,
  butterfly,
  piecewise_linear,
};

std::string to_string(PayoffKind kind);

/// Terminal claim phi(S_T). Built-in shapes plus a piecewise-linear table;
/// a sign factor gives exact pointwise negation for the bid/ask duality.
///
/// The digital pays 1 for S_T >= K (the value at S_T = K is 1). Piecewise
/// tables extrapolate affinely beyond the first/last breakpoint using the
/// adjacent segment slope.
class Payoff {
 public:
  static Payoff vanilla_call(double strike, Side side = Side::ask);
  static Payoff vanilla_put(double strike, Side side = Side::ask);
  static Payoff digital_call(double strike, Side side = Side::ask);
  static Payoff butterfly(double k1, double k2, Side side = Side::ask);
  static Payoff piecewise_linear(std::vector<std::pair<double, double>> points,
                                 Side side = Side::ask);

  double operator()(double s) const;

  /// Pointwise negation; evaluation commutes with the sign flip exactly.
  Payoff negated() const;

  PayoffKind kind() const { return kind_; }
  Side side() const { return side_; }
  void set_side(Side side) { side_ = side; }
  double sign() const { return sign_; }
  double strike() const { return k1_; }
  double strike_lo() const { return k1_; }
  double strike_hi() const { return k2_; }
  const std::vector<std::pair<double, double>>& breakpoints() const {
    return points_;
  }

  /// True when the (signed) payoff is convex / concave on [0, inf).
  bool is_convex() const;
  bool is_concave() const;

  /// Largest strike or breakpoint abscissa; anchor for the default S_max.
  double largest_strike() const;

 private:
  Payoff(PayoffKind kind, Side side) : kind_(kind), side_(side) {}

  double base_value(double s) const;

  PayoffKind kind_;
  Side side_;
  double sign_ = 1.0;
  double k1_ = 0.0;
  double k2_ = 0.0;
  std::vector<std::pair<double, double>> points_;
};

Payoff negate_payoff(const Payoff& payoff);
double evaluate_payoff(const Payoff& payoff, double s);

/// Far-field Dirichlet data g(tau) = b(tau)*S_max + c(tau). Coefficients are
/// either constants (vectors of size 1) or per-time-level tables of size
/// n_time+1, entry n belonging to time level tau_n.
struct FarField {
  std::vector<double> slope;
  std::vector<double> intercept;

  double slope_at(std::size_t level) const {
    return slope[level < slope.size() ? level : slope.size() - 1];
  }
  double intercept_at(std::size_t level) const {
    return intercept[level < intercept.size() ? level
                                              : intercept.size() - 1];
  }
  double value(std::size_t level, double s_max) const {
    return slope_at(level) * s_max + intercept_at(level);
  }
  std::size_t levels() const {
    return std::max(slope.size(), intercept.size());
  }
  FarField negated() const;
};

/// Spatial truncation at S_max with the asserted far-field bound C_b:
/// |b(tau)*S_max + c(tau)| <= C_b for every supplied level, checked here.
struct BoundarySpec {
  double s_max;
  FarField far_field;
  double bound;

  BoundarySpec(double s_max_, FarField far_field_, double bound_);

  double dirichlet(std::size_t level) const {
    return far_field.value(level, s_max);
  }
  BoundarySpec negated() const;
};

/// Default truncation: twice the largest strike.
double default_s_max(const Payoff& payoff);

/// Per-payoff default far field on the uniform time levels tau_n = n*T/M.
/// Digital: constant 1. Butterfly and put: constant 0. Call and piecewise
/// tables: the affine asymptote with discounted intercept.
FarField default_far_field(const Payoff& payoff, const ModelParams& params,
                           double s_max, std::size_t n_time);

/// Tightest C_b consistent with the far field (max |g| over levels).
double far_field_bound(const FarField& far_field, double s_max);

}  // namespace bsb
