#include "bsb/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bsb {

std::string to_string(Side side) { return side == Side::ask ? "ask" : "bid"; }

std::string to_string(PayoffKind kind) {
  switch (kind) {
    case PayoffKind::vanilla_call: return "vanilla_call";
    case PayoffKind::vanilla_put: return "vanilla_put";
    case PayoffKind::digital_call: return "digital_call";
    case PayoffKind::butterfly: return "butterfly";
    case PayoffKind::piecewise_linear: return "piecewise_linear";
  }
  return "unknown";
}

ModelParams::ModelParams(double rate_, double sigma_lo_, double sigma_hi_,
                         double maturity_)
    : rate(rate_),
      sigma_lo(sigma_lo_),
      sigma_hi(sigma_hi_),
      maturity(maturity_) {
  if (!(rate >= 0.0)) throw std::invalid_argument("rate must be >= 0");
  if (!(sigma_lo >= 0.0))
    throw std::invalid_argument("sigma_lo must be >= 0");
  if (!(sigma_lo <= sigma_hi))
    throw std::invalid_argument("volatility band requires sigma_lo <= sigma_hi");
  if (!(sigma_hi > 0.0)) throw std::invalid_argument("sigma_hi must be > 0");
  if (!(maturity > 0.0)) throw std::invalid_argument("maturity must be > 0");
}

Payoff Payoff::vanilla_call(double strike, Side side) {
  if (!(strike > 0.0)) throw std::invalid_argument("strike must be positive");
  Payoff p(PayoffKind::vanilla_call, side);
  p.k1_ = strike;
  return p;
}

Payoff Payoff::vanilla_put(double strike, Side side) {
  if (!(strike > 0.0)) throw std::invalid_argument("strike must be positive");
  Payoff p(PayoffKind::vanilla_put, side);
  p.k1_ = strike;
  return p;
}

Payoff Payoff::digital_call(double strike, Side side) {
  if (!(strike > 0.0)) throw std::invalid_argument("strike must be positive");
  Payoff p(PayoffKind::digital_call, side);
  p.k1_ = strike;
  return p;
}

Payoff Payoff::butterfly(double k1, double k2, Side side) {
  if (!(k1 > 0.0 && k2 > 0.0))
    throw std::invalid_argument("strikes must be positive");
  if (!(k1 < k2)) throw std::invalid_argument("butterfly requires K1 < K2");
  Payoff p(PayoffKind::butterfly, side);
  p.k1_ = k1;
  p.k2_ = k2;
  return p;
}

Payoff Payoff::piecewise_linear(std::vector<std::pair<double, double>> points,
                                Side side) {
  if (points.size() < 2)
    throw std::invalid_argument("piecewise payoff needs at least 2 points");
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
    if (!(points[i].first < points[i + 1].first))
      throw std::invalid_argument(
          "piecewise breakpoints must be strictly increasing");
  for (const auto& [s, v] : points) {
    if (!std::isfinite(s) || !std::isfinite(v))
      throw std::invalid_argument("piecewise breakpoints must be finite");
    if (s < 0.0)
      throw std::invalid_argument("piecewise breakpoints must have s >= 0");
  }
  Payoff p(PayoffKind::piecewise_linear, side);
  p.points_ = std::move(points);
  return p;
}

double Payoff::base_value(double s) const {
  switch (kind_) {
    case PayoffKind::vanilla_call:
      return std::max(s - k1_, 0.0);
    case PayoffKind::vanilla_put:
      return std::max(k1_ - s, 0.0);
    case PayoffKind::digital_call:
      return s >= k1_ ? 1.0 : 0.0;
    case PayoffKind::butterfly: {
      const double mid = (k1_ + k2_) / 2.0;
      return std::max(s - k1_, 0.0) - 2.0 * std::max(s - mid, 0.0) +
             std::max(s - k2_, 0.0);
    }
    case PayoffKind::piecewise_linear: {
      // Affine extrapolation beyond the table using the adjacent segment.
      std::size_t j;
      if (s <= points_.front().first) {
        j = 0;
      } else if (s >= points_.back().first) {
        j = points_.size() - 2;
      } else {
        j = 0;
        while (points_[j + 1].first < s) ++j;
      }
      const auto& [s0, v0] = points_[j];
      const auto& [s1, v1] = points_[j + 1];
      if (s == s0) return v0;
      if (s == s1) return v1;
      return v0 + (s - s0) * (v1 - v0) / (s1 - s0);
    }
  }
  return 0.0;
}

double Payoff::operator()(double s) const {
  const double v = base_value(s);
  return sign_ < 0.0 ? -v : v;
}

Payoff Payoff::negated() const {
  Payoff p = *this;
  p.sign_ = -sign_;
  return p;
}

bool Payoff::is_convex() const {
  bool base_convex = false;
  bool base_concave = false;
  switch (kind_) {
    case PayoffKind::vanilla_call:
    case PayoffKind::vanilla_put:
      base_convex = true;
      break;
    case PayoffKind::digital_call:
    case PayoffKind::butterfly:
      break;
    case PayoffKind::piecewise_linear: {
      base_convex = true;
      base_concave = true;
      double prev = (points_[1].second - points_[0].second) /
                    (points_[1].first - points_[0].first);
      for (std::size_t j = 1; j + 1 < points_.size(); ++j) {
        const double slope = (points_[j + 1].second - points_[j].second) /
                             (points_[j + 1].first - points_[j].first);
        if (slope < prev) base_convex = false;
        if (slope > prev) base_concave = false;
        prev = slope;
      }
      break;
    }
  }
  return sign_ < 0.0 ? base_concave : base_convex;
}

bool Payoff::is_concave() const { return negated().is_convex(); }

double Payoff::largest_strike() const {
  switch (kind_) {
    case PayoffKind::vanilla_call:
    case PayoffKind::vanilla_put:
    case PayoffKind::digital_call:
      return k1_;
    case PayoffKind::butterfly:
      return k2_;
    case PayoffKind::piecewise_linear:
      return points_.back().first;
  }
  return 0.0;
}

Payoff negate_payoff(const Payoff& payoff) { return payoff.negated(); }

double evaluate_payoff(const Payoff& payoff, double s) { return payoff(s); }

FarField FarField::negated() const {
  FarField f = *this;
  for (double& b : f.slope) b = -b;
  for (double& c : f.intercept) c = -c;
  return f;
}

BoundarySpec::BoundarySpec(double s_max_, FarField far_field_, double bound_)
    : s_max(s_max_), far_field(std::move(far_field_)), bound(bound_) {
  if (!(s_max > 0.0)) throw std::invalid_argument("s_max must be positive");
  if (!(bound >= 0.0)) throw std::invalid_argument("C_b must be >= 0");
  if (far_field.slope.empty() || far_field.intercept.empty())
    throw std::invalid_argument("far field coefficients must be non-empty");
  for (std::size_t n = 0; n < far_field.levels(); ++n) {
    const double g = far_field.value(n, s_max);
    if (!std::isfinite(g))
      throw std::invalid_argument("far field value must be finite");
    if (std::abs(g) > bound)
      throw std::invalid_argument(
          "far field exceeds the asserted bound C_b at level " +
          std::to_string(n));
  }
}

BoundarySpec BoundarySpec::negated() const {
  return BoundarySpec(s_max, far_field.negated(), bound);
}

double default_s_max(const Payoff& payoff) {
  return 2.0 * payoff.largest_strike();
}

double far_field_bound(const FarField& far_field, double s_max) {
  double m = 0.0;
  for (std::size_t n = 0; n < far_field.levels(); ++n)
    m = std::max(m, std::abs(far_field.value(n, s_max)));
  return m;
}

FarField default_far_field(const Payoff& payoff, const ModelParams& params,
                           double s_max, std::size_t n_time) {
  FarField f;
  double slope = 0.0;
  double intercept0 = 0.0;
  bool discounted = false;

  switch (payoff.kind()) {
    case PayoffKind::digital_call:
      intercept0 = 1.0;
      break;
    case PayoffKind::butterfly:
    case PayoffKind::vanilla_put:
      break;
    case PayoffKind::vanilla_call:
      slope = 1.0;
      intercept0 = -payoff.strike();
      discounted = true;
      break;
    case PayoffKind::piecewise_linear: {
      const auto& pts = payoff.breakpoints();
      const auto& [s0, v0] = pts[pts.size() - 2];
      const auto& [s1, v1] = pts[pts.size() - 1];
      slope = (v1 - v0) / (s1 - s0);
      intercept0 = v1 - slope * s1;
      discounted = true;
      break;
    }
  }

  const double sgn = payoff.sign();
  f.slope = {sgn * slope};
  if (discounted && intercept0 != 0.0 && params.rate > 0.0) {
    f.intercept.resize(n_time + 1);
    for (std::size_t n = 0; n <= n_time; ++n) {
      const double tau =
          params.maturity * static_cast<double>(n) / static_cast<double>(n_time);
      f.intercept[n] = sgn * intercept0 * std::exp(-params.rate * tau);
    }
  } else {
    f.intercept = {sgn * intercept0};
  }
  (void)s_max;
  return f;
}

}  // namespace bsb
