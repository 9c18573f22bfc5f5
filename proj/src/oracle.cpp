#include "bsb/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bsb::oracle {

namespace {

// Cody's rational approximations for erf(x) on |x| <= 0.46875, erfc(x) on
// 0.46875 < x <= 4 and erfc(x) for x > 4 (via 1/x^2). The exp(-x^2) factor
// is split as exp(-q^2)*exp(-(x-q)(x+q)) with q = trunc(16x)/16 to keep the
// argument errors small, as in CALERF.

constexpr double kErfA[5] = {3.16112374387056560e+00, 1.13864154151050156e+02,
                             3.77485237685302021e+02, 3.20937758913846947e+03,
                             1.85777706184603153e-01};
constexpr double kErfB[4] = {2.36012909523441209e+01, 2.44024637934444173e+02,
                             1.28261652607737228e+03, 2.84423683343917062e+03};

constexpr double kErfcC[9] = {5.64188496988670089e-01, 8.88314979438837594e+00,
                              6.61191906371416295e+01, 2.98635138197400131e+02,
                              8.81952221241769090e+02, 1.71204761263407058e+03,
                              2.05107837782607147e+03, 1.23033935479799725e+03,
                              2.15311535474403846e-08};
constexpr double kErfcD[8] = {1.57449261107098347e+01, 1.17693950891312499e+02,
                              5.37181101862009858e+02, 1.62138957456669019e+03,
                              3.29079923573345963e+03, 4.36261909014324716e+03,
                              3.43936767414372164e+03, 1.23033935480374942e+03};

constexpr double kErfcP[6] = {3.05326634961232344e-01, 3.60344899949804439e-01,
                              1.25781726111229246e-01, 1.60837851487422766e-02,
                              6.58749161529837803e-04, 1.63153871373020978e-02};
constexpr double kErfcQ[5] = {2.56852019228982242e+00, 1.87295284992346047e+00,
                              5.27905102951428412e-01, 6.05183413124413191e-02,
                              2.33520497626869185e-03};

constexpr double kInvSqrtPi = 5.6418958354775628695e-01;

double erf_small(double x) {
  const double z = x * x;
  double num = kErfA[4] * z;
  double den = z;
  for (int i = 0; i < 3; ++i) {
    num = (num + kErfA[i]) * z;
    den = (den + kErfB[i]) * z;
  }
  return x * (num + kErfA[3]) / (den + kErfB[3]);
}

double exp_split(double y) {
  const double q = std::trunc(y * 16.0) / 16.0;
  return std::exp(-q * q) * std::exp(-(y - q) * (y + q));
}

// erfc(y) for 0.46875 < y <= 4.
double erfc_mid(double y) {
  double num = kErfcC[8] * y;
  double den = y;
  for (int i = 0; i < 7; ++i) {
    num = (num + kErfcC[i]) * y;
    den = (den + kErfcD[i]) * y;
  }
  return exp_split(y) * (num + kErfcC[7]) / (den + kErfcD[7]);
}

// erfc(y) for y > 4.
double erfc_far(double y) {
  const double z = 1.0 / (y * y);
  double num = kErfcP[5] * z;
  double den = z;
  for (int i = 0; i < 4; ++i) {
    num = (num + kErfcP[i]) * z;
    den = (den + kErfcQ[i]) * z;
  }
  double r = z * (num + kErfcP[4]) / (den + kErfcQ[4]);
  r = (kInvSqrtPi - r) / y;
  return exp_split(y) * r;
}

double erfc_positive(double y) {
  if (y <= 0.46875) return 1.0 - erf_small(y);
  if (y <= 4.0) return erfc_mid(y);
  if (y >= 26.6) return 0.0;  // below the smallest normal double
  return erfc_far(y);
}

}  // namespace

double norm_cdf(double x) {
  const double y = x / std::numbers::sqrt2_v<double>;
  // N(x) = erfc(-x/sqrt2)/2
  if (y >= 0.0) {
    if (y <= 0.46875) return 0.5 + 0.5 * erf_small(y);
    return 1.0 - 0.5 * erfc_positive(y);
  }
  return 0.5 * erfc_positive(-y);
}

namespace {

void check_args(double sigma, double tau) {
  if (!(sigma > 0.0))
    throw std::invalid_argument("oracle requires sigma > 0");
  if (!(tau > 0.0)) throw std::invalid_argument("oracle requires tau > 0");
}

}  // namespace

double bs_call(double spot, double strike, double rate, double sigma,
               double tau) {
  check_args(sigma, tau);
  if (strike <= 0.0) return spot - strike * std::exp(-rate * tau);
  if (spot <= 0.0) return 0.0;
  const double vol = sigma * std::sqrt(tau);
  const double d1 =
      (std::log(spot / strike) + (rate + 0.5 * sigma * sigma) * tau) / vol;
  const double d2 = d1 - vol;
  return spot * norm_cdf(d1) - strike * std::exp(-rate * tau) * norm_cdf(d2);
}

double bs_digital(double spot, double strike, double rate, double sigma,
                  double tau) {
  check_args(sigma, tau);
  if (strike <= 0.0) return std::exp(-rate * tau);
  if (spot <= 0.0) return 0.0;
  const double vol = sigma * std::sqrt(tau);
  const double d2 =
      (std::log(spot / strike) + (rate - 0.5 * sigma * sigma) * tau) / vol;
  return std::exp(-rate * tau) * norm_cdf(d2);
}

double bs_put(double spot, double strike, double rate, double sigma,
              double tau) {
  return bs_call(spot, strike, rate, sigma, tau) - spot +
         strike * std::exp(-rate * tau);
}

double bs_butterfly(double spot, double k1, double k2, double rate,
                    double sigma, double tau) {
  const double mid = (k1 + k2) / 2.0;
  return bs_call(spot, k1, rate, sigma, tau) -
         2.0 * bs_call(spot, mid, rate, sigma, tau) +
         bs_call(spot, k2, rate, sigma, tau);
}

BsQuote quote_call(double spot, double strike, double rate, double sigma,
                   double tau) {
  return {spot, strike, rate, sigma, tau,
          bs_call(spot, strike, rate, sigma, tau)};
}

BsQuote quote_digital(double spot, double strike, double rate, double sigma,
                      double tau) {
  return {spot, strike, rate, sigma, tau,
          bs_digital(spot, strike, rate, sigma, tau)};
}

}  // namespace bsb::oracle
