#pragma once

namespace bsb::oracle {

/// Standard normal CDF via Cody's rational Chebyshev approximation of
/// erf/erfc (W. J. Cody, Math. Comp. 23 (1969), 631-637; the coefficient
/// tables are the ones used in netlib's CALERF). Absolute error is far below
/// 1e-10 everywhere; deliberately independent of the PDE code path.
double norm_cdf(double x);

struct BsQuote {
  double spot;
  double strike;
  double rate;
  double sigma;
  double tau;
  double price;
};

/// Lognormal European call. Requires sigma > 0 and tau > 0; zero strike
/// degenerates to the forward.
double bs_call(double spot, double strike, double rate, double sigma,
               double tau);

/// Discounted in-the-money probability (cash-or-nothing call paying 1 when
/// S_T >= K).
double bs_digital(double spot, double strike, double rate, double sigma,
                  double tau);

/// Put via parity with bs_call.
double bs_put(double spot, double strike, double rate, double sigma,
              double tau);

/// Static replication: call(K1) - 2*call((K1+K2)/2) + call(K2).
double bs_butterfly(double spot, double k1, double k2, double rate,
                    double sigma, double tau);

BsQuote quote_call(double spot, double strike, double rate, double sigma,
                   double tau);
BsQuote quote_digital(double spot, double strike, double rate, double sigma,
                      double tau);

}  // namespace bsb::oracle
