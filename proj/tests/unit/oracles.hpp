#pragma once

// Reference computations written independently of the library code paths.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

// Root of an increasing function on [lo, hi] by plain bisection.
inline double bisect(const std::function<double(double)>& g, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Luxemburg norm of c * chi_(0,m) for M(t) = t log(e + t): m M(c / lambda) = 1.
inline double llogl_indicator(double m, double c = 1.0) {
  // m M(c/lambda) decreases in lambda; bisect on 1 - m M(c/lambda).
  return bisect([&](double lam) { return 1.0 - m * (c / lam) * std::log(std::numbers::e + c / lam); },
                1e-9, 1e9);
}

// Same for M(t) = exp(t^2) - 1.
inline double exp_l2_indicator(double m, double c = 1.0) {
  return bisect([&](double lam) { return 1.0 - m * std::expm1((c / lam) * (c / lam)); }, 1e-6, 1e6);
}

}  // namespace oracle
