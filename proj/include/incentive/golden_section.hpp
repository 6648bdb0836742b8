#pragma once

#include <algorithm>
#include <cmath>

namespace incentive {

struct LineMinimum {
  double x;
  double value;
};

/// Golden-section search for a minimum of f on [a, b]. Stops once the
/// bracket is narrower than rel_tol * max(1, |midpoint|).
template <class F>
LineMinimum golden_section_minimize(F&& f, double a, double b, double rel_tol = 1e-8, int max_iter = 500) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(b - a) <= rel_tol * std::max(1.0, std::abs(0.5 * (a + b)))) break;
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? LineMinimum{c, fc} : LineMinimum{d, fd};
}

}  // namespace incentive
