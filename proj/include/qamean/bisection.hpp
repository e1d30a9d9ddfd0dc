#pragma once

#include <cmath>

namespace qam {

/// Root of a monotone phi on [a, b] by bisection, run until the bracket
/// collapses to adjacent doubles. Returns whichever bracket end has the
/// smaller residual. phi(a) and phi(b) must not have the same strict sign.
template <class Phi>
double bisect(Phi&& phi, double a, double b) {
  double fa = phi(a);
  if (fa == 0.0) return a;
  double fb = phi(b);
  if (fb == 0.0) return b;
  const bool neg_at_a = fa < 0.0;
  // a bracket across zero may need to walk through the subnormals
  for (int iter = 0; iter < 2200; ++iter) {
    const double m = a + 0.5 * (b - a);
    if (!(m > a && m < b)) break;
    const double fm = phi(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == neg_at_a) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  return std::fabs(fa) <= std::fabs(fb) ? a : b;
}

}  // namespace qam
