#pragma once

#include <cmath>
#include <utility>

namespace sphera::detail {

struct NewtonResult {
  double x = 0.0;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Newton's method kept inside a sign-change bracket [lo, hi]; steps that leave the
// bracket or stall fall back to bisection. f_df(x) returns {f(x), f'(x)}.
// Stops when |f| <= ftol or the step / bracket shrinks below xtol.
template <class FDF>
NewtonResult safeguarded_newton(FDF&& f_df, double lo, double hi, double f_lo, double x0,
                                double xtol, double ftol, int max_iter = 200) {
  const bool lo_negative = f_lo < 0.0;
  NewtonResult out;
  double x = x0 < lo || x0 > hi ? 0.5 * (lo + hi) : x0;
  double prev_step = hi - lo;
  for (int it = 1; it <= max_iter; ++it) {
    const auto [f, df] = f_df(x);
    out.x = x;
    out.f = f;
    out.iterations = it;
    if (std::abs(f) <= ftol) {
      out.converged = true;
      return out;
    }
    if ((f < 0.0) == lo_negative)
      lo = x;
    else
      hi = x;
    double next = df != 0.0 ? x - f / df : lo - 1.0;
    // bisect when Newton leaves the bracket or does not halve the previous step
    if (!(next > lo && next < hi) || std::abs(next - x) > 0.5 * prev_step) next = 0.5 * (lo + hi);
    prev_step = std::abs(next - x);
    x = next;
    if (prev_step <= xtol || hi - lo <= xtol) {
      const auto [fx, dfx] = f_df(x);
      (void)dfx;
      out.x = x;
      out.f = fx;
      out.converged = true;
      return out;
    }
  }
  return out;
}

}  // namespace sphera::detail
