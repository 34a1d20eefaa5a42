#include <cmath>

#include "root_finding.hpp"
#include "sphera/analysis.hpp"

namespace sphera {

RealRoots solve_real(const SphereSetup& setup, double nu, const QuadConfig& config) {
  const double half = 0.5 * setup.k();
  const auto fmin = evaluate_F(setup, {half, 0.0}, config);
  const double tol = std::max(1e-12 * fmin.W, 4.0 * fmin.quad.abs_error);

  RealRoots out;
  out.nu = nu;
  out.F_min = fmin.W;
  if (nu < fmin.W - tol) throw NoSolutionError("solve_real: nu lies below the minimum F(k/2)");
  if (nu <= fmin.W + tol) {
    out.roots = {half};
    out.double_root = true;
    return out;
  }

  const auto g = [&](double lambda) { return evaluate_F(setup, {lambda, 0.0}, config).W - nu; };

  // F increases on [k/2, inf): widen until the value is passed.
  double lo = half;
  double width = 1.0;
  double hi = half + width;
  double g_hi = g(hi);
  for (int i = 0; g_hi < 0.0; ++i) {
    if (i == 60) throw NoSolutionError("solve_real: could not bracket the root");
    lo = hi;
    width *= 2.0;
    hi = half + width;
    g_hi = g(hi);
  }

  // Convex and increasing: Newton started right of the root approaches it monotonically.
  const auto res = detail::safeguarded_newton(
      [&](double lambda) {
        const double f = g(lambda);
        const double df = F_derivative(setup, {lambda, 0.0}, 1, config).real();
        return std::pair{f, df};
      },
      lo, hi, g(lo), hi, 1e-14 * std::max(1.0, std::abs(hi)), 0.0);

  const double lambda = res.x;
  out.iterations = res.iterations;
  out.roots = {setup.k() - lambda, lambda};
  return out;
}

}  // namespace sphera
