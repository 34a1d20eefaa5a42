#include "sphera/transform.hpp"

#include <cmath>

namespace sphera {

namespace {

double int_pow(double x, int n) {
  double out = 1.0;
  for (int i = 0; i < n; ++i) out *= x;
  return out;
}

// Trig factor after j quarter turns from phase index start: 0 cos, 1 -sin, 2 -cos, 3 sin.
double rotated_trig(int start, int j, double phi) {
  switch ((start + j) % 4) {
    case 0: return std::cos(phi);
    case 1: return -std::sin(phi);
    case 2: return -std::cos(phi);
    default: return std::sin(phi);
  }
}

Estimate to_estimate(const QuadResult& q) {
  return {q.real(), q.abs_error_re, q.evals, q.converged};
}

void check_orders(int m1, int m2) {
  if (m1 < 0 || m2 < 0 || m1 + m2 > kMaxPartialOrder)
    throw DomainError("partial derivative order out of range (m1, m2 >= 0, m1 + m2 <= 4)");
}

// start: 0 for W (cos), 1 for I (sin, phase index 3).
Estimate partial(const SphereSetup& setup, ComplexExponent alpha, int m1, int m2, int start,
                 const QuadConfig& config) {
  check_orders(m1, m2);
  const int n = m1 + m2;
  const int phase0 = start == 0 ? 0 : 3;
  const auto q = integrate_axial(
      setup,
      [&](const AxialNode& node) {
        const double L = node.log_omega;
        return std::complex<double>(
            std::exp(alpha.xi * L) * int_pow(L, n) * rotated_trig(phase0, m2, alpha.zeta * L), 0.0);
      },
      alpha.zeta, config);
  return to_estimate(q);
}

}  // namespace

TransformValue evaluate_F(const SphereSetup& setup, ComplexExponent alpha, const QuadConfig& config) {
  TransformValue out;
  out.quad = F_derivative(setup, alpha, 0, config);
  out.W = out.quad.real();
  out.I = out.quad.imag();
  return out;
}

QuadResult F_derivative(const SphereSetup& setup, ComplexExponent alpha, int n,
                        const QuadConfig& config) {
  if (n < 0) throw DomainError("F_derivative: order must be >= 0");
  return integrate_axial(
      setup,
      [&](const AxialNode& node) {
        const double L = node.log_omega;
        const double mag = std::exp(alpha.xi * L) * int_pow(L, n);
        const double phi = alpha.zeta * L;
        return std::complex<double>(mag * std::cos(phi), mag * std::sin(phi));
      },
      alpha.zeta, config);
}

Estimate dW(const SphereSetup& setup, ComplexExponent alpha, int order_xi, int order_zeta,
            const QuadConfig& config) {
  return partial(setup, alpha, order_xi, order_zeta, 0, config);
}

Estimate dI(const SphereSetup& setup, ComplexExponent alpha, int order_xi, int order_zeta,
            const QuadConfig& config) {
  return partial(setup, alpha, order_xi, order_zeta, 1, config);
}

Estimate log_moment(const SphereSetup& setup, double xi, int m, TrigFactor trig,
                    const QuadConfig& config) {
  if (m < 0 || m > kMaxLogMoment) throw DomainError("log_moment: m must lie in [0, 12]");
  const double b = trig.kind == TrigKind::none ? 0.0 : trig.b;
  const auto q = integrate_axial(
      setup,
      [&](const AxialNode& node) {
        const double L = node.log_omega;
        double t = 1.0;
        if (trig.kind == TrigKind::cos) t = std::cos(b * L);
        if (trig.kind == TrigKind::sin) t = std::sin(b * L);
        return std::complex<double>(std::exp(xi * L) * int_pow(L, m) * t, 0.0);
      },
      b, config);
  return to_estimate(q);
}

std::complex<double> TaylorSeries::operator()(std::complex<double> alpha) const {
  const std::complex<double> h = alpha - center;
  const std::complex<double> h2 = h * h;
  // Horner in (alpha - k/2)^2
  std::complex<double> acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * h2 + *it;
  return acc;
}

TaylorSeries taylor(const SphereSetup& setup, int M, const QuadConfig& config) {
  if (M < 0 || M > kMaxTaylorOrder) throw DomainError("taylor: order must lie in [0, 12]");
  TaylorSeries s;
  s.center = 0.5 * setup.k();
  s.M = M;
  double factorial = 1.0;
  for (int m = 0; m <= M; ++m) {
    if (m > 0) factorial *= (2.0 * m - 1.0) * (2.0 * m);
    // Same integrand as log_moment(k/2, 2m, none), without its m <= 12 bound.
    const auto q = F_derivative(setup, {s.center, 0.0}, 2 * m, config);
    s.coeffs.push_back(q.real() / factorial);
    s.errors.push_back(q.abs_error_re / factorial);
  }
  return s;
}

ExtendedReal strip_halfwidth(const SphereSetup& setup) { return setup.strip_halfwidth(); }

}  // namespace sphera
