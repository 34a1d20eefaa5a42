#pragma once

#include <complex>
#include <vector>

#include "sphera/quadrature.hpp"
#include "sphera/ratio.hpp"
#include "sphera/types.hpp"

namespace sphera {

/// F(alpha) = W + iI with the quadrature that produced it. W and I come from
/// one complex integral evaluated on shared panels.
struct TransformValue {
  double W = 0.0;
  double I = 0.0;
  QuadResult quad;

  std::complex<double> value() const { return {W, I}; }
  double W_error() const { return quad.abs_error_re; }
  double I_error() const { return quad.abs_error_im; }
};

/// A real quantity with its error estimate.
struct Estimate {
  double value = 0.0;
  double abs_error = 0.0;
  long evals = 0;
  bool converged = false;
};

/// F(alpha) = int_{S^k} omega^alpha dS.
TransformValue evaluate_F(const SphereSetup& setup, ComplexExponent alpha,
                          const QuadConfig& config = {});

/// n-th complex derivative F^{(n)}(alpha) = int omega^alpha (ln omega)^n dS.
QuadResult F_derivative(const SphereSetup& setup, ComplexExponent alpha, int n,
                        const QuadConfig& config = {});

inline constexpr int kMaxPartialOrder = 4;

/// d^{m1+m2} W / dxi^{m1} dzeta^{m2}, differentiated under the integral sign:
/// every derivative adds a factor ln(omega), every zeta-derivative also advances
/// cos -> -sin -> -cos -> sin. Orders with m1 + m2 > 4 are rejected.
Estimate dW(const SphereSetup& setup, ComplexExponent alpha, int order_xi, int order_zeta,
            const QuadConfig& config = {});

/// Same for I; the rotation starts from sin.
Estimate dI(const SphereSetup& setup, ComplexExponent alpha, int order_xi, int order_zeta,
            const QuadConfig& config = {});

enum class TrigKind { none, cos, sin };

struct TrigFactor {
  TrigKind kind = TrigKind::none;
  double b = 0.0;
};

inline constexpr int kMaxLogMoment = 12;

/// int omega^xi (ln omega)^m trig(b ln omega) dS, m <= 12.
Estimate log_moment(const SphereSetup& setup, double xi, int m, TrigFactor trig,
                    const QuadConfig& config = {});

/// Even Taylor coefficients of F about k/2; the odd ones vanish.
struct TaylorSeries {
  double center = 0.0;
  int M = 0;
  std::vector<double> coeffs;  // coeffs[m] multiplies (alpha - k/2)^{2m}
  std::vector<double> errors;

  std::complex<double> operator()(std::complex<double> alpha) const;
};

inline constexpr int kMaxTaylorOrder = 12;

TaylorSeries taylor(const SphereSetup& setup, int M, const QuadConfig& config = {});

/// (pi/2) / ln((R + r)/|R - r|); unbounded for r = 0. Within |zeta| <= p,
/// cos(zeta ln omega) >= 0 on the whole sphere.
ExtendedReal strip_halfwidth(const SphereSetup& setup);

}  // namespace sphera
