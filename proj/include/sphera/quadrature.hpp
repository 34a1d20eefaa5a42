#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "sphera/ratio.hpp"
#include "sphera/types.hpp"

namespace sphera {

struct QuadConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  long max_evals = 10'000'000;
  /// Largest change of zeta * ln(omega) allowed inside one initial panel.
  double oscillation_cap = kPi / 4;

  /// Throws DomainError for nonpositive tolerances or max_evals < 100.
  void validate() const;
};

/// Value of a sphere integral. Real integrals carry im == 0.
struct QuadResult {
  std::complex<double> value;
  double abs_error = 0.0;     // hypot of the component estimates
  double abs_error_re = 0.0;
  double abs_error_im = 0.0;
  long evals = 0;
  bool converged = false;

  double real() const { return value.real(); }
  double imag() const { return value.imag(); }
};

/// Closed sub-interval of the angular range.
struct Panel {
  double lo = 0.0;
  double hi = 0.0;
};

/// Everything an axially symmetric integrand may depend on at one node.
/// u = pi - theta is the angle between Ox and Oy.
struct AxialNode {
  double u = 0.0;
  double omega = 1.0;
  double log_omega = 0.0;
  double dist2 = 0.0;  // |x - y|^2
  double cos_theta = 1.0;
};

using AxialIntegrand = std::function<std::complex<double>(const AxialNode&)>;

/// Initial partition of theta in [0, pi], ordered by theta.
///
/// Breakpoints are equispaced in ln(omega) so that no panel sees a change of
/// ln(omega) above oscillation_cap / max(|zeta|, 1); for Upsilon > 0.9 a geometric
/// ladder (ratio 1/2, down to width 1e-14 pi) is added towards theta = pi, where
/// omega peaks.
std::vector<Panel> adaptive_segments(const SphereSetup& setup, double zeta,
                                     const QuadConfig& config = {});

/// Integral over S^k(R) of an integrand that depends on y only through the angle
/// at the origin: |sigma_{k-1}| R^k * int_0^pi h(u) sin^{k-1}(u) du.
///
/// zeta is the oscillation frequency in ln(omega) used to lay out the initial panels
/// (0 for non-oscillatory integrands). Deterministic; reports non-convergence
/// through QuadResult::converged.
QuadResult integrate_axial(const SphereSetup& setup, const AxialIntegrand& h, double zeta,
                           const QuadConfig& config = {});

/// int_{S^k} g(omega(x, y)) dS_y for a real g.
QuadResult integrate_sphere(const SphereSetup& setup, const std::function<double(double)>& g,
                            const QuadConfig& config = {});

/// Complex g; zeta as in integrate_axial.
QuadResult integrate_sphere_complex(const SphereSetup& setup,
                                    const std::function<std::complex<double>(double)>& g,
                                    double zeta, const QuadConfig& config = {});

/// int_{S^k} |x - y|^{-alpha} dS_y.
QuadResult integrate_distance_power(const SphereSetup& setup, ComplexExponent alpha,
                                    const QuadConfig& config = {});

}  // namespace sphera
