#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sphera/quadrature.hpp"
#include "sphera/ratio.hpp"
#include "sphera/transform.hpp"
#include "sphera/types.hpp"

namespace sphera {

// ---------------------------------------------------------------------------
// Identity checks
// ---------------------------------------------------------------------------

/// Outcome of one numerical identity check. pass <=> residual_abs <= tolerance
/// and every quadrature converged.
struct VerificationReport {
  std::string identity;
  std::vector<std::pair<std::string, double>> parameters;
  std::complex<double> lhs;
  std::complex<double> rhs;
  double residual_abs = 0.0;
  double residual_rel = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool inconclusive = false;  // some quadrature did not converge
  double quad_error = 0.0;    // summed error estimates entering the tolerance
  long evals = 0;
};

/// Identity tolerance: max(1e-8 * scale, 4 * summed quadrature error).
double identity_tolerance(double scale, double summed_error);

/// F(alpha) against F(k - alpha).
VerificationReport verify_reflection(const SphereSetup& setup, ComplexExponent alpha,
                                     const QuadConfig& config = {});

/// int omega^{k/2} sin(b ln omega), int omega^{k/2} (ln omega)^{2m+1} cos(b ln omega) and
/// int omega^{k/2} (ln omega)^{2m} sin(b ln omega) all vanish; scale is F(k/2).
/// lhs carries the largest of the three, rhs is 0.
VerificationReport verify_imag_vanishing(const SphereSetup& setup, double b, int m,
                                         const QuadConfig& config = {});

/// int dS / |x-y|^alpha = |R^2 - r^2|^{(beta - alpha)/2} int dS / |x-y|^beta, beta = 2k - alpha.
VerificationReport verify_distance_identity(const SphereSetup& setup, ComplexExponent alpha,
                                            const QuadConfig& config = {});

/// int_0^{2pi} (a - b sin t)^{-p} dt = (a^2 - b^2)^{1/2 - p} int_0^{2pi} (a - b sin t)^{p-1} dt,
/// both sides by periodic trapezoidal quadrature. Requires a > b > 0.
VerificationReport verify_k1_trig(std::complex<double> p_exp, double a, double b,
                                  const QuadConfig& config = {});

/// k = 2: quadrature of int omega^{1+ib} dS against
/// (2 pi R / r) (|R^2 - r^2| / b) sin(b ln((R + r)/|R - r|)), logarithmic limit at b = 0.
VerificationReport closed_form_k2(const SphereSetup& setup, double b, const QuadConfig& config = {});

/// Value of the k = 2 closed form above.
double closed_form_k2_value(const SphereSetup& setup, double b);

/// Reflection, vanishing, distance, closed-form (k = 1, 2) and real-inversion checks
/// for one setup, in a fixed order.
std::vector<VerificationReport> default_suite(const SphereSetup& setup, const QuadConfig& config = {});

// ---------------------------------------------------------------------------
// Real-line inversion
// ---------------------------------------------------------------------------

struct RealRoots {
  std::vector<double> roots;  // {k - lambda, lambda} ascending, or {k/2}
  double nu = 0.0;
  double F_min = 0.0;  // F(k/2)
  int iterations = 0;
  bool double_root = false;
};

/// All real lambda with F(lambda) = nu. F is convex and symmetric about k/2, so the
/// answer is a reflected pair; throws NoSolutionError below the minimum F(k/2).
RealRoots solve_real(const SphereSetup& setup, double nu, const QuadConfig& config = {});

// ---------------------------------------------------------------------------
// Level curves of W in the quadrant [k/2, inf) x [0, p]
// ---------------------------------------------------------------------------

struct CurvePoint {
  double t = 0.0;           // xi
  double v = 0.0;           // zeta = v(t)
  double W_residual = 0.0;  // W(t, v) - level
  double I = 0.0;
};

struct LevelCurve {
  double level = 0.0;
  double seed_a = 0.0;
  double seed_b = 0.0;
  double a0 = 0.0, b0 = 0.0;  // start on Gamma_0 (left edge or bottom edge)
  double a1 = 0.0;            // end (a1, p) on Gamma_1
  double p = 0.0;
  double step = 0.05;
  std::vector<CurvePoint> points;  // increasing t
  bool degenerate = false;         // single point
  bool ok = true;
  std::string failure;
};

struct TraceOptions {
  double step = 0.05;  // arc length
  double min_step = 1e-7;
  int max_points = 20000;
};

/// Traces S(a, b) = {W = W(a, b)} from its Gamma_0 endpoint to its Gamma_1 endpoint.
/// Predictor: unit tangent orthogonal to grad W; corrector: safeguarded Newton in zeta
/// at fixed t. Throws DomainError for seeds outside the closed quadrant.
LevelCurve trace_level_curve(const SphereSetup& setup, double a, double b,
                             const TraceOptions& options = {}, const QuadConfig& config = {});

/// v(t) on the level set W = level (requires W(t, p) <= level <= W(t, 0)).
double level_curve_value_at(const SphereSetup& setup, double level, double t,
                            const QuadConfig& config = {});

struct ImagProfile {
  std::vector<double> I;
  std::vector<double> I_error;
  bool strictly_increasing = false;  // each step > -(sum of neighbouring errors)
  double min_increment = 0.0;
  /// The seed is the only point of the curve where I takes the value I(a, b).
  std::string uniqueness;
};

ImagProfile imag_along_curve(const LevelCurve& curve, const SphereSetup& setup,
                             const QuadConfig& config = {});

/// Point of the curve where I equals target, by bisection in t (I increases along it).
std::optional<CurvePoint> locate_on_curve(const LevelCurve& curve, const SphereSetup& setup,
                                          double I_target, const QuadConfig& config = {});

/// Signed minimum of v_A(t) - v_B(t) over A's points inside B's t-range, with v_B
/// solved exactly at each t. Curves at different levels never touch.
struct CurveSeparation {
  int sign = 0;  // +1 if A lies above B everywhere, -1 below, 0 if they touch or cross
  double min_gap = 0.0;
  int compared = 0;
};

CurveSeparation curve_separation(const SphereSetup& setup, const LevelCurve& a,
                                 const LevelCurve& b, const QuadConfig& config = {});

// ---------------------------------------------------------------------------
// Sign map of I
// ---------------------------------------------------------------------------

struct GridSpec {
  double xi_min = -1.0;
  double xi_max = 3.0;
  int n_xi = 9;
  double zeta_min = -1.0;
  double zeta_max = 1.0;
  int n_zeta = 9;
};

struct SignGrid {
  GridSpec spec;
  std::vector<double> xi;
  std::vector<double> zeta;
  // row-major, index = i_zeta * n_xi + i_xi
  std::vector<double> W;
  std::vector<double> I;
  std::vector<double> I_error;
  std::vector<int> sign;

  int at(int i_xi, int i_zeta) const { return sign[static_cast<std::size_t>(i_zeta) * xi.size() + i_xi]; }
};

/// Grid over the strip |zeta| <= p (uniform endpoints included). |I| below
/// max(1e-9 |F|, 4 err) counts as 0. Nodes run in parallel.
SignGrid sign_map_I(const SphereSetup& setup, const GridSpec& grid, const QuadConfig& config = {});

/// Serial reference of sign_map_I; results are bit-identical.
SignGrid sign_map_I_serial(const SphereSetup& setup, const GridSpec& grid,
                           const QuadConfig& config = {});

// ---------------------------------------------------------------------------
// Search for further solutions of F(alpha) = F(beta)
// ---------------------------------------------------------------------------

struct PicardOptions {
  int starts = 16;
  int max_iterations = 50;
  double dedupe = 1e-6;
  double residual_rel = 1e-6;
  long max_evals_per_integral = 400'000;
};

enum class RootKind { given, reflected, extra };

struct PicardRoot {
  ComplexExponent alpha;
  double residual = 0.0;  // |F(alpha) - F(beta)|
  RootKind kind = RootKind::extra;
  int iterations = 0;
};

struct PicardResult {
  ComplexExponent beta;
  std::complex<double> F_beta;
  double rho = 0.0;
  std::vector<PicardRoot> roots;
  int starts_converged = 0;
  bool partial = false;  // some start ran out of quadrature budget
};

/// Multi-start 2-D Newton on (W - W(beta), I - I(beta)) from a ring |alpha - k/2| = rho.
/// Always reports beta and k - beta when they lie within the ring; extra roots are kept
/// only if their residual is <= residual_rel * |F(beta)|.
PicardResult picard_search(const SphereSetup& setup, ComplexExponent beta, double rho,
                           const PicardOptions& options = {}, const QuadConfig& config = {});

}  // namespace sphera
