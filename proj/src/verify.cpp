#include <algorithm>
#include <cmath>

#include "sphera/analysis.hpp"

namespace sphera {

namespace {

void finish(VerificationReport& r, double scale) {
  r.residual_abs = std::abs(r.lhs - r.rhs);
  r.residual_rel = scale > 0.0 ? r.residual_abs / scale : r.residual_abs;
  r.tolerance = identity_tolerance(scale, r.quad_error);
  r.pass = !r.inconclusive && r.residual_abs <= r.tolerance;
}

struct PeriodicIntegral {
  std::complex<double> value;
  double abs_error = 0.0;
  long evals = 0;
  bool converged = false;
};

// Trapezoidal rule on [0, 2 pi], doubling until two levels agree. Spectrally accurate
// for analytic periodic integrands.
template <class F>
PeriodicIntegral periodic_trapezoid(const F& f, double rel_tol, double abs_tol) {
  constexpr long kMaxNodes = 1L << 22;
  long n = 16;
  std::complex<double> sum = 0.0;
  for (long j = 0; j < n; ++j) sum += f(2.0 * kPi * j / n);
  std::complex<double> value = sum * (2.0 * kPi / n);
  PeriodicIntegral out;
  out.evals = n;
  while (n < kMaxNodes) {
    for (long j = 0; j < n; ++j) sum += f(2.0 * kPi * (2 * j + 1) / (2 * n));
    out.evals += n;
    n *= 2;
    const std::complex<double> next = sum * (2.0 * kPi / n);
    const double diff = std::abs(next - value);
    value = next;
    if (diff <= std::max(abs_tol, rel_tol * std::abs(value))) {
      out.value = value;
      out.abs_error = diff;
      out.converged = true;
      return out;
    }
  }
  out.value = value;
  out.abs_error = std::abs(value);
  return out;
}

std::complex<double> real_pow(double base, std::complex<double> e) {
  return std::exp(e * std::log(base));
}

}  // namespace

double identity_tolerance(double scale, double summed_error) {
  return std::max(1e-8 * scale, 4.0 * summed_error);
}

VerificationReport verify_reflection(const SphereSetup& setup, ComplexExponent alpha,
                                     const QuadConfig& config) {
  const auto fa = evaluate_F(setup, alpha, config);
  const auto fb = evaluate_F(setup, alpha.reflected(setup.k()), config);
  VerificationReport r;
  r.identity = "reflection";
  r.parameters = {{"k", setup.k()}, {"R", setup.R()}, {"r", setup.r()},
                  {"xi", alpha.xi}, {"zeta", alpha.zeta}};
  r.lhs = fa.value();
  r.rhs = fb.value();
  r.quad_error = fa.quad.abs_error + fb.quad.abs_error;
  r.evals = fa.quad.evals + fb.quad.evals;
  r.inconclusive = !(fa.quad.converged && fb.quad.converged);
  finish(r, std::abs(r.lhs));
  return r;
}

VerificationReport verify_imag_vanishing(const SphereSetup& setup, double b, int m,
                                         const QuadConfig& config) {
  if (m < 0 || 2 * m + 1 > kMaxLogMoment)
    throw DomainError("verify_imag_vanishing: m must lie in [0, 5]");
  const double half = 0.5 * setup.k();
  const auto scale = log_moment(setup, half, 0, {}, config);
  const Estimate family[3] = {
      log_moment(setup, half, 0, {TrigKind::sin, b}, config),
      log_moment(setup, half, 2 * m + 1, {TrigKind::cos, b}, config),
      log_moment(setup, half, 2 * m, {TrigKind::sin, b}, config),
  };
  VerificationReport r;
  r.identity = "imag_vanishing";
  r.parameters = {{"k", setup.k()}, {"R", setup.R()}, {"r", setup.r()}, {"b", b}, {"m", m}};
  double worst = 0.0;
  r.inconclusive = !scale.converged;
  for (const auto& e : family) {
    if (std::abs(e.value) >= std::abs(worst)) worst = e.value;
    r.quad_error += e.abs_error;
    r.evals += e.evals;
    r.inconclusive = r.inconclusive || !e.converged;
  }
  r.lhs = worst;
  r.rhs = 0.0;
  finish(r, scale.value);
  return r;
}

VerificationReport verify_distance_identity(const SphereSetup& setup, ComplexExponent alpha,
                                            const QuadConfig& config) {
  const std::complex<double> a = alpha.value();
  const std::complex<double> beta = 2.0 * setup.k() - a;
  const auto lhs = integrate_distance_power(setup, alpha, config);
  const auto rhs = integrate_distance_power(setup, ComplexExponent::from(beta), config);
  const double gap = std::abs((setup.R() - setup.r()) * (setup.R() + setup.r()));
  const std::complex<double> factor = real_pow(gap, 0.5 * (beta - a));

  VerificationReport r;
  r.identity = "distance";
  r.parameters = {{"k", setup.k()}, {"R", setup.R()}, {"r", setup.r()},
                  {"xi", alpha.xi}, {"zeta", alpha.zeta}};
  r.lhs = lhs.value;
  r.rhs = factor * rhs.value;
  r.quad_error = lhs.abs_error + std::abs(factor) * rhs.abs_error;
  r.evals = lhs.evals + rhs.evals;
  r.inconclusive = !(lhs.converged && rhs.converged);
  finish(r, std::abs(r.lhs));
  return r;
}

VerificationReport verify_k1_trig(std::complex<double> p_exp, double a, double b,
                                  const QuadConfig& config) {
  if (!(a > b && b > 0.0)) throw DomainError("verify_k1_trig: requires a > b > 0");
  config.validate();
  const auto lhs = periodic_trapezoid(
      [&](double t) { return real_pow(a - b * std::sin(t), -p_exp); }, config.rel_tol * 1e-3,
      config.abs_tol * 1e-3);
  const auto rhs = periodic_trapezoid(
      [&](double t) { return real_pow(a - b * std::sin(t), p_exp - 1.0); },
      config.rel_tol * 1e-3, config.abs_tol * 1e-3);
  const std::complex<double> factor = real_pow((a - b) * (a + b), 0.5 - p_exp);

  VerificationReport r;
  r.identity = "k1_trig";
  r.parameters = {{"p_re", p_exp.real()}, {"p_im", p_exp.imag()}, {"a", a}, {"b", b}};
  r.lhs = lhs.value;
  r.rhs = factor * rhs.value;
  r.quad_error = lhs.abs_error + std::abs(factor) * rhs.abs_error;
  r.evals = lhs.evals + rhs.evals;
  r.inconclusive = !(lhs.converged && rhs.converged);
  finish(r, std::abs(r.lhs));
  return r;
}

double closed_form_k2_value(const SphereSetup& setup, double b) {
  if (setup.k() != 2) throw DomainError("closed_form_k2: requires k = 2");
  if (setup.r() == 0.0) throw DomainError("closed_form_k2: requires r > 0");
  const double R = setup.R();
  const double r = setup.r();
  const double c = setup.log_ratio();
  const double front = 2.0 * kPi * R / r * std::abs((R - r) * (R + r));
  return b == 0.0 ? front * c : front * std::sin(b * c) / b;
}

VerificationReport closed_form_k2(const SphereSetup& setup, double b, const QuadConfig& config) {
  const double expected = closed_form_k2_value(setup, b);
  const auto f = evaluate_F(setup, {1.0, b}, config);
  VerificationReport r;
  r.identity = "closed_form_k2";
  r.parameters = {{"R", setup.R()}, {"r", setup.r()}, {"b", b}};
  r.lhs = f.value();
  r.rhs = expected;
  r.quad_error = f.quad.abs_error;
  r.evals = f.quad.evals;
  r.inconclusive = !f.quad.converged;
  finish(r, std::abs(expected));
  return r;
}

std::vector<VerificationReport> default_suite(const SphereSetup& setup, const QuadConfig& config) {
  const int k = setup.k();
  const double half = 0.5 * k;
  const auto strip = setup.strip_halfwidth();
  const double p = strip.is_finite() ? strip.value() : 1.0;
  std::vector<VerificationReport> out;

  const ComplexExponent reflection_cases[] = {
      {0.0, 0.0},   {0.3, 0.0},      {half + 0.7, 0.0},      {k + 1.5, 0.0},
      {0.4, 0.5 * p}, {half + 1.0, -0.8 * p}, {-1.0, 0.3 * p},
  };
  for (const auto& a : reflection_cases) out.push_back(verify_reflection(setup, a, config));

  const std::pair<double, int> vanishing_cases[] = {{0.5, 0}, {1.0, 1}, {2.0, 2}};
  for (const auto& [b, m] : vanishing_cases) out.push_back(verify_imag_vanishing(setup, b, m, config));

  const ComplexExponent distance_cases[] = {{k - 1.0, 0.0}, {k + 0.5, 0.0}, {0.5, 0.3}};
  for (const auto& a : distance_cases) out.push_back(verify_distance_identity(setup, a, config));

  if (setup.r() > 0.0 && k == 2) {
    for (double b : {0.0, 1.0, kPi / setup.log_ratio()}) out.push_back(closed_form_k2(setup, b, config));
  }
  if (setup.r() > 0.0 && k == 1) {
    // a = R^2 + r^2, b = 2 R r turns the trigonometric integral into this sphere's transform
    const double a = setup.R() * setup.R() + setup.r() * setup.r();
    const double b = 2.0 * setup.R() * setup.r();
    for (std::complex<double> pe : {std::complex<double>(0.5, 0.3), std::complex<double>(2.0, 0.0)})
      out.push_back(verify_k1_trig(pe, a, b, config));
  }

  // Real inversion round trip.
  const double lambda0 = half + 0.7;
  const auto nu = evaluate_F(setup, {lambda0, 0.0}, config);
  VerificationReport r;
  r.identity = "solve_real";
  r.parameters = {{"k", k}, {"R", setup.R()}, {"r", setup.r()}, {"lambda", lambda0}};
  r.rhs = lambda0;
  r.inconclusive = !nu.quad.converged;
  if (setup.r() == 0.0) {
    // F is constant: every lambda solves F(lambda) = nu
    r.lhs = lambda0;
  } else {
    const auto roots = solve_real(setup, nu.W, config);
    r.lhs = roots.roots.back();
  }
  r.residual_abs = std::abs(r.lhs - r.rhs);
  r.residual_rel = r.residual_abs / std::abs(lambda0);
  r.tolerance = 1e-9;
  r.quad_error = nu.quad.abs_error;
  r.evals = nu.quad.evals;
  r.pass = !r.inconclusive && r.residual_abs <= r.tolerance;
  out.push_back(r);
  return out;
}

}  // namespace sphera
