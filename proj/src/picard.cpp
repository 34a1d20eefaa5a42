#include <algorithm>
#include <cmath>
#include <exception>

#include "sphera/analysis.hpp"

namespace sphera {

namespace {

struct StartOutcome {
  ComplexExponent alpha;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  bool budget_hit = false;
};

StartOutcome newton_from(const SphereSetup& setup, ComplexExponent alpha, std::complex<double> target,
                         double step_cap, const PicardOptions& options, const QuadConfig& config) {
  StartOutcome out;
  const double scale = std::max(std::abs(target), 1e-300);
  for (int it = 1; it <= options.max_iterations; ++it) {
    out.iterations = it;
    const auto f = evaluate_F(setup, alpha, config);
    if (!f.quad.converged) {
      out.budget_hit = true;
      break;
    }
    const std::complex<double> res = f.value() - target;
    if (!std::isfinite(std::abs(res))) break;
    out.alpha = alpha;
    out.residual = std::abs(res);
    if (out.residual <= 1e-12 * scale) {
      out.converged = true;
      break;
    }
    // Jacobian of (W, I) in (xi, zeta): F' = W_xi + i I_xi and W_zeta = -I_xi, I_zeta = W_xi.
    const auto d = F_derivative(setup, alpha, 1, config).value;
    const double det = std::norm(d);
    if (!(det > 0.0) || !std::isfinite(det)) break;
    // complex Newton step: delta = -res / F'
    std::complex<double> delta = -res / d;
    const double len = std::abs(delta);
    if (len > step_cap) delta *= step_cap / len;
    alpha = {alpha.xi + delta.real(), alpha.zeta + delta.imag()};
    if (len <= 1e-13 * (1.0 + std::abs(alpha.value()))) {
      const auto g = evaluate_F(setup, alpha, config);
      out.alpha = alpha;
      out.residual = std::abs(g.value() - target);
      out.converged = g.quad.converged;
      out.budget_hit = !g.quad.converged;
      break;
    }
  }
  if (!out.converged) out.converged = out.residual <= options.residual_rel * scale && out.iterations > 0;
  return out;
}

bool near(ComplexExponent a, ComplexExponent b, double tol) {
  return std::abs(a.value() - b.value()) <= tol * std::max(1.0, std::abs(a.value()));
}

}  // namespace

PicardResult picard_search(const SphereSetup& setup, ComplexExponent beta, double rho,
                           const PicardOptions& options, const QuadConfig& config) {
  if (!(rho > 0.0)) throw DomainError("picard_search: rho must be positive");
  if (options.starts < 1 || options.max_iterations < 1) throw DomainError("picard_search: need starts and iterations");
  config.validate();

  PicardResult out;
  out.beta = beta;
  out.rho = rho;
  const auto fb = evaluate_F(setup, beta, config);
  if (!fb.quad.converged) throw NoSolutionError("picard_search: F(beta) did not converge");
  out.F_beta = fb.value();
  const double scale = std::abs(out.F_beta);
  const double half = 0.5 * setup.k();

  QuadConfig capped = config;
  capped.max_evals = std::min(config.max_evals, options.max_evals_per_integral);

  const ComplexExponent given[2] = {beta, beta.reflected(setup.k())};
  for (int j = 0; j < 2; ++j) {
    const auto& g = given[j];
    if (std::abs(g.value() - half) > rho * (1.0 + 1e-12)) continue;
    if (j == 1 && near(g, given[0], options.dedupe)) continue;
    const double residual = j == 0 ? 0.0 : std::abs(evaluate_F(setup, g, config).value() - out.F_beta);
    out.roots.push_back({g, residual, j == 0 ? RootKind::given : RootKind::reflected, 0});
  }

  // Newton on F itself: F is analytic, so the 2x2 real Jacobian of (W, I) is the
  // complex derivative F'(alpha).
  const int n = options.starts;
  std::vector<StartOutcome> outcomes(static_cast<std::size_t>(n));
  std::exception_ptr failure;
  const double step_cap = std::max(1.0, 0.25 * rho);
#pragma omp parallel for schedule(dynamic, 1)
  for (int j = 0; j < n; ++j) {
    try {
      const double phi = 2.0 * kPi * j / n;
      const ComplexExponent start{half + rho * std::cos(phi), rho * std::sin(phi)};
      outcomes[j] = newton_from(setup, start, out.F_beta, step_cap, options, capped);
    } catch (const DomainError&) {
      // a start that wanders outside the strip or overflows is simply abandoned
    } catch (...) {
#pragma omp critical(sphera_picard_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  for (const auto& o : outcomes) {
    out.partial = out.partial || o.budget_hit;
    if (!o.converged || o.residual > options.residual_rel * scale) continue;
    ++out.starts_converged;
    if (std::abs(o.alpha.value() - half) > rho * (1.0 + 1e-12)) continue;
    const bool seen = std::any_of(out.roots.begin(), out.roots.end(),
                                  [&](const PicardRoot& r) { return near(r.alpha, o.alpha, options.dedupe); });
    if (!seen) out.roots.push_back({o.alpha, o.residual, RootKind::extra, o.iterations});
  }
  return out;
}

}  // namespace sphera
