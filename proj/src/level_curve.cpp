#include <algorithm>
#include <cmath>

#include <boost/math/tools/roots.hpp>

#include "root_finding.hpp"
#include "sphera/analysis.hpp"

namespace sphera {

namespace {

constexpr double kEdgeTol = 1e-12;

double strip_of(const SphereSetup& setup) {
  const auto p = setup.strip_halfwidth();
  if (!p.is_finite()) throw DomainError("level curves need r > 0 (bounded strip)");
  return p.value();
}

double W_at(const SphereSetup& setup, double t, double z, const QuadConfig& config) {
  return evaluate_F(setup, {t, z}, config).W;
}

// Gradient (W_xi, W_zeta) from F'(alpha): W_xi = Re F', W_zeta = -Im F'.
std::pair<double, double> grad_W(const SphereSetup& setup, double t, double z,
                                 const QuadConfig& config) {
  const auto d = F_derivative(setup, {t, z}, 1, config);
  return {d.real(), -d.imag()};
}

double ftol_for(double level) { return 1e-13 * std::max(1.0, std::abs(level)); }

struct Corrected {
  double v = 0.0;
  bool ok = false;
};

// Solve W(t, zeta) = level for zeta in [0, p]; W(t, .) decreases on [0, p].
Corrected correct(const SphereSetup& setup, double level, double t, double guess, double p,
                  const QuadConfig& config) {
  const double ftol = ftol_for(level);
  const double f0 = W_at(setup, t, 0.0, config) - level;
  if (std::abs(f0) <= ftol) return {0.0, true};
  const double fp = W_at(setup, t, p, config) - level;
  if (std::abs(fp) <= ftol) return {p, true};
  if (f0 < 0.0 || fp > 0.0) return {guess, false};
  const auto res = detail::safeguarded_newton(
      [&](double z) {
        const auto f = evaluate_F(setup, {t, z}, config);
        const auto g = grad_W(setup, t, z, config);
        return std::pair{f.W - level, g.second};
      },
      0.0, p, f0, std::clamp(guess, 0.0, p), 1e-15, ftol, 100);
  return {res.x, res.converged};
}

template <class F>
double bracketed_root(F f, double lo, double hi, double f_lo, double f_hi) {
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  boost::uintmax_t max_iter = 200;
  const auto r = boost::math::tools::toms748_solve(
      f, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(50), max_iter);
  return 0.5 * (r.first + r.second);
}

CurvePoint make_point(const SphereSetup& setup, double level, double t, double v,
                      const QuadConfig& config) {
  const auto f = evaluate_F(setup, {t, v}, config);
  return {t, v, f.W - level, f.I};
}

}  // namespace

double level_curve_value_at(const SphereSetup& setup, double level, double t,
                            const QuadConfig& config) {
  const double p = strip_of(setup);
  const auto c = correct(setup, level, t, 0.5 * p, p, config);
  if (!c.ok) throw DomainError("level_curve_value_at: level not attained on the segment {t} x [0, p]");
  return c.v;
}

LevelCurve trace_level_curve(const SphereSetup& setup, double a, double b,
                             const TraceOptions& options, const QuadConfig& config) {
  const double p = strip_of(setup);
  const double half = 0.5 * setup.k();
  if (a < half - kEdgeTol || b < -kEdgeTol || b > p * (1.0 + kEdgeTol))
    throw DomainError("trace_level_curve: seed must lie in [k/2, inf) x [0, p]");
  if (!(options.step > 0.0)) throw DomainError("trace_level_curve: step must be positive");
  a = std::max(a, half);
  b = std::clamp(b, 0.0, p);

  LevelCurve c;
  c.seed_a = a;
  c.seed_b = b;
  c.p = p;
  c.step = options.step;
  c.level = W_at(setup, a, b, config);

  // Gamma_0: down the left edge from (k/2, b) to the corner, then right to (a, 0).
  // W increases along it.
  const double leg = b + (a - half);
  const auto on_gamma0 = [&](double s) {
    return s <= b ? std::pair{half, b - s} : std::pair{half + (s - b), 0.0};
  };
  const auto g0 = [&](double s) {
    const auto [x, z] = on_gamma0(s);
    return W_at(setup, x, z, config) - c.level;
  };
  double s0 = 0.0;
  if (leg > 0.0) {
    const double lo = g0(0.0);
    const double hi = g0(leg);
    if (lo >= 0.0)
      s0 = 0.0;
    else if (hi <= 0.0)
      s0 = leg;
    else
      s0 = bracketed_root(g0, 0.0, leg, lo, hi);
  }
  std::tie(c.a0, c.b0) = on_gamma0(s0);

  // Gamma_1: along the top edge zeta = p from (a, p); W increases in xi there.
  const auto g1 = [&](double t) { return W_at(setup, t, p, config) - c.level; };
  double lo = a;
  double f_lo = g1(lo);
  double width = 0.5;
  double hi = a + width;
  double f_hi = f_lo >= 0.0 ? f_lo : g1(hi);
  if (f_lo >= 0.0) {
    hi = lo;
  } else {
    for (int i = 0; f_hi < 0.0; ++i) {
      if (i == 60) throw DomainError("trace_level_curve: could not bracket the Gamma_1 endpoint");
      lo = hi;
      f_lo = f_hi;
      width *= 2.0;
      hi = a + width;
      f_hi = g1(hi);
    }
  }
  c.a1 = hi == lo ? lo : bracketed_root(g1, lo, hi, f_lo, f_hi);

  c.points.push_back(make_point(setup, c.level, c.a0, c.b0, config));
  if (c.a1 - c.a0 <= kEdgeTol * std::max(1.0, std::abs(c.a0))) {
    c.degenerate = true;
    return c;
  }

  double t = c.a0;
  double v = c.b0;
  double ds = options.step;
  const double tiny = 1e-12 * std::max(1.0, std::abs(c.a1));
  while (static_cast<int>(c.points.size()) < options.max_points) {
    // Unit tangent (-W_zeta, W_xi); at the saddle corner the gradient vanishes and the
    // direction comes from the Hessian of the harmonic W.
    auto [wx, wz] = grad_W(setup, t, v, config);
    double tx = -wz;
    double ty = wx;
    double n = std::hypot(tx, ty);
    if (n <= 1e-10 * std::max(1.0, std::abs(c.level))) {
      const auto h = F_derivative(setup, {t, v}, 2, config);
      const double A = h.real();
      const double B = -h.imag();
      tx = 1.0;
      ty = A != 0.0 ? (B + std::hypot(A, B)) / A : 1.0;
      n = std::hypot(tx, ty);
    }
    tx /= n;
    ty /= n;

    const double dt = std::max(ds * tx, 0.05 * ds);
    const double t_new = t + dt;
    if (t_new >= c.a1 - tiny) {
      c.points.push_back(make_point(setup, c.level, c.a1, p, config));
      break;
    }
    const double v_pred = std::clamp(tx > 0.0 ? v + dt * ty / tx : v + ds, v, p);
    const auto corr = correct(setup, c.level, t_new, v_pred, p, config);
    const bool too_far = std::hypot(t_new - t, corr.v - v) > 3.0 * options.step;
    if (!corr.ok || too_far) {
      ds *= 0.5;
      if (ds < options.min_step) {
        c.ok = false;
        c.failure = corr.ok ? "continuation step collapsed" : "corrector did not converge";
        break;
      }
      continue;
    }
    t = t_new;
    v = corr.v;
    c.points.push_back(make_point(setup, c.level, t, v, config));
    ds = std::min(options.step, 2.0 * ds);
  }
  if (static_cast<int>(c.points.size()) >= options.max_points && c.points.back().t < c.a1) {
    c.ok = false;
    c.failure = "max_points reached";
  }
  return c;
}

ImagProfile imag_along_curve(const LevelCurve& curve, const SphereSetup& setup,
                             const QuadConfig& config) {
  ImagProfile out;
  for (const auto& pt : curve.points) {
    const auto f = evaluate_F(setup, {pt.t, pt.v}, config);
    out.I.push_back(f.I);
    out.I_error.push_back(f.I_error());
  }
  out.strictly_increasing = out.I.size() >= 2;
  out.min_increment = out.I.size() >= 2 ? out.I[1] - out.I[0] : 0.0;
  for (std::size_t i = 1; i < out.I.size(); ++i) {
    const double d = out.I[i] - out.I[i - 1];
    out.min_increment = std::min(out.min_increment, d);
    if (!(d > -(out.I_error[i] + out.I_error[i - 1]))) out.strictly_increasing = false;
  }
  if (curve.degenerate) {
    out.uniqueness = "degenerate level set: the seed is its only point";
  } else if (out.strictly_increasing) {
    out.uniqueness =
        "I increases along the level curve, so F(alpha) = F(seed) has the seed as its only "
        "solution in the quadrant";
  } else {
    out.uniqueness = "I not monotone within error estimates; uniqueness not confirmed";
  }
  return out;
}

std::optional<CurvePoint> locate_on_curve(const LevelCurve& curve, const SphereSetup& setup,
                                          double I_target, const QuadConfig& config) {
  if (curve.points.empty()) return std::nullopt;
  if (curve.degenerate) {
    const auto& pt = curve.points.front();
    if (std::abs(pt.I - I_target) <= 1e-10 * std::max(1.0, std::abs(I_target))) return pt;
    return std::nullopt;
  }
  const double p = curve.p;
  const auto v_of = [&](double t) {
    if (t <= curve.a0) return curve.b0;
    if (t >= curve.a1) return p;
    return correct(setup, curve.level, t, 0.5 * p, p, config).v;
  };
  const auto g = [&](double t) { return evaluate_F(setup, {t, v_of(t)}, config).I - I_target; };
  const double lo = curve.a0;
  const double hi = curve.a1;
  const double f_lo = g(lo);
  const double f_hi = g(hi);
  if (f_lo > 0.0 || f_hi < 0.0) return std::nullopt;
  const double t = bracketed_root(g, lo, hi, f_lo, f_hi);
  return make_point(setup, curve.level, t, v_of(t), config);
}

CurveSeparation curve_separation(const SphereSetup& setup, const LevelCurve& a, const LevelCurve& b,
                                 const QuadConfig& config) {
  CurveSeparation out;
  bool first = true;
  for (const auto& pt : a.points) {
    if (pt.t < b.a0 || pt.t > b.a1) continue;
    const double vb = level_curve_value_at(setup, b.level, pt.t, config);
    const double gap = pt.v - vb;
    const int s = (gap > 0.0) - (gap < 0.0);
    if (first) {
      out.sign = s;
      out.min_gap = std::abs(gap);
      first = false;
    } else {
      if (s != out.sign) out.sign = 0;
      out.min_gap = std::min(out.min_gap, std::abs(gap));
    }
    ++out.compared;
  }
  return out;
}

}  // namespace sphera
