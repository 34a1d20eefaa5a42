#include "sphera/ratio.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

namespace sphera {

namespace {

constexpr double kCoincidenceTol = 1e-12;

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

Point axpy(std::span<const double> x, double t, std::span<const double> d) {
  Point out(x.begin(), x.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += t * d[i];
  return out;
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// Unit vector orthogonal to the unit vector n (Gram-Schmidt on the least aligned axis).
Point orthogonal_unit(std::span<const double> n) {
  std::size_t j = 0;
  for (std::size_t i = 1; i < n.size(); ++i)
    if (std::abs(n[i]) < std::abs(n[j])) j = i;
  Point e(n.size(), 0.0);
  e[j] = 1.0;
  const double c = n[j];
  for (std::size_t i = 0; i < e.size(); ++i) e[i] -= c * n[i];
  const double len = norm(e);
  for (double& v : e) v /= len;
  return e;
}

}  // namespace

double sphere_area(int m, double radius) {
  if (m < 0) throw DomainError("sphere_area: dimension must be >= 0");
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw DomainError("sphere_area: radius must be positive");
  const double h = 0.5 * (m + 1);
  return 2.0 * std::pow(kPi, h) / std::tgamma(h) * std::pow(radius, m);
}

SphereSetup SphereSetup::make(int k, double R, double r) {
  if (k < 1) throw DomainError("SphereSetup: k must be >= 1");
  if (!(R > 0.0) || !std::isfinite(R)) throw DomainError("SphereSetup: R must be positive");
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("SphereSetup: r must be >= 0");
  if (std::abs(r - R) <= kCoincidenceTol * R)
    throw DomainError("SphereSetup: the point lies on the sphere (r == R)");

  SphereSetup s;
  s.k_ = k;
  s.R_ = R;
  s.r_ = r;
  const double lo = std::min(R, r);
  const double hi = std::max(R, r);
  s.upsilon_ = lo / hi;
  s.one_minus_upsilon_ = std::abs(R - r) / hi;
  s.log_ratio_ = std::log1p(2.0 * lo / std::abs(R - r));
  s.sigma_km1_ = sphere_area(k - 1);
  s.sigma_k_ = sphere_area(k);
  return s;
}

ExtendedReal SphereSetup::strip_halfwidth() const {
  if (r_ == 0.0) return ExtendedReal::infinity();
  return ExtendedReal::finite(0.5 * kPi / log_ratio_);
}

double SphereSetup::area() const { return sigma_k_ * std::pow(R_, k_); }

double SphereSetup::omega_min() const { return one_minus_upsilon_ / (1.0 + upsilon_); }
double SphereSetup::omega_max() const { return (1.0 + upsilon_) / one_minus_upsilon_; }

RatioBreakdown ratio_from_points(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("ratio_from_points: dimension mismatch");
  if (x.size() < 2) throw DomainError("ratio_from_points: points need dimension k+1 >= 2");

  RatioBreakdown out;
  out.x.assign(x.begin(), x.end());
  out.y.assign(y.begin(), y.end());

  Point d(x.size());
  Point s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    d[i] = y[i] - x[i];
    s[i] = x[i] + y[i];
  }
  const double q2 = dot(d, d);
  const double nx2 = dot(x, x);
  const double ny2 = dot(y, y);
  const double scale = std::max(nx2, ny2);
  if (q2 <= kCoincidenceTol * scale || q2 == 0.0)
    throw DegeneratePairError("ratio_from_points: x and y coincide");
  out.q = std::sqrt(q2);

  if (std::abs(nx2 - ny2) <= kCoincidenceTol * scale) {
    out.x_star = out.y;
    out.y_star = out.x;
    out.l = 0.0;
    out.omega = 0.0;
    return out;
  }

  // Second intersection of the line x + t d with S(|x|): t = -2 x.d / |d|^2.
  // A double root (tangency) leaves the star point on the point itself.
  const double xd = dot(x, d);
  if (xd * xd / q2 < kCoincidenceTol * nx2)
    out.x_star = out.x;
  else
    out.x_star = axpy(x, -2.0 * xd / q2, d);

  // Same for y along y - t d: t = 2 y.d / |d|^2.
  const double yd = dot(y, d);
  if (yd * yd / q2 < kCoincidenceTol * ny2)
    out.y_star = out.y;
  else
    out.y_star = axpy(y, -2.0 * yd / q2, d);

  out.l = distance(out.x, out.y_star);
  out.omega = std::abs(dot(d, s)) / q2;
  return out;
}

double omega_theta(const SphereSetup& setup, double theta) {
  if (!(theta >= 0.0 && theta <= kPi))
    throw DomainError("omega_theta: theta must lie in [0, pi]");
  const double y = setup.upsilon();
  const double omu = setup.one_minus_upsilon();
  const double c = std::cos(0.5 * theta);
  return omu * (1.0 + y) / (omu * omu + 4.0 * y * c * c);
}

double omega_from_complement(const SphereSetup& setup, double u) {
  const double y = setup.upsilon();
  const double omu = setup.one_minus_upsilon();
  const double s = std::sin(0.5 * u);
  return omu * (1.0 + y) / (omu * omu + 4.0 * y * s * s);
}

double log_omega_from_complement(const SphereSetup& setup, double u) {
  const double y = setup.upsilon();
  const double omu = setup.one_minus_upsilon();
  const double s = std::sin(0.5 * u);
  return std::log(omu) + std::log1p(y) - std::log(omu * omu + 4.0 * y * s * s);
}

double invert_point(const SphereSetup& setup) {
  if (setup.r() == 0.0)
    throw InversionUndefinedError("invert_point: the centre has no inverse point");
  return setup.R() * setup.R() / setup.r();
}

SphereSetup inverted(const SphereSetup& setup) {
  return SphereSetup::make(setup.k(), setup.R(), invert_point(setup));
}

double tangent_sphere_level(const SphereSetup& setup, double delta, TangentSide side) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw DomainError("tangent_sphere_level: delta must be positive (T != y)");
  const double ot = side == TangentSide::away_from_origin ? setup.R() + delta
                                                          : std::abs(setup.R() - delta);
  return ot / delta;
}

Point tangent_sphere_centre(std::span<const double> y, double delta, TangentSide side) {
  const double R = norm(y);
  if (!(R > 0.0)) throw DomainError("tangent_sphere_centre: y must be off the origin");
  const double sign = side == TangentSide::away_from_origin ? 1.0 : -1.0;
  Point t(y.begin(), y.end());
  for (double& v : t) v *= 1.0 + sign * delta / R;
  return t;
}

std::vector<Point> sample_tangent_sphere(std::span<const double> y, double delta,
                                         TangentSide side, int n, std::uint64_t seed) {
  if (!(delta > 0.0)) throw DomainError("sample_tangent_sphere: delta must be positive");
  const Point centre = tangent_sphere_centre(y, delta, side);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<Point> pts;
  pts.reserve(n);
  Point dir(y.size());
  while (static_cast<int>(pts.size()) < n) {
    for (double& v : dir) v = gauss(rng);
    const double len = norm(dir);
    if (len == 0.0) continue;
    Point x = centre;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += delta * dir[i] / len;
    if (distance(x, y) < 1e-6 * delta) continue;
    pts.push_back(std::move(x));
  }
  return pts;
}

PathLimit path_limit(const PathSpec& spec, const SphereSetup& setup) {
  const double R = setup.R();
  if (static_cast<int>(spec.y.size()) != setup.k() + 1)
    throw DomainError("path_limit: y must have dimension k + 1");
  if (std::abs(norm(spec.y) - R) > 1e-12 * R)
    throw DomainError("path_limit: y must lie on S^k(R)");
  if (spec.samples < 4) throw DomainError("path_limit: need at least 4 samples");

  Point yhat = spec.y;
  for (double& v : yhat) v /= R;
  const Point e = orthogonal_unit(yhat);

  // Point at parameter s and the limit value.
  struct Geometry {
    std::function<Point(double)> at;
    ExtendedReal limit;
    double s0;
  };

  const Geometry g = std::visit(
      [&](const auto& v) -> Geometry {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, path::OnSphere>) {
          return {[&](double s) {
                    Point x(yhat.size());
                    for (std::size_t i = 0; i < x.size(); ++i)
                      x[i] = R * (std::cos(s) * yhat[i] + std::sin(s) * e[i]);
                    return x;
                  },
                  ExtendedReal::finite(0.0), 0.5};
        } else if constexpr (std::is_same_v<V, path::TangentPlane>) {
          return {[&](double s) { return axpy(spec.y, s, e); }, ExtendedReal::finite(1.0),
                  0.5 * R};
        } else if constexpr (std::is_same_v<V, path::TangentSphere>) {
          const double level = tangent_sphere_level(setup, v.delta, v.side);
          const Point centre = tangent_sphere_centre(spec.y, v.delta, v.side);
          const double sigma = v.side == TangentSide::away_from_origin ? 1.0 : -1.0;
          const double delta = v.delta;
          return {[&, centre, sigma, delta](double s) {
                    Point x(centre);
                    for (std::size_t i = 0; i < x.size(); ++i)
                      x[i] += delta * (-sigma * std::cos(s) * yhat[i] + std::sin(s) * e[i]);
                    return x;
                  },
                  ExtendedReal::finite(level), 0.5};
        } else {
          const double g0 = v.gamma0;
          if (!(g0 > 0.0 && g0 <= kPi / 2 + 1e-15))
            throw DomainError("path_limit: gamma0 must lie in (0, pi/2]");
          // The tangent direction stays in the tangent plane, where omega == 1.
          const bool tangent = std::abs(g0 - kPi / 2) <= 1e-15;
          const double c = tangent ? 0.0 : std::cos(g0);
          const double sn = std::sin(g0);
          return {[&, c, sn](double s) {
                    Point x(spec.y);
                    for (std::size_t i = 0; i < x.size(); ++i) x[i] += s * (-c * yhat[i] + sn * e[i]);
                    return x;
                  },
                  tangent ? ExtendedReal::finite(1.0) : ExtendedReal::infinity(), 0.5 * R};
        }
      },
      spec.variant);

  PathLimit out;
  out.limit = g.limit;
  out.samples.reserve(spec.samples);
  // Geometric approach from s0 down to 1e-4 s0: finer steps would drive |x|^2 - R^2
  // below the equal-norm cutoff of ratio_from_points.
  const int n = spec.samples;
  for (int i = 0; i < n; ++i) {
    const double s = g.s0 * std::pow(1e-4, static_cast<double>(i) / (n - 1));
    const Point x = g.at(s);
    const RatioBreakdown rb = ratio_from_points(x, spec.y);
    out.samples.push_back({s, rb.omega, rb.l, rb.q});
  }

  bool mono = true;
  const double a = out.limit.is_finite() ? out.limit.value() : 0.0;
  for (int i = std::max(1, 3 * n / 4); i < n; ++i) {
    const auto& prev = out.samples[i - 1];
    const auto& cur = out.samples[i];
    // |x|^2 - |y|^2 loses digits like eps (R/q)^2 as x approaches y
    const double scale = 2.0 * R / cur.q;
    const double slack =
        64.0 * std::numeric_limits<double>::epsilon() * scale * scale * std::max(1.0, std::abs(cur.omega));
    if (out.limit.is_finite()) {
      if (std::abs(cur.omega - a) > std::abs(prev.omega - a) + slack) mono = false;
    } else if (cur.omega < prev.omega - slack) {
      mono = false;
    }
  }
  out.monotone_tail = mono;
  return out;
}

}  // namespace sphera
