#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "sphera/types.hpp"

namespace sphera {

using Point = std::vector<double>;

/// Area of the sphere S^m of the given radius: 2 pi^{(m+1)/2} / Gamma((m+1)/2) * radius^m.
double sphere_area(int m, double radius = 1.0);

/// The fixed scene: the sphere S^k(R) in R^{k+1} and the distance r = |x| of the
/// evaluation point from the origin.
///
/// Everything the angular reduction needs depends only on the shape parameter
/// Upsilon = min{R/r, r/R}; r = 0 maps to Upsilon = 0 and an unbounded strip.
class SphereSetup {
 public:
  /// Throws DomainError unless k >= 1, R > 0, r >= 0 and r != R (relative 1e-12).
  static SphereSetup make(int k, double R, double r);

  int k() const { return k_; }
  double R() const { return R_; }
  double r() const { return r_; }
  bool interior() const { return r_ < R_; }

  double upsilon() const { return upsilon_; }
  /// 1 - Upsilon, computed as |R - r| / max(R, r) so it keeps full precision near r = R.
  double one_minus_upsilon() const { return one_minus_upsilon_; }
  /// ln((R + r) / |R - r|) = ln((1 + Upsilon) / (1 - Upsilon)); 0 for r = 0.
  double log_ratio() const { return log_ratio_; }

  /// (pi/2) / ln((R + r)/|R - r|), +infinity for r = 0.
  ExtendedReal strip_halfwidth() const;

  double sigma_km1() const { return sigma_km1_; }
  double sigma_k() const { return sigma_k_; }
  /// sigma_k * R^k.
  double area() const;

  /// Smallest and largest values of omega over the sphere.
  double omega_min() const;
  double omega_max() const;

 private:
  SphereSetup() = default;
  int k_ = 1;
  double R_ = 1.0;
  double r_ = 0.0;
  double upsilon_ = 0.0;
  double one_minus_upsilon_ = 1.0;
  double log_ratio_ = 0.0;
  double sigma_km1_ = 0.0;
  double sigma_k_ = 0.0;
};

/// Geometric decomposition of a point pair (x, y).
struct RatioBreakdown {
  Point x, y;
  Point x_star;  // on S^k(|x|), collinear with x, y
  Point y_star;  // on S^k(|y|), collinear with x, y
  double l = 0.0;  // |x - y*|
  double q = 0.0;  // |x - y|
  double omega = 0.0;
};

/// Spherical ratio of two points with star points. omega is evaluated as
/// |(x - y).(x + y)| / |x - y|^2; l comes from the star-point construction.
RatioBreakdown ratio_from_points(std::span<const double> x, std::span<const double> y);

/// Angular form (1 - Y^2) / (1 + Y^2 + 2 Y cos theta), theta = pi - angle(x O y).
double omega_theta(const SphereSetup& setup, double theta);

// The same form parametrised by u = pi - theta (u = 0 is the point of S^k nearest x).
// Written as (1 - Y^2) / ((1 - Y)^2 + 4 Y sin^2(u/2)) so it stays accurate at the peak.
double omega_from_complement(const SphereSetup& setup, double u);
double log_omega_from_complement(const SphereSetup& setup, double u);

/// Radius R^2 / r of the inverse point; omega on S^k is unchanged by the swap.
double invert_point(const SphereSetup& setup);
/// Setup with r replaced by R^2 / r.
SphereSetup inverted(const SphereSetup& setup);

enum class TangentSide { toward_origin, away_from_origin };

/// Constant value |OT| / delta of omega(., y) on the sphere of radius delta
/// centred at T on the line Oy, tangent to S^k(R) at y.
double tangent_sphere_level(const SphereSetup& setup, double delta, TangentSide side);

/// Centre T of that tangent sphere for the given y (|y| = R).
Point tangent_sphere_centre(std::span<const double> y, double delta, TangentSide side);

/// n uniformly distributed points of the tangent sphere, excluding y itself.
std::vector<Point> sample_tangent_sphere(std::span<const double> y, double delta,
                                         TangentSide side, int n, std::uint64_t seed);

namespace path {
struct OnSphere {};
struct TangentPlane {};
struct TangentSphere {
  double delta = 1.0;
  TangentSide side = TangentSide::away_from_origin;
};
struct StraightLine {
  double gamma0 = kPi / 4;  // angle to the line Oy at y, in (0, pi/2]
};
}  // namespace path

using PathVariant =
    std::variant<path::OnSphere, path::TangentPlane, path::TangentSphere, path::StraightLine>;

/// A C^1 path through the point y of S^k(R).
struct PathSpec {
  PathVariant variant;
  Point y;
  int samples = 40;
};

struct PathSample {
  double s = 0.0;  // path parameter, distance scale to y
  double omega = 0.0;
  double l = 0.0;
  double q = 0.0;
};

struct PathLimit {
  ExtendedReal limit = ExtendedReal::finite(0.0);
  std::vector<PathSample> samples;  // s decreasing towards 0
  /// |omega_i - A| nonincreasing (or omega_i increasing for A = inf) over the last quarter.
  bool monotone_tail = false;
};

/// Limit A(p) of omega(x, y) as x -> y along the path, with a sampled confirmation.
PathLimit path_limit(const PathSpec& spec, const SphereSetup& setup);

}  // namespace sphera
