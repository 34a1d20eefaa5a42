#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace sphera {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Invalid input: outside an operation's domain (r == R, bad dimension, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// x and y coincide, so the spherical ratio is undefined.
class DegeneratePairError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Inversion through the sphere requested for the centre point.
class InversionUndefinedError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A solver was asked for a value the function never attains.
class NoSolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value in [-inf, +inf] with infinity carried as an explicit tag.
class ExtendedReal {
 public:
  static ExtendedReal finite(double v) { return ExtendedReal(v, true, 0); }
  static ExtendedReal infinity(int sign = +1) {
    return ExtendedReal(0.0, false, sign >= 0 ? +1 : -1);
  }

  bool is_finite() const { return finite_; }
  /// +1 / -1 for the infinite values, sign of the value otherwise.
  int sign() const {
    if (!finite_) return sign_;
    return (value_ > 0) - (value_ < 0);
  }
  /// The finite value; throws for infinities.
  double value() const {
    if (!finite_) throw DomainError("ExtendedReal: value() of an infinite quantity");
    return value_;
  }
  /// Finite value or a floating infinity, for arithmetic that tolerates it.
  double as_double() const {
    return finite_ ? value_ : sign_ * std::numeric_limits<double>::infinity();
  }

  friend bool operator==(const ExtendedReal&, const ExtendedReal&) = default;

 private:
  ExtendedReal(double v, bool f, int s) : value_(v), finite_(f), sign_(s) {}
  double value_;
  bool finite_;
  int sign_;
};

/// Exponent alpha = xi + i*zeta of the sphere transform.
struct ComplexExponent {
  double xi = 0.0;
  double zeta = 0.0;

  std::complex<double> value() const { return {xi, zeta}; }
  static ComplexExponent from(std::complex<double> z) { return {z.real(), z.imag()}; }
  /// k - alpha, the partner exponent of the reflection identity.
  ComplexExponent reflected(int k) const { return {k - xi, -zeta}; }

  friend bool operator==(const ComplexExponent&, const ComplexExponent&) = default;
};

}  // namespace sphera
