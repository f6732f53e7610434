#pragma once

// Deformation parameters and the degree/radius grading attached to operator
// expressions built from q-deformed Heisenberg generators.

#include <cmath>
#include <complex>
#include <initializer_list>
#include <numbers>
#include <span>
#include <utility>

#include "qgrade/errors.hpp"

namespace qgrade {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

/// e^{i pi t}. Exact when t is a multiple of 1/2, which keeps the boson,
/// fermion and Z2 limits of the bracket free of rounding noise.
inline cplx exp_i_pi(double t) {
  double m = std::fmod(t, 2.0);
  if (m < 0.0) m += 2.0;
  if (m == 0.0) return {1.0, 0.0};
  if (m == 0.5) return {0.0, 1.0};
  if (m == 1.0) return {-1.0, 0.0};
  if (m == 1.5) return {0.0, -1.0};
  return {std::cos(pi * m), std::sin(pi * m)};
}

/// A nonzero complex deformation parameter q = r e^{i phi}, phi in [0, 2pi).
///
/// The phase is stored as phi/pi (in [0, 2)) so that parameters such as -1 or
/// e^{i pi/4} built from their polar data keep exact degrees.
class QParam {
 public:
  /// Normalizes an arbitrary nonzero complex number.
  static QParam make(cplx value) {
    if (value == cplx{0.0, 0.0}) throw zero_parameter{};
    double t = std::arg(value) / pi;
    return QParam{value, std::abs(value), reduce_turns(t)};
  }

  static QParam make(double re, double im = 0.0) { return make(cplx{re, im}); }

  /// Builds r e^{i pi t}; the stored value uses exp_i_pi, so half-integer t
  /// lands exactly on the axes.
  static QParam from_polar_pi(double r, double t) {
    if (!(r > 0.0)) throw zero_parameter{};
    t = reduce_turns(t);
    return QParam{r * exp_i_pi(t), r, t};
  }

  static QParam from_polar(double r, double phi) { return from_polar_pi(r, phi / pi); }

  cplx value() const noexcept { return value_; }
  double modulus() const noexcept { return r_; }
  /// phi in [0, 2pi).
  double phase() const noexcept { return pi * t_; }
  /// phi / pi in [0, 2).
  double phase_over_pi() const noexcept { return t_; }
  bool inside_disc() const noexcept { return r_ <= 1.0; }
  bool is_real() const noexcept { return value_.imag() == 0.0; }

  QParam conj() const { return make(std::conj(value_)); }

  friend bool operator==(const QParam& a, const QParam& b) noexcept { return a.value_ == b.value_; }

 private:
  QParam(cplx v, double r, double t) : value_(v), r_(r), t_(t) {}

  static double reduce_turns(double t) {
    t = std::fmod(t, 2.0);
    if (t < 0.0) t += 2.0;
    if (t >= 2.0) t = 0.0;
    return t + 0.0;  // drops a negative zero
  }

  cplx value_;
  double r_;
  double t_;
};

/// Degree |.| and radius l(.) of an operator expression.
///
/// The radius is kept through its square (the product of the moduli r of the
/// parameters involved), so l(x)l(y) = sqrt(r_x r_y) is evaluated with a
/// single rounding; g(q,q) = q then holds bit-for-bit for real q.
struct GradeTag {
  double degree = 0.0;
  double modulus = 1.0;
  /// Set only for tags produced by generator_grade or the identity.
  bool elementary = false;

  double radius() const { return std::sqrt(modulus); }

  static GradeTag identity() { return {0.0, 1.0, true}; }
};

/// |a_q| = sqrt(phi/pi), l(a_q) = sqrt(r). Shared by a_q and a_q^nat.
inline GradeTag generator_grade(const QParam& q) {
  return {std::sqrt(q.phase_over_pi()), q.modulus(), true};
}

struct GradePower {
  GradeTag tag;
  double exponent = 1.0;
};

/// Degree adds and radius multiplies, each weighted by its exponent. Real
/// exponents are only meaningful for operators with a diagonal decomposition.
inline GradeTag grade_of_product(std::span<const GradePower> factors) {
  GradeTag out{0.0, 1.0, false};
  for (const auto& f : factors) {
    out.degree += f.exponent * f.tag.degree;
    out.modulus *= f.exponent == 1.0 ? f.tag.modulus : std::pow(f.tag.modulus, f.exponent);
  }
  return out;
}

inline GradeTag grade_of_product(std::initializer_list<GradePower> factors) {
  return grade_of_product(std::span<const GradePower>(factors.begin(), factors.size()));
}

inline GradeTag operator*(const GradeTag& a, const GradeTag& b) {
  return {a.degree + b.degree, a.modulus * b.modulus, false};
}

inline GradeTag pow(const GradeTag& a, double beta) {
  return {beta * a.degree, std::pow(a.modulus, beta), false};
}

/// G(A,B) = e^{i pi |A||B|} l(A) l(B).
inline cplx G_factor(const GradeTag& a, const GradeTag& b) {
  return exp_i_pi(a.degree * b.degree) * std::sqrt(a.modulus * b.modulus);
}

/// g(q,q') for elementary generators. Numerically the same formula as
/// G_factor; bracket_elementary is where elementarity is enforced.
inline cplx g_factor(const GradeTag& x, const GradeTag& y) { return G_factor(x, y); }

inline cplx g_factor(const QParam& q, const QParam& qp) {
  return g_factor(generator_grade(q), generator_grade(qp));
}

}  // namespace qgrade
