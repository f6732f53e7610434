#pragma once

// The q-graded bracket [A,B]_G = AB - G(A,B) BA on graded monomials.

#include <array>
#include <complex>

#include "qgrade/errors.hpp"
#include "qgrade/fock_rep.hpp"
#include "qgrade/param_grading.hpp"
#include "qgrade/word_algebra.hpp"

namespace qgrade {

/// Bracket value together with the scalar used and the size of the two
/// orderings, which sets the scale for residual checks.
struct BracketResult {
  FockOperator value;
  cplx G;
  double scale = 0.0;
};

namespace detail {

inline BracketResult bracket_with(const FockOperator& a, const FockOperator& b, cplx G) {
  if (a.dim() != b.dim()) throw dimension_mismatch(a.dim(), b.dim());
  const FockOperator ab = a * b;
  const FockOperator ba = b * a;
  FockOperator out{ab.matrix - G * ba.matrix, a.tag * b.tag, std::min(ab.safe, ba.safe),
                   std::min(ab.band_lo, ba.band_lo), std::max(ab.band_hi, ba.band_hi)};
  const double scale = std::max(ab.matrix.cwiseAbs().maxCoeff(), ba.matrix.cwiseAbs().maxCoeff());
  return {std::move(out), G, scale};
}

}  // namespace detail

/// [A,B]_G with G computed from the tags, never from the matrices.
inline BracketResult bracket_full(const FockOperator& a, const FockOperator& b) {
  return detail::bracket_with(a, b, G_factor(a.tag, b.tag));
}

inline FockOperator bracket(const FockOperator& a, const FockOperator& b) { return bracket_full(a, b).value; }

/// [x,y]_{q,q'} for elementary generators, using g(q,q').
inline FockOperator bracket_elementary(const FockOperator& x, const FockOperator& y) {
  if (!x.tag.elementary || !y.tag.elementary)
    throw not_elementary("bracket_elementary needs operands graded as single generators");
  return detail::bracket_with(x, y, g_factor(x.tag, y.tag)).value;
}

/// Parameters (q1, q1', q2, q2', q3, q3') of the bracket
/// [a_{q1}^nat a_{q1'}, a_{q2}^nat a_{q2'} a_{q3}^nat a_{q3'}]_G.
using CalParameters = std::array<QParam, 6>;

inline CalParameters cal_symmetry_instance() {
  const QParam b = QParam::make(1.0);
  const QParam f = QParam::make(-1.0);
  return {b, f, b, b, f, f};
}

struct CalReport {
  FockOperator value;
  /// G as computed by G_factor from the operand tags.
  cplx G;
  /// The same scalar assembled directly from the six degrees and moduli.
  cplx G_from_degrees;
  double max_abs = 0.0;
  double scale = 0.0;
};

/// Evaluates the bilinear/quadrilinear bracket above. With the default
/// parameters the left operand is q2 = a_1^dag a_{-1} and the right one
/// h_ss = a_1^dag a_1 a_{-1}^dag a_{-1}, and the bracket vanishes.
inline CalReport worked_example_cal(const FockSpace& space,
                                    const CalParameters& p = cal_symmetry_instance()) {
  const Word left = gen_nat(p[0]) * gen_a(p[1]);
  const Word right = gen_nat(p[2]) * gen_a(p[3]) * gen_nat(p[4]) * gen_a(p[5]);
  const FockOperator A = evaluate(left, space);
  const FockOperator B = evaluate(right, space);
  const BracketResult r = bracket_full(A, B);

  double deg_left = 0.0;
  double deg_right = 0.0;
  double mod_left = 1.0;
  double mod_right = 1.0;
  for (int i = 0; i < 2; ++i) {
    deg_left += std::sqrt(p[i].phase_over_pi());
    mod_left *= p[i].modulus();
  }
  for (int i = 2; i < 6; ++i) {
    deg_right += std::sqrt(p[i].phase_over_pi());
    mod_right *= p[i].modulus();
  }
  const cplx G_raw = exp_i_pi(deg_left * deg_right) * std::sqrt(mod_left * mod_right);

  return {r.value, r.G, G_raw, max_abs(r.value.matrix, r.value.safe), r.scale};
}

}  // namespace qgrade
