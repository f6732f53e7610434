#pragma once

// Dense representations of deformed ladder operators on a truncated Fock
// space span{|0>, ..., |D-1>}.

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "qgrade/errors.hpp"
#include "qgrade/param_grading.hpp"

namespace qgrade {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class Ordering { standard, even_odd };

inline std::string to_string(Ordering o) { return o == Ordering::standard ? "standard" : "evenodd"; }

struct FockSpace {
  std::size_t dim = 64;
  Ordering ordering = Ordering::standard;
};

/// [n]_q = (1 - q^n)/(1 - q), continuous at q = 1.
///
/// Evaluated as the geometric sum 1 + q + ... + q^{n-1}, which is exact at
/// q = +-1 and avoids the cancellation of the quotient near q = 1. Negative n
/// follows the same quotient: [-m]_q = -q^{-m} [m]_q.
inline cplx q_basic_number(long n, cplx q) {
  if (n < 0) {
    const long m = -n;
    cplx qm{1.0, 0.0};
    for (long j = 0; j < m; ++j) qm *= q;
    return -q_basic_number(m, q) / qm;
  }
  cplx sum{0.0, 0.0};
  cplx power{1.0, 0.0};
  for (long j = 0; j < n; ++j) {
    sum += power;
    power *= q;
  }
  return sum;
}

inline cplx q_basic_number(long n, const QParam& q) { return q_basic_number(n, q.value()); }

/// A truncated operator with grading metadata.
///
/// `safe` is the number of leading basis columns on which the D x D matrix
/// agrees with the untruncated operator. [band_lo, band_hi] bounds the level
/// displacement: column n only has entries in rows n+band_lo .. n+band_hi.
struct FockOperator {
  Matrix matrix;
  GradeTag tag;
  std::size_t safe = 0;
  int band_lo = 0;
  int band_hi = 0;

  std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
};

namespace detail {

inline std::size_t clamp_window(long v, std::size_t dim) {
  return static_cast<std::size_t>(std::clamp<long>(v, 0, static_cast<long>(dim)));
}

inline bool same_tag(const GradeTag& a, const GradeTag& b) {
  return std::abs(a.degree - b.degree) <= 1e-12 * std::max(1.0, std::abs(a.degree)) &&
         std::abs(a.modulus - b.modulus) <= 1e-12 * std::max(1.0, std::abs(a.modulus));
}

}  // namespace detail

inline FockOperator operator*(const FockOperator& a, const FockOperator& b) {
  if (a.dim() != b.dim()) throw dimension_mismatch(a.dim(), b.dim());
  FockOperator out;
  out.matrix = a.matrix * b.matrix;
  out.tag = a.tag * b.tag;
  out.safe = std::min(b.safe, detail::clamp_window(static_cast<long>(a.safe) - b.band_hi, a.dim()));
  out.band_lo = a.band_lo + b.band_lo;
  out.band_hi = a.band_hi + b.band_hi;
  return out;
}

inline FockOperator operator*(cplx c, FockOperator a) {
  a.matrix *= c;
  return a;
}

inline FockOperator operator*(double c, FockOperator a) { return cplx{c, 0.0} * std::move(a); }

/// Sum of two operators of the same grade; mixed-grade sums have no single
/// tag and are rejected.
inline FockOperator operator+(const FockOperator& a, const FockOperator& b) {
  if (a.dim() != b.dim()) throw dimension_mismatch(a.dim(), b.dim());
  if (!detail::same_tag(a.tag, b.tag)) throw mixed_grades("sum of operators with different grade tags");
  FockOperator out{a.matrix + b.matrix, a.tag, std::min(a.safe, b.safe), std::min(a.band_lo, b.band_lo),
                   std::max(a.band_hi, b.band_hi)};
  out.tag.elementary = a.tag.elementary && b.tag.elementary;
  return out;
}

inline FockOperator operator-(const FockOperator& a, const FockOperator& b) { return a + (-1.0) * b; }

/// Plain transpose, the matrix form of the natural involution. (xy)^nat =
/// y^nat x^nat carries the same degree and radius as xy.
inline FockOperator natural(const FockOperator& a) {
  FockOperator out{a.matrix.transpose(), a.tag, 0, -a.band_hi, -a.band_lo};
  out.safe = detail::clamp_window(static_cast<long>(a.safe) + a.band_lo, a.dim());
  return out;
}

/// Conjugate transpose under a caller-supplied tag: the adjoint of an
/// expression in H_q lives in H_{conj q}, which the tag alone cannot recover.
inline FockOperator dagger(const FockOperator& a, const GradeTag& tag) {
  FockOperator out = natural(a);
  out.matrix = out.matrix.conjugate().eval();
  out.tag = tag;
  return out;
}

/// Adjoint keeping the tag; correct whenever all parameters involved are real.
inline FockOperator dagger(const FockOperator& a) { return dagger(a, a.tag); }

inline FockOperator identity(const FockSpace& space) {
  const auto d = static_cast<Eigen::Index>(space.dim);
  return {Matrix::Identity(d, d), GradeTag::identity(), space.dim, 0, 0};
}

inline FockOperator zero_like(const FockOperator& a) {
  return {Matrix::Zero(a.matrix.rows(), a.matrix.cols()), a.tag, a.dim(), 0, 0};
}

/// Integer power by repeated multiplication; k = 0 gives the identity.
inline FockOperator power(const FockOperator& a, unsigned k) {
  FockOperator out{Matrix::Identity(a.matrix.rows(), a.matrix.cols()), GradeTag::identity(), a.dim(), 0, 0};
  for (unsigned i = 0; i < k; ++i) out = out * a;
  if (k > 0) out.tag = pow(a.tag, static_cast<double>(k));
  return out;
}

/// a_q: <n-1| a_q |n> = sqrt([n]_q), principal root.
inline FockOperator annihilator(const QParam& q, const FockSpace& space) {
  const auto d = static_cast<Eigen::Index>(space.dim);
  Matrix m = Matrix::Zero(d, d);
  for (Eigen::Index n = 1; n < d; ++n) m(n - 1, n) = std::sqrt(q_basic_number(n, q));
  return {std::move(m), generator_grade(q), space.dim, -1, -1};
}

/// a_q^nat, the plain transpose of a_q.
inline FockOperator creator_natural(const QParam& q, const FockSpace& space) {
  return natural(annihilator(q, space));
}

/// a_q^dag, the conjugate transpose of a_q. Equal to a_{conj q}^nat and graded
/// as a generator of H_{conj q}.
inline FockOperator adjoint_dag(const QParam& q, const FockSpace& space) {
  return dagger(annihilator(q, space), generator_grade(q.conj()));
}

/// An operator diagonal in the standard Fock basis.
struct DiagonalOperator {
  Vector eigenvalues;
  GradeTag tag;

  std::size_t dim() const { return static_cast<std::size_t>(eigenvalues.size()); }

  FockOperator to_operator() const {
    return {eigenvalues.asDiagonal().toDenseMatrix(), tag, dim(), 0, 0};
  }
};

/// Diagonal f(N) with f evaluated at each level n = 0..D-1.
inline DiagonalOperator diagonal(const FockSpace& space, const std::function<cplx(long)>& f,
                                 GradeTag tag = GradeTag::identity()) {
  Vector v(static_cast<Eigen::Index>(space.dim));
  for (Eigen::Index n = 0; n < v.size(); ++n) v(n) = f(static_cast<long>(n));
  tag.elementary = false;
  return {std::move(v), tag};
}

/// N = a_1^dag a_1.
inline DiagonalOperator number_operator(const FockSpace& space) {
  return diagonal(space, [](long n) { return cplx(static_cast<double>(n), 0.0); });
}

/// [N]_q = a_q^nat a_q, graded as that product.
inline DiagonalOperator basic_number(const QParam& q, const FockSpace& space) {
  const GradeTag g = generator_grade(q);
  return diagonal(space, [&](long n) { return q_basic_number(n, q); }, g * g);
}

/// {N}_{conj q, q} = a_q^dag a_q, with eigenvalues sqrt([n]_{conj q} [n]_q) = |[n]_q|.
inline DiagonalOperator self_adjoint_number(const QParam& q, const FockSpace& space) {
  return diagonal(space, [&](long n) { return cplx(std::abs(q_basic_number(n, q)), 0.0); },
                  generator_grade(q.conj()) * generator_grade(q));
}

enum class ZeroPolicy {
  /// 0^beta := 0 for every beta.
  pseudo,
  /// A negative power of a zero eigenvalue raises singular_power.
  strict,
};

/// Eigenvalue-wise principal power; the tag scales as a real power of the
/// underlying product.
inline DiagonalOperator diag_power(const DiagonalOperator& a, double beta,
                                   ZeroPolicy policy = ZeroPolicy::pseudo) {
  Vector v(a.eigenvalues.size());
  for (Eigen::Index n = 0; n < v.size(); ++n) {
    const cplx x = a.eigenvalues(n);
    if (x == cplx{0.0, 0.0}) {
      if (beta < 0.0 && policy == ZeroPolicy::strict) throw singular_power(static_cast<std::size_t>(n));
      v(n) = cplx{0.0, 0.0};
    } else if (beta == 1.0) {
      v(n) = x;
    } else if (beta == 0.5) {
      v(n) = std::sqrt(x);
    } else if (beta == 2.0) {
      v(n) = x * x;
    } else {
      v(n) = std::pow(x, beta);
    }
  }
  return {std::move(v), pow(a.tag, beta)};
}

/// Which of the four even/odd blocks of a reordered matrix carry entries.
struct BlockReport {
  std::size_t even_count = 0;
  bool even_even = false;   // top-left
  bool even_odd = false;    // top-right: odd states mapped to even ones
  bool odd_even = false;    // bottom-left
  bool odd_odd = false;     // bottom-right

  /// "even" (diagonal blocks only), "odd" (off-diagonal only), "mixed" or "zero".
  std::string parity() const {
    const bool diag = even_even || odd_odd;
    const bool off = even_odd || odd_even;
    if (diag && off) return "mixed";
    if (diag) return "even";
    if (off) return "odd";
    return "zero";
  }
};

struct ReorderedOperator {
  FockOperator op;
  BlockReport blocks;
};

/// Basis permutation |0>,|2>,|4>,... followed by |1>,|3>,...
inline std::vector<Eigen::Index> even_odd_permutation(std::size_t dim) {
  std::vector<Eigen::Index> order;
  order.reserve(dim);
  for (std::size_t n = 0; n < dim; n += 2) order.push_back(static_cast<Eigen::Index>(n));
  for (std::size_t n = 1; n < dim; n += 2) order.push_back(static_cast<Eigen::Index>(n));
  return order;
}

/// Conjugates a standard-ordered operator by the even/odd permutation.
/// `safe` keeps its standard-basis meaning.
inline ReorderedOperator reorder_even_odd(const FockOperator& a, double zero_tol = 0.0) {
  const auto order = even_odd_permutation(a.dim());
  const auto d = static_cast<Eigen::Index>(a.dim());
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = a.matrix(order[i], order[j]);

  BlockReport rep;
  rep.even_count = (a.dim() + 1) / 2;
  const auto e = static_cast<Eigen::Index>(rep.even_count);
  auto any = [&](Eigen::Index r0, Eigen::Index c0, Eigen::Index rows, Eigen::Index cols) {
    if (rows == 0 || cols == 0) return false;
    return m.block(r0, c0, rows, cols).cwiseAbs().maxCoeff() > zero_tol;
  };
  rep.even_even = any(0, 0, e, e);
  rep.even_odd = any(0, e, e, d - e);
  rep.odd_even = any(e, 0, d - e, e);
  rep.odd_odd = any(e, e, d - e, d - e);

  FockOperator out = a;
  out.matrix = std::move(m);
  return {std::move(out), rep};
}

/// Outcome of the q -> 0 mutual-inverse check.
struct LimitReport {
  /// max |(a_0 a_0^nat - I)| over the safe window.
  double right_inverse_residual = 0.0;
  /// max |a_0^nat a_0 - (I - |0><0|)| over the full matrix.
  double left_inverse_residual = 0.0;
  double vacuum_entry = 0.0;
  std::size_t window = 0;

  bool holds(double tol) const { return right_inverse_residual <= tol && left_inverse_residual <= tol; }
};

/// a_0 built from [n]_0 (1 for n >= 1, 0 at the vacuum); a_0 and a_0^nat are
/// inverse to each other away from |0>.
inline FockOperator annihilator_q0(const FockSpace& space) {
  const auto d = static_cast<Eigen::Index>(space.dim);
  Matrix m = Matrix::Zero(d, d);
  for (Eigen::Index n = 1; n < d; ++n) m(n - 1, n) = std::sqrt(q_basic_number(n, cplx{0.0, 0.0}));
  return {std::move(m), GradeTag{0.0, 0.0, true}, space.dim, -1, -1};
}

inline LimitReport limit_check_q0(const FockSpace& space) {
  const FockOperator a0 = annihilator_q0(space);
  const FockOperator a0n = natural(a0);
  const FockOperator right = a0 * a0n;
  const FockOperator left = a0n * a0;
  const auto d = static_cast<Eigen::Index>(space.dim);

  LimitReport rep;
  rep.window = right.safe;
  const auto w = static_cast<Eigen::Index>(right.safe);
  Matrix id = Matrix::Identity(d, d);
  rep.right_inverse_residual = w == 0 ? 0.0 : (right.matrix - id).leftCols(w).cwiseAbs().maxCoeff();
  Matrix proj = id;
  proj(0, 0) = 0.0;
  rep.left_inverse_residual = (left.matrix - proj).cwiseAbs().maxCoeff();
  rep.vacuum_entry = std::abs(left.matrix(0, 0));
  return rep;
}

/// max |(a - b) restricted to the first `window` columns|.
inline double window_residual(const Matrix& a, const Matrix& b, std::size_t window) {
  const auto w = static_cast<Eigen::Index>(std::min<std::size_t>(window, static_cast<std::size_t>(a.cols())));
  if (w == 0) return 0.0;
  return (a - b).leftCols(w).cwiseAbs().maxCoeff();
}

inline double max_abs(const Matrix& a, std::size_t window) {
  const auto w = static_cast<Eigen::Index>(std::min<std::size_t>(window, static_cast<std::size_t>(a.cols())));
  if (w == 0) return 0.0;
  return a.leftCols(w).cwiseAbs().maxCoeff();
}

}  // namespace qgrade
