#pragma once

// Formal words in the elementary generators a_q, a_q^nat and I, and a
// normal-ordering rewriter for words over a single parameter q.
//
// Rewriting uses only a_q a_q^nat -> I + q a_q^nat a_q. No commutation rule
// is known between H_q and H_q' for q != q', so words mixing parameters are
// only ever evaluated as matrices.

#include <cctype>
#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qgrade/errors.hpp"
#include "qgrade/fock_rep.hpp"
#include "qgrade/param_grading.hpp"

namespace qgrade {

enum class Generator { a, a_nat, id };

struct Factor {
  Generator gen = Generator::id;
  QParam q = QParam::make(1.0);
  unsigned exponent = 1;
};

struct Word {
  std::vector<Factor> factors;
  cplx coefficient{1.0, 0.0};

  GradeTag grade() const {
    std::vector<GradePower> parts;
    for (const auto& f : factors) {
      if (f.gen == Generator::id) continue;
      parts.push_back({generator_grade(f.q), static_cast<double>(f.exponent)});
    }
    GradeTag t = grade_of_product(parts);
    t.elementary = is_elementary();
    return t;
  }

  /// A single generator to the first power, or a multiple of I.
  bool is_elementary() const {
    std::size_t count = 0;
    for (const auto& f : factors) {
      if (f.gen == Generator::id || f.exponent == 0) continue;
      if (f.exponent != 1) return false;
      ++count;
    }
    return count <= 1;
  }

  unsigned total_exponent() const {
    unsigned t = 0;
    for (const auto& f : factors)
      if (f.gen != Generator::id) t += f.exponent;
    return t;
  }
};

inline Word operator*(Word a, const Word& b) {
  a.factors.insert(a.factors.end(), b.factors.begin(), b.factors.end());
  a.coefficient *= b.coefficient;
  return a;
}

inline Word gen_a(const QParam& q, unsigned e = 1) { return {{{Generator::a, q, e}}, {1.0, 0.0}}; }
inline Word gen_nat(const QParam& q, unsigned e = 1) { return {{{Generator::a_nat, q, e}}, {1.0, 0.0}}; }
/// a_q^dag, stored as the natural generator of H_{conj q}.
inline Word gen_dag(const QParam& q, unsigned e = 1) { return gen_nat(q.conj(), e); }

/// Polynomial in q with integer coefficients; c[i] multiplies q^i.
struct IntPoly {
  std::vector<std::int64_t> c;

  static IntPoly one() { return {{1}}; }

  IntPoly& operator+=(const IntPoly& o) {
    if (o.c.size() > c.size()) c.resize(o.c.size(), 0);
    for (std::size_t i = 0; i < o.c.size(); ++i) c[i] += o.c[i];
    return *this;
  }

  IntPoly times_q() const {
    IntPoly out;
    out.c.reserve(c.size() + 1);
    out.c.push_back(0);
    out.c.insert(out.c.end(), c.begin(), c.end());
    return out;
  }

  cplx operator()(cplx q) const {
    cplx acc{0.0, 0.0};
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * q + static_cast<double>(*it);
    return acc;
  }

  friend bool operator==(const IntPoly& a, const IntPoly& b) {
    const std::size_t n = std::max(a.c.size(), b.c.size());
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = i < a.c.size() ? a.c[i] : 0;
      const auto y = i < b.c.size() ? b.c[i] : 0;
      if (x != y) return false;
    }
    return true;
  }
};

/// One term coeff(q) * (a_q^nat)^k a_q^l.
struct NormalTerm {
  unsigned k = 0;
  unsigned l = 0;
  IntPoly coeff;
};

/// Sum of normally ordered terms, scaled by the source word's coefficient.
/// `tag` is the grade of the source word; individual terms of lower order
/// (the contractions) carry smaller degree on their own.
struct NormalForm {
  QParam q = QParam::make(1.0);
  cplx scale{1.0, 0.0};
  std::vector<NormalTerm> terms;
  GradeTag tag;

  const NormalTerm* find(unsigned k, unsigned l) const {
    for (const auto& t : terms)
      if (t.k == k && t.l == l) return &t;
    return nullptr;
  }
};

inline constexpr unsigned default_normal_order_bound = 12;

/// Rewrites every a_q a_q^nat into I + q a_q^nat a_q until no plain factor
/// precedes a natural one. Coefficients stay exact in Z[q].
inline NormalForm normal_order(const Word& w, unsigned max_total_exponent = default_normal_order_bound) {
  std::optional<QParam> q;
  std::vector<bool> letters;  // true = a^nat
  for (const auto& f : w.factors) {
    if (f.gen == Generator::id || f.exponent == 0) continue;
    if (q && !(*q == f.q)) throw mixed_parameters("normal_order needs a single deformation parameter");
    q = f.q;
    for (unsigned i = 0; i < f.exponent; ++i) letters.push_back(f.gen == Generator::a_nat);
  }
  if (letters.size() > max_total_exponent)
    throw error("word of total exponent " + std::to_string(letters.size()) + " exceeds the bound " +
                std::to_string(max_total_exponent));

  std::map<std::vector<bool>, IntPoly> pending;
  std::map<std::pair<unsigned, unsigned>, IntPoly> done;
  pending.emplace(std::move(letters), IntPoly::one());

  while (!pending.empty()) {
    auto node = pending.extract(pending.begin());
    const std::vector<bool>& s = node.key();
    std::size_t i = 0;
    while (i + 1 < s.size() && !(!s[i] && s[i + 1])) ++i;
    if (i + 1 >= s.size()) {
      unsigned k = 0;
      while (k < s.size() && s[k]) ++k;
      done[{k, static_cast<unsigned>(s.size()) - k}] += node.mapped();
      continue;
    }
    std::vector<bool> contracted;
    contracted.reserve(s.size() - 2);
    contracted.insert(contracted.end(), s.begin(), s.begin() + static_cast<long>(i));
    contracted.insert(contracted.end(), s.begin() + static_cast<long>(i) + 2, s.end());
    std::vector<bool> swapped = s;
    swapped[i] = true;
    swapped[i + 1] = false;
    pending[std::move(contracted)] += node.mapped();
    pending[std::move(swapped)] += node.mapped().times_q();
  }

  NormalForm out;
  if (q) out.q = *q;
  out.scale = w.coefficient;
  out.tag = w.grade();
  for (auto& [kl, poly] : done) out.terms.push_back({kl.first, kl.second, std::move(poly)});
  return out;
}

inline FockOperator generator_operator(Generator g, const QParam& q, const FockSpace& space) {
  switch (g) {
    case Generator::a:
      return annihilator(q, space);
    case Generator::a_nat:
      return creator_natural(q, space);
    case Generator::id:
      break;
  }
  return identity(space);
}

/// Ordered matrix product of the factors, tagged with the word's grade.
inline FockOperator evaluate(const Word& w, const FockSpace& space) {
  FockOperator out = identity(space);
  for (const auto& f : w.factors) out = out * power(generator_operator(f.gen, f.q, space), f.exponent);
  out.matrix *= w.coefficient;
  out.tag = w.grade();
  return out;
}

inline FockOperator evaluate(const NormalForm& nf, const FockSpace& space) {
  const auto d = static_cast<Eigen::Index>(space.dim);
  const FockOperator a = annihilator(nf.q, space);
  const FockOperator an = creator_natural(nf.q, space);
  FockOperator out{Matrix::Zero(d, d), nf.tag, space.dim, 0, 0};
  bool first = true;
  for (const auto& t : nf.terms) {
    const FockOperator term = power(an, t.k) * power(a, t.l);
    out.matrix += t.coeff(nf.q.value()) * term.matrix;
    out.safe = std::min(out.safe, term.safe);
    out.band_lo = first ? term.band_lo : std::min(out.band_lo, term.band_lo);
    out.band_hi = first ? term.band_hi : std::max(out.band_hi, term.band_hi);
    first = false;
  }
  out.matrix *= nf.scale;
  return out;
}

// ---------------------------------------------------------------------------
// Text form
//
//   word   := factor ('*' factor)*
//   factor := real | 'c(' real ',' real ')'
//           | gen '(' qspec ')' ['^' uint] | ('id' | 'I') ['^' uint]
//   gen    := 'a' | 'aq' | 'anat' | 'adag'
//   qspec  := real [',' real]        cartesian re,im
//           | real '@' real ['pi']   modulus@phase, phase in radians or
//                                    in units of pi with the suffix
//
// Examples: "aq(-1)^1 * adag(1)^1", "anat(0.5@0.25pi)^2 * a(0.5@0.25pi)".
// ---------------------------------------------------------------------------

namespace detail {

class WordParser {
 public:
  explicit WordParser(std::string_view s) : s_(s) {}

  Word parse_word() {
    Word w;
    parse_factor(w);
    skip_ws();
    while (peek() == '*') {
      ++pos_;
      parse_factor(w);
      skip_ws();
    }
    if (pos_ != s_.size()) fail("unexpected trailing input");
    if (w.factors.empty()) w.factors.push_back({Generator::id, QParam::make(1.0), 1});
    return w;
  }

  QParam parse_qspec_only() {
    QParam q = parse_qspec();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return q;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw parse_error(msg + " at position " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  double parse_real() {
    skip_ws();
    const char* first = s_.data() + pos_;
    const char* last = s_.data() + s_.size();
    if (first != last && *first == '+') ++first;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{}) fail("expected a number");
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    return v;
  }

  unsigned parse_exponent() {
    skip_ws();
    if (peek() != '^') return 1;
    ++pos_;
    skip_ws();
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (ec != std::errc{}) fail("expected a nonnegative integer exponent");
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    return v;
  }

  QParam parse_qspec() {
    const double x = parse_real();
    skip_ws();
    if (peek() == ',') {
      ++pos_;
      return QParam::make(x, parse_real());
    }
    if (peek() == '@') {
      ++pos_;
      const double phase = parse_real();
      skip_ws();
      if (s_.substr(pos_, 2) == "pi") {
        pos_ += 2;
        return QParam::from_polar_pi(x, phase);
      }
      return QParam::from_polar(x, phase);
    }
    return QParam::make(x, 0.0);
  }

  std::string parse_ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  void parse_factor(Word& w) {
    skip_ws();
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') {
      w.coefficient *= parse_real();
      return;
    }
    const std::string id = parse_ident();
    if (id.empty()) fail("expected a factor");
    if (id == "c") {
      expect('(');
      const double re = parse_real();
      expect(',');
      const double im = parse_real();
      expect(')');
      w.coefficient *= cplx{re, im};
      return;
    }
    if (id == "id" || id == "I") {
      w.factors.push_back({Generator::id, QParam::make(1.0), parse_exponent()});
      return;
    }
    Generator g;
    bool conj = false;
    if (id == "a" || id == "aq") {
      g = Generator::a;
    } else if (id == "anat") {
      g = Generator::a_nat;
    } else if (id == "adag") {
      g = Generator::a_nat;
      conj = true;
    } else {
      fail("unknown generator '" + id + "'");
    }
    expect('(');
    QParam q = parse_qspec();
    expect(')');
    if (conj) q = q.conj();
    w.factors.push_back({g, q, parse_exponent()});
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Word parse_word(std::string_view text) { return detail::WordParser(text).parse_word(); }

/// "re,im", "re" or "r@phi" (radians) / "r@tpi" (phi = t pi).
inline QParam parse_qparam(std::string_view text) { return detail::WordParser(text).parse_qspec_only(); }

inline std::string to_string(const QParam& q) {
  std::ostringstream os;
  os.precision(17);
  os << q.value().real() << ',' << q.value().imag();
  return os.str();
}

inline std::string to_string(const Word& w) {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  auto sep = [&] {
    if (!first) os << " * ";
    first = false;
  };
  if (w.coefficient != cplx{1.0, 0.0}) {
    sep();
    os << "c(" << w.coefficient.real() << ',' << w.coefficient.imag() << ')';
  }
  for (const auto& f : w.factors) {
    sep();
    switch (f.gen) {
      case Generator::a:
        os << "a(" << to_string(f.q) << ')';
        break;
      case Generator::a_nat:
        os << "anat(" << to_string(f.q) << ')';
        break;
      case Generator::id:
        os << "id";
        break;
    }
    if (f.exponent != 1) os << '^' << f.exponent;
  }
  if (first) os << "id";
  return os.str();
}

}  // namespace qgrade
