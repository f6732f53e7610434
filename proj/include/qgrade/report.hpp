#pragma once

// Relation-by-relation verification reports.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qgrade/errors.hpp"
#include "qgrade/fock_rep.hpp"
#include "qgrade/graded_bracket.hpp"

namespace qgrade {

enum class Expectation {
  /// The identity must hold: residual <= tolerance.
  holds,
  /// The quantity must be bounded away from zero: residual > tolerance.
  nonzero,
  /// Reported for reference; does not affect the verdict.
  informational,
};

inline std::string to_string(Expectation e) {
  switch (e) {
    case Expectation::holds:
      return "holds";
    case Expectation::nonzero:
      return "nonzero";
    case Expectation::informational:
      return "informational";
  }
  return "?";
}

struct Relation {
  std::string tag;
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  Expectation expect = Expectation::holds;
  std::size_t window = 0;
  std::string note;

  /// For informational entries: whether the identity holds at tolerance.
  bool pass() const {
    if (std::isnan(residual)) return false;
    if (expect == Expectation::nonzero) return residual > tolerance;
    return residual <= tolerance;
  }
  bool counts() const { return expect != Expectation::informational; }
};

struct Report {
  std::string suite;
  std::vector<Relation> relations;

  bool ok() const {
    return std::all_of(relations.begin(), relations.end(), [](const Relation& r) { return !r.counts() || r.pass(); });
  }

  std::size_t asserted() const {
    return static_cast<std::size_t>(std::count_if(relations.begin(), relations.end(), [](const Relation& r) { return r.counts(); }));
  }

  std::size_t passed() const {
    return static_cast<std::size_t>(
        std::count_if(relations.begin(), relations.end(), [](const Relation& r) { return r.counts() && r.pass(); }));
  }

  const Relation* find(const std::string& name) const {
    for (const auto& r : relations)
      if (r.name == name) return &r;
    return nullptr;
  }

  /// Throws verification_failure for the first asserted relation that fails.
  void require() const {
    for (const auto& r : relations)
      if (r.counts() && !r.pass()) throw verification_failure(r.tag + ": " + r.name, r.residual);
  }

  void append(const Report& other) { relations.insert(relations.end(), other.relations.begin(), other.relations.end()); }
};

/// Max-norm difference on the common safe window, relative to
/// max(1, largest entry among the terms involved). Pure diagonal or integer
/// valued relations therefore see an absolute residual.
inline double scaled_residual(const FockOperator& lhs, const FockOperator& rhs, double term_scale = 0.0) {
  const std::size_t w = std::min(lhs.safe, rhs.safe);
  const double scale = std::max({1.0, term_scale, max_abs(lhs.matrix, w), max_abs(rhs.matrix, w)});
  return window_residual(lhs.matrix, rhs.matrix, w) / scale;
}

inline Relation compare(std::string tag, std::string name, const BracketResult& lhs, const FockOperator& rhs,
                        double tol, Expectation e = Expectation::holds) {
  Relation r{std::move(tag), std::move(name), scaled_residual(lhs.value, rhs, lhs.scale), tol, e,
             std::min(lhs.value.safe, rhs.safe), {}};
  return r;
}

inline Relation compare(std::string tag, std::string name, const FockOperator& lhs, const FockOperator& rhs,
                        double tol, Expectation e = Expectation::holds) {
  return {std::move(tag), std::move(name), scaled_residual(lhs, rhs), tol, e, std::min(lhs.safe, rhs.safe), {}};
}

/// Relation asserting that a bracket vanishes.
inline Relation vanishes(std::string tag, std::string name, const BracketResult& lhs, double tol,
                         Expectation e = Expectation::holds) {
  return compare(std::move(tag), std::move(name), lhs, zero_like(lhs.value), tol, e);
}

}  // namespace qgrade
