#pragma once

// Partner parameters qbar_p for which q2 = a_q^nat a_qbar is a symmetry of
// h2 = q2^2: r_qbar = 1/r_q and phase k_p = pi (sqrt(p) - sqrt(phi_q/pi))^2.

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qgrade/errors.hpp"
#include "qgrade/param_grading.hpp"

namespace qgrade {

struct PartnerSolution {
  /// Integer with (sqrt(phi_q/pi) + sqrt(k/pi))^2 = p when the bracket closes.
  long p = 0;
  QParam qbar = QParam::make(1.0);
  /// Phase of qbar in [0, 2pi).
  double k_value = 0.0;
  /// qbar == q.
  bool trivial = false;
  /// Whether the degree condition (sqrt(phi_q/pi) + sqrt(k/pi))^2 = p holds.
  /// It fails when sqrt(p) < sqrt(phi_q/pi); the phase is then the square of
  /// a negative root and [q2, h2]_G does not vanish.
  bool closes = true;
  /// Produced by the extended enumeration beyond k < 2pi.
  bool experimental = false;
};

struct PartnerOptions {
  /// Exclusive upper bound for k; the default keeps the half-open [0, 2pi).
  double max_phase = 2.0 * pi;
  /// Values of k within this distance of the upper bound are excluded.
  double boundary_tol = 1e-12;
};

struct PartnerSet {
  QParam input;
  std::vector<PartnerSolution> solutions;
  /// p values whose phase landed on the upper bound and were dropped.
  std::vector<long> boundary_excluded;

  std::size_t count() const { return solutions.size(); }
  std::size_t nontrivial_count() const {
    std::size_t n = 0;
    for (const auto& s : solutions) n += s.trivial ? 0 : 1;
    return n;
  }
};

namespace detail {

/// Phase of qbar_p, built so that the special cases stay exact:
/// k/pi = (sqrt(p) - sqrt(t))^2 with t = phi_q/pi.
inline double partner_phase_over_pi(long p, double t) {
  const double s = std::sqrt(static_cast<double>(p)) - std::sqrt(t);
  return s * s;
}

}  // namespace detail

/// All admissible partners in increasing p. p = 0 occurs only for phi_q = 0.
inline PartnerSet solve_partners(const QParam& q, const PartnerOptions& opt = {}) {
  PartnerSet out{q, {}, {}};
  const double t = q.phase_over_pi();
  const double r_bar = 1.0 / q.modulus();
  const double bound = opt.max_phase / pi;
  const double tol = opt.boundary_tol / pi;
  // k/pi grows past the bound once sqrt(p) > sqrt(t) + sqrt(bound).
  const double root = std::sqrt(t) + std::sqrt(bound);
  const long p_max = static_cast<long>(std::ceil(root * root)) + 1;
  for (long p = (t == 0.0 ? 0 : 1); p <= p_max; ++p) {
    double k = detail::partner_phase_over_pi(p, t);
    // The trivial solution p = 4 t is reproduced bit-exactly.
    const bool trivial = std::abs(static_cast<double>(p) - 4.0 * t) < 1e-12;
    if (trivial) k = t;
    if (k >= bound - tol) {
      if (k < bound + tol) out.boundary_excluded.push_back(p);
      continue;
    }
    PartnerSolution s;
    s.p = p;
    s.k_value = pi * k;
    s.qbar = trivial ? q : QParam::from_polar_pi(r_bar, k);
    s.trivial = trivial || s.qbar == q;
    s.closes = std::sqrt(static_cast<double>(p)) >= std::sqrt(t) - 1e-15;
    s.experimental = k >= 2.0 - tol;
    out.solutions.push_back(s);
  }
  return out;
}

/// Breakpoint pi (sqrt(2) - sqrt(p))^2 above which p >= 3 is admissible.
inline double partner_breakpoint(long p) {
  const double s = std::sqrt(2.0) - std::sqrt(static_cast<double>(p));
  return pi * s * s;
}

struct CountSample {
  double phase = 0.0;
  std::size_t count = 0;
  std::vector<long> ps;
};

struct CountProfile {
  std::vector<CountSample> samples;
  /// (p, breakpoint phase) for p = 3..7.
  std::vector<std::pair<long, double>> breakpoints;
  std::size_t min_count = 0;
  std::size_t max_count = 0;
};

/// Sweeps phi_q = 2 pi j / samples, j = 0..samples-1, on the unit circle.
inline CountProfile partner_count_profile(std::size_t samples) {
  if (samples == 0) throw error("partner_count_profile needs at least one sample");
  CountProfile out;
  out.samples.reserve(samples);
  out.min_count = static_cast<std::size_t>(-1);
  for (std::size_t j = 0; j < samples; ++j) {
    const double t = 2.0 * static_cast<double>(j) / static_cast<double>(samples);
    const PartnerSet set = solve_partners(QParam::from_polar_pi(1.0, t));
    CountSample s{pi * t, set.count(), {}};
    for (const auto& sol : set.solutions) s.ps.push_back(sol.p);
    out.min_count = std::min(out.min_count, s.count);
    out.max_count = std::max(out.max_count, s.count);
    out.samples.push_back(std::move(s));
  }
  for (long p = 3; p <= 7; ++p) out.breakpoints.emplace_back(p, partner_breakpoint(p));
  return out;
}

enum class FigureFormat { csv, json };

inline nlohmann::json partners_json(const PartnerSet& set) {
  nlohmann::json sols = nlohmann::json::array();
  for (const auto& s : set.solutions) {
    sols.push_back({{"p", s.p},
                    {"qbar", {{"re", s.qbar.value().real()}, {"im", s.qbar.value().imag()}}},
                    {"phase", s.k_value},
                    {"modulus", s.qbar.modulus()},
                    {"trivial", s.trivial},
                    {"closes", s.closes},
                    {"experimental", s.experimental}});
  }
  return {{"input_q",
           {{"re", set.input.value().real()},
            {"im", set.input.value().imag()},
            {"phase", set.input.phase()},
            {"modulus", set.input.modulus()}}},
          {"solutions", std::move(sols)},
          {"boundary_excluded", set.boundary_excluded}};
}

inline void write_partners(std::ostream& os, const PartnerSet& set, FigureFormat fmt) {
  if (fmt == FigureFormat::json) {
    os << partners_json(set).dump(2) << '\n';
    return;
  }
  os.precision(17);
  os << "# input_q," << set.input.value().real() << ',' << set.input.value().imag() << ',' << set.input.phase() << ','
     << set.input.modulus() << '\n';
  os << "p,re,im,phase,modulus,trivial,closes,experimental\n";
  for (const auto& s : set.solutions)
    os << s.p << ',' << s.qbar.value().real() << ',' << s.qbar.value().imag() << ',' << s.k_value << ',' << s.qbar.modulus()
       << ',' << (s.trivial ? 1 : 0) << ',' << (s.closes ? 1 : 0) << ',' << (s.experimental ? 1 : 0) << '\n';
}

/// Writes the partner point set for q to `path`.
inline PartnerSet emit_figure_data(const QParam& q, const std::string& path, FigureFormat fmt = FigureFormat::csv,
                                   const PartnerOptions& opt = {}) {
  PartnerSet set = solve_partners(q, opt);
  std::ofstream f(path);
  if (!f) throw io_failure(path);
  write_partners(f, set, fmt);
  if (!f) throw io_failure(path);
  return set;
}

}  // namespace qgrade
