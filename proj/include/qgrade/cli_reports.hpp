#pragma once

// Suite registry, run configuration and JSON/CSV/text rendering shared by the
// command-line tool.

#include <algorithm>
#include <cmath>
#include <future>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qgrade/errors.hpp"
#include "qgrade/fock_rep.hpp"
#include "qgrade/graded_bracket.hpp"
#include "qgrade/param_grading.hpp"
#include "qgrade/partner_solver.hpp"
#include "qgrade/report.hpp"
#include "qgrade/susy_models.hpp"
#include "qgrade/word_algebra.hpp"

namespace qgrade {

enum class OutputFormat { json, csv, text };

inline OutputFormat parse_format(const std::string& s) {
  if (s == "json") return OutputFormat::json;
  if (s == "csv") return OutputFormat::csv;
  if (s == "text") return OutputFormat::text;
  throw unknown_name("format", s);
}

/// 40 parameters in the closed unit disc minus the origin: five moduli by
/// eight phases, including both real axes and generic complex phases.
inline std::vector<QParam> default_q_grid() {
  std::vector<QParam> out;
  for (double r : {0.2, 0.45, 0.7, 0.9, 1.0})
    for (double t : {0.0, 0.13, 0.5, 0.77, 1.0, 1.29, 1.5, 1.83}) out.push_back(QParam::from_polar_pi(r, t));
  return out;
}

struct RunConfig {
  std::size_t dim = 64;
  double tolerance = 1e-12;
  std::vector<QParam> q_grid = default_q_grid();
  OutputFormat output_format = OutputFormat::text;
  std::uint64_t seed = 20240601;
  /// Extra (q, qbar) pairs checked by the qqbar suite.
  std::vector<std::pair<QParam, QParam>> injected_pairs;
  /// Run independent suites on separate threads.
  bool parallel = true;

  void validate() const {
    if (dim < 4) throw error("dim must be at least 4");
    if (!(tolerance > 0.0)) throw error("tolerance must be positive");
  }

  FockSpace space() const { return {dim, Ordering::standard}; }
};

/// Figure 1 and Figure 2 inputs.
inline QParam figure1_q() { return QParam::from_polar_pi(1.0, 0.25); }
inline QParam figure2_q() { return QParam::from_polar_pi(0.5, 1.8); }

// ---------------------------------------------------------------------------
// Suites

/// a_q a_q^nat - q a_q^nat a_q = I on the grid, the natural involution,
/// a^dag = a_{conj q}^nat, and normal ordering against direct evaluation on
/// seeded random words.
inline Report suite_defining(const RunConfig& cfg) {
  const FockSpace s = cfg.space();
  Report r{"defining", {}};
  double worst = 0.0;
  double worst_inv = 0.0;
  double worst_dag = 0.0;
  std::size_t window = s.dim;
  for (const QParam& q : cfg.q_grid) {
    const FockOperator a = annihilator(q, s);
    const FockOperator an = creator_natural(q, s);
    const FockOperator lhs = bracket_elementary(a, an);
    worst = std::max(worst, scaled_residual(lhs, identity(s)));
    window = std::min(window, lhs.safe);
    worst_inv = std::max(worst_inv, (natural(an).matrix - a.matrix).cwiseAbs().maxCoeff());
    worst_dag = std::max(worst_dag, (adjoint_dag(q, s).matrix - creator_natural(q.conj(), s).matrix).cwiseAbs().maxCoeff());
  }
  r.relations.push_back({"qdef", "[a_q,a_q^nat]_q = I over the q grid", worst, cfg.tolerance, Expectation::holds, window, {}});
  r.relations.push_back({"relat", "(a_q^nat)^nat = a_q", worst_inv, 0.0, Expectation::holds, s.dim, {}});
  r.relations.push_back({"relat", "a_q^dag = a_{conj q}^nat", worst_dag, 0.0, Expectation::holds, s.dim, {}});

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> len(1, 6);
  std::uniform_int_distribution<int> coin(0, 1);
  double worst_word = 0.0;
  std::size_t word_window = s.dim;
  for (int i = 0; i < 40; ++i) {
    const QParam q = QParam::from_polar_pi(0.2 + 0.8 * unit(rng), 2.0 * unit(rng));
    Word w;
    const int n = len(rng);
    for (int j = 0; j < n; ++j) w = w * (coin(rng) ? gen_nat(q) : gen_a(q));
    const FockOperator direct = evaluate(w, s);
    const FockOperator normal = evaluate(normal_order(w), s);
    worst_word = std::max(worst_word, scaled_residual(direct, normal));
    word_window = std::min({word_window, direct.safe, normal.safe});
  }
  r.relations.push_back({"normal", "evaluate(normal_order(w)) = evaluate(w), 40 seeded words", worst_word, cfg.tolerance,
                         Expectation::holds, word_window, {}});
  return r;
}

/// The q = -1 limit: a a^dag + a^dag a = I with nilpotent a and a^dag.
inline Report suite_fermionic(const RunConfig& cfg) {
  const FockSpace s = cfg.space();
  const QParam f = QParam::make(-1.0);
  const FockOperator a = annihilator(f, s);
  const FockOperator ad = adjoint_dag(f, s);
  Report r{"fermionic", {}};
  r.relations.push_back(compare("ferm", "a_{-1} a_{-1}^dag + a_{-1}^dag a_{-1} = I", a * ad + ad * a, identity(s), cfg.tolerance));
  const Matrix a2 = (a * a).matrix;
  const Matrix ad2 = (ad * ad).matrix;
  r.relations.push_back({"ferm", "a_{-1}^2 = 0 (all entries)", a2.cwiseAbs().maxCoeff(), 0.0, Expectation::holds, s.dim, {}});
  r.relations.push_back(
      {"ferm", "(a_{-1}^dag)^2 = 0 (all entries)", ad2.cwiseAbs().maxCoeff(), 0.0, Expectation::holds, s.dim, {}});
  r.relations.push_back({"antic", "g(-1,-1) = -1", std::abs(g_factor(f, f) - cplx{-1.0, 0.0}), 0.0, Expectation::holds, 1, {}});
  return r;
}

/// Even/odd block structure with the explicit entries of the reordered a_1
/// and a_{-1}.
inline Report suite_blocks(const FockSpace& s) {
  Report r{"blocks", {}};
  const ReorderedOperator b = reorder_even_odd(annihilator(QParam::make(1.0), s));
  const ReorderedOperator f = reorder_even_odd(annihilator(QParam::make(-1.0), s));
  const auto e = static_cast<Eigen::Index>(b.blocks.even_count);
  const auto d = static_cast<Eigen::Index>(s.dim);
  // a_1: even row m (level 2m) gets sqrt(2m+1) from odd column m;
  // odd row m (level 2m+1) gets sqrt(2m+2) from even column m+1.
  Matrix expect_b = Matrix::Zero(d, d);
  Matrix expect_f = Matrix::Zero(d, d);
  for (Eigen::Index m = 0; m < e; ++m)
    if (e + m < d) {
      expect_b(m, e + m) = std::sqrt(2.0 * static_cast<double>(m) + 1.0);
      expect_f(m, e + m) = 1.0;
    }
  for (Eigen::Index m = 0; e + m < d; ++m)
    if (m + 1 < e) expect_b(e + m, m + 1) = std::sqrt(2.0 * static_cast<double>(m) + 2.0);
  r.relations.push_back({"mat", "reordered a_1 = off-diagonal blocks of sqrt(1),sqrt(3),... / sqrt(2),sqrt(4),...",
                         (b.op.matrix - expect_b).cwiseAbs().maxCoeff(), 0.0, Expectation::holds, s.dim, {}});
  r.relations.push_back({"mat", "reordered a_{-1} = identity-like top-right block, zero elsewhere",
                         (f.op.matrix - expect_f).cwiseAbs().maxCoeff(), 0.0, Expectation::holds, s.dim, {}});
  r.relations.push_back({"mat", "a_1 and a_{-1} are block off-diagonal",
                         (b.blocks.parity() == "odd" && f.blocks.parity() == "odd") ? 0.0 : 1.0, 0.0, Expectation::holds,
                         s.dim, {}});
  return r;
}

/// q -> 0 mutual inverses, the exact boson/fermion/Z2 values of g, g(q,q) = q
/// on real q, and the even/odd matrix blocks.
inline Report suite_limits(const RunConfig& cfg) {
  const FockSpace s = cfg.space();
  Report r{"limits", {}};
  const LimitReport lim = limit_check_q0(s);
  r.relations.push_back({"q0", "a_0 a_0^nat = I", lim.right_inverse_residual, cfg.tolerance, Expectation::holds, lim.window, {}});
  r.relations.push_back(
      {"q0", "a_0^nat a_0 = I - |0><0| (all entries)", lim.left_inverse_residual, 0.0, Expectation::holds, s.dim, {}});

  const QParam b = QParam::make(1.0);
  const QParam f = QParam::make(-1.0);
  r.relations.push_back({"com", "g(1,1) = 1", std::abs(g_factor(b, b) - 1.0), 0.0, Expectation::holds, 1, {}});
  r.relations.push_back({"antic", "g(-1,-1) = -1", std::abs(g_factor(f, f) + 1.0), 0.0, Expectation::holds, 1, {}});
  r.relations.push_back({"gradef", "g(1,-1) = 1", std::abs(g_factor(b, f) - 1.0), 0.0, Expectation::holds, 1, {}});
  double worst = 0.0;
  for (double x : {-0.9, -0.5, -0.25, 0.1, 0.3, 0.5, 0.75, 1.5, 2.0, 3.7}) {
    const QParam q = QParam::make(x);
    worst = std::max(worst, std::abs(g_factor(q, q) - q.value()));
  }
  r.relations.push_back({"gradef", "g(q,q) = q for 10 real q", worst, 0.0, Expectation::holds, 1, {}});
  r.append(suite_blocks(s));
  return r;
}

inline std::vector<std::pair<QParam, QParam>> solver_pairs() {
  std::vector<std::pair<QParam, QParam>> out;
  for (const QParam& q : {QParam::make(1.0), figure1_q(), figure2_q()})
    for (const auto& sol : solve_partners(q).solutions) out.emplace_back(q, sol.qbar);
  return out;
}

inline std::string pair_label(const QParam& q, const QParam& qbar) {
  std::ostringstream os;
  os << std::setprecision(6) << "q=" << q.modulus() << "@" << q.phase_over_pi() << "pi qbar=" << qbar.modulus() << "@"
     << qbar.phase_over_pi() << "pi";
  return os.str();
}

/// verify_qqbar and verify_mapping_qqbar over the solver pairs of the figure
/// inputs and q = 1, plus any injected pairs. Relation names carry the pair.
inline Report suite_qqbar(const RunConfig& cfg) {
  const FockSpace s = cfg.space();
  Report r{"qqbar", {}};
  auto pairs = solver_pairs();
  pairs.insert(pairs.end(), cfg.injected_pairs.begin(), cfg.injected_pairs.end());
  for (const auto& [q, qbar] : pairs) {
    const SusyModel m = build_model_qqbar(q, qbar, s);
    Report part = verify_qqbar(m, cfg.tolerance);
    part.append(verify_mapping_qqbar(m, cfg.tolerance));
    const std::string label = pair_label(q, qbar);
    for (auto& rel : part.relations) rel.name = label + ": " + rel.name;
    r.append(part);
  }
  return r;
}

/// Figure point sets and the count bounds of the partner solver.
inline Report suite_partners(const RunConfig& cfg) {
  Report r{"partners", {}};
  auto phase_error = [](const PartnerSet& set, const std::vector<std::pair<long, double>>& expect) {
    std::vector<const PartnerSolution*> nontrivial;
    for (const auto& s : set.solutions)
      if (!s.trivial) nontrivial.push_back(&s);
    if (nontrivial.size() != expect.size()) return 1.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < expect.size(); ++i) {
      if (nontrivial[i]->p != expect[i].first) return 1.0;
      worst = std::max(worst, std::abs(nontrivial[i]->k_value - expect[i].second));
    }
    return worst;
  };
  const PartnerSet f1 = solve_partners(figure1_q());
  r.relations.push_back({"fig1", "q = e^{i pi/4}: partners p = 2, 3 at pi(sqrt(p) - 1/2)^2",
                         phase_error(f1, {{2, pi * std::pow(std::sqrt(2.0) - 0.5, 2)}, {3, pi * std::pow(std::sqrt(3.0) - 0.5, 2)}}),
                         cfg.tolerance, Expectation::holds, 0, {}});
  const PartnerSet f2 = solve_partners(figure2_q());
  std::vector<std::pair<long, double>> e2;
  double mod_err = 0.0;
  for (long p = 1; p <= 7; ++p) e2.emplace_back(p, pi * std::pow(std::sqrt(static_cast<double>(p)) - std::sqrt(1.8), 2));
  for (const auto& s : f2.solutions) mod_err = std::max(mod_err, std::abs(s.qbar.modulus() - 2.0));
  r.relations.push_back({"fig2", "q = (1/2)e^{i 9pi/5}: 7 partners at pi(sqrt(p) - sqrt(9/5))^2", phase_error(f2, e2),
                         cfg.tolerance, Expectation::holds, 0, {}});
  r.relations.push_back({"fig2", "partner moduli = 2", mod_err, cfg.tolerance, Expectation::holds, 0, {}});
  const PartnerSet one = solve_partners(QParam::make(1.0));
  r.relations.push_back({"phas", "q = 1: unique nontrivial partner e^{i pi}", phase_error(one, {{1, pi}}), cfg.tolerance,
                         Expectation::holds, 0, {}});

  const CountProfile prof = partner_count_profile(10000);
  const double out_of_range = (prof.min_count >= 2 && prof.max_count <= 7) ? 0.0 : 1.0;
  Relation counts{"k+", "2 <= #partners <= 7 over 10^4 phases", out_of_range, 0.0, Expectation::holds, 0, {}};
  counts.note = "observed range [" + std::to_string(prof.min_count) + ", " + std::to_string(prof.max_count) + "]";
  r.relations.push_back(std::move(counts));

  std::size_t open_pairs = 0;
  for (const QParam& q : {QParam::make(1.0), figure1_q(), figure2_q()})
    for (const auto& s : solve_partners(q).solutions) open_pairs += s.closes ? 0 : 1;
  Relation closes{"phas", "solver pairs with (sqrt(phi_q/pi) + sqrt(k/pi))^2 != p", static_cast<double>(open_pairs), 0.0,
                  Expectation::informational, 0, {}};
  closes.note = "phases below phi_q square a negative root; the bracket does not close there";
  r.relations.push_back(std::move(closes));
  return r;
}

inline Report suite_susy(const RunConfig& cfg) { return verify_susy_1m1(build_model_1m1(cfg.space()), cfg.tolerance); }
inline Report suite_mapping(const RunConfig& cfg) { return verify_mapping_1m1(build_model_1m1(cfg.space()), cfg.tolerance); }
inline Report suite_appendix(const RunConfig& cfg) {
  return verify_appendix_suite(build_model_1m1(cfg.space()), cfg.tolerance);
}

using SuiteFn = Report (*)(const RunConfig&);

inline const std::vector<std::pair<std::string, SuiteFn>>& suite_registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> reg{
      {"defining", suite_defining}, {"fermionic", suite_fermionic}, {"limits", suite_limits},
      {"susy-1m1", suite_susy},     {"mapping", suite_mapping},     {"appendix", suite_appendix},
      {"qqbar", suite_qqbar},       {"partners", suite_partners}};
  return reg;
}

/// Runs one named suite, or every suite for "all" (concurrently when enabled;
/// output order follows the registry).
inline std::vector<Report> run_suites(const RunConfig& cfg, const std::string& name) {
  cfg.validate();
  std::vector<SuiteFn> chosen;
  for (const auto& [n, fn] : suite_registry())
    if (name == "all" || name == n) chosen.push_back(fn);
  if (chosen.empty()) throw unknown_name("suite", name);
  std::vector<Report> out;
  if (!cfg.parallel || chosen.size() == 1) {
    for (SuiteFn fn : chosen) out.push_back(fn(cfg));
    return out;
  }
  std::vector<std::future<Report>> jobs;
  for (SuiteFn fn : chosen) jobs.push_back(std::async(std::launch::async, fn, std::cref(cfg)));
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

// ---------------------------------------------------------------------------
// Rendering

inline std::string verdict(const Relation& r) {
  if (!r.counts()) return "INFO";
  return r.pass() ? "PASS" : "FAIL";
}

inline nlohmann::json to_json(const Relation& r) {
  nlohmann::json j{{"tag", r.tag},
                   {"name", r.name},
                   {"residual", r.residual},
                   {"tolerance", r.tolerance},
                   {"expect", to_string(r.expect)},
                   {"verdict", verdict(r)},
                   {"window", r.window}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline nlohmann::json to_json(const Report& rep) {
  nlohmann::json rel = nlohmann::json::array();
  for (const auto& r : rep.relations) rel.push_back(to_json(r));
  return {{"suite", rep.suite},
          {"ok", rep.ok()},
          {"asserted", rep.asserted()},
          {"passed", rep.passed()},
          {"relations", std::move(rel)}};
}

inline std::string csv_field(const std::string& s) {
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + '"';
}

inline void render(std::ostream& os, const std::vector<Report>& reports, OutputFormat fmt) {
  if (fmt == OutputFormat::json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    os << nlohmann::json{{"reports", arr}}.dump(2) << '\n';
    return;
  }
  if (fmt == OutputFormat::csv) {
    os << "suite,tag,name,verdict,expect,residual,tolerance,window,note\n";
    for (const auto& rep : reports)
      for (const auto& r : rep.relations)
        os << rep.suite << ',' << r.tag << ',' << csv_field(r.name) << ',' << verdict(r) << ',' << to_string(r.expect) << ','
           << std::setprecision(6) << r.residual << ',' << r.tolerance << ',' << r.window << ',' << csv_field(r.note) << '\n';
    return;
  }
  for (const auto& rep : reports) {
    os << "== " << rep.suite << ": " << rep.passed() << "/" << rep.asserted() << " asserted relations pass\n";
    for (const auto& r : rep.relations) {
      os << "  " << verdict(r) << "  [" << r.tag << "] " << r.name << "  residual=" << std::setprecision(3)
         << std::scientific << r.residual << std::defaultfloat;
      if (!r.note.empty()) os << "  (" << r.note << ")";
      os << '\n';
    }
  }
}

/// The one-shot report: every suite, keyed by relation tag. A tag passes when
/// all of its asserted relations do.
inline nlohmann::json build_report(const RunConfig& cfg, const std::vector<Report>& reports) {
  std::map<std::string, nlohmann::json> tags;
  bool ok = true;
  for (const auto& rep : reports) {
    ok = ok && rep.ok();
    for (const auto& r : rep.relations) {
      auto& t = tags[r.tag];
      if (t.is_null()) t = {{"pass", true}, {"max_residual", 0.0}, {"asserted", 0}, {"failed", nlohmann::json::array()}};
      if (!r.counts()) continue;
      t["asserted"] = t["asserted"].get<int>() + 1;
      if (r.expect == Expectation::holds) t["max_residual"] = std::max(t["max_residual"].get<double>(), r.residual);
      if (!r.pass()) {
        t["pass"] = false;
        t["failed"].push_back(r.name);
      }
    }
  }
  nlohmann::json suites = nlohmann::json::array();
  for (const auto& r : reports) suites.push_back(to_json(r));
  nlohmann::json figures = nlohmann::json::object();
  figures["figure1"] = partners_json(solve_partners(figure1_q()));
  figures["figure2"] = partners_json(solve_partners(figure2_q()));
  figures["q_equals_1"] = partners_json(solve_partners(QParam::make(1.0)));
  return {{"config", {{"dim", cfg.dim}, {"tolerance", cfg.tolerance}, {"seed", cfg.seed}, {"q_grid_size", cfg.q_grid.size()}}},
          {"ok", ok},
          {"tags", tags},
          {"figures", figures},
          {"suites", suites}};
}

// ---------------------------------------------------------------------------
// Matrix dumps

inline FockOperator named_operator(const std::string& which, const QParam& q, const FockSpace& s) {
  if (which == "a") return annihilator(q, s);
  if (which == "anat") return creator_natural(q, s);
  if (which == "adag") return adjoint_dag(q, s);
  if (which == "N") return number_operator(s).to_operator();
  if (which == "basicN") return basic_number(q, s).to_operator();
  throw unknown_name("operator", which);
}

inline Ordering parse_ordering(const std::string& s) {
  if (s == "standard") return Ordering::standard;
  if (s == "evenodd") return Ordering::even_odd;
  throw unknown_name("ordering", s);
}

/// {dim, ordering, q:{re,im}, entries:[[re,im], ...]} with entries row-major.
inline nlohmann::json matrix_json(const Matrix& m, Ordering ord, const QParam& q) {
  nlohmann::json entries = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) entries.push_back({m(i, j).real(), m(i, j).imag()});
  return {{"dim", m.rows()},
          {"ordering", to_string(ord)},
          {"q", {{"re", q.value().real()}, {"im", q.value().imag()}}},
          {"entries", std::move(entries)}};
}

inline Matrix dump_matrix(const std::string& which, const QParam& q, const FockSpace& s, Ordering ord) {
  const FockOperator op = named_operator(which, q, s);
  return ord == Ordering::even_odd ? reorder_even_odd(op).op.matrix : op.matrix;
}

inline std::string to_string(const NormalForm& nf) {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& t : nf.terms) {
    if (!first) os << " + ";
    first = false;
    os << '(';
    bool any = false;
    for (std::size_t i = 0; i < t.coeff.c.size(); ++i) {
      if (t.coeff.c[i] == 0) continue;
      if (any) os << " + ";
      any = true;
      os << t.coeff.c[i];
      if (i == 1) os << "*q";
      if (i > 1) os << "*q^" << i;
    }
    if (!any) os << '0';
    os << ')';
    if (t.k) os << " anat^" << t.k;
    if (t.l) os << " a^" << t.l;
  }
  if (first) os << '0';
  if (nf.scale != cplx{1.0, 0.0}) os << "  [scale " << nf.scale.real() << ',' << nf.scale.imag() << ']';
  return os.str();
}

}  // namespace qgrade
