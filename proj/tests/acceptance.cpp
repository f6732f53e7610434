// Acceptance checks: one PASS/FAIL line per criterion, with the measured
// quantities. Tolerances are fixed here. Exit status is the number of failing
// criteria (0 when all pass).

#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qgrade/cli_reports.hpp"

using namespace qgrade;

namespace {

constexpr double kTol = 1e-12;
constexpr std::size_t kDim = 64;

int failures = 0;

void line(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s | %s\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  if (!ok) ++failures;
}

void note(const std::string& s) { std::printf("         %s\n", s.c_str()); }

std::string fmt(const char* f, double x) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double residual_of(const Report& r, const std::string& name) {
  const Relation* rel = r.find(name);
  return rel ? rel->residual : 1e300;
}

bool passes(const Report& r, const std::string& name) {
  const Relation* rel = r.find(name);
  return rel && rel->pass();
}

const FockSpace space{kDim, Ordering::standard};

void c1_defining() {
  double worst = 0.0;
  std::size_t n = 0;
  for (const QParam& q : default_q_grid()) {
    const FockOperator a = annihilator(q, space);
    const FockOperator an = creator_natural(q, space);
    const Matrix lhs = a.matrix * an.matrix - q.value() * (an.matrix * a.matrix);
    worst = std::max(worst, oracle::diff(lhs, Matrix::Identity(kDim, kDim), static_cast<int>(kDim - 1)));
    ++n;
  }
  line(1, n == 40 && worst < kTol, "defining relation over 40 q in the punctured disc",
       fmt("max residual %.3e on the first D-1 columns", worst));
}

void c2_fermionic() {
  const QParam f = QParam::make(-1.0);
  const Matrix a = annihilator(f, space).matrix;
  const Matrix ad = adjoint_dag(f, space).matrix;
  const double anti = oracle::diff(a * ad + ad * a, Matrix::Identity(kDim, kDim), static_cast<int>(kDim - 1));
  const double sq = (a * a).cwiseAbs().maxCoeff();
  const double sqd = (ad * ad).cwiseAbs().maxCoeff();
  line(2, anti < kTol && sq == 0.0 && sqd == 0.0, "fermionic limit",
       fmt("anticommutator residual %.3e", anti) + fmt(", max|a^2| %.1e", sq) + fmt(", max|(a^dag)^2| %.1e", sqd));
}

void c3_q0() {
  const LimitReport r = limit_check_q0(space);
  line(3, r.right_inverse_residual < kTol && r.left_inverse_residual == 0.0, "q -> 0 mutual inverses",
       fmt("a_0 a_0^nat - I: %.1e", r.right_inverse_residual) + fmt(", a_0^nat a_0 - (I - |0><0|): %.1e", r.left_inverse_residual));
}

void c4_grading() {
  const QParam b = QParam::make(1.0);
  const QParam f = QParam::make(-1.0);
  bool ok = g_factor(b, b) == cplx(1.0, 0.0) && g_factor(f, f) == cplx(-1.0, 0.0) && g_factor(b, f) == cplx(1.0, 0.0);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  int exact = 0;
  for (int i = 0; i < 10; ++i) {
    double x = u(rng);
    if (std::abs(x) < 1e-2) x = 0.75;
    const QParam q = QParam::make(x);
    exact += g_factor(q, q) == q.value() ? 1 : 0;
  }
  ok = ok && exact == 10;
  line(4, ok, "grading limits g(1,1), g(-1,-1), g(1,-1), g(q,q)", "g(q,q) == q exactly for " + std::to_string(exact) + "/10 real q");
}

void c5_susy() {
  const SusyModel m = build_model_1m1(space);
  const Report r = verify_susy_1m1(m, kTol);
  const char* names[] = {"[Q,h_ss]_G = 0", "[Q^dag,h_ss]_G = 0", "[Q,Q^dag]_G = h_ss", "[q2,h_ss]_G = 0", "h_ss = q2^2"};
  bool ok = true;
  std::string detail;
  for (const char* n : names) {
    ok = ok && passes(r, n);
    detail += std::string(n) + fmt(": %.2e; ", residual_of(r, n));
  }
  const FockOperator Q = m.supercharge();
  const double q2 = max_abs((Q * Q).matrix, kDim);
  ok = ok && q2 > 0.1;
  line(5, ok, "(1,-1) supersymmetry algebra", detail + fmt("max|Q^2| %.3f", q2));
  if (!passes(r, "[Q,Q^dag]_G = h_ss")) {
    note(fmt("[Q,Q^dag]_G - h_ss_tilde: %.2e  (the anticommutator is [N+1]_{-1}(N+1))",
             residual_of(r, "[Q,Q^dag]_G = h_ss_tilde")));
    note("no choice of Q among the listed charges has both [Q,h_ss]_G = 0 and [Q,Q^dag]_G = h_ss");
  }
}

void c6_mapping() {
  const Report r = verify_mapping_1m1(build_model_1m1(space), kTol);
  const char* names[] = {"[q1,a_{-1}^dag]_G = [N]_{-1} a_1", "[q1^dag,a_{-1}^dag]_G = [N-1]_{-1} a_1^dag",
                         "[q2,a_{-1}]_G = [N+1]_{-1} a_1", "[q2,a_{-1}^dag]_G = [N]_{-1} a_1^dag"};
  bool ok = true;
  std::string detail;
  int i = 1;
  for (const char* n : names) {
    ok = ok && passes(r, n);
    detail += "eq" + std::to_string(i++) + fmt(" %.2e; ", residual_of(r, n));
  }
  line(6, ok, "mapping relations eq1-eq4 (coefficient after ladder)", detail);
  if (!passes(r, names[1]))
    note(fmt("eq2 with operand a_{-1} instead of a_{-1}^dag: residual %.2e (the stated left side raises three levels)",
             residual_of(r, "[q1^dag,a_{-1}]_G = [N-1]_{-1} a_1^dag")));
}

void c7_appendix() {
  const Report r = verify_appendix_suite(build_model_1m1(space), kTol);
  // The first twelve asserted relations are the three tables; the worked
  // bracket is tagged cal2.
  int table = 0;
  int table_pass = 0;
  bool cal = false;
  std::vector<std::string> failed;
  for (const auto& rel : r.relations) {
    if (!rel.counts()) continue;
    if (rel.tag == "cal2") {
      cal = rel.pass();
      continue;
    }
    if (table < 12) {
      ++table;
      if (rel.pass())
        ++table_pass;
      else
        failed.push_back(rel.name);
    }
  }
  line(7, table == 12 && table_pass == 12 && cal, "appendix commutation tables and worked bracket",
       std::to_string(table_pass) + "/12 table relations hold; worked bracket " + (cal ? "vanishes" : "nonzero"));
  for (const auto& f : failed) note("fails: " + f);
  if (!failed.empty())
    note(fmt("right side with a_1 in place of a_{-1}: residual %.2e", residual_of(r, "[q1,a_{-1}^dag]_G = [N]_{-1} a_1")));
}

void c8_figures() {
  const PartnerSet f1 = solve_partners(QParam::from_polar_pi(1.0, 0.25));
  std::vector<double> k1;
  for (const auto& s : f1.solutions)
    if (!s.trivial) k1.push_back(s.k_value);
  const double e1 = k1.size() == 2 ? std::max(std::abs(k1[0] - oracle::pi * std::pow(std::sqrt(2.0) - 0.5, 2)),
                                              std::abs(k1[1] - oracle::pi * std::pow(std::sqrt(3.0) - 0.5, 2)))
                                   : 1.0;
  const PartnerSet f2 = solve_partners(QParam::from_polar_pi(0.5, 1.8));
  double e2 = f2.count() == 7 ? 0.0 : 1.0;
  for (std::size_t i = 0; i < f2.count() && i < 7; ++i) {
    const double want = oracle::pi * std::pow(std::sqrt(static_cast<double>(i + 1)) - std::sqrt(1.8), 2);
    e2 = std::max({e2, std::abs(f2.solutions[i].k_value - want), std::abs(f2.solutions[i].qbar.modulus() - 2.0)});
  }
  const PartnerSet u = solve_partners(QParam::make(1.0));
  bool unit = u.nontrivial_count() == 1;
  for (const auto& s : u.solutions)
    if (!s.trivial) unit = unit && s.qbar.value() == cplx(-1.0, 0.0);
  line(8, e1 < kTol && e2 < kTol && unit, "partner solver reproduces the figure point sets",
       fmt("fig1 max phase error %.1e", e1) + fmt(", fig2 max error %.1e", e2) + (unit ? ", q=1 -> e^{i pi}" : ", q=1 wrong"));
}

void c9_counts() {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 2.0 * oracle::pi);
  std::size_t lo = 100;
  std::size_t hi = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t c = solve_partners(QParam::from_polar(1.0, u(rng))).count();
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  const std::size_t c0 = solve_partners(QParam::make(1.0)).count();
  lo = std::min(lo, c0);
  line(9, lo >= 2 && hi <= 7, "partner count bounds over 10^4 phases",
       "observed range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

void c10_closure() {
  std::vector<QParam> inputs{QParam::make(1.0), QParam::from_polar_pi(1.0, 0.25), QParam::from_polar_pi(0.5, 1.8)};
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> r(0.5, 1.0);
  std::uniform_real_distribution<double> t(0.0, 2.0);
  for (int i = 0; i < 20; ++i) inputs.push_back(QParam::from_polar_pi(r(rng), t(rng)));
  double worst = 0.0;
  std::size_t pairs = 0;
  std::size_t closed = 0;
  std::vector<std::string> open;
  for (const QParam& q : inputs)
    for (const auto& s : solve_partners(q).solutions) {
      const H2Check c = commutator_h2(build_model_qqbar(q, s.qbar, space));
      ++pairs;
      if (c.relative_norm < kTol)
        ++closed;
      else if (open.size() < 4)
        open.push_back(pair_label(q, s.qbar) + " p=" + std::to_string(s.p) + fmt(": %.3e", c.relative_norm) +
                       fmt(", (sqrt(phi_q/pi)+sqrt(k/pi))^2 = %.4f", c.degree * c.degree));
      worst = std::max(worst, c.relative_norm);
    }
  double closed_form = 0.0;
  double smallest = 1e300;
  for (int i = 0; i < 10; ++i) {
    const QParam q = QParam::from_polar_pi(r(rng), t(rng));
    const QParam qb = QParam::from_polar_pi(r(rng) + 0.7, t(rng));
    if (is_partner_pair(q, qb)) continue;
    const H2Check c = commutator_h2(build_model_qqbar(q, qb, space));
    closed_form = std::max(closed_form, c.closed_form_residual);
    smallest = std::min(smallest, c.relative_norm);
  }
  const bool ok = closed == pairs && closed_form < kTol && smallest > kTol;
  line(10, ok, "[q2,h2]_G closure for solver pairs; closed form for non-solutions",
       std::to_string(closed) + "/" + std::to_string(pairs) + " solver pairs close" +
           fmt(" (worst relative %.2e)", worst) + fmt("; non-solution closed-form residual %.2e", closed_form) +
           fmt(", smallest relative norm %.2e", smallest));
  for (const auto& o : open) note("open: " + o);
  if (closed != pairs)
    note("pairs with pi p < phi_q take k = pi(sqrt(p) - sqrt(phi_q/pi))^2 from a negative root, so the degree sum differs from sqrt(p)");
}

void c11_normal_order() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> r(0.1, 1.0);
  std::uniform_real_distribution<double> t(0.0, 2.0);
  std::uniform_int_distribution<int> len(1, 6);
  std::uniform_int_distribution<int> coin(0, 1);
  double worst = 0.0;
  double worst_abs = 0.0;
  int evaluations = 0;
  for (int i = 0; i < 200; ++i) {
    std::vector<bool> pattern;
    for (int j = len(rng); j > 0; --j) pattern.push_back(coin(rng) == 1);
    for (int k = 0; k < 5; ++k) {
      const QParam q = QParam::from_polar_pi(r(rng), t(rng));
      Word w;
      for (bool nat : pattern) w = w * (nat ? gen_nat(q) : gen_a(q));
      const FockOperator direct = evaluate(w, space);
      const FockOperator normal = evaluate(normal_order(w), space);
      // Relative to the largest entry of the evaluated word, as for every
      // other matrix identity here.
      const int win = static_cast<int>(std::min(direct.safe, normal.safe));
      const double abs_res = oracle::diff(direct.matrix, normal.matrix, win);
      const double scale = win > 0 ? std::max(1.0, direct.matrix.leftCols(win).cwiseAbs().maxCoeff()) : 1.0;
      worst = std::max(worst, abs_res / scale);
      worst_abs = std::max(worst_abs, abs_res);
      ++evaluations;
    }
  }
  line(11, worst < kTol, "normal ordering equals direct evaluation",
       std::to_string(evaluations) + " word evaluations" + fmt(", max relative residual %.2e", worst) +
           fmt(" (absolute %.2e)", worst_abs));
}

void c12_blocks() {
  const Report r = suite_blocks(space);
  bool ok = r.ok();
  std::string detail;
  for (const auto& rel : r.relations) detail += fmt("%.1e ", rel.residual);
  line(12, ok, "even/odd block patterns of a_1 and a_{-1}", "entry residuals " + detail);
}

void c13_rebuilt() {
  const SusyModel m = build_model_1m1(space);
  const Matrix sum = m.hamiltonians.h_ss.matrix + m.hamiltonians.h_ss_tilde.matrix;
  std::vector<oracle::cplx> v;
  for (long n = 0; n < static_cast<long>(kDim); ++n) v.emplace_back(n + oracle::basic_number_sign(n + 1, -1), 0.0);
  const Matrix want = oracle::diag(v);
  const int w = static_cast<int>(std::min(m.hamiltonians.h_ss.safe, m.hamiltonians.h_ss_tilde.safe));
  const double res = oracle::diff(sum, want, w);
  const bool diagonal = (sum - Matrix(sum.diagonal().asDiagonal())).leftCols(w).cwiseAbs().maxCoeff() == 0.0;
  line(13, res == 0.0 && diagonal, "h_ss + h_ss_tilde = N + [N+1]_{-1}",
       fmt("residual %.1e", res) + " on " + std::to_string(w) + " columns");
}

}  // namespace

int main() {
  std::printf("acceptance at D = %zu, tolerance %.0e\n", kDim, kTol);
  c1_defining();
  c2_fermionic();
  c3_q0();
  c4_grading();
  c5_susy();
  c6_mapping();
  c7_appendix();
  c8_figures();
  c9_counts();
  c10_closure();
  c11_normal_order();
  c12_blocks();
  c13_rebuilt();
  std::printf("%d of 13 criteria fail\n", failures);
  return failures;
}
