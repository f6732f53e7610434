// Command-line front end: verification suites, matrix dumps, bracket and
// normal-order evaluation, partner enumeration and the combined report.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qgrade/qgrade.hpp"

namespace {

using namespace qgrade;

/// Writes to `path`, or to stdout when it is empty.
template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream f(path);
  if (!f) throw io_failure("cannot open " + path);
  fn(f);
  if (!f) throw io_failure("write failed: " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"q-deformed Heisenberg algebras, graded brackets and deformed supersymmetry"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::string format = "text";
  bool serial = false;
  app.add_option("--dim", cfg.dim, "Fock space truncation D")->check(CLI::Range(4, 4096));
  app.add_option("--tol", cfg.tolerance, "Residual tolerance")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--seed", cfg.seed, "Seed for randomized word checks");
  app.add_flag("--serial", serial, "Run suites on one thread");

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  std::string suite = "all";
  verify->add_option("--suite", suite, "defining, fermionic, limits, susy-1m1, mapping, appendix, qqbar, partners, all");

  auto* matrix = app.add_subcommand("matrix", "Dump an operator matrix as JSON");
  std::string q_text = "1";
  std::string which = "a";
  std::string ordering = "standard";
  std::string out_path;
  matrix->add_option("--q", q_text, "re,im | r@phi | r@tpi");
  matrix->add_option("--which", which, "a, anat, adag, N, basicN");
  matrix->add_option("--ordering", ordering, "standard or evenodd");
  matrix->add_option("--out", out_path, "Output file (default stdout)");

  auto* bracket_cmd = app.add_subcommand("bracket", "Evaluate [A,B]_G for two words");
  std::string lhs_text;
  std::string rhs_text;
  bool print_matrix = false;
  bracket_cmd->add_option("lhs", lhs_text, "Word A")->required();
  bracket_cmd->add_option("rhs", rhs_text, "Word B")->required();
  bracket_cmd->add_flag("--matrix", print_matrix, "Include the bracket matrix");

  auto* normal = app.add_subcommand("normal", "Normal-order a single-parameter word");
  std::string word_text;
  normal->add_option("word", word_text, "Word")->required();

  auto* partners = app.add_subcommand("partners", "Enumerate partner parameters qbar_p");
  std::optional<double> extended;
  partners->add_option("--q", q_text, "re,im | r@phi | r@tpi");
  partners->add_option("--extended-phases", extended, "Experimental: enumerate phases k up to this bound")
      ->check(CLI::PositiveNumber);
  partners->add_option("--out", out_path, "Output file (default stdout)");

  auto* report = app.add_subcommand("report", "Run every suite and emit one structured report");
  std::vector<std::string> inject_q;
  std::vector<std::string> inject_qbar;
  report->add_option("--q", inject_q, "q of an injected (q, qbar) pair; repeatable");
  report->add_option("--qbar", inject_qbar, "qbar of an injected pair; repeatable");
  report->add_option("--out", out_path, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.output_format = parse_format(format);
    cfg.parallel = !serial;
    cfg.validate();
    const FockSpace space = cfg.space();

    if (*verify) {
      const auto reports = run_suites(cfg, suite);
      render(std::cout, reports, cfg.output_format);
      bool ok = true;
      for (const auto& r : reports) ok = ok && r.ok();
      return ok ? 0 : 1;
    }

    if (*matrix) {
      const QParam q = parse_qparam(q_text);
      const Ordering ord = parse_ordering(ordering);
      const Matrix m = dump_matrix(which, q, space, ord);
      with_output(out_path, [&](std::ostream& os) { os << matrix_json(m, ord, q).dump() << '\n'; });
      return 0;
    }

    if (*bracket_cmd) {
      const FockOperator a = evaluate(parse_word(lhs_text), space);
      const FockOperator b = evaluate(parse_word(rhs_text), space);
      const BracketResult r = bracket_full(a, b);
      nlohmann::json j{{"G", {{"re", r.G.real()}, {"im", r.G.imag()}}},
                       {"degree", r.value.tag.degree},
                       {"radius", r.value.tag.radius()},
                       {"safe", r.value.safe},
                       {"max_abs", max_abs(r.value.matrix, r.value.safe)},
                       {"scale", r.scale}};
      if (print_matrix) j["matrix"] = matrix_json(r.value.matrix, Ordering::standard, QParam::make(1.0))["entries"];
      if (cfg.output_format == OutputFormat::json)
        std::cout << j.dump(2) << '\n';
      else
        std::cout << "G = " << r.G << "\nmax |[A,B]_G| on safe window (" << r.value.safe
                  << " columns) = " << j["max_abs"].get<double>() << '\n';
      return 0;
    }

    if (*normal) {
      const Word w = parse_word(word_text);
      const NormalForm nf = normal_order(w);
      const double residual = scaled_residual(evaluate(w, space), evaluate(nf, space));
      if (cfg.output_format == OutputFormat::json) {
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& t : nf.terms) terms.push_back({{"k", t.k}, {"l", t.l}, {"coeff", t.coeff.c}});
        std::cout << nlohmann::json{{"word", to_string(w)},
                                    {"q", {{"re", nf.q.value().real()}, {"im", nf.q.value().imag()}}},
                                    {"scale", {{"re", nf.scale.real()}, {"im", nf.scale.imag()}}},
                                    {"terms", terms},
                                    {"oracle_residual", residual}}
                         .dump(2)
                  << '\n';
      } else {
        std::cout << to_string(nf) << "\noracle residual " << residual << '\n';
      }
      return residual <= cfg.tolerance ? 0 : 1;
    }

    if (*partners) {
      const QParam q = parse_qparam(q_text);
      PartnerOptions opt;
      if (extended) opt.max_phase = *extended;
      const PartnerSet set = solve_partners(q, opt);
      const FigureFormat fmt = cfg.output_format == OutputFormat::json ? FigureFormat::json : FigureFormat::csv;
      with_output(out_path, [&](std::ostream& os) { write_partners(os, set, fmt); });
      return 0;
    }

    if (*report) {
      if (inject_q.size() != inject_qbar.size()) throw error("--q and --qbar must be given the same number of times");
      for (std::size_t i = 0; i < inject_q.size(); ++i)
        cfg.injected_pairs.emplace_back(parse_qparam(inject_q[i]), parse_qparam(inject_qbar[i]));
      const auto reports = run_suites(cfg, "all");
      const nlohmann::json j = build_report(cfg, reports);
      with_output(out_path, [&](std::ostream& os) {
        if (cfg.output_format == OutputFormat::json)
          os << j.dump(2) << '\n';
        else
          render(os, reports, cfg.output_format);
      });
      return j["ok"].get<bool>() ? 0 : 1;
    }
  } catch (const qgrade::error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
