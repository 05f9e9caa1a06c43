#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bornforge/errors.hpp"
#include "bornforge/format.hpp"
#include "bornforge/harness.hpp"
#include "bornforge/noise.hpp"
#include "bornforge/quotient.hpp"
#include "bornforge/report.hpp"
#include "bornforge/theory.hpp"
#include "bornforge/theoryfile.hpp"

using namespace bornforge;

namespace {

struct Options {
  std::string builtin = "fhilb";
  std::string theory_path;
  double k = 2.0;
  std::uint64_t seed = 42;
  int samples = 200;
  double tol = ATOL;
  std::string out;
  std::string format = "json";
  std::string mode = "prob";
  std::string matrix_text;
  std::vector<std::string> matrices;
  std::vector<std::string> files;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw std::runtime_error("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TheorySpec resolve_theory(const Options& o) {
  if (!o.theory_path.empty())
    return to_theory_spec(parse_theory(read_file(o.theory_path)));
  if (o.builtin == "fhilb") return builtin_fhilb(o.k);
  if (o.builtin == "textbook") return builtin_textbook_qm();
  if (o.builtin == "cp") return builtin_cp();
  return builtin_stoch();
}

void emit(const Options& o, const std::string& content) {
  if (o.out.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f.good()) throw std::runtime_error("cannot write file '" + o.out + "'");
  f << content;
}

int cmd_check_axioms(const Options& o) {
  const TheorySpec t = resolve_theory(o);
  RandomSource rng(o.seed);
  bool all_pass = true;
  std::vector<AxiomReport> reports;
  for (const Axiom which : {Axiom::I, Axiom::II, Axiom::III}) {
    reports.push_back(check_axiom(t, which, o.samples, rng, o.tol));
    all_pass = all_pass && reports.back().pass;
  }
  if (o.format == "json") {
    nlohmann::ordered_json j;
    j["tool"] = "bornforge";
    j["tool_version"] = BORNFORGE_VERSION;
    j["seed"] = o.seed;
    j["theory"] = t.name;
    j["samples"] = o.samples;
    j["axioms"] = nlohmann::ordered_json::array();
    for (const AxiomReport& r : reports) {
      j["axioms"].push_back({{"axiom", r.axiom},
                             {"pass", r.pass},
                             {"samples", r.samples},
                             {"worst_deviation", r.worst_deviation},
                             {"detail", r.detail}});
    }
    emit(o, j.dump(2) + "\n");
  } else {
    std::ostringstream out;
    out << "theory " << t.name << "\n";
    for (const AxiomReport& r : reports) {
      out << "axiom " << r.axiom << ": " << (r.pass ? "pass" : "fail")
          << "  worst deviation " << fmt_double(r.worst_deviation)
          << "  samples " << r.samples;
      if (!r.detail.empty()) out << "  " << r.detail;
      out << "\n";
    }
    emit(o, out.str());
  }
  return all_pass ? 0 : 1;
}

int cmd_quotient(const Options& o) {
  const TheorySpec t = resolve_theory(o);
  std::vector<CanonicalClass> classes;
  for (const std::string& text : o.matrices)
    classes.push_back(canonicalize(t, parse_matrix_json(text)));
  std::ostringstream out;
  bool all_same = true;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    out << "class " << i << " (" << classes[i].canon.rows() << "x"
        << classes[i].canon.cols() << "): " << matrix_json(classes[i].canon).dump()
        << "\n";
    if (i > 0) {
      const bool same = same_class(classes[0], classes[i], o.tol);
      all_same = all_same && same;
      out << "  same class as 0: " << (same ? "yes" : "no") << "\n";
    }
  }
  emit(o, out.str());
  return all_same ? 0 : 1;
}

int cmd_dilate(const Options& o) {
  const TheorySpec t = resolve_theory(o);
  const Morphism f = parse_matrix_json(o.matrix_text);
  const GTriple d = stinespring_dilate(t, f);
  const Morphism back = g_collapse(d);
  const double err = (back.mat - f.mat).cwiseAbs().maxCoeff();
  const double bound = std::max(o.tol, 1e-7);
  const bool pass = err <= bound;
  if (o.format == "json") {
    nlohmann::ordered_json j;
    j["unitary"] = matrix_json(d.U.mat);
    j["ancilla_state"] = matrix_json(d.rho.mat);
    j["ancilla_effect"] = matrix_json(d.sigma.mat);
    j["round_trip_error"] = err;
    j["pass"] = pass;
    emit(o, j.dump(2) + "\n");
  } else {
    std::ostringstream out;
    out << "unitary (" << d.U.mat.rows() << "x" << d.U.mat.cols()
        << "): " << matrix_json(d.U.mat).dump() << "\n";
    out << "ancilla state (" << d.rho.mat.rows() << "x" << d.rho.mat.cols()
        << "): " << matrix_json(d.rho.mat).dump() << "\n";
    out << "ancilla effect (" << d.sigma.mat.rows() << "x" << d.sigma.mat.cols()
        << "): " << matrix_json(d.sigma.mat).dump() << "\n";
    out << "round-trip error = " << fmt_double(err) << " (bound "
        << fmt_double(bound) << ")\n";
    out << (pass ? "PASS" : "FAIL") << "\n";
    emit(o, out.str());
  }
  return pass ? 0 : 1;
}

int cmd_noise(const Options& o) {
  const TheorySpec base = resolve_theory(o);
  const WeightedSet a = parse_weighted_set(read_file(o.files.at(0)));
  const WeightedSet b = parse_weighted_set(read_file(o.files.at(1)));
  std::ostringstream out;
  int rc = 0;
  if (o.mode == "prob") {
    out << "P_S = " << fmt_double(prob_S(a, b, base)) << "\n";
  } else {
    RandomSource rng(o.seed);
    ProbeEvidence ev;
    try {
      ev = equiv_noisy(a, b, base, EquivMode::Canonical, o.samples, rng,
                       std::max(o.tol, PROBE_TOL));
    } catch (const UnsupportedTheory&) {
      ev = equiv_noisy(a, b, base, EquivMode::Probe, o.samples, rng,
                       std::max(o.tol, PROBE_TOL));
    }
    out << (ev.equivalent ? "EQUIVALENT" : "NOT EQUIVALENT")
        << ", max deviation = " << fmt_double(ev.max_deviation) << "\n";
    if (!ev.counterexample.empty()) out << ev.counterexample << "\n";
    rc = ev.equivalent ? 0 : 1;
  }
  emit(o, out.str());
  return rc;
}

int cmd_verify(const Options& o) {
  const TheorySpec t = resolve_theory(o);
  SuiteConfig cfg;
  cfg.seed = o.seed;
  cfg.n_samples = o.samples;
  cfg.tol = o.tol;
  ReportInputs in;
  in.theory_name = t.name;
  in.config = cfg;
  in.claims = run_suite(t, cfg);
  in.mutants = mutation_tests(cfg);
  in.rigidity = rigidity_check(50, cfg.seed);
  if (o.format == "json") {
    emit(o, report_json(in).dump(2) + "\n");
  } else {
    emit(o, report_text(in));
  }
  return report_pass(in) ? 0 : 1;
}

int cmd_compare_kraus(const Options& o) {
  const TheorySpec base = resolve_theory(o);
  const WeightedSet a = parse_weighted_set(read_file(o.files.at(0)));
  const WeightedSet b = parse_weighted_set(read_file(o.files.at(1)));
  const NoisyClass ca = noisy_canonical(a, base);
  const NoisyClass cb = noisy_canonical(b, base);
  if (ca.canon.rows() != cb.canon.rows() || ca.canon.cols() != cb.canon.cols()) {
    throw ObjectMismatch("weighted sets live on different objects: " +
                         o.files.at(0) + " vs " + o.files.at(1));
  }
  const double delta = (ca.canon - cb.canon).norm();
  const bool eq = delta <= std::max(o.tol, ATOL);
  std::ostringstream out;
  out << (eq ? "EQUIVALENT" : "NOT EQUIVALENT")
      << ", ||dChoi||_F = " << fmt_double(delta) << "\n";
  emit(o, out.str());
  return eq ? 0 : 1;
}

void add_theory_options(CLI::App* sub, Options& o) {
  sub->add_option("--builtin", o.builtin, "built-in theory")
      ->check(CLI::IsMember({"fhilb", "textbook", "cp", "stoch"}));
  sub->add_option("--k", o.k, "born-rule exponent for fhilb")
      ->check(CLI::PositiveNumber);
  sub->add_option("--theory", o.theory_path, "theory file path");
}

void add_run_options(CLI::App* sub, Options& o) {
  sub->add_option("--seed", o.seed, "rng seed")->envname("BORNFORGE_SEED");
  sub->add_option("--samples", o.samples, "samples per check")
      ->check(CLI::PositiveNumber);
  sub->add_option("--tol", o.tol, "algebraic tolerance")
      ->check(CLI::PositiveNumber);
  sub->add_option("--out", o.out, "write output to a file");
  sub->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"json", "text"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "bornforge: verification kernel for matrix-interpreted process theories"};
  app.require_subcommand(1);
  Options o;
  int rc = 0;

  CLI::App* check = app.add_subcommand(
      "check-axioms", "randomized checks of the three defining axioms");
  add_theory_options(check, o);
  add_run_options(check, o);
  check->callback([&] { rc = cmd_check_axioms(o); });

  CLI::App* quot = app.add_subcommand(
      "quotient", "canonicalize morphisms and compare their classes");
  add_theory_options(quot, o);
  add_run_options(quot, o);
  // One literal per flag; bracketed values must not be comma-split.
  quot->add_option("--matrix", o.matrices, "json matrix literal (repeatable)")
      ->required()
      ->allow_extra_args(false);
  quot->callback([&] { rc = cmd_quotient(o); });

  CLI::App* dil = app.add_subcommand(
      "dilate", "reversible dilation of a contraction with hidden ancillas");
  add_theory_options(dil, o);
  add_run_options(dil, o);
  dil->add_option("--matrix", o.matrix_text, "json matrix literal")->required();
  dil->callback([&] { rc = cmd_dilate(o); });

  CLI::App* noi = app.add_subcommand(
      "noise", "evaluate weighted-set probability or equivalence");
  add_theory_options(noi, o);
  add_run_options(noi, o);
  noi->add_option("files", o.files, "two weighted-set files")
      ->expected(2)
      ->required();
  noi->add_option("--mode", o.mode, "prob or equiv")
      ->check(CLI::IsMember({"prob", "equiv"}));
  noi->callback([&] { rc = cmd_noise(o); });

  CLI::App* ver = app.add_subcommand(
      "verify", "run the full claim suite with planted-fault self-checks");
  add_theory_options(ver, o);
  add_run_options(ver, o);
  ver->callback([&] { rc = cmd_verify(o); });

  CLI::App* cmp = app.add_subcommand(
      "compare-kraus", "decide whether two weighted Kraus sets give one class");
  add_theory_options(cmp, o);
  add_run_options(cmp, o);
  cmp->add_option("files", o.files, "two weighted-set files")
      ->expected(2)
      ->required();
  cmp->callback([&] { rc = cmd_compare_kraus(o); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const UndetectedMutant& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
