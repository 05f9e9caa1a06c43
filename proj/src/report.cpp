#include "bornforge/report.hpp"

#include <sstream>

namespace bornforge {

namespace {

struct Tally {
  int pass = 0;
  int fail = 0;
  int skipped = 0;
};

Tally tally_claims(const std::vector<ClaimCheck>& claims) {
  Tally t;
  for (const ClaimCheck& c : claims) {
    switch (c.verdict) {
      case Verdict::Pass: ++t.pass; break;
      case Verdict::Fail: ++t.fail; break;
      case Verdict::Skipped: ++t.skipped; break;
    }
  }
  return t;
}

}  // namespace

nlohmann::ordered_json report_json(const ReportInputs& in) {
  nlohmann::ordered_json j;
  j["tool"] = "bornforge";
  j["tool_version"] = BORNFORGE_VERSION;
  j["seed"] = in.config.seed;
  j["theory"] = in.theory_name;
  j["samples"] = in.config.n_samples;
  j["tolerance"] = {{"algebraic", in.config.tol}, {"probe", in.config.probe_tol}};
  j["sampling"] = "splitmix64 child streams per claim";

  j["claims"] = nlohmann::ordered_json::array();
  for (const ClaimCheck& c : in.claims) {
    nlohmann::ordered_json e;
    e["id"] = c.claim_id;
    e["statement"] = c.statement;
    e["verdict"] = to_string(c.verdict);
    e["max_deviation"] = c.max_deviation;
    e["samples"] = c.samples;
    e["witness"] = c.witness;
    j["claims"].push_back(std::move(e));
  }

  if (!in.mutants.empty()) {
    j["mutants"] = nlohmann::ordered_json::array();
    for (const MutantOutcome& m : in.mutants) {
      nlohmann::ordered_json e;
      e["mutant"] = m.mutant;
      e["expectation"] = m.expectation;
      e["detected_by"] = m.detected_by;
      e["detected"] = m.detected;
      j["mutants"].push_back(std::move(e));
    }
  }

  if (in.rigidity) {
    nlohmann::ordered_json r;
    r["points"] = in.rigidity->points.size();
    r["naturals_pass"] = in.rigidity->naturals_pass;
    r["order_pass"] = in.rigidity->order_pass;
    r["worst_deviation"] = in.rigidity->worst_deviation;
    r["pass"] = in.rigidity->pass;
    j["rigidity"] = std::move(r);
  }

  const Tally t = tally_claims(in.claims);
  j["summary"] = {{"pass", t.pass},
                  {"fail", t.fail},
                  {"skipped", t.skipped},
                  {"total", static_cast<int>(in.claims.size())}};
  return j;
}

std::string report_text(const ReportInputs& in) {
  std::ostringstream out;
  out << "theory " << in.theory_name << "  seed " << in.config.seed
      << "  samples " << in.config.n_samples << "\n";
  for (const ClaimCheck& c : in.claims) {
    out << "  " << to_string(c.verdict) << "  " << c.claim_id
        << "  (max deviation " << c.max_deviation << ", samples " << c.samples
        << ")";
    if (!c.witness.empty()) out << "  " << c.witness;
    out << "\n";
  }
  for (const MutantOutcome& m : in.mutants) {
    out << "  " << (m.detected ? "detected" : "MISSED") << "  mutant "
        << m.mutant << "  via " << m.detected_by << "\n";
  }
  if (in.rigidity) {
    out << "  rigidity: " << (in.rigidity->pass ? "pass" : "fail") << " over "
        << in.rigidity->points.size() << " points, worst deviation "
        << in.rigidity->worst_deviation << "\n";
  }
  const Tally t = tally_claims(in.claims);
  out << "summary: " << t.pass << " pass, " << t.fail << " fail, " << t.skipped
      << " skipped of " << in.claims.size() << "\n";
  return out.str();
}

bool report_pass(const ReportInputs& in) {
  for (const ClaimCheck& c : in.claims)
    if (c.verdict == Verdict::Fail) return false;
  for (const MutantOutcome& m : in.mutants)
    if (!m.detected) return false;
  return true;
}

nlohmann::ordered_json matrix_json(const Matrix& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back({m(r, c).real(), m(r, c).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace bornforge
