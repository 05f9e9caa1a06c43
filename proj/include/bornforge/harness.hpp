#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bornforge/errors.hpp"
#include "bornforge/theory.hpp"

namespace bornforge {

enum class Verdict { Pass, Fail, Skipped };

std::string to_string(Verdict v);

// One certified claim: an identity of the verification target together with
// the evidence gathered for it. A Fail witness always contains a reproducible
// counterexample (inputs and the claim's derived seed); a Skipped witness
// explains why the claim does not apply to the theory under test.
struct ClaimCheck {
  std::string claim_id;
  std::string statement;
  Verdict verdict = Verdict::Skipped;
  double max_deviation = 0.0;
  int samples = 0;
  std::string witness;
};

struct SuiteConfig {
  std::uint64_t seed = 42;
  int n_samples = 200;
  std::vector<int> probe_dims = {};  // ancilla dims for probes; empty = default
  double tol = ATOL;
  double probe_tol = PROBE_TOL;
};

struct ClaimSpec {
  std::string id;
  std::string statement;
};

// Fixed execution order; ids are unique and every entry carries the checked
// identity as its statement. The suite emits exactly one ClaimCheck per entry.
const std::vector<ClaimSpec>& claim_registry();

// Runs every registered claim against the theory. Deterministic for a given
// (theory, config): each claim draws from an independent child stream split
// from the config seed by its registry index, so claims cannot perturb each
// other. Inapplicable claims come back Skipped with a reason; check failures
// are verdicts, never exceptions.
std::vector<ClaimCheck> run_suite(const TheorySpec& t, const SuiteConfig& cfg);

// Outcome of running the suite against one planted fault.
struct MutantOutcome {
  std::string mutant;
  std::string expectation;
  std::string detected_by;
  bool detected = false;
};

// Planted-fault run: an additive-offset rule (must fail the product axiom),
// a constant-one rule (must fail non-triviality), a phase-sensitive clamped
// rule (must fail the product axiom or the scalar homomorphism), and a
// squared scalar assignment in the summed layer (must fail additivity).
// Throws UndetectedMutant if any fault evades its checks.
std::vector<MutantOutcome> mutation_tests(const SuiteConfig& cfg);

struct RigidityPoint {
  std::string kind;  // "natural", "rational", "real"
  double r = 0.0;
  double value = 0.0;
  double deviation = 0.0;
};

// Scalar-assignment rigidity on the noisy closure of the modulus-squared
// qubit theory: for each sampled r >= 0 a scalar class with assignment value
// r is constructed and lambda_N must return exactly r (within 1e-9). Also
// checks the proof skeleton: n copies of the unit scalar evaluate to n for
// naturals n <= 20, n-fold unions of the m/n class evaluate to m, and the
// assignment preserves order on sampled pairs.
struct RigidityReport {
  std::vector<RigidityPoint> points;
  bool naturals_pass = false;
  bool order_pass = false;
  bool pass = false;
  double worst_deviation = 0.0;
};

RigidityReport rigidity_check(int n_points, std::uint64_t seed = 42);

}  // namespace bornforge
