#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "bornforge/errors.hpp"
#include "bornforge/linalg.hpp"
#include "bornforge/random.hpp"

namespace bornforge {

// How a (state, effect) pair is turned into a probability.
//   born_power(k):    |<effect|state>|^k, k > 0
//   trace_rule:       the real scalar of effect . state (trace pairing of
//                     vectorized positive matrices)
//   stochastic_inner: the real scalar of effect . state
//   custom(fn):       arbitrary pure function of the pair
class ProbabilityRule {
 public:
  using CustomFn = std::function<double(const Morphism&, const Morphism&)>;

  static ProbabilityRule born_power(double k);
  static ProbabilityRule trace_rule();
  static ProbabilityRule stochastic_inner();
  static ProbabilityRule custom(CustomFn fn, std::string label = "custom");

  // Evaluates the rule. Throws OutOfRange when the result is not a finite
  // nonnegative real (tiny negative float noise is clamped to zero).
  double evaluate(const Morphism& state, const Morphism& effect) const;

  bool is_born_power() const;
  bool is_trace_rule() const;
  // Exponent of a born_power rule; BadParams for other kinds.
  double born_exponent() const;
  const std::string& describe() const { return label_; }

 private:
  struct Born {
    double k;
  };
  struct Trace {};
  struct Inner {};
  ProbabilityRule() = default;
  std::variant<Born, Trace, Inner, CustomFn> kind_ = Trace{};
  std::string label_;
};

// Deterministic witness pairs (state, effect) registered by a theory so that
// existence claims do not rely on sampling luck.
struct TheoryWitnesses {
  std::optional<std::pair<Morphism, Morphism>> prob_nonzero;
  std::optional<std::pair<Morphism, Morphism>> prob_nonone;
};

// A probabilistic process theory over matrix-interpreted monoidal data:
// a physical subcategory (process_member), per-object state and effect sets,
// and a probability rule. simplified = true means every morphism, state and
// effect is physical. Samplers back the randomized axiom checks; they must
// produce members. sample_process may return nullopt for a (dom, cod) shape
// the theory cannot populate; checkers then retry with cod = dom.
struct TheorySpec {
  std::string name;
  bool simplified = true;
  ProbabilityRule rule = ProbabilityRule::born_power(2.0);

  std::function<bool(const TheoryObject&)> object_policy;
  std::function<bool(const Morphism&)> process_member;
  std::function<bool(const Morphism&)> state_member;
  std::function<bool(const Morphism&)> effect_member;

  // Canonical object of a given underlying dimension (identity by default;
  // theories with structured objects override, e.g. doubled wires).
  std::function<TheoryObject(int)> make_object;

  std::function<Morphism(const TheoryObject&, RandomSource&)> sample_state;
  std::function<Morphism(const TheoryObject&, RandomSource&)> sample_effect;
  std::function<std::optional<Morphism>(const TheoryObject&, const TheoryObject&,
                                        RandomSource&)>
      sample_process;

  TheoryWitnesses witnesses;

  // Optional causal structure: discard effect per object plus a sampler of
  // states that the discard should send to probability one.
  std::function<std::optional<Morphism>(const TheoryObject&)> discard;
  std::function<Morphism(const TheoryObject&, RandomSource&)> sample_causal_state;
};

// Probability of observing effect sigma on state rho.
// Errors: ObjectMismatch when shapes disagree, NotMember on membership failure.
double prob(const TheorySpec& t, const Morphism& rho, const Morphism& sigma);

// The scalar probability assignment gamma -> prob(1_I, gamma), well formed
// for simplified theories only (NotSimplified otherwise).
double lambda_scalar(const TheorySpec& t, const Morphism& gamma);

enum class Axiom { I, II, III };

// Result of one randomized axiom or discard check.
struct AxiomReport {
  std::string axiom;
  bool pass = false;
  int samples = 0;
  double worst_deviation = 0.0;
  std::string detail;
};

// Randomized semi-decision for the three defining axioms.
//   I:   |P(f.rho, sigma) - P(rho, sigma.f)| <= tol over sampled triples
//   II:  |P(rho1 x rho2, sigma1 x sigma2) - P1 P2| <= tol over sampled pairs
//   III: finds a pair with P != 0 and a pair with P != 1 (witnesses first,
//        then bounded search; n_samples <= 0 means the 256-sample default)
// Errors: SamplerUnavailable when the needed samplers are missing.
AxiomReport check_axiom(const TheorySpec& t, Axiom which, int n_samples,
                        RandomSource& rng, double tol = ATOL);

// Checks |prob(rho, discard) - 1| <= tol over sampled causal states, per
// object dimension 1 through 4. Errors: NoDiscard when the theory has no
// discard family or causal sampler.
AxiomReport check_discard(const TheorySpec& t, int n_samples, RandomSource& rng,
                          double tol = ATOL);

// Built-in theories.
//   builtin_fhilb(k):  all linear maps physical, rule born_power(k)
//   builtin_textbook_qm(): unitaries / unit kets / unit bras, born_power(2)
//   builtin_cp():      completely positive maps in the transfer-matrix
//                      encoding, rule trace_rule
//   builtin_stoch():   column-substochastic real matrices, stochastic_inner
TheorySpec builtin_fhilb(double k);
TheorySpec builtin_textbook_qm();
TheorySpec builtin_cp();
TheorySpec builtin_stoch();
// Dispatch by name {fhilb, textbook, cp, stoch}; BadParams for k <= 0 and
// UnsupportedTheory for unknown names.
TheorySpec builtin(const std::string& name, double k = 2.0);

// Transfer-matrix encoding of completely positive maps.
//
// An encoded object doubles every wire: underlying [d1, d2] becomes
// [d1, d1, d2, d2], and an encoded vector indexes like (i1, j1, i2, j2),
// the row-major pairing of ket and bra indices per wire. A morphism holds
// the transfer matrix sum_m K_m (x) conj(K_m) conjugated into that index
// order, so composition and tensor of encoded morphisms are plain matrix
// product and Kronecker product.
bool cp_object_ok(const TheoryObject& encoded);
// [d1, d2, ...] from [d1, d1, d2, d2, ...]; UnknownObject when not paired.
TheoryObject cp_underlying(const TheoryObject& encoded);
// Permutation taking the standard block order (i1..in, j1..jn) to the
// encoded interleaved order (i1, j1, ..., in, jn).
Matrix cp_interleave(const TheoryObject& encoded);
// Encoded state from an underlying matrix rho (shape a x a).
Morphism cp_encode_state(const TheoryObject& encoded, const Matrix& rho);
// Underlying matrix back from an encoded state.
Matrix cp_decode_state(const Morphism& state);
// Encoded effect measuring the underlying positive matrix e.
Morphism cp_encode_effect(const TheoryObject& encoded, const Matrix& e);
// Encoded morphism with the given Kraus operators (shape b x a each).
Morphism cp_encode_kraus(const TheoryObject& enc_dom, const TheoryObject& enc_cod,
                         const std::vector<Matrix>& kraus);
// Choi matrix (standard index order) of an encoded morphism.
Matrix cp_choi_of(const Morphism& f);

}  // namespace bornforge
