#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bornforge/errors.hpp"
#include "bornforge/linalg.hpp"
#include "bornforge/quotient.hpp"
#include "bornforge/random.hpp"
#include "bornforge/theory.hpp"
#include "bornforge/weighted.hpp"

namespace bornforge {

// Sequential composition (a after b): all pairwise composites with
// multiplied weights. Composing with an empty set yields the empty set.
// Errors: ObjectMismatch; CapacityExceeded past the item cap.
WeightedSet ws_compose(const WeightedSet& a, const WeightedSet& b);
// Parallel composition: pairwise tensors with multiplied weights.
WeightedSet ws_tensor(const WeightedSet& a, const WeightedSet& b);
// Additive union: plain list concatenation, no merging. The empty set is
// the unit. Errors: ObjectMismatch on differing dom/cod.
WeightedSet ws_union(const WeightedSet& a, const WeightedSet& b);

// Probability of a weighted effect set on a weighted state set: the
// weight-weighted double sum of the base theory's probabilities. Empty
// either side gives 0. Errors: ObjectMismatch; NotSimplified.
double prob_S(const WeightedSet& rho, const WeightedSet& sigma, const TheorySpec& base);

// Scalar assignment on weighted scalar sets: sum of w_i * lambda(gamma_i).
double lambda_S(const WeightedSet& gamma, const TheorySpec& base);

// A noisy equivalence class keyed by the weighted Choi sum.
struct NoisyClass {
  std::string theory;
  WeightedSet rep;
  Matrix canon;
};

// canon = sum of w_i * choi(f_i) (transfer-encoded bases use the channel
// Choi matrix). Proven canonical only for the modulus-squared rule and the
// trace rule; other rules throw UnsupportedTheory and callers stay in probe
// mode. The canon is validated Hermitian PSD.
NoisyClass noisy_canonical(const WeightedSet& ws, const TheorySpec& base);
bool same_noisy_class(const NoisyClass& a, const NoisyClass& b, double tol = ATOL);

// Scalar value of a scalar class, read off the 1x1 canon.
double lambda_N(const NoisyClass& x);
// Scalar class realizing probability p: the class of {(1_I, p)}, with the
// empty set for p = 0. Errors: OutOfRange for p < 0.
NoisyClass theta_N(double p, const TheorySpec& base);

enum class EquivMode { Canonical, Probe };

// Decides noisy equivalence. Canonical mode compares canon matrices within
// ATOL; probe mode samples singleton state/effect probes and compares
// prob_S within tol. Errors: ObjectMismatch; UnsupportedTheory in canonical
// mode when no canonical form is known.
ProbeEvidence equiv_noisy(const WeightedSet& a, const WeightedSet& b,
                          const TheorySpec& base, EquivMode mode, int n_samples,
                          RandomSource& rng, double tol = PROBE_TOL);

// The three defining axioms evaluated on weighted-set samplers built from
// the base theory's samplers.
AxiomReport check_axiom_summed(const TheorySpec& base, Axiom which, int n_samples,
                               RandomSource& rng, double tol = ATOL);

// Semiring laws of scalar weighted sets: union is a commutative monoid with
// the empty set as unit, tensor is a monoid with {(1_I, 1)} as unit, tensor
// distributes over union and annihilates on the empty set, and the scalar
// assignment is additive, multiplicative and sends the empty set to 0.
// One report per law. lambda_fn overrides the scalar assignment (used to
// demonstrate that a non-additive assignment fails).
std::vector<AxiomReport> semiring_check(
    const TheorySpec& base, int n_samples, RandomSource& rng, double tol = ATOL,
    std::function<double(const WeightedSet&)> lambda_fn = {});

}  // namespace bornforge
