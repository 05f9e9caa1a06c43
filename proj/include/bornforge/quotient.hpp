#pragma once

#include <string>
#include <vector>

#include "bornforge/errors.hpp"
#include "bornforge/linalg.hpp"
#include "bornforge/random.hpp"
#include "bornforge/theory.hpp"

namespace bornforge {

// Outcome of a randomized equivalence probe. One-sided: equivalent = true
// means "not refuted by any sampled probe", false comes with a witness.
struct ProbeEvidence {
  bool equivalent = false;
  double max_deviation = 0.0;
  int samples = 0;
  std::string counterexample;
};

// An equivalence class keyed by a canonical matrix: two classes are the same
// exactly when their canon matrices agree entrywise within tolerance.
struct CanonicalClass {
  std::string theory;
  Morphism rep;
  Matrix canon;
};

// Canonical form of a morphism under probabilistic equivalence. Registered
// canonicalizers: born-power rules on unrestricted linear maps use the Choi
// matrix of the morphism (phase and exponent independent); the trace rule on
// transfer-encoded maps uses the Choi matrix of the channel. Other rules
// throw UnsupportedTheory; callers fall back to equiv_probe.
CanonicalClass canonicalize(const TheorySpec& t, const Morphism& f);
bool same_class(const CanonicalClass& a, const CanonicalClass& b, double tol = ATOL);

// A morphism-with-hidden-environment: U acts on dom (x) anc_in and produces
// cod (x) anc_out, with a physical ancilla state rho on anc_in and effect
// sigma on anc_out. All three parts pass the theory's membership predicates.
struct GTriple {
  Morphism U;
  Morphism rho;
  Morphism sigma;
  TheoryObject dom;
  TheoryObject cod;

  TheoryObject anc_in() const { return rho.cod; }
  TheoryObject anc_out() const { return sigma.dom; }
};

// Validates wire bookkeeping (ObjectMismatch) and membership of all three
// parts (NotMember), then assembles the triple.
GTriple make_triple(const TheorySpec& t, Morphism u, Morphism rho, Morphism sigma,
                    TheoryObject dom, TheoryObject cod);

// Identity on a, with trivial ancillas.
GTriple g_identity(const TheorySpec& t, const TheoryObject& a);
// A physical morphism embedded with trivial ancillas.
GTriple g_embed(const TheorySpec& t, const Morphism& f);
// The symmetry a (x) b -> b (x) a, with trivial ancillas.
GTriple g_swap(const TheorySpec& t, const TheoryObject& a, const TheoryObject& b);

// Sequential composition (apply b, then a; a.dom == b.cod). The wired
// morphism routes b's live output into a while both ancillas ride along,
// then groups output ancillas as b's before a's.
GTriple g_compose(const TheorySpec& t, const GTriple& a, const GTriple& b);
// Parallel composition with ancillas pushed to the right of the live wires.
GTriple g_tensor(const TheorySpec& t, const GTriple& a, const GTriple& b);

// (1 (x) sigma) . U . (1 (x) rho): the morphism the triple presents.
Morphism g_collapse(const GTriple& x);

// Probability of effect triple e on state triple s, evaluated through the
// underlying theory on the composed triple.
double g_prob(const TheorySpec& t, const GTriple& s, const GTriple& e);

// Scalar assignment on scalar triples: g_prob against the identity scalar.
double lambda_G(const TheorySpec& t, const GTriple& x);

// Dilates a contraction f: A -> B (norm at most 1, NotContraction beyond
// 1 + 1e-8) to a triple (U, |0>, <0|) with ancilla dims 2*dim(B) in and
// 2*dim(A) out, whose collapse reproduces f. U is unitary: the columns
// f|i> (x) |0'> + correction rows from principal_sqrt(I - f'f) are
// orthonormal and completed to a full basis.
GTriple stinespring_dilate(const TheorySpec& t, const Morphism& f);

// Probes whether f and g assign equal probabilities to every state/effect
// pair over an ancilla. Ancilla dimensions come from dims_of_c (empty means
// the default {1, 2, cod-dim}); per sample, random members of S^{A (x) C} and
// E^{B (x) C} are paired. Errors: ObjectMismatch when dom/cod differ.
ProbeEvidence equiv_probe(const TheorySpec& t, const Morphism& f, const Morphism& g,
                          int n_samples, std::vector<int> dims_of_c,
                          RandomSource& rng, double tol = PROBE_TOL);
ProbeEvidence equiv_probe(const TheorySpec& t, const GTriple& f, const GTriple& g,
                          int n_samples, std::vector<int> dims_of_c,
                          RandomSource& rng, double tol = PROBE_TOL);

}  // namespace bornforge
