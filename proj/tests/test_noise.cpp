#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "bornforge/linalg.hpp"
#include "bornforge/noise.hpp"
#include "bornforge/theory.hpp"

using namespace bornforge;

namespace {

const TheoryObject QUBIT = TheoryObject::wire(2);

Morphism ket(int i) { return basis_state(QUBIT, i); }
Morphism bra(int i) { return basis_effect(QUBIT, i); }

Morphism hadamard_ket(int sign) {
  Vector v(2);
  v << 1.0 / std::sqrt(2.0), (sign == 0 ? 1.0 : -1.0) / std::sqrt(2.0);
  return state_vector(QUBIT, v);
}

Matrix zmat() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

WeightedSet comp_mixture() {
  return WeightedSet(TheoryObject::unit(), QUBIT,
                     {{ket(0), 0.5}, {ket(1), 0.5}});
}

WeightedSet hadamard_mixture() {
  return WeightedSet(TheoryObject::unit(), QUBIT,
                     {{hadamard_ket(0), 0.5}, {hadamard_ket(1), 0.5}});
}

// Multiset equality of weighted sets: a weight-and-matrix bijection.
bool ws_items_match(const WeightedSet& a, const WeightedSet& b, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const WeightedItem& x : a.items) {
    bool found = false;
    for (std::size_t j = 0; j < b.items.size(); ++j) {
      if (used[j]) continue;
      if (std::abs(x.weight - b.items[j].weight) <= tol &&
          max_abs_diff(x.morphism.mat, b.items[j].morphism.mat) <= tol) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

WeightedSet random_scalar_set(RandomSource& rng, int max_items) {
  std::vector<WeightedItem> items;
  int n = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(max_items)));
  for (int i = 0; i < n; ++i) {
    items.push_back({scalar_morphism(rng.normal_complex()), rng.uniform(0.1, 2.0)});
  }
  return WeightedSet(TheoryObject::unit(), TheoryObject::unit(), std::move(items));
}

}  // namespace

TEST_SUITE_BEGIN("noise");

TEST_CASE("pairwise composition multiplies weights") {
  RandomSource rng(80);
  Morphism f = random_ginibre(QUBIT, QUBIT, rng);
  Morphism g = random_ginibre(QUBIT, QUBIT, rng);
  WeightedSet a = WeightedSet::singleton(g, 2.0);
  WeightedSet b = WeightedSet::singleton(f, 3.0);
  WeightedSet c = ws_compose(a, b);
  REQUIRE(c.size() == 1);
  CHECK(c.items[0].weight == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(max_abs_diff(c.items[0].morphism.mat, (g.mat * f.mat).eval()) < 1e-15);

  WeightedSet zero = WeightedSet::zero(QUBIT, QUBIT);
  CHECK(ws_compose(zero, b).size() == 0);
  CHECK(ws_compose(a, WeightedSet::zero(QUBIT, QUBIT)).size() == 0);
  CHECK(ws_compose(zero, b).dom == QUBIT);

  WeightedSet two(QUBIT, QUBIT, {{f, 0.5}, {g, 0.5}});
  CHECK(ws_tensor(two, two).size() == 4);
  double wsum = 0.0;
  for (const WeightedItem& it : ws_tensor(two, two).items) wsum += it.weight;
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));

  WeightedSet w3(TheoryObject::wire(3), TheoryObject::wire(3),
                 {{identity(TheoryObject::wire(3)), 1.0}});
  CHECK_THROWS_AS(ws_compose(a, w3), ObjectMismatch);
  CHECK_THROWS_AS(ws_union(a, w3), ObjectMismatch);
}

TEST_CASE("composition growth hits the capacity guard") {
  RandomSource rng(81);
  std::vector<WeightedItem> items;
  for (int i = 0; i < 10; ++i) {
    items.push_back({random_ginibre(QUBIT, QUBIT, rng), 1.0});
  }
  WeightedSet big(QUBIT, QUBIT, items);
  CHECK_THROWS_AS(ws_compose(big, big), CapacityExceeded);
}

TEST_CASE("union concatenates and the empty set is its unit") {
  RandomSource rng(82);
  WeightedSet a = comp_mixture();
  WeightedSet u = ws_union(a, WeightedSet::zero(a.dom, a.cod));
  CHECK(ws_items_match(u, a, 0.0));

  TheorySpec t = builtin_fhilb(2.0);
  WeightedSet b = hadamard_mixture();
  CHECK(same_noisy_class(noisy_canonical(ws_union(a, b), t),
                         noisy_canonical(ws_union(b, a), t)));

  WeightedSet c = WeightedSet::singleton(random_ginibre(TheoryObject::unit(), QUBIT, rng),
                                         0.7);
  Matrix lhs = noisy_canonical(ws_tensor(c, ws_union(a, b)), t).canon;
  Matrix rhs = noisy_canonical(ws_union(ws_tensor(c, a), ws_tensor(c, b)), t).canon;
  CHECK(max_abs_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("summed probability is the weighted double sum") {
  TheorySpec t = builtin_fhilb(2.0);
  WeightedSet rho = comp_mixture();
  WeightedSet sig = WeightedSet::singleton(bra(0));
  CHECK(prob_S(rho, sig, t) == doctest::Approx(0.5).epsilon(1e-12));

  CHECK(prob_S(rho, WeightedSet::zero(QUBIT, TheoryObject::unit()), t) == 0.0);
  CHECK(prob_S(WeightedSet::zero(TheoryObject::unit(), QUBIT), sig, t) == 0.0);

  RandomSource rng(83);
  for (int i = 0; i < 10; ++i) {
    Morphism r = t.sample_state(QUBIT, rng);
    Morphism s = t.sample_effect(QUBIT, rng);
    CHECK(prob_S(WeightedSet::singleton(r), WeightedSet::singleton(s), t) ==
          doctest::Approx(prob(t, r, s)).epsilon(1e-12));
  }

  CHECK_THROWS_AS(prob_S(rho, WeightedSet::singleton(basis_effect(TheoryObject::wire(3), 0)), t),
                  ObjectMismatch);
  CHECK_THROWS_AS(prob_S(rho, sig, builtin_textbook_qm()), NotSimplified);
}

TEST_CASE("scalar assignment on weighted scalar sets") {
  TheorySpec t = builtin_fhilb(2.0);
  WeightedSet ones(TheoryObject::unit(), TheoryObject::unit(),
                   {{scalar_morphism(1.0), 0.3}, {scalar_morphism(1.0), 0.7}});
  CHECK(lambda_S(ones, t) == doctest::Approx(1.0).epsilon(1e-12));

  Complex z = std::polar(0.8, 2.1);
  WeightedSet single(TheoryObject::unit(), TheoryObject::unit(),
                     {{scalar_morphism(z), 1.3}});
  CHECK(lambda_S(single, t) == doctest::Approx(1.3 * 0.64).epsilon(1e-12));
  CHECK(lambda_S(WeightedSet::zero(TheoryObject::unit(), TheoryObject::unit()), t) ==
        0.0);
}

TEST_CASE("mixtures over different bases share one canonical form") {
  TheorySpec t = builtin_fhilb(2.0);
  NoisyClass a = noisy_canonical(comp_mixture(), t);
  NoisyClass b = noisy_canonical(hadamard_mixture(), t);
  Matrix expect = 0.5 * Matrix::Identity(2, 2);
  CHECK(max_abs_diff(a.canon, expect) < 1e-12);
  CHECK(max_abs_diff(b.canon, expect) < 1e-12);
  CHECK(same_noisy_class(a, b));
}

TEST_CASE("dephasing mixture has the frozen canonical matrix") {
  TheorySpec t = builtin_fhilb(2.0);
  WeightedSet deph(QUBIT, QUBIT,
                   {{Morphism(QUBIT, QUBIT, Matrix::Identity(2, 2)), 0.5},
                    {Morphism(QUBIT, QUBIT, zmat()), 0.5}});
  Matrix expect = Matrix::Zero(4, 4);
  expect(0, 0) = 1.0;
  expect(3, 3) = 1.0;
  CHECK(max_abs_diff(noisy_canonical(deph, t).canon, expect) < 1e-12);

  RandomSource rng(84);
  Morphism f = random_ginibre(QUBIT, QUBIT, rng);
  CHECK(max_abs_diff(noisy_canonical(WeightedSet::singleton(f), t).canon, choi(f)) ==
        0.0);

  CHECK_THROWS_AS(noisy_canonical(deph, builtin_fhilb(3.0)), UnsupportedTheory);
}

TEST_CASE("transfer-encoded bases use the channel Choi matrix") {
  TheorySpec cp = builtin_cp();
  TheoryObject pair = TheoryObject({2, 2});
  Morphism zch = cp_encode_kraus(pair, pair, {zmat()});
  Morphism idch = cp_encode_kraus(pair, pair, {Matrix::Identity(2, 2)});
  WeightedSet mix(pair, pair, {{idch, 0.5}, {zch, 0.5}});
  Matrix expect = Matrix::Zero(4, 4);
  expect(0, 0) = 1.0;
  expect(3, 3) = 1.0;
  CHECK(max_abs_diff(noisy_canonical(mix, cp).canon, expect) < 1e-12);
}

TEST_CASE("noisy equivalence in canonical and probe modes") {
  TheorySpec t = builtin_fhilb(2.0);
  RandomSource rng(85);
  WeightedSet a = comp_mixture(), b = hadamard_mixture();
  CHECK(equiv_noisy(a, b, t, EquivMode::Canonical, 0, rng).equivalent);
  CHECK(equiv_noisy(a, b, t, EquivMode::Probe, 40, rng).equivalent);

  WeightedSet full = WeightedSet::singleton(ket(0), 1.0);
  WeightedSet faded = WeightedSet::singleton(ket(0), 0.5);
  CHECK_FALSE(equiv_noisy(full, faded, t, EquivMode::Canonical, 0, rng).equivalent);
  ProbeEvidence pe = equiv_noisy(full, faded, t, EquivMode::Probe, 40, rng);
  CHECK_FALSE(pe.equivalent);
  CHECK_FALSE(pe.counterexample.empty());

  CHECK_THROWS_AS(
      equiv_noisy(full, faded, builtin_fhilb(3.0), EquivMode::Canonical, 0, rng),
      UnsupportedTheory);
  CHECK_FALSE(
      equiv_noisy(full, faded, builtin_fhilb(3.0), EquivMode::Probe, 40, rng).equivalent);
}

TEST_CASE("canonical and probe equivalence agree on random pairs") {
  TheorySpec t = builtin_fhilb(2.0);
  RandomSource rng(86);
  int agreements = 0;
  for (int i = 0; i < 500; ++i) {
    std::vector<WeightedItem> items;
    int n = 1 + static_cast<int>(rng.index(2));
    for (int j = 0; j < n; ++j) {
      items.push_back({random_ginibre(TheoryObject::unit(), QUBIT, rng),
                       rng.uniform(0.2, 1.5)});
    }
    WeightedSet a(TheoryObject::unit(), QUBIT, items);
    WeightedSet b = (i % 2 == 0)
                        ? kraus_from_choi(noisy_canonical(a, t).canon, 1, 2)
                        : WeightedSet::singleton(
                              random_ginibre(TheoryObject::unit(), QUBIT, rng));
    bool canon_eq =
        same_noisy_class(noisy_canonical(a, t), noisy_canonical(b, t), 1e-7);
    bool probe_eq = equiv_noisy(a, b, t, EquivMode::Probe, 24, rng).equivalent;
    CHECK(canon_eq == probe_eq);
    if (canon_eq == probe_eq) ++agreements;
  }
  CHECK(agreements == 500);
}

TEST_CASE("interchange of summed composition and tensor is exact") {
  RandomSource rng(87);
  auto rand_set = [&rng](int n) {
    std::vector<WeightedItem> items;
    for (int i = 0; i < n; ++i) {
      items.push_back({random_ginibre(QUBIT, QUBIT, rng), rng.uniform(0.1, 1.0)});
    }
    return WeightedSet(QUBIT, QUBIT, std::move(items));
  };
  WeightedSet f1 = rand_set(2), f2 = rand_set(2), g1 = rand_set(2), g2 = rand_set(2);
  WeightedSet lhs = ws_compose(ws_tensor(g1, g2), ws_tensor(f1, f2));
  WeightedSet rhs = ws_tensor(ws_compose(g1, f1), ws_compose(g2, f2));
  CHECK(lhs.size() == 16);
  CHECK(ws_items_match(lhs, rhs, 1e-12));
}

TEST_CASE("summed theory satisfies the defining axioms") {
  for (double k : {2.0, 3.0}) {
    TheorySpec t = builtin_fhilb(k);
    RandomSource rng(88);
    CHECK(check_axiom_summed(t, Axiom::I, 40, rng, 1e-9).pass);
    CHECK(check_axiom_summed(t, Axiom::II, 40, rng, 1e-9).pass);
    CHECK(check_axiom_summed(t, Axiom::III, 40, rng).pass);
  }
}

TEST_CASE("generated weighted sets have positive canonical matrices") {
  TheorySpec t = builtin_fhilb(2.0);
  RandomSource rng(89);
  for (int i = 0; i < 30; ++i) {
    std::vector<WeightedItem> items;
    int n = 1 + static_cast<int>(rng.index(3));
    for (int j = 0; j < n; ++j) {
      items.push_back({random_ginibre(QUBIT, QUBIT, rng), rng.uniform(0.1, 1.0)});
    }
    WeightedSet ws(QUBIT, QUBIT, items);
    WeightedSet sq = ws_compose(ws, ws);
    for (const WeightedSet* s : {&ws, &sq}) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(noisy_canonical(*s, t).canon,
                                               Eigen::EigenvaluesOnly);
      CHECK(es.eigenvalues().minCoeff() >= -1e-9);
    }
  }
}

TEST_CASE("scalar classes round trip through their probability value") {
  TheorySpec t = builtin_fhilb(2.0);
  Complex z = std::polar(0.6, 0.9);
  WeightedSet s(TheoryObject::unit(), TheoryObject::unit(),
                {{scalar_morphism(z), 1.5}});
  NoisyClass x = noisy_canonical(s, t);
  CHECK(lambda_N(x) == doctest::Approx(1.5 * 0.36).epsilon(1e-12));

  CHECK(lambda_N(theta_N(0.25, t)) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(lambda_N(theta_N(0.0, t)) == 0.0);
  CHECK(theta_N(0.0, t).rep.size() == 0);
  CHECK_THROWS_AS(theta_N(-0.1, t), OutOfRange);

  RandomSource rng(90);
  for (int i = 0; i < 20; ++i) {
    WeightedSet g = random_scalar_set(rng, 3);
    NoisyClass cls = noisy_canonical(g, t);
    NoisyClass back = theta_N(lambda_N(cls), t);
    CHECK(same_noisy_class(cls, back, 1e-9));
    CHECK(lambda_N(cls) == doctest::Approx(lambda_S(g, t)).epsilon(1e-12));
  }
}

TEST_CASE("named probability values are fixed points of the scalar map") {
  TheorySpec t = builtin_fhilb(2.0);
  WeightedSet empty = WeightedSet::zero(TheoryObject::unit(), TheoryObject::unit());
  CHECK(lambda_N(noisy_canonical(empty, t)) == 0.0);

  WeightedSet one(TheoryObject::unit(), TheoryObject::unit(),
                  {{scalar_morphism(1.0), 1.0}});
  CHECK(lambda_N(noisy_canonical(one, t)) == doctest::Approx(1.0).epsilon(1e-15));

  for (double r : {0.5, 1.0 / 3.0, 0.847}) {
    WeightedSet s(TheoryObject::unit(), TheoryObject::unit(),
                  {{scalar_morphism(std::sqrt(r)), 1.0}});
    CHECK(lambda_N(noisy_canonical(s, t)) == doctest::Approx(r).epsilon(1e-12));
  }
}

TEST_CASE("semiring laws hold and a squared assignment fails additivity") {
  for (double k : {2.0, 3.0}) {
    TheorySpec t = builtin_fhilb(k);
    RandomSource rng(91);
    std::vector<AxiomReport> laws = semiring_check(t, 30, rng, 1e-9);
    for (const AxiomReport& law : laws) {
      INFO(law.axiom);
      CHECK(law.pass);
    }
  }

  TheorySpec t = builtin_fhilb(2.0);
  RandomSource rng(92);
  auto squared = [&t](const WeightedSet& g) {
    double v = lambda_S(g, t);
    return v * v;
  };
  std::vector<AxiomReport> laws = semiring_check(t, 30, rng, 1e-9, squared);
  bool additive_failed = false;
  for (const AxiomReport& law : laws) {
    if (law.axiom == "lambda-additive") {
      additive_failed = !law.pass;
      CHECK_FALSE(law.detail.empty());
    }
  }
  CHECK(additive_failed);
}

TEST_SUITE_END();
