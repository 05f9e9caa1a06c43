#include <doctest.h>

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <complex>

#include "bornforge/linalg.hpp"
#include "bornforge/theory.hpp"

using namespace bornforge;

namespace {

const double SQ2 = std::sqrt(2.0);

Morphism plus_effect() {
  Matrix m(1, 2);
  m << 1.0 / SQ2, 1.0 / SQ2;
  return Morphism(TheoryObject::wire(2), TheoryObject::unit(), m);
}

Matrix zmat() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix proj(int which) {
  Matrix m = Matrix::Zero(2, 2);
  m(which, which) = 1.0;
  return m;
}

Matrix plus_density() {
  Matrix m(2, 2);
  m << 0.5, 0.5, 0.5, 0.5;
  return m;
}

TheorySpec offset_mutant() {
  TheorySpec t = builtin_fhilb(2.0);
  t.name = "mutant-offset";
  t.rule = ProbabilityRule::custom(
      [](const Morphism& s, const Morphism& e) {
        Complex z = compose(e, s).scalar();
        return std::norm(z) + 0.1;
      },
      "born2+0.1");
  return t;
}

TheorySpec constant_one_mutant() {
  TheorySpec t = builtin_fhilb(2.0);
  t.name = "mutant-one";
  t.rule = ProbabilityRule::custom(
      [](const Morphism&, const Morphism&) { return 1.0; }, "constant 1");
  return t;
}

}  // namespace

TEST_SUITE_BEGIN("theory");

TEST_CASE("born rule probabilities on kets and bras") {
  TheorySpec t = builtin_fhilb(2.0);
  TheoryObject q = TheoryObject::wire(2);
  CHECK(prob(t, basis_state(q, 0), basis_effect(q, 0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(prob(t, basis_state(q, 0), basis_effect(q, 1)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(prob(t, basis_state(q, 0), plus_effect()) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("exponent acts on the modulus of the pairing") {
  TheoryObject w3 = TheoryObject::wire(3);
  Vector v(3);
  v << std::polar(0.5, M_PI / 4.0), std::sqrt(0.75), 0.0;
  Morphism rho = state_vector(w3, v);
  Morphism sigma = basis_effect(w3, 0);

  TheorySpec cubic = builtin_fhilb(3.0);
  CHECK(prob(cubic, rho, sigma) == doctest::Approx(0.125).epsilon(1e-12));

  TheorySpec half = builtin_fhilb(0.5);
  CHECK(prob(half, rho, sigma) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("scalar assignment evaluates the rule at the unit state") {
  for (double k : {0.5, 1.0, 2.0, 3.0}) {
    TheorySpec t = builtin_fhilb(k);
    CHECK(lambda_scalar(t, scalar_morphism(1.0)) == doctest::Approx(1.0).epsilon(1e-12));
  }
  TheorySpec t2 = builtin_fhilb(2.0);
  CHECK(lambda_scalar(t2, scalar_morphism(std::polar(0.3, 0.7))) ==
        doctest::Approx(0.09).epsilon(1e-12));

  TheorySpec cp = builtin_cp();
  for (double r : {0.0, 0.25, 1.0, 2.5}) {
    CHECK(lambda_scalar(cp, scalar_morphism(r)) == doctest::Approx(r).epsilon(1e-12));
  }

  TheorySpec st = builtin_stoch();
  CHECK(lambda_scalar(st, scalar_morphism(0.37)) == doctest::Approx(0.37).epsilon(1e-12));

  CHECK_THROWS_AS(lambda_scalar(builtin_textbook_qm(), scalar_morphism(1.0)),
                  NotSimplified);
}

TEST_CASE("defining axioms hold for the linear-map theory") {
  for (double k : {0.5, 1.0, 2.0, 3.0}) {
    TheorySpec t = builtin_fhilb(k);
    RandomSource rng(42);
    AxiomReport a1 = check_axiom(t, Axiom::I, 50, rng, 1e-9);
    AxiomReport a2 = check_axiom(t, Axiom::II, 50, rng, 1e-9);
    AxiomReport a3 = check_axiom(t, Axiom::III, 50, rng);
    CHECK(a1.pass);
    CHECK(a2.pass);
    CHECK(a3.pass);
    if (k == 2.0) {
      CHECK(a1.worst_deviation < 1e-12);
      CHECK(a2.worst_deviation < 1e-12);
    }
  }
}

TEST_CASE("defining axioms hold for unitary-circuit quantum mechanics") {
  TheorySpec t = builtin_textbook_qm();
  RandomSource rng(43);
  CHECK(check_axiom(t, Axiom::I, 60, rng, 1e-9).pass);
  CHECK(check_axiom(t, Axiom::II, 60, rng, 1e-9).pass);
  CHECK(check_axiom(t, Axiom::III, 60, rng).pass);

  RandomSource r2(7);
  CHECK_FALSE(t.sample_process(TheoryObject::wire(2), TheoryObject::wire(3), r2)
                  .has_value());
}

TEST_CASE("defining axioms hold for the completely positive theory") {
  TheorySpec t = builtin_cp();
  RandomSource rng(44);
  CHECK(check_axiom(t, Axiom::I, 50, rng, 1e-9).pass);
  CHECK(check_axiom(t, Axiom::II, 50, rng, 1e-9).pass);
  CHECK(check_axiom(t, Axiom::III, 50, rng).pass);
}

TEST_CASE("defining axioms hold for the substochastic theory") {
  TheorySpec t = builtin_stoch();
  RandomSource rng(45);
  CHECK(check_axiom(t, Axiom::I, 60, rng, 1e-9).pass);
  CHECK(check_axiom(t, Axiom::II, 60, rng, 1e-9).pass);
  CHECK(check_axiom(t, Axiom::III, 60, rng).pass);
}

TEST_CASE("additive offset rule breaks product factorisation") {
  TheorySpec t = offset_mutant();
  RandomSource rng(46);
  AxiomReport rep = check_axiom(t, Axiom::II, 40, rng, 1e-9);
  CHECK_FALSE(rep.pass);
  CHECK(rep.worst_deviation > 1e-3);
  CHECK_FALSE(rep.detail.empty());
}

TEST_CASE("constant-one rule has no improbable event") {
  TheorySpec t = constant_one_mutant();
  RandomSource rng(47);
  AxiomReport rep = check_axiom(t, Axiom::III, 64, rng);
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(rep.detail.empty());
}

TEST_CASE("unit pairing separates live theories from the zero rule") {
  TheorySpec dead = builtin_fhilb(2.0);
  dead.rule = ProbabilityRule::custom(
      [](const Morphism&, const Morphism&) { return 0.0; }, "constant 0");
  CHECK(prob(dead, scalar_morphism(1.0), scalar_morphism(1.0)) == 0.0);

  for (const TheorySpec& t :
       {builtin_fhilb(2.0), builtin_fhilb(0.5), builtin_cp(), builtin_stoch(),
        builtin_textbook_qm()}) {
    CHECK(prob(t, scalar_morphism(1.0), scalar_morphism(1.0)) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("unit-norm membership in the unitary theory") {
  TheorySpec t = builtin_textbook_qm();
  TheoryObject q = TheoryObject::wire(2);
  Morphism ket0 = basis_state(q, 0);
  CHECK(t.state_member(ket0));
  Morphism half(TheoryObject::unit(), q, 0.5 * ket0.mat);
  CHECK_FALSE(t.state_member(half));
  CHECK_THROWS_AS(prob(t, half, basis_effect(q, 0)), NotMember);

  Matrix notu(2, 2);
  notu << 1, 0, 0, 0.5;
  CHECK_FALSE(t.process_member(Morphism(q, q, notu)));
  CHECK(t.process_member(Morphism(q, q, zmat())));
}

TEST_CASE("membership closed under tensor on sampled members") {
  for (const TheorySpec& t :
       {builtin_fhilb(2.0), builtin_textbook_qm(), builtin_cp(), builtin_stoch()}) {
    RandomSource rng(48);
    for (int i = 0; i < 5; ++i) {
      TheoryObject a = t.make_object(2), b = t.make_object(3);
      Morphism r1 = t.sample_state(a, rng), r2 = t.sample_state(b, rng);
      Morphism e1 = t.sample_effect(a, rng), e2 = t.sample_effect(b, rng);
      CHECK(t.state_member(tensor(r1, r2)));
      CHECK(t.effect_member(tensor(e1, e2)));
    }
  }
}

TEST_CASE("transfer encoding round trips states and effects") {
  TheoryObject pair = TheoryObject({2, 2});
  Matrix rho(2, 2);
  rho << 0.5, Complex(0.0, 0.5), Complex(0.0, -0.5), 0.5;
  Morphism enc = cp_encode_state(pair, rho);
  // Single wire needs no reordering: the vector is rho read row by row.
  CHECK(enc.mat(0, 0) == Complex(0.5, 0.0));
  CHECK(enc.mat(1, 0) == Complex(0.0, 0.5));
  CHECK(enc.mat(2, 0) == Complex(0.0, -0.5));
  CHECK(enc.mat(3, 0) == Complex(0.5, 0.0));
  CHECK(max_abs_diff(cp_decode_state(enc), rho) < 1e-15);

  // Effect pairing computes the trace inner product.
  Morphism eff = cp_encode_effect(pair, proj(0));
  CHECK(compose(eff, enc).scalar().real() == doctest::Approx(0.5).epsilon(1e-12));

  // Frozen transfer of conjugation by the phase-flip.
  Morphism zch = cp_encode_kraus(pair, pair, {zmat()});
  Matrix tz = Matrix::Zero(4, 4);
  tz(0, 0) = 1;
  tz(1, 1) = -1;
  tz(2, 2) = -1;
  tz(3, 3) = 1;
  CHECK(max_abs_diff(zch.mat, tz) < 1e-15);

  // Acting on |+><+| yields |-><-|.
  Morphism plus_enc = cp_encode_state(pair, plus_density());
  Matrix minus_density(2, 2);
  minus_density << 0.5, -0.5, -0.5, 0.5;
  CHECK(max_abs_diff(cp_decode_state(compose(zch, plus_enc)), minus_density) < 1e-12);

  // The Choi matrix of the encoded channel matches the Choi of its Kraus op.
  Morphism z_as_map(TheoryObject::wire(2), TheoryObject::wire(2), zmat());
  CHECK(max_abs_diff(cp_choi_of(zch), choi(z_as_map)) < 1e-12);
}

TEST_CASE("interleaving makes the encoded tensor the plain product") {
  TheoryObject pair2 = TheoryObject({2, 2});
  TheoryObject pair3 = TheoryObject({3, 3});
  TheoryObject fused = fuse(pair2, pair3);

  RandomSource rng(49);
  Matrix g1 = random_ginibre(TheoryObject::wire(2), TheoryObject::wire(2), rng).mat;
  Matrix g2 = random_ginibre(TheoryObject::wire(3), TheoryObject::wire(3), rng).mat;
  Matrix r1 = g1 * g1.adjoint();
  Matrix r2 = g2 * g2.adjoint();

  Morphism joint = cp_encode_state(fused, Eigen::kroneckerProduct(r1, r2));
  Morphism split = tensor(cp_encode_state(pair2, r1), cp_encode_state(pair3, r2));
  CHECK(max_abs_diff(joint.mat, split.mat) < 1e-12);

  Morphism joint_eff = cp_encode_effect(fused, Eigen::kroneckerProduct(r1, r2));
  Morphism split_eff = tensor(cp_encode_effect(pair2, r1), cp_encode_effect(pair3, r2));
  CHECK(max_abs_diff(joint_eff.mat, split_eff.mat) < 1e-12);

  Matrix k1 = random_ginibre(TheoryObject::wire(2), TheoryObject::wire(2), rng).mat;
  Matrix k2 = random_ginibre(TheoryObject::wire(3), TheoryObject::wire(3), rng).mat;
  Morphism joint_ch = cp_encode_kraus(fused, fused, {Eigen::kroneckerProduct(k1, k2)});
  Morphism split_ch =
      tensor(cp_encode_kraus(pair2, pair2, {k1}), cp_encode_kraus(pair3, pair3, {k2}));
  CHECK(max_abs_diff(joint_ch.mat, split_ch.mat) < 1e-12);
}

TEST_CASE("membership accepts channels and rejects the transpose map") {
  TheorySpec t = builtin_cp();
  TheoryObject pair = TheoryObject({2, 2});
  CHECK(t.process_member(cp_encode_kraus(pair, pair, {zmat()})));

  Matrix tr = Matrix::Zero(4, 4);
  tr(0, 0) = 1;
  tr(1, 2) = 1;
  tr(2, 1) = 1;
  tr(3, 3) = 1;
  CHECK_FALSE(t.process_member(Morphism(pair, pair, tr)));
}

TEST_CASE("trace pairing of the maximally mixed state with discard is one") {
  TheorySpec t = builtin_cp();
  TheoryObject pair = t.make_object(2);
  Morphism mixed = cp_encode_state(pair, 0.5 * Matrix::Identity(2, 2));
  Morphism disc = *t.discard(pair);
  CHECK(prob(t, mixed, disc) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("discard sends causal states to probability one") {
  RandomSource rng(50);
  CHECK(check_discard(builtin_cp(), 40, rng, 1e-9).pass);
  CHECK(check_discard(builtin_stoch(), 40, rng, 1e-9).pass);

  TheorySpec broken = builtin_cp();
  broken.sample_causal_state = [base = builtin_cp()](const TheoryObject& a,
                                                     RandomSource& r) {
    Morphism s = base.sample_causal_state(a, r);
    return Morphism(s.dom, s.cod, 0.5 * s.mat);
  };
  CHECK_FALSE(check_discard(broken, 20, rng, 1e-9).pass);

  CHECK_THROWS_AS(check_discard(builtin_fhilb(2.0), 10, rng, 1e-9), NoDiscard);
}

TEST_CASE("scalars factor through probability calculations") {
  RandomSource rng(51);
  for (double k : {0.5, 1.0, 2.0, 3.0}) {
    TheorySpec t = builtin_fhilb(k);
    for (int i = 0; i < 30; ++i) {
      TheoryObject a = t.make_object(2 + static_cast<int>(rng.index(3)));
      Morphism rho = t.sample_state(a, rng);
      Morphism sig = t.sample_effect(a, rng);
      Complex g = rng.normal_complex();
      Morphism scaled(rho.dom, rho.cod, g * rho.mat);
      double lhs = prob(t, scaled, sig);
      double rhs = lambda_scalar(t, scalar_morphism(g)) * prob(t, rho, sig);
      CHECK(std::abs(lhs - rhs) <= 1e-9);
    }
  }
  for (const TheorySpec& t : {builtin_cp(), builtin_stoch()}) {
    for (int i = 0; i < 30; ++i) {
      TheoryObject a = t.make_object(2 + static_cast<int>(rng.index(3)));
      Morphism rho = t.sample_state(a, rng);
      Morphism sig = t.sample_effect(a, rng);
      double r = rng.uniform();
      Morphism scaled(rho.dom, rho.cod, r * rho.mat);
      double lhs = prob(t, scaled, sig);
      double rhs = lambda_scalar(t, scalar_morphism(r)) * prob(t, rho, sig);
      CHECK(std::abs(lhs - rhs) <= 1e-9);
    }
  }
}

TEST_CASE("scalar assignment is a monoid homomorphism") {
  RandomSource rng(52);
  for (double k : {0.5, 1.0, 2.0, 3.0}) {
    TheorySpec t = builtin_fhilb(k);
    CHECK(lambda_scalar(t, scalar_morphism(1.0)) == doctest::Approx(1.0).epsilon(1e-12));
    for (int i = 0; i < 25; ++i) {
      Complex g1 = rng.normal_complex(), g2 = rng.normal_complex();
      double joint = lambda_scalar(t, scalar_morphism(g1 * g2));
      double split = lambda_scalar(t, scalar_morphism(g1)) *
                     lambda_scalar(t, scalar_morphism(g2));
      CHECK(std::abs(joint - split) <= 1e-9);
      double tens = lambda_scalar(
          t, compose(scalar_morphism(g1), scalar_morphism(g2)));
      CHECK(std::abs(tens - joint) <= 1e-12);
    }
  }
  for (const TheorySpec& t : {builtin_cp(), builtin_stoch()}) {
    for (int i = 0; i < 25; ++i) {
      double r1 = rng.uniform(), r2 = rng.uniform();
      double joint = lambda_scalar(t, scalar_morphism(r1 * r2));
      double split = lambda_scalar(t, scalar_morphism(r1)) *
                     lambda_scalar(t, scalar_morphism(r2));
      CHECK(std::abs(joint - split) <= 1e-9);
    }
  }
}

TEST_CASE("registered witnesses certify nontriviality without sampling") {
  for (const TheorySpec& t :
       {builtin_fhilb(2.0), builtin_fhilb(0.5), builtin_textbook_qm(), builtin_cp(),
        builtin_stoch()}) {
    RandomSource rng(53);
    AxiomReport rep = check_axiom(t, Axiom::III, 1, rng);
    CHECK(rep.pass);
  }
}

TEST_CASE("shape and parameter errors") {
  TheorySpec t = builtin_fhilb(2.0);
  TheoryObject q2 = TheoryObject::wire(2), q3 = TheoryObject::wire(3);
  CHECK_THROWS_AS(prob(t, basis_state(q2, 0), basis_effect(q3, 0)), ObjectMismatch);
  CHECK_THROWS_AS(prob(t, basis_effect(q2, 0), basis_effect(q2, 0)), ObjectMismatch);
  CHECK_THROWS_AS(builtin("fhilb", 0.0), BadParams);
  CHECK_THROWS_AS(builtin("fhilb", -1.0), BadParams);
  CHECK_THROWS_AS(builtin("nope"), UnsupportedTheory);
  CHECK_THROWS_AS(ProbabilityRule::trace_rule().born_exponent(), BadParams);

  TheorySpec bare;
  bare.name = "bare";
  RandomSource rng(54);
  CHECK_THROWS_AS(check_axiom(bare, Axiom::I, 5, rng), SamplerUnavailable);
}

TEST_CASE("builtin dispatch by name") {
  CHECK(builtin("fhilb", 3.0).rule.born_exponent() == doctest::Approx(3.0));
  CHECK_FALSE(builtin("textbook").simplified);
  CHECK(builtin("cp").simplified);
  CHECK(builtin("stoch").simplified);
}

TEST_CASE("substochastic membership and causal structure") {
  TheorySpec t = builtin_stoch();
  TheoryObject w = TheoryObject::wire(2);

  Matrix ok(2, 2);
  ok << 0.5, 0.1, 0.3, 0.2;
  CHECK(t.process_member(Morphism(w, w, ok)));

  Matrix heavy(2, 2);
  heavy << 0.9, 0.0, 0.3, 0.0;
  CHECK_FALSE(t.process_member(Morphism(w, w, heavy)));

  Matrix neg(2, 1);
  neg << -0.1, 0.5;
  CHECK_FALSE(t.state_member(Morphism(TheoryObject::unit(), w, neg)));

  RandomSource rng(55);
  Morphism causal = t.sample_causal_state(w, rng);
  CHECK(causal.mat.real().sum() == doctest::Approx(1.0).epsilon(1e-12));
  Morphism disc = *t.discard(w);
  CHECK(prob(t, causal, disc) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_SUITE_END();
