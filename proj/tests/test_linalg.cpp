#include <doctest.h>

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <complex>

#include "bornforge/linalg.hpp"
#include "bornforge/weighted.hpp"

using namespace bornforge;

namespace {

const Complex I_UNIT(0.0, 1.0);

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Morphism qubit_op(const Matrix& m) {
  return Morphism(TheoryObject::wire(2), TheoryObject::wire(2), m);
}

Morphism ket(std::initializer_list<Complex> amps) {
  Vector v(static_cast<int>(amps.size()));
  int i = 0;
  for (Complex a : amps) v(i++) = a;
  return state_vector(TheoryObject::wire(v.size()), v);
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("objects: unit, wires, fuse, flatten") {
  CHECK(TheoryObject::unit().dim() == 1);
  CHECK(TheoryObject::unit().is_unit());
  CHECK(TheoryObject::wire(3).dim() == 3);
  TheoryObject a({2, 3});
  CHECK(a.dim() == 6);
  CHECK(fuse(a, TheoryObject::wire(4)) == TheoryObject({2, 3, 4}));
  CHECK(fuse(a, TheoryObject::unit()) == a);
  CHECK(flatten(a) == TheoryObject::wire(6));
  CHECK(flatten(TheoryObject::wire(1)) == TheoryObject::unit());
  CHECK_THROWS_AS(TheoryObject({2, 0}), BadParams);
}

TEST_CASE("morphism shape validation") {
  Matrix bad(3, 2);
  bad.setZero();
  CHECK_THROWS_AS(Morphism(TheoryObject::wire(2), TheoryObject::wire(2), bad),
                  DimensionMismatch);
  Morphism s = scalar_morphism(Complex(0.5, 0.25));
  CHECK(s.is_scalar());
  CHECK(s.scalar() == Complex(0.5, 0.25));
}

TEST_CASE("compose: identity, orthonormal overlaps, shape errors") {
  RandomSource rng(11);
  Morphism f = random_ginibre(TheoryObject::wire(3), TheoryObject::wire(2), rng);
  Morphism idf = compose(identity(TheoryObject::wire(2)), f);
  CHECK(max_abs_diff(idf.mat, f.mat) == 0.0);

  Morphism k0 = basis_state(TheoryObject::wire(2), 0);
  Morphism b0 = basis_effect(TheoryObject::wire(2), 0);
  CHECK(compose(b0, k0).scalar() == Complex(1.0, 0.0));

  // <+|0> = 1/sqrt(2).
  Morphism plus_effect = adjoint(ket({1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}));
  CHECK(std::abs(compose(plus_effect, k0).scalar() - 1.0 / std::sqrt(2.0)) < 1e-15);

  Morphism g = random_ginibre(TheoryObject::wire(4), TheoryObject::wire(2), rng);
  CHECK_THROWS_AS(compose(g, f), DimensionMismatch);
}

TEST_CASE("tensor: frozen Kronecker oracle and unit laws") {
  Morphism xz = tensor(qubit_op(pauli_x()), qubit_op(pauli_z()));
  Matrix expected(4, 4);
  expected << 0, 0, 1, 0,
              0, 0, 0, -1,
              1, 0, 0, 0,
              0, -1, 0, 0;
  CHECK(max_abs_diff(xz.mat, expected) == 0.0);
  CHECK(xz.dom == TheoryObject({2, 2}));

  // (X (x) Z)|00> = |1> (x) |0> = e_2.
  Morphism k00 = tensor(basis_state(TheoryObject::wire(2), 0),
                        basis_state(TheoryObject::wire(2), 0));
  Vector out = compose(xz, k00).mat.col(0);
  CHECK(std::abs(out(2) - Complex(1.0, 0.0)) == 0.0);
  CHECK(out.cwiseAbs().sum() == 1.0);

  // |0> (x) |1> = e_1.
  Morphism k01 = tensor(basis_state(TheoryObject::wire(2), 0),
                        basis_state(TheoryObject::wire(2), 1));
  CHECK(k01.mat(1, 0) == Complex(1.0, 0.0));
  CHECK(k01.mat.cwiseAbs().sum() == 1.0);

  // Tensoring with the unit scalar is the strict unitor.
  RandomSource rng(5);
  Morphism f = random_ginibre(TheoryObject::wire(3), TheoryObject::wire(2), rng);
  Morphism fu = tensor(f, scalar_morphism(1.0));
  CHECK(fu.dom == f.dom);
  CHECK(fu.cod == f.cod);
  CHECK(max_abs_diff(fu.mat, f.mat) == 0.0);
}

TEST_CASE("bifunctoriality and associativity on random morphisms") {
  RandomSource rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    int a = 1 + static_cast<int>(rng.index(4));
    int b = 1 + static_cast<int>(rng.index(4));
    int c = 1 + static_cast<int>(rng.index(4));
    TheoryObject A = TheoryObject::wire(a), B = TheoryObject::wire(b),
                 C = TheoryObject::wire(c);
    Morphism f1 = random_ginibre(A, B, rng), g1 = random_ginibre(B, C, rng);
    Morphism f2 = random_ginibre(B, A, rng), g2 = random_ginibre(A, C, rng);
    Morphism lhs = tensor(compose(g1, f1), compose(g2, f2));
    Morphism rhs = compose(tensor(g1, g2), tensor(f1, f2));
    CHECK(max_abs_diff(lhs.mat, rhs.mat) < 1e-12);
    CHECK(lhs.dom == rhs.dom);
    CHECK(lhs.cod == rhs.cod);

    Morphism h = random_ginibre(C, A, rng);
    Morphism assoc1 = compose(h, compose(g1, f1));
    Morphism assoc2 = compose(compose(h, g1), f1);
    CHECK(max_abs_diff(assoc1.mat, assoc2.mat) < 1e-12);

    Morphism t1 = tensor(tensor(f1, f2), h);
    Morphism t2 = tensor(f1, tensor(f2, h));
    CHECK(max_abs_diff(t1.mat, t2.mat) < 1e-12);
    CHECK(t1.dom == t2.dom);
  }
}

TEST_CASE("choi: frozen oracles for identity, projector, Z") {
  Matrix ci = choi(qubit_op(Matrix::Identity(2, 2)));
  Matrix expected_i = Matrix::Zero(4, 4);
  expected_i(0, 0) = expected_i(0, 3) = expected_i(3, 0) = expected_i(3, 3) = 1;
  CHECK(max_abs_diff(ci, expected_i) == 0.0);

  Matrix proj(2, 2);
  proj << 1, 0, 0, 0;
  Matrix cp = choi(qubit_op(proj));
  Matrix expected_p = Matrix::Zero(4, 4);
  expected_p(0, 0) = 1;
  CHECK(max_abs_diff(cp, expected_p) == 0.0);

  Matrix cz = choi(qubit_op(pauli_z()));
  Matrix expected_z = Matrix::Zero(4, 4);
  expected_z(0, 0) = expected_z(3, 3) = 1;
  expected_z(0, 3) = expected_z(3, 0) = -1;
  CHECK(max_abs_diff(cz, expected_z) == 0.0);

  // choi of a state is its density matrix.
  Morphism psi = ket({Complex(0.6, 0.0), Complex(0.0, 0.8)});
  Matrix rho = choi(psi);
  CHECK(rho.rows() == 2);
  CHECK(std::abs(rho(0, 0) - Complex(0.36, 0.0)) < 1e-15);
  CHECK(std::abs(rho(1, 1) - Complex(0.64, 0.0)) < 1e-15);
  CHECK(std::abs(rho(0, 1) - Complex(0.0, -0.48)) < 1e-15);
}

TEST_CASE("choi linearity under weights") {
  RandomSource rng(7);
  Morphism f = random_ginibre(TheoryObject::wire(2), TheoryObject::wire(3), rng);
  WeightedSet ws = WeightedSet::singleton(f, 0.37);
  CHECK(max_abs_diff(choi_of_weighted(ws), 0.37 * choi(f)) < 1e-15);
}

TEST_CASE("kraus_from_choi: identity channel, dephasing, zero") {
  Matrix ci = choi(qubit_op(Matrix::Identity(2, 2)));
  WeightedSet ks = kraus_from_choi(ci, 2, 2);
  REQUIRE(ks.size() == 1);
  CHECK(std::abs(ks.items[0].weight - 2.0) < 1e-12);
  // Kraus proportional to the identity: |c| = 1/sqrt(2) on the diagonal.
  const Matrix& k = ks.items[0].morphism.mat;
  CHECK(std::abs(k(0, 1)) < 1e-12);
  CHECK(std::abs(k(1, 0)) < 1e-12);
  CHECK(std::abs(k(0, 0) - k(1, 1)) < 1e-12);
  CHECK(std::abs(std::abs(k(0, 0)) - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(max_abs_diff(choi_of_weighted(ks), ci) < 1e-9);

  Matrix dephase = Matrix::Zero(4, 4);
  dephase(0, 0) = dephase(3, 3) = 1;
  WeightedSet ks2 = kraus_from_choi(dephase, 2, 2);
  REQUIRE(ks2.size() == 2);
  for (const auto& item : ks2.items) {
    CHECK(std::abs(item.weight - 1.0) < 1e-12);
    // Unitary mixing of equal eigenvalues stays inside the diagonal sector.
    CHECK(std::abs(item.morphism.mat(0, 1)) < 1e-12);
    CHECK(std::abs(item.morphism.mat(1, 0)) < 1e-12);
  }
  CHECK(max_abs_diff(choi_of_weighted(ks2), dephase) < 1e-9);

  WeightedSet ks3 = kraus_from_choi(Matrix::Zero(4, 4), 2, 2);
  CHECK(ks3.size() == 0);
}

TEST_CASE("kraus_from_choi round trip is a Choi fixed point") {
  RandomSource rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    int a = 1 + static_cast<int>(rng.index(3));
    int b = 1 + static_cast<int>(rng.index(3));
    int n = a * b;
    Matrix g(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) g(r, c) = rng.normal_complex();
    Matrix C = g * g.adjoint();
    WeightedSet ks = kraus_from_choi(C, a, b);
    CHECK(max_abs_diff(choi_of_weighted(ks), C) < 1e-9);
    for (const auto& item : ks.items) CHECK(item.weight > 0.0);
  }
  Matrix neg = -Matrix::Identity(4, 4);
  CHECK_THROWS_AS(kraus_from_choi(neg, 2, 2), NotPSD);
}

TEST_CASE("principal_sqrt: frozen values and clamping") {
  Matrix id2 = Matrix::Identity(2, 2);
  CHECK(max_abs_diff(principal_sqrt(id2), id2) < 1e-12);

  Matrix d(2, 2);
  d << 4, 0, 0, 9;
  Matrix expected(2, 2);
  expected << 2, 0, 0, 3;
  CHECK(max_abs_diff(principal_sqrt(d), expected) < 1e-12);

  Matrix p = Matrix::Zero(2, 2);
  p(1, 1) = 0.75;
  Matrix sp = principal_sqrt(p);
  CHECK(std::abs(sp(1, 1) - std::sqrt(0.75)) < 1e-12);
  CHECK(std::abs(sp(0, 0)) < 1e-12);

  // Roundoff negatives are clamped, genuine negatives rejected.
  Matrix tiny = Matrix::Identity(2, 2);
  tiny(0, 0) = -5e-10;
  Matrix st = principal_sqrt(tiny);
  CHECK(std::abs(st(0, 0)) < 1e-4);
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 0) = -1e-6;
  CHECK_THROWS_AS(principal_sqrt(bad), NotPSD);

  RandomSource rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 2 + static_cast<int>(rng.index(3));
    Matrix g(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) g(r, c) = rng.normal_complex();
    Matrix psd = g * g.adjoint();
    Matrix root = principal_sqrt(psd);
    CHECK(max_abs_diff(root * root, psd) < 1e-9);
    CHECK(max_abs_diff(root, root.adjoint()) < 1e-10);
  }
}

TEST_CASE("unitary_complete: basis cases and random completions") {
  Vector e0(2);
  e0 << 1, 0;
  Matrix u = unitary_complete({e0}, 2);
  CHECK(max_abs_diff(u.col(0), e0) == 0.0);
  CHECK(max_abs_diff(u.adjoint() * u, Matrix::Identity(2, 2)) < 1e-9);

  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  Matrix u2 = unitary_complete({plus}, 2);
  CHECK(max_abs_diff(u2.col(0), plus) < 1e-15);
  CHECK(max_abs_diff(u2.adjoint() * u2, Matrix::Identity(2, 2)) < 1e-9);

  // Passing all columns of a unitary returns that unitary.
  RandomSource rng(23);
  Morphism w = random_unitary(TheoryObject::wire(3), rng);
  std::vector<Vector> cols;
  for (int c = 0; c < 3; ++c) cols.push_back(w.mat.col(c));
  Matrix u3 = unitary_complete(cols, 3);
  CHECK(max_abs_diff(u3, w.mat) == 0.0);

  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + static_cast<int>(rng.index(5));
    int k = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(n)));
    Morphism v = random_unitary(TheoryObject::wire(n), rng);
    std::vector<Vector> given;
    for (int c = 0; c < k; ++c) given.push_back(v.mat.col(c));
    Matrix uc = unitary_complete(given, n);
    for (int c = 0; c < k; ++c) CHECK(max_abs_diff(uc.col(c), given[c]) == 0.0);
    CHECK(max_abs_diff(uc.adjoint() * uc, Matrix::Identity(n, n)) < 1e-9);
  }

  Vector long_v(2);
  long_v << 1.0, 0.5;
  CHECK_THROWS_AS(unitary_complete({long_v}, 2), NotOrthonormal);
}

TEST_CASE("random sampling: norms, dim-1 ray, determinism, splits") {
  RandomSource rng(99);
  Morphism s1 = random_state(1, rng);
  CHECK(std::abs(std::abs(s1.scalar()) - 1.0) < 1e-12);

  for (int d = 1; d <= 5; ++d) {
    Morphism s = random_state(d, rng);
    CHECK(std::abs(s.mat.norm() - 1.0) < 1e-12);
    Morphism e = random_effect(d, rng);
    CHECK(std::abs(e.mat.norm() - 1.0) < 1e-12);
    CHECK(e.cod.is_unit());
  }

  RandomSource a(1234), b(1234);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  // Splits depend only on the original seed and stream id.
  RandomSource parent(77);
  RandomSource c1 = parent.split(3);
  parent.uniform();
  parent.uniform();
  RandomSource c2 = parent.split(3);
  for (int i = 0; i < 50; ++i) CHECK(c1.next_u64() == c2.next_u64());

  Morphism u = random_unitary(TheoryObject::wire(4), rng);
  CHECK(max_abs_diff(u.mat.adjoint() * u.mat, Matrix::Identity(4, 4)) < 1e-12);

  Morphism contr = random_contraction(TheoryObject::wire(3), TheoryObject::wire(2), rng);
  CHECK(operator_norm(contr.mat) <= 1.0 + 1e-12);
}

TEST_CASE("haar moment: mean squared overlap is 1/d at d = 2") {
  RandomSource rng(2024);
  const int n = 100000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    Morphism s = random_state(2, rng);
    Morphism e = random_effect(2, rng);
    Complex z = compose(e, s).scalar();
    acc += std::norm(z);
  }
  double mean = acc / n;
  CHECK(std::abs(mean - 0.5) < 0.01);
}

TEST_CASE("block_swap and factor permutations") {
  TheoryObject A = TheoryObject::wire(2), B = TheoryObject::wire(3);
  Morphism sw = block_swap(A, B);
  RandomSource rng(31);
  Morphism va = random_state(2, rng), vb = random_state(3, rng);
  Morphism lhs = compose(sw, tensor(va, vb));
  Morphism rhs = tensor(vb, va);
  CHECK(max_abs_diff(lhs.mat, rhs.mat) < 1e-15);
  CHECK(lhs.cod == TheoryObject({3, 2}));

  Morphism back = compose(block_swap(B, A), sw);
  CHECK(max_abs_diff(back.mat, Matrix::Identity(6, 6)) == 0.0);

  // Unit blocks swap trivially.
  Morphism swu = block_swap(A, TheoryObject::unit());
  CHECK(max_abs_diff(swu.mat, Matrix::Identity(2, 2)) == 0.0);

  // Cyclic permutation of three wires.
  TheoryObject obj({2, 3, 2});
  Matrix p = permute_factors_matrix(obj, {2, 0, 1});
  Morphism v0 = random_state(2, rng), v1 = random_state(3, rng),
           v2 = random_state(2, rng);
  Vector in = tensor(tensor(v0, v1), v2).mat.col(0);
  Vector expect = tensor(tensor(v2, v0), v1).mat.col(0);
  CHECK(max_abs_diff(p * in, expect) < 1e-15);
}

TEST_CASE("regroup relabels without touching entries") {
  RandomSource rng(8);
  Morphism f = random_ginibre(TheoryObject({2, 2}), TheoryObject::wire(4), rng);
  Morphism g = regroup(f, TheoryObject::wire(4), TheoryObject({2, 2}));
  CHECK(g.dom == TheoryObject::wire(4));
  CHECK(g.cod == TheoryObject({2, 2}));
  CHECK(max_abs_diff(f.mat, g.mat) == 0.0);
  CHECK_THROWS_AS(regroup(f, TheoryObject::wire(3), TheoryObject::wire(4)),
                  DimensionMismatch);
}

TEST_CASE("transfer/choi reshuffle: Z channel oracle and round trip") {
  // Transfer matrix of the Z conjugation channel is Z (x) conj(Z).
  Matrix t = Eigen::kroneckerProduct(pauli_z(), pauli_z().conjugate()).eval();
  Matrix c = choi_from_transfer(t, 2, 2);
  CHECK(max_abs_diff(c, choi(qubit_op(pauli_z()))) == 0.0);
  CHECK(max_abs_diff(transfer_from_choi(c, 2, 2), t) == 0.0);

  RandomSource rng(55);
  for (int trial = 0; trial < 10; ++trial) {
    int a = 1 + static_cast<int>(rng.index(3));
    int b = 1 + static_cast<int>(rng.index(3));
    Matrix m(b * b, a * a);
    for (int r = 0; r < m.rows(); ++r)
      for (int col = 0; col < m.cols(); ++col) m(r, col) = rng.normal_complex();
    CHECK(max_abs_diff(transfer_from_choi(choi_from_transfer(m, a, b), a, b), m) ==
          0.0);
  }
}

TEST_CASE("vec/unvec row major round trip") {
  RandomSource rng(14);
  Matrix m(3, 2);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 2; ++c) m(r, c) = rng.normal_complex();
  Vector v = vec_row_major(m);
  CHECK(v(0) == m(0, 0));
  CHECK(v(1) == m(0, 1));
  CHECK(v(2) == m(1, 0));
  CHECK(max_abs_diff(unvec_row_major(v, 3, 2), m) == 0.0);
}

TEST_CASE("operator_norm oracle") {
  Matrix n(2, 2);
  n << 0, 2, 0, 0;
  CHECK(std::abs(operator_norm(n) - 2.0) < 1e-12);
  Matrix d(2, 2);
  d << 3, 0, 0, -4;
  CHECK(std::abs(operator_norm(d) - 4.0) < 1e-12);
}

TEST_CASE("weighted set invariants") {
  RandomSource rng(4);
  Morphism f = random_ginibre(TheoryObject::wire(2), TheoryObject::wire(2), rng);
  CHECK_THROWS_AS(WeightedSet::singleton(f, 0.0), BadParams);
  CHECK_THROWS_AS(WeightedSet::singleton(f, -1.0), BadParams);

  WeightedSet z = WeightedSet::zero(TheoryObject::wire(2), TheoryObject::wire(2));
  CHECK(z.size() == 0);
  CHECK(z.total_weight() == 0.0);

  Morphism g = random_ginibre(TheoryObject::wire(3), TheoryObject::wire(2), rng);
  std::vector<WeightedItem> mixed;
  mixed.push_back({f, 1.0});
  mixed.push_back({g, 1.0});
  CHECK_THROWS_AS(WeightedSet(f.dom, f.cod, mixed), ObjectMismatch);
}

}  // TEST_SUITE
