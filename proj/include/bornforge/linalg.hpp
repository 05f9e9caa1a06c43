#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "bornforge/errors.hpp"
#include "bornforge/random.hpp"

namespace bornforge {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/** Tolerance for algebraic identities checked directly on matrix entries. */
inline constexpr double ATOL = 1e-9;

/**
 * Tolerance for quantities that pass through eigendecompositions, dilations,
 * or other chained factorizations.
 */
inline constexpr double PROBE_TOL = 1e-7;

/** Orthonormality tolerance accepted by unitary_complete. */
inline constexpr double ORTHO_TOL = 1e-8;

/**
 * A finite-dimensional system: an ordered list of tensor factor dimensions.
 * The monoidal unit is the empty list with dim 1. Object equality is
 * factor-list equality; tensoring concatenates factor lists, so associativity
 * and unit laws hold on the nose.
 */
struct TheoryObject {
  std::vector<int> factors;

  TheoryObject() = default;
  explicit TheoryObject(std::vector<int> f);

  /** The monoidal unit (empty factor list, dim 1). */
  static TheoryObject unit();

  /** Single wire of the given dimension. */
  static TheoryObject wire(int dim);

  /** Product of factors, exact integer arithmetic. */
  int dim() const;

  bool is_unit() const { return factors.empty(); }

  bool operator==(const TheoryObject&) const = default;
};

/** Concatenated factor lists (the strict tensor on objects). */
TheoryObject fuse(const TheoryObject& a, const TheoryObject& b);

/**
 * Regrouping helper: the same underlying space as a single wire (or the unit
 * when dim is 1). Used where constructions need rebracketed wires.
 */
TheoryObject flatten(const TheoryObject& a);

/**
 * A morphism of the matrix-interpreted theory: a complex matrix of shape
 * (cod.dim x dom.dim) with declared domain/codomain objects. States have
 * dom = unit, effects have cod = unit, scalars have both.
 */
struct Morphism {
  TheoryObject dom;
  TheoryObject cod;
  Matrix mat;

  Morphism(TheoryObject dom_, TheoryObject cod_, Matrix mat_);

  bool is_state() const { return dom.dim() == 1; }
  bool is_effect() const { return cod.dim() == 1; }
  bool is_scalar() const { return is_state() && is_effect(); }

  /** The single entry; requires is_scalar(). */
  Complex scalar() const;
};

/** Identity morphism on an object. */
Morphism identity(const TheoryObject& a);

/** Scalar morphism (1x1). */
Morphism scalar_morphism(Complex value);

/** State with the given coordinate vector on the object. */
Morphism state_vector(const TheoryObject& a, const Vector& v);

/** Computational basis state |index> on the object. */
Morphism basis_state(const TheoryObject& a, int index);

/** Computational basis effect <index| on the object. */
Morphism basis_effect(const TheoryObject& a, int index);

/** Conjugate transpose with swapped objects. Numerical plumbing only. */
Morphism adjoint(const Morphism& f);

/** Sequential composition g after f. Requires f.cod == g.dom. */
Morphism compose(const Morphism& g, const Morphism& f);

/** Parallel composition by Kronecker product; factor lists concatenate. */
Morphism tensor(const Morphism& f, const Morphism& g);

/** Relabel dom/cod factor lists without touching entries; dims must agree. */
Morphism regroup(const Morphism& f, TheoryObject new_dom, TheoryObject new_cod);

/**
 * The symmetry: permutation unitary from left (x) right to right (x) left,
 * mapping v (x) w to w (x) v.
 */
Morphism block_swap(const TheoryObject& left, const TheoryObject& right);

/**
 * Permutation unitary on the factors of obj. slot_source[j] names the input
 * factor that lands in output slot j; the result maps v_0 (x) ... (x) v_{n-1}
 * to v_{slot_source[0]} (x) ... (x) v_{slot_source[n-1]}.
 */
Matrix permute_factors_matrix(const TheoryObject& obj,
                              const std::vector<int>& slot_source);

/**
 * Choi matrix of the rank-1 map f(.)f^dagger for f : A -> B. With
 * v[(i, a)] = f(a, i) this is C = v v^dagger of shape (dimA*dimB)^2, so C is
 * positive semidefinite by construction. Block (i, j) holds f E_ij f^dagger.
 */
Matrix choi(const Morphism& f);

/**
 * Hermitian principal square root. Eigenvalues in (-neg_tol, 0) are clamped
 * to 0; anything below -neg_tol raises NotPSD.
 */
Matrix principal_sqrt(const Matrix& P, double neg_tol = ATOL);

/**
 * Completes k orthonormal columns of C^n to an n x n unitary whose first k
 * columns equal the input. Deterministic: modified Gram-Schmidt against
 * canonical basis vectors in index order with one reorthogonalization pass.
 * Raises NotOrthonormal if the input is not orthonormal within ORTHO_TOL.
 */
Matrix unitary_complete(const std::vector<Vector>& cols, int n);

/** Haar-random unit state on a wire of the given dimension. */
Morphism random_state(int dim, RandomSource& rng);

/** Haar-random unit state on an object. */
Morphism random_state(const TheoryObject& a, RandomSource& rng);

/** Conjugate transpose of an independent Haar-random state. */
Morphism random_effect(int dim, RandomSource& rng);

Morphism random_effect(const TheoryObject& a, RandomSource& rng);

/** Ginibre matrix (i.i.d. complex Gaussian entries scaled by 1/sqrt(dim)). */
Morphism random_ginibre(const TheoryObject& dom, const TheoryObject& cod,
                        RandomSource& rng);

/** Haar-random unitary via QR of a Ginibre matrix with phase correction. */
Morphism random_unitary(const TheoryObject& a, RandomSource& rng);

/** Random morphism with operator norm at most the given bound (default 1). */
Morphism random_contraction(const TheoryObject& dom, const TheoryObject& cod,
                            RandomSource& rng, double norm_bound = 1.0);

/** Largest singular value. */
double operator_norm(const Matrix& m);

/** Entrywise max-norm of the difference. */
double max_abs_diff(const Matrix& a, const Matrix& b);

/** Row-major vectorization: vec[(r, c)] = A(r, c) with r major. */
Vector vec_row_major(const Matrix& a);

/** Inverse of vec_row_major. */
Matrix unvec_row_major(const Vector& v, int rows, int cols);

/**
 * Reindexes a transfer matrix T (b^2 x a^2, T = sum K (x) conj(K)) into the
 * Choi matrix C with C[(i, alpha), (j, beta)] = T[(alpha, beta), (i, j)].
 */
Matrix choi_from_transfer(const Matrix& t, int dim_in, int dim_out);

/** Inverse reshuffle of choi_from_transfer. */
Matrix transfer_from_choi(const Matrix& c, int dim_in, int dim_out);

}  // namespace bornforge
