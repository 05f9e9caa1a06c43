#pragma once

#include <vector>

#include "bornforge/linalg.hpp"

namespace bornforge {

/** Item cap for weighted sets; pairwise products grow multiplicatively. */
inline constexpr std::size_t WEIGHTED_SET_CAP = 64;

struct WeightedItem {
  Morphism morphism;
  double weight;
};

/**
 * A finite set of (morphism, positive weight) pairs sharing dom/cod; the
 * morphisms of the summed theory. The empty set is the zero morphism.
 * Weights are strictly positive; items are kept as a raw list with no
 * merging, since equality always lives at class level.
 */
struct WeightedSet {
  TheoryObject dom;
  TheoryObject cod;
  std::vector<WeightedItem> items;

  WeightedSet(TheoryObject dom_, TheoryObject cod_);
  WeightedSet(TheoryObject dom_, TheoryObject cod_, std::vector<WeightedItem> items_);

  /** The zero morphism between the given objects. */
  static WeightedSet zero(TheoryObject dom_, TheoryObject cod_);

  static WeightedSet singleton(Morphism m, double weight = 1.0);

  std::size_t size() const { return items.size(); }

  double total_weight() const;
};

/** Sum of w_i * choi(f_i); the canonical matrix of the noisy quotient. */
Matrix choi_of_weighted(const WeightedSet& ws);

/**
 * Eigendecomposition-derived Kraus items of a positive semidefinite Choi
 * matrix for a map with the given wire dimensions: weights are eigenvalues,
 * morphisms are unit-Frobenius-norm eigenvector reshapes. Eigenvalues in
 * (-neg_tol, drop_tol] are dropped; below -neg_tol raises NotPSD. The result
 * reconstructs the input within 1e-9 via choi_of_weighted.
 */
WeightedSet kraus_from_choi(const Matrix& c, int dim_in, int dim_out,
                            double neg_tol = ATOL, double drop_tol = 1e-12);

}  // namespace bornforge
