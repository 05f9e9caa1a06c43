#include "bornforge/linalg.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bornforge/weighted.hpp"

namespace bornforge {

TheoryObject::TheoryObject(std::vector<int> f) : factors(std::move(f)) {
  for (int d : factors) {
    if (d < 1) throw BadParams("object factors must be >= 1");
  }
}

TheoryObject TheoryObject::unit() { return TheoryObject(); }

TheoryObject TheoryObject::wire(int dim) {
  if (dim < 1) throw BadParams("wire dimension must be >= 1");
  return TheoryObject({dim});
}

int TheoryObject::dim() const {
  int d = 1;
  for (int f : factors) d *= f;
  return d;
}

TheoryObject fuse(const TheoryObject& a, const TheoryObject& b) {
  std::vector<int> f = a.factors;
  f.insert(f.end(), b.factors.begin(), b.factors.end());
  return TheoryObject(std::move(f));
}

TheoryObject flatten(const TheoryObject& a) {
  int d = a.dim();
  return d == 1 ? TheoryObject::unit() : TheoryObject::wire(d);
}

Morphism::Morphism(TheoryObject dom_, TheoryObject cod_, Matrix mat_)
    : dom(std::move(dom_)), cod(std::move(cod_)), mat(std::move(mat_)) {
  if (mat.rows() != cod.dim() || mat.cols() != dom.dim()) {
    throw DimensionMismatch("matrix shape " + std::to_string(mat.rows()) + "x" +
                            std::to_string(mat.cols()) + " does not match objects " +
                            std::to_string(cod.dim()) + "x" + std::to_string(dom.dim()));
  }
}

Complex Morphism::scalar() const {
  if (!is_scalar()) throw DimensionMismatch("morphism is not a scalar");
  return mat(0, 0);
}

Morphism identity(const TheoryObject& a) {
  return Morphism(a, a, Matrix::Identity(a.dim(), a.dim()));
}

Morphism scalar_morphism(Complex value) {
  Matrix m(1, 1);
  m(0, 0) = value;
  return Morphism(TheoryObject::unit(), TheoryObject::unit(), m);
}

Morphism state_vector(const TheoryObject& a, const Vector& v) {
  if (v.size() != a.dim()) throw DimensionMismatch("state vector length mismatch");
  return Morphism(TheoryObject::unit(), a, v);
}

Morphism basis_state(const TheoryObject& a, int index) {
  Vector v = Vector::Zero(a.dim());
  v(index) = 1.0;
  return state_vector(a, v);
}

Morphism basis_effect(const TheoryObject& a, int index) {
  Matrix m = Matrix::Zero(1, a.dim());
  m(0, index) = 1.0;
  return Morphism(a, TheoryObject::unit(), m);
}

Morphism adjoint(const Morphism& f) {
  return Morphism(f.cod, f.dom, f.mat.adjoint());
}

Morphism compose(const Morphism& g, const Morphism& f) {
  if (!(f.cod == g.dom)) {
    throw DimensionMismatch("compose: codomain of inner does not match domain of outer");
  }
  return Morphism(f.dom, g.cod, g.mat * f.mat);
}

Morphism tensor(const Morphism& f, const Morphism& g) {
  Matrix m = Eigen::kroneckerProduct(f.mat, g.mat);
  return Morphism(fuse(f.dom, g.dom), fuse(f.cod, g.cod), std::move(m));
}

Morphism regroup(const Morphism& f, TheoryObject new_dom, TheoryObject new_cod) {
  if (new_dom.dim() != f.dom.dim() || new_cod.dim() != f.cod.dim()) {
    throw DimensionMismatch("regroup: dimensions must be preserved");
  }
  return Morphism(std::move(new_dom), std::move(new_cod), f.mat);
}

Morphism block_swap(const TheoryObject& left, const TheoryObject& right) {
  int l = left.dim(), r = right.dim();
  Matrix m = Matrix::Zero(l * r, l * r);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < r; ++j) m(j * l + i, i * r + j) = 1.0;
  return Morphism(fuse(left, right), fuse(right, left), std::move(m));
}

Matrix permute_factors_matrix(const TheoryObject& obj,
                              const std::vector<int>& slot_source) {
  const std::vector<int>& d = obj.factors;
  const int n = static_cast<int>(d.size());
  if (static_cast<int>(slot_source.size()) != n) {
    throw BadParams("slot_source size must equal the number of factors");
  }
  std::vector<bool> seen(n, false);
  for (int s : slot_source) {
    if (s < 0 || s >= n || seen[s]) throw BadParams("slot_source is not a permutation");
    seen[s] = true;
  }
  const int dim = obj.dim();
  std::vector<int> in_stride(n, 1);
  for (int k = n - 2; k >= 0; --k) in_stride[k] = in_stride[k + 1] * d[k + 1];
  std::vector<int> out_dims(n), out_stride(n, 1);
  for (int j = 0; j < n; ++j) out_dims[j] = d[slot_source[j]];
  for (int j = n - 2; j >= 0; --j) out_stride[j] = out_stride[j + 1] * out_dims[j + 1];

  Matrix m = Matrix::Zero(dim, dim);
  std::vector<int> idx(n, 0);
  for (int flat = 0; flat < dim; ++flat) {
    int rem = flat;
    for (int k = 0; k < n; ++k) {
      idx[k] = rem / in_stride[k];
      rem %= in_stride[k];
    }
    int out = 0;
    for (int j = 0; j < n; ++j) out += idx[slot_source[j]] * out_stride[j];
    m(out, flat) = 1.0;
  }
  return m;
}

Matrix choi(const Morphism& f) {
  const int a = f.dom.dim();
  const int b = f.cod.dim();
  Vector v(a * b);
  for (int i = 0; i < a; ++i)
    for (int al = 0; al < b; ++al) v(i * b + al) = f.mat(al, i);
  return v * v.adjoint();
}

Matrix principal_sqrt(const Matrix& p, double neg_tol) {
  Matrix h = 0.5 * (p + p.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Eigen::VectorXd ev = es.eigenvalues();
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) < -neg_tol) {
      throw NotPSD("eigenvalue " + std::to_string(ev(i)) + " below -" +
                   std::to_string(neg_tol));
    }
    ev(i) = std::sqrt(std::max(ev(i), 0.0));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix unitary_complete(const std::vector<Vector>& cols, int n) {
  const int k = static_cast<int>(cols.size());
  if (k > n) throw BadParams("more columns than the ambient dimension");
  for (int i = 0; i < k; ++i) {
    if (cols[i].size() != n) throw DimensionMismatch("column length mismatch");
    for (int j = 0; j <= i; ++j) {
      Complex g = cols[j].dot(cols[i]);
      double target = (i == j) ? 1.0 : 0.0;
      if (std::abs(g - target) > ORTHO_TOL) {
        throw NotOrthonormal("input columns are not orthonormal within tolerance");
      }
    }
  }
  Matrix u(n, n);
  for (int i = 0; i < k; ++i) u.col(i) = cols[i];
  int filled = k;
  // Canonical basis vectors in index order; a residual above threshold is
  // always available while the span is incomplete (threshold < 1/sqrt(n)).
  const double threshold = 1e-4;
  for (int j = 0; j < n && filled < n; ++j) {
    Vector v = Vector::Zero(n);
    v(j) = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (int c = 0; c < filled; ++c) v -= u.col(c).dot(v) * u.col(c);
    }
    double norm = v.norm();
    if (norm > threshold) {
      u.col(filled++) = v / norm;
    }
  }
  if (filled < n) throw NotOrthonormal("failed to complete the unitary");
  return u;
}

Morphism random_state(int dim, RandomSource& rng) {
  return random_state(TheoryObject::wire(dim), rng);
}

Morphism random_state(const TheoryObject& a, RandomSource& rng) {
  const int d = a.dim();
  Vector v(d);
  double norm = 0.0;
  do {
    for (int i = 0; i < d; ++i) v(i) = rng.normal_complex();
    norm = v.norm();
  } while (norm < 1e-12);
  return Morphism(TheoryObject::unit(), a, v / norm);
}

Morphism random_effect(int dim, RandomSource& rng) {
  return random_effect(TheoryObject::wire(dim), rng);
}

Morphism random_effect(const TheoryObject& a, RandomSource& rng) {
  return adjoint(random_state(a, rng));
}

Morphism random_ginibre(const TheoryObject& dom, const TheoryObject& cod,
                        RandomSource& rng) {
  const int r = cod.dim(), c = dom.dim();
  Matrix m(r, c);
  const double scale = 1.0 / std::sqrt(static_cast<double>(std::max(r, c)));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = scale * rng.normal_complex();
  return Morphism(dom, cod, std::move(m));
}

Morphism random_unitary(const TheoryObject& a, RandomSource& rng) {
  const int n = a.dim();
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.normal_complex();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  Vector phase(n);
  for (int i = 0; i < n; ++i) {
    Complex rii = r(i, i);
    phase(i) = std::abs(rii) < 1e-300 ? Complex(1.0, 0.0) : rii / std::abs(rii);
  }
  return Morphism(a, a, q * phase.asDiagonal());
}

Morphism random_contraction(const TheoryObject& dom, const TheoryObject& cod,
                            RandomSource& rng, double norm_bound) {
  Morphism g = random_ginibre(dom, cod, rng);
  double n = operator_norm(g.mat);
  double target = norm_bound * rng.uniform();
  if (n < 1e-12) return Morphism(dom, cod, Matrix::Zero(cod.dim(), dom.dim()));
  return Morphism(dom, cod, g.mat * (target / n));
}

double operator_norm(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.adjoint() * m);
  double top = es.eigenvalues().maxCoeff();
  return std::sqrt(std::max(top, 0.0));
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("max_abs_diff: shape mismatch");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

Vector vec_row_major(const Matrix& a) {
  Vector v(a.rows() * a.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) v(r * a.cols() + c) = a(r, c);
  return v;
}

Matrix unvec_row_major(const Vector& v, int rows, int cols) {
  if (v.size() != rows * cols) throw DimensionMismatch("unvec: length mismatch");
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = v(r * cols + c);
  return m;
}

Matrix choi_from_transfer(const Matrix& t, int dim_in, int dim_out) {
  const int a = dim_in, b = dim_out;
  if (t.rows() != b * b || t.cols() != a * a) {
    throw DimensionMismatch("transfer matrix shape mismatch");
  }
  Matrix c(a * b, a * b);
  for (int i = 0; i < a; ++i)
    for (int al = 0; al < b; ++al)
      for (int j = 0; j < a; ++j)
        for (int be = 0; be < b; ++be)
          c(i * b + al, j * b + be) = t(al * b + be, i * a + j);
  return c;
}

Matrix transfer_from_choi(const Matrix& c, int dim_in, int dim_out) {
  const int a = dim_in, b = dim_out;
  if (c.rows() != a * b || c.cols() != a * b) {
    throw DimensionMismatch("Choi matrix shape mismatch");
  }
  Matrix t(b * b, a * a);
  for (int i = 0; i < a; ++i)
    for (int al = 0; al < b; ++al)
      for (int j = 0; j < a; ++j)
        for (int be = 0; be < b; ++be)
          t(al * b + be, i * a + j) = c(i * b + al, j * b + be);
  return t;
}

WeightedSet::WeightedSet(TheoryObject dom_, TheoryObject cod_)
    : dom(std::move(dom_)), cod(std::move(cod_)) {}

WeightedSet::WeightedSet(TheoryObject dom_, TheoryObject cod_,
                         std::vector<WeightedItem> items_)
    : dom(std::move(dom_)), cod(std::move(cod_)), items(std::move(items_)) {
  if (items.size() > WEIGHTED_SET_CAP) {
    throw CapacityExceeded("weighted set exceeds " + std::to_string(WEIGHTED_SET_CAP) +
                           " items");
  }
  for (const WeightedItem& it : items) {
    if (!(it.weight > 0.0)) throw BadParams("weights must be strictly positive");
    if (!(it.morphism.dom == dom) || !(it.morphism.cod == cod)) {
      throw ObjectMismatch("weighted set items must share dom/cod");
    }
  }
}

WeightedSet WeightedSet::zero(TheoryObject dom_, TheoryObject cod_) {
  return WeightedSet(std::move(dom_), std::move(cod_));
}

WeightedSet WeightedSet::singleton(Morphism m, double weight) {
  TheoryObject d = m.dom, c = m.cod;
  std::vector<WeightedItem> items;
  items.push_back({std::move(m), weight});
  return WeightedSet(std::move(d), std::move(c), std::move(items));
}

double WeightedSet::total_weight() const {
  double w = 0.0;
  for (const WeightedItem& it : items) w += it.weight;
  return w;
}

Matrix choi_of_weighted(const WeightedSet& ws) {
  const int n = ws.dom.dim() * ws.cod.dim();
  Matrix c = Matrix::Zero(n, n);
  for (const WeightedItem& it : ws.items) c += it.weight * choi(it.morphism);
  return c;
}

WeightedSet kraus_from_choi(const Matrix& c, int dim_in, int dim_out,
                            double neg_tol, double drop_tol) {
  const int n = dim_in * dim_out;
  if (c.rows() != n || c.cols() != n) {
    throw DimensionMismatch("Choi matrix shape does not match wire dimensions");
  }
  Matrix h = 0.5 * (c + c.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  std::vector<WeightedItem> items;
  for (int i = 0; i < n; ++i) {
    double ev = es.eigenvalues()(i);
    if (ev < -neg_tol) {
      throw NotPSD("Choi eigenvalue " + std::to_string(ev) + " below -" +
                   std::to_string(neg_tol));
    }
    if (ev <= drop_tol) continue;
    Vector u = es.eigenvectors().col(i);
    // u[(i, alpha)] = K(alpha, i); unvec over (dom, cod) then transpose.
    Matrix k = unvec_row_major(u, dim_in, dim_out).transpose();
    items.push_back({Morphism(TheoryObject::wire(dim_in), TheoryObject::wire(dim_out),
                              std::move(k)),
                     ev});
  }
  return WeightedSet(TheoryObject::wire(dim_in), TheoryObject::wire(dim_out),
                     std::move(items));
}

}  // namespace bornforge
