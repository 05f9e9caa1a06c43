#include "bornforge/quotient.hpp"

#include <algorithm>
#include <cmath>

#include "bornforge/format.hpp"

namespace bornforge {

namespace {

constexpr double CANON_PSD_TOL = 1e-7;

TheoryObject make_obj(const TheorySpec& t, int d) {
  if (t.make_object) return t.make_object(d);
  return d == 1 ? TheoryObject::unit() : TheoryObject::wire(d);
}

std::vector<int> probe_dims(std::vector<int> dims, int cod_dim) {
  if (dims.empty()) dims = {1, 2, cod_dim};
  std::vector<int> out;
  for (int d : dims) {
    if (d < 1) throw BadParams("probe ancilla dimension must be >= 1");
    if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(d);
  }
  return out;
}

}  // namespace

CanonicalClass canonicalize(const TheorySpec& t, const Morphism& f) {
  Matrix canon;
  if (t.rule.is_born_power() && t.simplified) {
    canon = choi(f);
  } else if (t.rule.is_trace_rule()) {
    canon = cp_choi_of(f);
  } else {
    throw UnsupportedTheory("no canonical form registered for rule '" +
                            t.rule.describe() + "'");
  }
  if (max_abs_diff(canon, canon.adjoint()) > CANON_PSD_TOL) {
    throw NotPSD("canonical matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (canon + canon.adjoint()),
                                           Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -CANON_PSD_TOL) {
    throw NotPSD("canonical matrix has eigenvalue " +
                 fmt_double(es.eigenvalues().minCoeff()));
  }
  return CanonicalClass{t.name, f, std::move(canon)};
}

bool same_class(const CanonicalClass& a, const CanonicalClass& b, double tol) {
  if (a.canon.rows() != b.canon.rows() || a.canon.cols() != b.canon.cols()) {
    return false;
  }
  return max_abs_diff(a.canon, b.canon) <= tol;
}

GTriple make_triple(const TheorySpec& t, Morphism u, Morphism rho, Morphism sigma,
                    TheoryObject dom, TheoryObject cod) {
  if (!rho.is_state() || !sigma.is_effect()) {
    throw ObjectMismatch("ancilla parts must be a state and an effect");
  }
  if (!(u.dom == fuse(dom, rho.cod)) || !(u.cod == fuse(cod, sigma.dom))) {
    throw ObjectMismatch("triple wiring does not match dom/cod and ancillas");
  }
  if (t.process_member && !t.process_member(u)) {
    throw NotMember("wired morphism is not physical in theory '" + t.name + "'");
  }
  if (t.state_member && !t.state_member(rho)) {
    throw NotMember("ancilla state is not physical in theory '" + t.name + "'");
  }
  if (t.effect_member && !t.effect_member(sigma)) {
    throw NotMember("ancilla effect is not physical in theory '" + t.name + "'");
  }
  return GTriple{std::move(u), std::move(rho), std::move(sigma), std::move(dom),
                 std::move(cod)};
}

GTriple g_identity(const TheorySpec& t, const TheoryObject& a) {
  return make_triple(t, identity(a), scalar_morphism(1.0), scalar_morphism(1.0), a, a);
}

GTriple g_embed(const TheorySpec& t, const Morphism& f) {
  return make_triple(t, f, scalar_morphism(1.0), scalar_morphism(1.0), f.dom, f.cod);
}

GTriple g_swap(const TheorySpec& t, const TheoryObject& a, const TheoryObject& b) {
  return make_triple(t, block_swap(a, b), scalar_morphism(1.0), scalar_morphism(1.0),
                     fuse(a, b), fuse(b, a));
}

GTriple g_compose(const TheorySpec& t, const GTriple& a, const GTriple& b) {
  if (!(a.dom == b.cod)) {
    throw ObjectMismatch("composition needs matching middle object");
  }
  const TheoryObject xu = a.anc_in(), xpu = a.anc_out();
  const TheoryObject xv = b.anc_in(), xpv = b.anc_out();
  Morphism w = compose(
      tensor(identity(a.cod), block_swap(xpu, xpv)),
      compose(tensor(a.U, identity(xpv)),
              compose(tensor(identity(b.cod), block_swap(xpv, xu)),
                      tensor(b.U, identity(xu)))));
  return make_triple(t, std::move(w), tensor(b.rho, a.rho), tensor(b.sigma, a.sigma),
                     b.dom, a.cod);
}

GTriple g_tensor(const TheorySpec& t, const GTriple& a, const GTriple& b) {
  const TheoryObject xu = a.anc_in(), xpu = a.anc_out();
  const TheoryObject xv = b.anc_in(), xpv = b.anc_out();
  Morphism w = compose(
      tensor(identity(a.cod), tensor(block_swap(xpu, b.cod), identity(xpv))),
      compose(tensor(a.U, b.U),
              tensor(identity(a.dom), tensor(block_swap(b.dom, xu), identity(xv)))));
  return make_triple(t, std::move(w), tensor(a.rho, b.rho), tensor(a.sigma, b.sigma),
                     fuse(a.dom, b.dom), fuse(a.cod, b.cod));
}

Morphism g_collapse(const GTriple& x) {
  return compose(tensor(identity(x.cod), x.sigma),
                 compose(x.U, tensor(identity(x.dom), x.rho)));
}

double g_prob(const TheorySpec& t, const GTriple& s, const GTriple& e) {
  if (!s.dom.is_unit() || !e.cod.is_unit()) {
    throw ObjectMismatch("g_prob expects a state triple and an effect triple");
  }
  if (!(s.cod == e.dom)) {
    throw ObjectMismatch("state and effect triples live on different objects");
  }
  GTriple w = g_compose(t, e, s);
  return prob(t, compose(w.U, w.rho), w.sigma);
}

double lambda_G(const TheorySpec& t, const GTriple& x) {
  if (!x.dom.is_unit() || !x.cod.is_unit()) {
    throw ObjectMismatch("lambda_G expects a scalar triple");
  }
  return g_prob(t, g_identity(t, TheoryObject::unit()), x);
}

GTriple stinespring_dilate(const TheorySpec& t, const Morphism& f) {
  const int a = f.dom.dim();
  const int b = f.cod.dim();
  double norm = operator_norm(f.mat);
  if (norm > 1.0 + 1e-8) {
    throw NotContraction("operator norm " + fmt_double(norm) + " exceeds 1");
  }
  // Float noise can push the norm a hair over 1; renormalize so the defect
  // stays positive. The collapse then differs from f by at most 1e-8.
  Matrix fm = norm > 1.0 ? Matrix(f.mat / norm) : f.mat;
  Matrix defect = Matrix::Identity(a, a) - fm.adjoint() * fm;
  Matrix d = principal_sqrt(defect, 3e-8);

  const TheoryObject x_in = TheoryObject::wire(2 * b);
  const TheoryObject x_out = TheoryObject::wire(2 * a);
  const int n = 2 * a * b;
  // Column i carries f|i> into the (x' = 0) sector and the Gram correction
  // D|i> into (x' >= 1) rows, so the columns are orthonormal and the
  // collapse reads f back exactly.
  std::vector<Vector> cols;
  for (int i = 0; i < a; ++i) {
    Vector col = Vector::Zero(n);
    for (int beta = 0; beta < b; ++beta) col(beta * 2 * a) = fm(beta, i);
    for (int alpha = 0; alpha < a; ++alpha) {
      col((alpha % b) * 2 * a + 1 + alpha / b) += d(alpha, i);
    }
    cols.push_back(std::move(col));
  }
  Matrix v = unitary_complete(cols, n);
  // Route input (i, x=0) to column i; remaining inputs in ascending order.
  std::vector<int> src(n, -1);
  for (int i = 0; i < a; ++i) src[i * 2 * b] = i;
  int next = a;
  for (int c = 0; c < n; ++c) {
    if (src[c] < 0) src[c] = next++;
  }
  Matrix u(n, n);
  for (int c = 0; c < n; ++c) u.col(c) = v.col(src[c]);
  Morphism wired(fuse(f.dom, x_in), fuse(f.cod, x_out), std::move(u));
  return make_triple(t, std::move(wired), basis_state(x_in, 0), basis_effect(x_out, 0),
                     f.dom, f.cod);
}

ProbeEvidence equiv_probe(const TheorySpec& t, const Morphism& f, const Morphism& g,
                          int n_samples, std::vector<int> dims_of_c,
                          RandomSource& rng, double tol) {
  if (!(f.dom == g.dom) || !(f.cod == g.cod)) {
    throw ObjectMismatch("probed morphisms must share dom and cod");
  }
  std::vector<int> dims = probe_dims(std::move(dims_of_c), f.cod.dim());
  ProbeEvidence ev;
  ev.equivalent = true;
  ev.samples = n_samples;
  for (int i = 0; i < n_samples; ++i) {
    int cd = dims[rng.index(dims.size())];
    TheoryObject c = make_obj(t, cd);
    Morphism rho = t.sample_state(fuse(f.dom, c), rng);
    Morphism sig = t.sample_effect(fuse(f.cod, c), rng);
    double pf = prob(t, compose(tensor(f, identity(c)), rho), sig);
    double pg = prob(t, compose(tensor(g, identity(c)), rho), sig);
    double dev = std::abs(pf - pg);
    if (dev > ev.max_deviation) ev.max_deviation = dev;
    if (dev > tol && ev.equivalent) {
      ev.equivalent = false;
      ev.counterexample = "ancilla dim " + std::to_string(cd) + ", sample " +
                          std::to_string(i) + ": P_f=" + fmt_double(pf) +
                          " P_g=" + fmt_double(pg);
    }
  }
  return ev;
}

namespace {

double triple_probe_value(const TheorySpec& t, const GTriple& x, const TheoryObject& c,
                          const Morphism& tau, const Morphism& mu) {
  Morphism state = compose(
      tensor(identity(x.cod), block_swap(x.anc_out(), c)),
      compose(tensor(x.U, identity(c)),
              compose(tensor(identity(x.dom), block_swap(c, x.anc_in())),
                      tensor(tau, x.rho))));
  return prob(t, state, tensor(mu, x.sigma));
}

}  // namespace

ProbeEvidence equiv_probe(const TheorySpec& t, const GTriple& f, const GTriple& g,
                          int n_samples, std::vector<int> dims_of_c,
                          RandomSource& rng, double tol) {
  if (!(f.dom == g.dom) || !(f.cod == g.cod)) {
    throw ObjectMismatch("probed triples must share dom and cod");
  }
  std::vector<int> dims = probe_dims(std::move(dims_of_c), f.cod.dim());
  ProbeEvidence ev;
  ev.equivalent = true;
  ev.samples = n_samples;
  for (int i = 0; i < n_samples; ++i) {
    int cd = dims[rng.index(dims.size())];
    TheoryObject c = make_obj(t, cd);
    Morphism tau = t.sample_state(fuse(f.dom, c), rng);
    Morphism mu = t.sample_effect(fuse(f.cod, c), rng);
    double pf = triple_probe_value(t, f, c, tau, mu);
    double pg = triple_probe_value(t, g, c, tau, mu);
    double dev = std::abs(pf - pg);
    if (dev > ev.max_deviation) ev.max_deviation = dev;
    if (dev > tol && ev.equivalent) {
      ev.equivalent = false;
      ev.counterexample = "ancilla dim " + std::to_string(cd) + ", sample " +
                          std::to_string(i) + ": P_f=" + fmt_double(pf) +
                          " P_g=" + fmt_double(pg);
    }
  }
  return ev;
}

}  // namespace bornforge
