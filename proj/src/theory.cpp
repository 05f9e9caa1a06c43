#include "bornforge/theory.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <utility>

#include "bornforge/format.hpp"

namespace bornforge {

namespace {

// Membership tolerance for positivity and hermiticity of encoded data.
constexpr double CP_MEMBER_TOL = 1e-7;
// A probability counts as nonzero (resp. non-unit) beyond this margin.
constexpr double TRIVIALITY_MARGIN = 1e-9;

}  // namespace

ProbabilityRule ProbabilityRule::born_power(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw BadParams("born exponent must be a positive finite real");
  }
  ProbabilityRule r;
  r.kind_ = Born{k};
  r.label_ = "born k=" + fmt_double(k);
  return r;
}

ProbabilityRule ProbabilityRule::trace_rule() {
  ProbabilityRule r;
  r.kind_ = Trace{};
  r.label_ = "trace";
  return r;
}

ProbabilityRule ProbabilityRule::stochastic_inner() {
  ProbabilityRule r;
  r.kind_ = Inner{};
  r.label_ = "stochastic";
  return r;
}

ProbabilityRule ProbabilityRule::custom(CustomFn fn, std::string label) {
  if (!fn) throw BadParams("custom rule needs a function");
  ProbabilityRule r;
  r.kind_ = std::move(fn);
  r.label_ = std::move(label);
  return r;
}

bool ProbabilityRule::is_born_power() const {
  return std::holds_alternative<Born>(kind_);
}

bool ProbabilityRule::is_trace_rule() const {
  return std::holds_alternative<Trace>(kind_);
}

double ProbabilityRule::born_exponent() const {
  if (const Born* b = std::get_if<Born>(&kind_)) return b->k;
  throw BadParams("rule '" + label_ + "' has no exponent");
}

double ProbabilityRule::evaluate(const Morphism& state, const Morphism& effect) const {
  double p = 0.0;
  if (const CustomFn* fn = std::get_if<CustomFn>(&kind_)) {
    p = (*fn)(state, effect);
  } else {
    Complex z = compose(effect, state).scalar();
    if (const Born* b = std::get_if<Born>(&kind_)) {
      p = std::pow(std::abs(z), b->k);
    } else {
      if (std::abs(z.imag()) > 1e-6) {
        throw OutOfRange("pairing scalar has imaginary part " + fmt_double(z.imag()));
      }
      p = z.real();
    }
  }
  if (!std::isfinite(p)) throw OutOfRange("probability is not finite");
  if (p < 0.0) {
    if (p < -1e-12) throw OutOfRange("probability " + fmt_double(p) + " is negative");
    p = 0.0;
  }
  return p;
}

double prob(const TheorySpec& t, const Morphism& rho, const Morphism& sigma) {
  if (!rho.is_state() || !sigma.is_effect()) {
    throw ObjectMismatch("prob expects a state and an effect");
  }
  if (!(rho.cod == sigma.dom)) {
    throw ObjectMismatch("state and effect live on different objects");
  }
  if (t.state_member && !t.state_member(rho)) {
    throw NotMember("state is not physical in theory '" + t.name + "'");
  }
  if (t.effect_member && !t.effect_member(sigma)) {
    throw NotMember("effect is not physical in theory '" + t.name + "'");
  }
  return t.rule.evaluate(rho, sigma);
}

double lambda_scalar(const TheorySpec& t, const Morphism& gamma) {
  if (!t.simplified) {
    throw NotSimplified("scalar assignment is defined for simplified theories only");
  }
  if (!gamma.is_scalar()) throw ObjectMismatch("expected a scalar morphism");
  return prob(t, scalar_morphism(1.0), gamma);
}

namespace {

std::string axiom_name(Axiom a) {
  switch (a) {
    case Axiom::I:
      return "I";
    case Axiom::II:
      return "II";
    default:
      return "III";
  }
}

TheoryObject default_object(int d) {
  return d == 1 ? TheoryObject::unit() : TheoryObject::wire(d);
}

TheoryObject make_obj(const TheorySpec& t, int d) {
  return t.make_object ? t.make_object(d) : default_object(d);
}

int pick_dim(RandomSource& rng) { return 1 + static_cast<int>(rng.index(4)); }

}  // namespace

AxiomReport check_axiom(const TheorySpec& t, Axiom which, int n_samples,
                        RandomSource& rng, double tol) {
  if (!t.sample_state || !t.sample_effect) {
    throw SamplerUnavailable("theory '" + t.name + "' lacks state/effect samplers");
  }
  AxiomReport rep;
  rep.axiom = axiom_name(which);

  if (which == Axiom::I) {
    if (!t.sample_process) {
      throw SamplerUnavailable("theory '" + t.name + "' lacks a process sampler");
    }
    int n = n_samples > 0 ? n_samples : 64;
    rep.samples = n;
    for (int i = 0; i < n; ++i) {
      TheoryObject a = make_obj(t, pick_dim(rng));
      TheoryObject b = make_obj(t, pick_dim(rng));
      std::optional<Morphism> f = t.sample_process(a, b, rng);
      if (!f) {
        b = a;
        f = t.sample_process(a, a, rng);
      }
      if (!f) throw SamplerUnavailable("process sampler produced nothing");
      Morphism rho = t.sample_state(a, rng);
      Morphism sig = t.sample_effect(b, rng);
      double p1 = prob(t, compose(*f, rho), sig);
      double p2 = prob(t, rho, compose(sig, *f));
      double dev = std::abs(p1 - p2);
      if (dev > rep.worst_deviation) {
        rep.worst_deviation = dev;
        if (dev > tol) {
          rep.detail = "P(f.rho, sigma)=" + fmt_double(p1) + " vs P(rho, sigma.f)=" +
                       fmt_double(p2) + " at sample " + std::to_string(i);
        }
      }
    }
    rep.pass = rep.worst_deviation <= tol;
    if (rep.pass) rep.detail.clear();
    return rep;
  }

  if (which == Axiom::II) {
    int n = n_samples > 0 ? n_samples : 64;
    rep.samples = n;
    for (int i = 0; i < n; ++i) {
      TheoryObject a = make_obj(t, pick_dim(rng));
      TheoryObject b = make_obj(t, pick_dim(rng));
      Morphism r1 = t.sample_state(a, rng), r2 = t.sample_state(b, rng);
      Morphism s1 = t.sample_effect(a, rng), s2 = t.sample_effect(b, rng);
      double joint = prob(t, tensor(r1, r2), tensor(s1, s2));
      double split = prob(t, r1, s1) * prob(t, r2, s2);
      double dev = std::abs(joint - split);
      if (dev > rep.worst_deviation) {
        rep.worst_deviation = dev;
        if (dev > tol) {
          rep.detail = "P(rho1 x rho2, sigma1 x sigma2)=" + fmt_double(joint) +
                       " vs P1*P2=" + fmt_double(split) + " at sample " +
                       std::to_string(i);
        }
      }
    }
    rep.pass = rep.worst_deviation <= tol;
    if (rep.pass) rep.detail.clear();
    return rep;
  }

  int n = n_samples > 0 ? n_samples : 256;
  rep.samples = n;
  bool has_nonzero = false, has_nonone = false;
  std::string d_nonzero, d_nonone;
  auto consider = [&](double p, const std::string& source) {
    if (!has_nonzero && p > TRIVIALITY_MARGIN) {
      has_nonzero = true;
      d_nonzero = "P=" + fmt_double(p) + " != 0 (" + source + ")";
    }
    if (!has_nonone && std::abs(p - 1.0) > TRIVIALITY_MARGIN) {
      has_nonone = true;
      d_nonone = "P=" + fmt_double(p) + " != 1 (" + source + ")";
    }
  };
  if (t.witnesses.prob_nonzero) {
    consider(prob(t, t.witnesses.prob_nonzero->first, t.witnesses.prob_nonzero->second),
             "witness");
  }
  if (t.witnesses.prob_nonone) {
    consider(prob(t, t.witnesses.prob_nonone->first, t.witnesses.prob_nonone->second),
             "witness");
  }
  for (int i = 0; i < n && !(has_nonzero && has_nonone); ++i) {
    TheoryObject a = make_obj(t, pick_dim(rng));
    double p = prob(t, t.sample_state(a, rng), t.sample_effect(a, rng));
    consider(p, "sample " + std::to_string(i));
  }
  rep.pass = has_nonzero && has_nonone;
  if (rep.pass) {
    rep.detail = d_nonzero + "; " + d_nonone;
  } else {
    rep.detail = has_nonzero ? "no pair with P != 1 found" : "no pair with P != 0 found";
  }
  return rep;
}

AxiomReport check_discard(const TheorySpec& t, int n_samples, RandomSource& rng,
                          double tol) {
  if (!t.discard || !t.sample_causal_state) {
    throw NoDiscard("theory '" + t.name + "' has no discard structure");
  }
  AxiomReport rep;
  rep.axiom = "discard";
  int n = n_samples > 0 ? n_samples : 64;
  rep.samples = n;
  for (int i = 0; i < n; ++i) {
    TheoryObject a = make_obj(t, pick_dim(rng));
    std::optional<Morphism> eff = t.discard(a);
    if (!eff) throw NoDiscard("no discard effect at dimension " + std::to_string(a.dim()));
    double p = prob(t, t.sample_causal_state(a, rng), *eff);
    double dev = std::abs(p - 1.0);
    if (dev > rep.worst_deviation) {
      rep.worst_deviation = dev;
      if (dev > tol) {
        rep.detail = "P(rho, discard)=" + fmt_double(p) + " at sample " +
                     std::to_string(i);
      }
    }
  }
  rep.pass = rep.worst_deviation <= tol;
  if (rep.pass) rep.detail.clear();
  return rep;
}

TheorySpec builtin_fhilb(double k) {
  TheorySpec t;
  t.rule = ProbabilityRule::born_power(k);
  t.name = "fhilb k=" + fmt_double(k);
  t.simplified = true;
  t.object_policy = [](const TheoryObject&) { return true; };
  auto all = [](const Morphism&) { return true; };
  t.process_member = all;
  t.state_member = all;
  t.effect_member = all;
  t.make_object = default_object;
  t.sample_state = [](const TheoryObject& a, RandomSource& rng) {
    return random_ginibre(TheoryObject::unit(), a, rng);
  };
  t.sample_effect = [](const TheoryObject& a, RandomSource& rng) {
    return random_ginibre(a, TheoryObject::unit(), rng);
  };
  t.sample_process = [](const TheoryObject& dom, const TheoryObject& cod,
                        RandomSource& rng) -> std::optional<Morphism> {
    return random_ginibre(dom, cod, rng);
  };
  t.witnesses.prob_nonzero = {scalar_morphism(1.0), scalar_morphism(1.0)};
  t.witnesses.prob_nonone = {scalar_morphism(1.0), scalar_morphism(0.5)};
  return t;
}

TheorySpec builtin_textbook_qm() {
  TheorySpec t;
  t.name = "textbook-qm";
  t.simplified = false;
  t.rule = ProbabilityRule::born_power(2.0);
  t.object_policy = [](const TheoryObject&) { return true; };
  t.process_member = [](const Morphism& m) {
    if (m.dom.dim() != m.cod.dim()) return false;
    Matrix g = m.mat.adjoint() * m.mat;
    return max_abs_diff(g, Matrix::Identity(g.rows(), g.cols())) <= 1e-8;
  };
  t.state_member = [](const Morphism& m) {
    return m.is_state() && std::abs(m.mat.norm() - 1.0) <= 1e-8;
  };
  t.effect_member = [](const Morphism& m) {
    return m.is_effect() && std::abs(m.mat.norm() - 1.0) <= 1e-8;
  };
  t.make_object = default_object;
  t.sample_state = [](const TheoryObject& a, RandomSource& rng) {
    return random_state(a, rng);
  };
  t.sample_effect = [](const TheoryObject& a, RandomSource& rng) {
    return random_effect(a, rng);
  };
  t.sample_process = [](const TheoryObject& dom, const TheoryObject& cod,
                        RandomSource& rng) -> std::optional<Morphism> {
    if (dom.dim() != cod.dim()) return std::nullopt;
    Morphism u = random_unitary(TheoryObject::wire(dom.dim()), rng);
    return Morphism(dom, cod, u.mat);
  };
  TheoryObject q = TheoryObject::wire(2);
  t.witnesses.prob_nonzero = {basis_state(q, 0), basis_effect(q, 0)};
  t.witnesses.prob_nonone = {basis_state(q, 0), basis_effect(q, 1)};
  return t;
}

bool cp_object_ok(const TheoryObject& encoded) {
  const std::vector<int>& f = encoded.factors;
  if (f.size() % 2 != 0) return false;
  for (std::size_t m = 0; m + 1 < f.size(); m += 2) {
    if (f[m] != f[m + 1]) return false;
  }
  return true;
}

TheoryObject cp_underlying(const TheoryObject& encoded) {
  if (!cp_object_ok(encoded)) {
    throw UnknownObject("object is not a doubled-wire encoding");
  }
  std::vector<int> u;
  for (std::size_t m = 0; m < encoded.factors.size(); m += 2) {
    u.push_back(encoded.factors[m]);
  }
  return TheoryObject(std::move(u));
}

Matrix cp_interleave(const TheoryObject& encoded) {
  TheoryObject u = cp_underlying(encoded);
  const int n = static_cast<int>(u.factors.size());
  std::vector<int> f_std = u.factors;
  f_std.insert(f_std.end(), u.factors.begin(), u.factors.end());
  std::vector<int> src(2 * n);
  for (int m = 0; m < n; ++m) {
    src[2 * m] = m;
    src[2 * m + 1] = n + m;
  }
  return permute_factors_matrix(TheoryObject(std::move(f_std)), src);
}

Morphism cp_encode_state(const TheoryObject& encoded, const Matrix& rho) {
  const int a = cp_underlying(encoded).dim();
  if (rho.rows() != a || rho.cols() != a) {
    throw DimensionMismatch("state matrix does not match the encoded object");
  }
  return Morphism(TheoryObject::unit(), encoded,
                  cp_interleave(encoded) * vec_row_major(rho));
}

Matrix cp_decode_state(const Morphism& state) {
  if (!state.is_state()) throw ObjectMismatch("expected an encoded state");
  const int a = cp_underlying(state.cod).dim();
  Vector v = cp_interleave(state.cod).transpose() * state.mat.col(0);
  return unvec_row_major(v, a, a);
}

Morphism cp_encode_effect(const TheoryObject& encoded, const Matrix& e) {
  const int a = cp_underlying(encoded).dim();
  if (e.rows() != a || e.cols() != a) {
    throw DimensionMismatch("effect matrix does not match the encoded object");
  }
  Matrix row = vec_row_major(e).adjoint() * cp_interleave(encoded).transpose();
  return Morphism(encoded, TheoryObject::unit(), std::move(row));
}

Morphism cp_encode_kraus(const TheoryObject& enc_dom, const TheoryObject& enc_cod,
                         const std::vector<Matrix>& kraus) {
  const int a = cp_underlying(enc_dom).dim();
  const int b = cp_underlying(enc_cod).dim();
  if (kraus.empty()) throw BadParams("at least one Kraus operator required");
  Matrix t_std = Matrix::Zero(b * b, a * a);
  for (const Matrix& k : kraus) {
    if (k.rows() != b || k.cols() != a) {
      throw DimensionMismatch("Kraus operator shape mismatch");
    }
    t_std += Eigen::kroneckerProduct(k, k.conjugate()).eval();
  }
  Matrix t_enc = cp_interleave(enc_cod) * t_std * cp_interleave(enc_dom).transpose();
  return Morphism(enc_dom, enc_cod, std::move(t_enc));
}

Matrix cp_choi_of(const Morphism& f) {
  const int a = cp_underlying(f.dom).dim();
  const int b = cp_underlying(f.cod).dim();
  Matrix t_std = cp_interleave(f.cod).transpose() * f.mat * cp_interleave(f.dom);
  return choi_from_transfer(t_std, a, b);
}

namespace {

bool cp_member(const Morphism& m) {
  if (!cp_object_ok(m.dom) || !cp_object_ok(m.cod)) return false;
  Matrix c = cp_choi_of(m);
  if (max_abs_diff(c, c.adjoint()) > CP_MEMBER_TOL) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (c + c.adjoint()),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -CP_MEMBER_TOL;
}

Matrix wishart(int d, RandomSource& rng) {
  Matrix g(d, d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = scale * rng.normal_complex();
  return g * g.adjoint();
}

}  // namespace

TheorySpec builtin_cp() {
  TheorySpec t;
  t.name = "cp";
  t.simplified = true;
  t.rule = ProbabilityRule::trace_rule();
  t.object_policy = cp_object_ok;
  t.process_member = cp_member;
  t.state_member = cp_member;
  t.effect_member = cp_member;
  t.make_object = [](int d) {
    return d == 1 ? TheoryObject::unit() : TheoryObject({d, d});
  };
  t.sample_state = [](const TheoryObject& a, RandomSource& rng) {
    return cp_encode_state(a, wishart(cp_underlying(a).dim(), rng));
  };
  t.sample_effect = [](const TheoryObject& a, RandomSource& rng) {
    return cp_encode_effect(a, wishart(cp_underlying(a).dim(), rng));
  };
  t.sample_process = [](const TheoryObject& dom, const TheoryObject& cod,
                        RandomSource& rng) -> std::optional<Morphism> {
    if (!cp_object_ok(dom) || !cp_object_ok(cod)) return std::nullopt;
    const int a = cp_underlying(dom).dim();
    const int b = cp_underlying(cod).dim();
    const int count = 1 + static_cast<int>(rng.index(2));
    std::vector<Matrix> kraus;
    const double scale = 1.0 / std::sqrt(static_cast<double>(std::max(a, b)));
    for (int m = 0; m < count; ++m) {
      Matrix k(b, a);
      for (int i = 0; i < b; ++i)
        for (int j = 0; j < a; ++j) k(i, j) = scale * rng.normal_complex();
      kraus.push_back(std::move(k));
    }
    return cp_encode_kraus(dom, cod, kraus);
  };
  t.witnesses.prob_nonzero = {scalar_morphism(1.0), scalar_morphism(1.0)};
  t.witnesses.prob_nonone = {scalar_morphism(1.0), scalar_morphism(0.5)};
  t.discard = [](const TheoryObject& a) -> std::optional<Morphism> {
    const int d = cp_underlying(a).dim();
    return cp_encode_effect(a, Matrix::Identity(d, d));
  };
  t.sample_causal_state = [](const TheoryObject& a, RandomSource& rng) {
    const int d = cp_underlying(a).dim();
    Matrix rho = wishart(d, rng);
    double tr = rho.trace().real();
    while (tr < 1e-12) {
      rho = wishart(d, rng);
      tr = rho.trace().real();
    }
    return cp_encode_state(a, rho / tr);
  };
  return t;
}

TheorySpec builtin_stoch() {
  TheorySpec t;
  t.name = "stoch";
  t.simplified = true;
  t.rule = ProbabilityRule::stochastic_inner();
  t.object_policy = [](const TheoryObject&) { return true; };
  auto substochastic = [](const Morphism& m) {
    for (int j = 0; j < m.mat.cols(); ++j) {
      double col_sum = 0.0;
      for (int i = 0; i < m.mat.rows(); ++i) {
        Complex z = m.mat(i, j);
        if (std::abs(z.imag()) > 1e-9) return false;
        if (z.real() < -1e-9) return false;
        col_sum += z.real();
      }
      if (col_sum > 1.0 + 1e-9) return false;
    }
    return true;
  };
  t.process_member = substochastic;
  t.state_member = substochastic;
  t.effect_member = substochastic;
  t.make_object = default_object;
  auto subdistribution = [](int d, RandomSource& rng, double mass) {
    Eigen::VectorXd w(d);
    double s = 0.0;
    do {
      for (int i = 0; i < d; ++i) w(i) = rng.uniform();
      s = w.sum();
    } while (s < 1e-12);
    return Vector((mass / s) * w);
  };
  t.sample_state = [subdistribution](const TheoryObject& a, RandomSource& rng) {
    double mass = rng.uniform();
    return Morphism(TheoryObject::unit(), a, subdistribution(a.dim(), rng, mass));
  };
  t.sample_effect = [](const TheoryObject& a, RandomSource& rng) {
    Matrix row(1, a.dim());
    for (int i = 0; i < a.dim(); ++i) row(0, i) = rng.uniform();
    return Morphism(a, TheoryObject::unit(), std::move(row));
  };
  t.sample_process = [subdistribution](const TheoryObject& dom, const TheoryObject& cod,
                                       RandomSource& rng) -> std::optional<Morphism> {
    Matrix m(cod.dim(), dom.dim());
    for (int j = 0; j < dom.dim(); ++j) {
      m.col(j) = subdistribution(cod.dim(), rng, rng.uniform());
    }
    return Morphism(dom, cod, std::move(m));
  };
  TheoryObject q = TheoryObject::wire(2);
  Matrix ones(1, 2);
  ones << 1.0, 1.0;
  Matrix zeros = Matrix::Zero(1, 2);
  t.witnesses.prob_nonzero = {basis_state(q, 0), Morphism(q, TheoryObject::unit(), ones)};
  t.witnesses.prob_nonone = {basis_state(q, 0), Morphism(q, TheoryObject::unit(), zeros)};
  t.discard = [](const TheoryObject& a) -> std::optional<Morphism> {
    return Morphism(a, TheoryObject::unit(), Matrix::Ones(1, a.dim()));
  };
  t.sample_causal_state = [subdistribution](const TheoryObject& a, RandomSource& rng) {
    return Morphism(TheoryObject::unit(), a, subdistribution(a.dim(), rng, 1.0));
  };
  return t;
}

TheorySpec builtin(const std::string& name, double k) {
  if (name == "fhilb") return builtin_fhilb(k);
  if (name == "textbook" || name == "textbook-qm") return builtin_textbook_qm();
  if (name == "cp") return builtin_cp();
  if (name == "stoch") return builtin_stoch();
  throw UnsupportedTheory("unknown builtin theory '" + name + "'");
}

}  // namespace bornforge
