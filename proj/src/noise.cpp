#include "bornforge/noise.hpp"

#include <cmath>
#include <utility>

#include "bornforge/format.hpp"

namespace bornforge {

namespace {

constexpr double CANON_PSD_TOL = 1e-7;
constexpr double TRIVIALITY_MARGIN = 1e-9;

TheoryObject make_obj(const TheorySpec& t, int d) {
  if (t.make_object) return t.make_object(d);
  return d == 1 ? TheoryObject::unit() : TheoryObject::wire(d);
}

int pick_dim(RandomSource& rng) { return 1 + static_cast<int>(rng.index(4)); }

bool born_two(const TheorySpec& t) {
  return t.simplified && t.rule.is_born_power() &&
         std::abs(t.rule.born_exponent() - 2.0) <= 1e-12;
}

void validate_canon(const Matrix& canon) {
  if (max_abs_diff(canon, canon.adjoint()) > CANON_PSD_TOL) {
    throw NotPSD("canonical matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (canon + canon.adjoint()),
                                           Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -CANON_PSD_TOL) {
    throw NotPSD("canonical matrix has eigenvalue " +
                 fmt_double(es.eigenvalues().minCoeff()));
  }
}

}  // namespace

WeightedSet ws_compose(const WeightedSet& a, const WeightedSet& b) {
  if (!(b.cod == a.dom)) {
    throw ObjectMismatch("weighted composition needs matching middle object");
  }
  if (a.size() * b.size() > WEIGHTED_SET_CAP) {
    throw CapacityExceeded("weighted composition would produce " +
                           std::to_string(a.size() * b.size()) + " items");
  }
  std::vector<WeightedItem> items;
  items.reserve(a.size() * b.size());
  for (const WeightedItem& x : a.items) {
    for (const WeightedItem& y : b.items) {
      items.push_back({compose(x.morphism, y.morphism), x.weight * y.weight});
    }
  }
  return WeightedSet(b.dom, a.cod, std::move(items));
}

WeightedSet ws_tensor(const WeightedSet& a, const WeightedSet& b) {
  if (a.size() * b.size() > WEIGHTED_SET_CAP) {
    throw CapacityExceeded("weighted tensor would produce " +
                           std::to_string(a.size() * b.size()) + " items");
  }
  std::vector<WeightedItem> items;
  items.reserve(a.size() * b.size());
  for (const WeightedItem& x : a.items) {
    for (const WeightedItem& y : b.items) {
      items.push_back({tensor(x.morphism, y.morphism), x.weight * y.weight});
    }
  }
  return WeightedSet(fuse(a.dom, b.dom), fuse(a.cod, b.cod), std::move(items));
}

WeightedSet ws_union(const WeightedSet& a, const WeightedSet& b) {
  if (!(a.dom == b.dom) || !(a.cod == b.cod)) {
    throw ObjectMismatch("weighted union needs identical dom and cod");
  }
  std::vector<WeightedItem> items = a.items;
  items.insert(items.end(), b.items.begin(), b.items.end());
  return WeightedSet(a.dom, a.cod, std::move(items));
}

double prob_S(const WeightedSet& rho, const WeightedSet& sigma,
              const TheorySpec& base) {
  if (!base.simplified) {
    throw NotSimplified("summed probabilities need a simplified base theory");
  }
  if (rho.dom.dim() != 1) throw ObjectMismatch("first argument is not a state set");
  if (sigma.cod.dim() != 1) throw ObjectMismatch("second argument is not an effect set");
  if (!(rho.cod == sigma.dom)) {
    throw ObjectMismatch("state set and effect set live on different objects");
  }
  double p = 0.0;
  for (const WeightedItem& r : rho.items) {
    for (const WeightedItem& s : sigma.items) {
      p += r.weight * s.weight * prob(base, r.morphism, s.morphism);
    }
  }
  return p;
}

double lambda_S(const WeightedSet& gamma, const TheorySpec& base) {
  if (gamma.dom.dim() != 1 || gamma.cod.dim() != 1) {
    throw ObjectMismatch("scalar assignment needs a weighted scalar set");
  }
  double v = 0.0;
  for (const WeightedItem& g : gamma.items) {
    v += g.weight * lambda_scalar(base, g.morphism);
  }
  return v;
}

NoisyClass noisy_canonical(const WeightedSet& ws, const TheorySpec& base) {
  Matrix canon;
  if (born_two(base)) {
    canon = choi_of_weighted(ws);
  } else if (base.rule.is_trace_rule()) {
    const int n = cp_underlying(ws.dom).dim() * cp_underlying(ws.cod).dim();
    canon = Matrix::Zero(n, n);
    for (const WeightedItem& it : ws.items) {
      canon += it.weight * cp_choi_of(it.morphism);
    }
  } else {
    throw UnsupportedTheory("no canonical form registered for rule '" +
                            base.rule.describe() + "'");
  }
  validate_canon(canon);
  return NoisyClass{base.name, ws, std::move(canon)};
}

bool same_noisy_class(const NoisyClass& a, const NoisyClass& b, double tol) {
  if (a.canon.rows() != b.canon.rows() || a.canon.cols() != b.canon.cols()) {
    return false;
  }
  return max_abs_diff(a.canon, b.canon) <= tol;
}

double lambda_N(const NoisyClass& x) {
  if (x.canon.rows() != 1 || x.canon.cols() != 1) {
    throw ObjectMismatch("scalar value is only defined for scalar classes");
  }
  return x.canon(0, 0).real();
}

NoisyClass theta_N(double p, const TheorySpec& base) {
  if (!(p >= 0.0)) {
    throw OutOfRange("probability value must be nonnegative, got " + fmt_double(p));
  }
  if (p == 0.0) {
    return noisy_canonical(WeightedSet::zero(TheoryObject::unit(), TheoryObject::unit()),
                           base);
  }
  return noisy_canonical(WeightedSet::singleton(scalar_morphism(1.0), p), base);
}

ProbeEvidence equiv_noisy(const WeightedSet& a, const WeightedSet& b,
                          const TheorySpec& base, EquivMode mode, int n_samples,
                          RandomSource& rng, double tol) {
  if (a.dom.dim() != b.dom.dim() || a.cod.dim() != b.cod.dim()) {
    throw ObjectMismatch("weighted sets have different shapes");
  }
  ProbeEvidence ev;
  if (mode == EquivMode::Canonical) {
    NoisyClass ca = noisy_canonical(a, base);
    NoisyClass cb = noisy_canonical(b, base);
    ev.max_deviation = max_abs_diff(ca.canon, cb.canon);
    ev.equivalent = same_noisy_class(ca, cb);
    if (!ev.equivalent) {
      ev.counterexample =
          "canonical matrices differ by " + fmt_double(ev.max_deviation);
    }
    return ev;
  }

  if (!base.sample_state || !base.sample_effect) {
    throw SamplerUnavailable("theory '" + base.name + "' lacks state/effect samplers");
  }
  const int n = n_samples > 0 ? n_samples : 64;
  ev.samples = n;
  for (int i = 0; i < n; ++i) {
    Morphism rho = base.sample_state(a.dom, rng);
    Morphism sig = base.sample_effect(a.cod, rng);
    WeightedSet rho_b = WeightedSet::singleton(
        Morphism(TheoryObject::unit(), b.dom, rho.mat));
    WeightedSet sig_b = WeightedSet::singleton(
        Morphism(b.cod, TheoryObject::unit(), sig.mat));
    double pa = prob_S(ws_compose(a, WeightedSet::singleton(rho)),
                       WeightedSet::singleton(sig), base);
    double pb = prob_S(ws_compose(b, rho_b), sig_b, base);
    double dev = std::abs(pa - pb);
    if (dev > ev.max_deviation) {
      ev.max_deviation = dev;
      if (dev > tol) {
        ev.counterexample = "probe " + std::to_string(i) + ": P_S=" + fmt_double(pa) +
                            " vs P_S=" + fmt_double(pb);
      }
    }
  }
  ev.equivalent = ev.max_deviation <= tol;
  if (ev.equivalent) ev.counterexample.clear();
  return ev;
}

namespace {

WeightedSet sample_state_set(const TheorySpec& t, const TheoryObject& o,
                             RandomSource& rng) {
  std::vector<WeightedItem> items;
  int n = 1 + static_cast<int>(rng.index(2));
  for (int i = 0; i < n; ++i) {
    items.push_back({t.sample_state(o, rng), rng.uniform(0.1, 1.0)});
  }
  return WeightedSet(TheoryObject::unit(), o, std::move(items));
}

WeightedSet sample_effect_set(const TheorySpec& t, const TheoryObject& o,
                              RandomSource& rng) {
  std::vector<WeightedItem> items;
  int n = 1 + static_cast<int>(rng.index(2));
  for (int i = 0; i < n; ++i) {
    items.push_back({t.sample_effect(o, rng), rng.uniform(0.1, 1.0)});
  }
  return WeightedSet(o, TheoryObject::unit(), std::move(items));
}

WeightedSet sample_process_set(const TheorySpec& t, TheoryObject& a, TheoryObject& b,
                               RandomSource& rng) {
  std::vector<WeightedItem> items;
  int n = 1 + static_cast<int>(rng.index(2));
  for (int i = 0; i < n; ++i) {
    std::optional<Morphism> f = t.sample_process(a, b, rng);
    if (!f && !(a == b)) {
      b = a;
      items.clear();
      i = -1;
      continue;
    }
    if (!f) throw SamplerUnavailable("process sampler produced nothing");
    items.push_back({*f, rng.uniform(0.1, 1.0)});
  }
  return WeightedSet(a, b, std::move(items));
}

}  // namespace

AxiomReport check_axiom_summed(const TheorySpec& base, Axiom which, int n_samples,
                               RandomSource& rng, double tol) {
  if (!base.sample_state || !base.sample_effect) {
    throw SamplerUnavailable("theory '" + base.name + "' lacks state/effect samplers");
  }
  AxiomReport rep;

  if (which == Axiom::I) {
    if (!base.sample_process) {
      throw SamplerUnavailable("theory '" + base.name + "' lacks a process sampler");
    }
    rep.axiom = "I";
    int n = n_samples > 0 ? n_samples : 64;
    rep.samples = n;
    for (int i = 0; i < n; ++i) {
      TheoryObject a = make_obj(base, pick_dim(rng));
      TheoryObject b = make_obj(base, pick_dim(rng));
      WeightedSet f = sample_process_set(base, a, b, rng);
      WeightedSet rho = sample_state_set(base, a, rng);
      WeightedSet sig = sample_effect_set(base, b, rng);
      double p1 = prob_S(ws_compose(f, rho), sig, base);
      double p2 = prob_S(rho, ws_compose(sig, f), base);
      double dev = std::abs(p1 - p2);
      if (dev > rep.worst_deviation) {
        rep.worst_deviation = dev;
        if (dev > tol) {
          rep.detail = "P_S(f.rho, sigma)=" + fmt_double(p1) +
                       " vs P_S(rho, sigma.f)=" + fmt_double(p2) + " at sample " +
                       std::to_string(i);
        }
      }
    }
    rep.pass = rep.worst_deviation <= tol;
    if (rep.pass) rep.detail.clear();
    return rep;
  }

  if (which == Axiom::II) {
    rep.axiom = "II";
    int n = n_samples > 0 ? n_samples : 64;
    rep.samples = n;
    for (int i = 0; i < n; ++i) {
      TheoryObject a = make_obj(base, pick_dim(rng));
      TheoryObject b = make_obj(base, pick_dim(rng));
      WeightedSet r1 = sample_state_set(base, a, rng);
      WeightedSet r2 = sample_state_set(base, b, rng);
      WeightedSet s1 = sample_effect_set(base, a, rng);
      WeightedSet s2 = sample_effect_set(base, b, rng);
      double joint = prob_S(ws_tensor(r1, r2), ws_tensor(s1, s2), base);
      double split = prob_S(r1, s1, base) * prob_S(r2, s2, base);
      double dev = std::abs(joint - split);
      if (dev > rep.worst_deviation) {
        rep.worst_deviation = dev;
        if (dev > tol) {
          rep.detail = "P_S(rho1 x rho2, sigma1 x sigma2)=" + fmt_double(joint) +
                       " vs P1*P2=" + fmt_double(split) + " at sample " +
                       std::to_string(i);
        }
      }
    }
    rep.pass = rep.worst_deviation <= tol;
    if (rep.pass) rep.detail.clear();
    return rep;
  }

  rep.axiom = "III";
  int n = n_samples > 0 ? n_samples : 256;
  rep.samples = n;
  bool has_nonzero = false, has_nonone = false;
  std::string d_nonzero, d_nonone;
  auto consider = [&](double p, const std::string& where) {
    if (!has_nonzero && p > TRIVIALITY_MARGIN) {
      has_nonzero = true;
      d_nonzero = "P_S=" + fmt_double(p) + " (" + where + ")";
    }
    if (!has_nonone && std::abs(p - 1.0) > TRIVIALITY_MARGIN) {
      has_nonone = true;
      d_nonone = "P_S=" + fmt_double(p) + " (" + where + ")";
    }
  };
  if (base.witnesses.prob_nonzero) {
    consider(prob_S(WeightedSet::singleton(base.witnesses.prob_nonzero->first),
                    WeightedSet::singleton(base.witnesses.prob_nonzero->second), base),
             "witness");
  }
  if (base.witnesses.prob_nonone) {
    consider(prob_S(WeightedSet::singleton(base.witnesses.prob_nonone->first),
                    WeightedSet::singleton(base.witnesses.prob_nonone->second), base),
             "witness");
  }
  for (int i = 0; i < n && !(has_nonzero && has_nonone); ++i) {
    TheoryObject a = make_obj(base, pick_dim(rng));
    consider(prob_S(sample_state_set(base, a, rng), sample_effect_set(base, a, rng),
                    base),
             "sample " + std::to_string(i));
  }
  rep.pass = has_nonzero && has_nonone;
  if (rep.pass) {
    rep.detail = d_nonzero + "; " + d_nonone;
  } else {
    rep.detail =
        has_nonzero ? "no set pair with P_S != 1 found" : "no set pair with P_S != 0 found";
  }
  return rep;
}

namespace {

WeightedSet sample_scalar_set(const TheorySpec& t, RandomSource& rng, int max_items) {
  std::vector<WeightedItem> items;
  int n = static_cast<int>(rng.index(static_cast<std::size_t>(max_items) + 1));
  for (int i = 0; i < n; ++i) {
    Morphism g = t.sample_process
                     ? t.sample_process(TheoryObject::unit(), TheoryObject::unit(), rng)
                           .value_or(scalar_morphism(rng.normal_complex()))
                     : scalar_morphism(rng.normal_complex());
    items.push_back({g, rng.uniform(0.1, 2.0)});
  }
  return WeightedSet(TheoryObject::unit(), TheoryObject::unit(), std::move(items));
}

}  // namespace

std::vector<AxiomReport> semiring_check(
    const TheorySpec& base, int n_samples, RandomSource& rng, double tol,
    std::function<double(const WeightedSet&)> lambda_fn) {
  // Class equality of weighted scalar sets reduces to equality of the honest
  // scalar assignment: probing a scalar set rescales every term by the same
  // probe factor, so the assignment separates classes at every rule.
  auto cls = [&base](const WeightedSet& g) { return lambda_S(g, base); };
  auto lam = lambda_fn ? lambda_fn : cls;

  const int n = n_samples > 0 ? n_samples : 32;
  const WeightedSet zero =
      WeightedSet::zero(TheoryObject::unit(), TheoryObject::unit());
  const WeightedSet one = WeightedSet::singleton(scalar_morphism(1.0), 1.0);

  struct Law {
    std::string name;
    std::function<double(const WeightedSet&, const WeightedSet&, const WeightedSet&)>
        deviation;
  };
  std::vector<Law> laws;
  laws.push_back({"union-commutative", [&](const WeightedSet& a, const WeightedSet& b,
                                           const WeightedSet&) {
                    return std::abs(cls(ws_union(a, b)) - cls(ws_union(b, a)));
                  }});
  laws.push_back({"union-associative", [&](const WeightedSet& a, const WeightedSet& b,
                                           const WeightedSet& c) {
                    return std::abs(cls(ws_union(ws_union(a, b), c)) -
                                    cls(ws_union(a, ws_union(b, c))));
                  }});
  laws.push_back({"union-unit", [&](const WeightedSet& a, const WeightedSet&,
                                    const WeightedSet&) {
                    return std::max(std::abs(cls(ws_union(a, zero)) - cls(a)),
                                    std::abs(cls(ws_union(zero, a)) - cls(a)));
                  }});
  laws.push_back({"tensor-monoid", [&](const WeightedSet& a, const WeightedSet& b,
                                       const WeightedSet& c) {
                    double assoc = std::abs(cls(ws_tensor(ws_tensor(a, b), c)) -
                                            cls(ws_tensor(a, ws_tensor(b, c))));
                    double unit = std::max(std::abs(cls(ws_tensor(a, one)) - cls(a)),
                                           std::abs(cls(ws_tensor(one, a)) - cls(a)));
                    return std::max(assoc, unit);
                  }});
  laws.push_back({"distributivity", [&](const WeightedSet& a, const WeightedSet& b,
                                        const WeightedSet& c) {
                    double left = std::abs(cls(ws_tensor(a, ws_union(b, c))) -
                                           cls(ws_union(ws_tensor(a, b), ws_tensor(a, c))));
                    double right = std::abs(cls(ws_tensor(ws_union(b, c), a)) -
                                            cls(ws_union(ws_tensor(b, a), ws_tensor(c, a))));
                    return std::max(left, right);
                  }});
  laws.push_back({"annihilation", [&](const WeightedSet& a, const WeightedSet&,
                                      const WeightedSet&) {
                    return std::max(std::abs(cls(ws_tensor(a, zero))),
                                    std::abs(cls(ws_tensor(zero, a))));
                  }});
  laws.push_back({"lambda-additive", [&](const WeightedSet& a, const WeightedSet& b,
                                         const WeightedSet&) {
                    return std::abs(lam(ws_union(a, b)) - (lam(a) + lam(b)));
                  }});
  laws.push_back({"lambda-multiplicative", [&](const WeightedSet& a,
                                               const WeightedSet& b,
                                               const WeightedSet&) {
                    return std::abs(lam(ws_tensor(a, b)) - lam(a) * lam(b));
                  }});
  laws.push_back({"lambda-zero", [&](const WeightedSet&, const WeightedSet&,
                                     const WeightedSet&) { return std::abs(lam(zero)); }});

  std::vector<AxiomReport> out;
  for (const Law& law : laws) {
    AxiomReport rep;
    rep.axiom = law.name;
    rep.samples = n;
    for (int i = 0; i < n; ++i) {
      WeightedSet a = sample_scalar_set(base, rng, 3);
      WeightedSet b = sample_scalar_set(base, rng, 3);
      WeightedSet c = sample_scalar_set(base, rng, 3);
      double dev = law.deviation(a, b, c);
      if (dev > rep.worst_deviation) {
        rep.worst_deviation = dev;
        if (dev > tol) {
          rep.detail = "deviation " + fmt_double(dev) + " at sample " +
                       std::to_string(i);
        }
      }
    }
    rep.pass = rep.worst_deviation <= tol;
    if (rep.pass) rep.detail.clear();
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace bornforge
