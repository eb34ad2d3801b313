#include "openmaps/prob.hpp"

#include <algorithm>
#include <map>

namespace openmaps::prob {

Lts ProbSystem::underlying() const {
  Lts t;
  t.states = states;
  t.initial = initial;
  for (const auto& s : supp) t.transitions.push_back(s.transition());
  t.normalize();
  return t;
}

void ProbSystem::normalize() {
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());
  std::sort(supp.begin(), supp.end(), [](const SupportTriple& x, const SupportTriple& y) {
    return std::tie(x.src, x.label, x.dst) < std::tie(y.src, y.label, y.dst);
  });
}

void validate_prob_system(const ProbSystem& t) {
  validate_lts(t.underlying());
  for (size_t i = 1; i < t.supp.size(); ++i) {
    const auto& a = t.supp[i - 1];
    const auto& b = t.supp[i];
    if (std::tie(a.src, a.label, a.dst) == std::tie(b.src, b.label, b.dst))
      throw ModelError("duplicate support triple (" + a.src + ", " + a.label + ", " +
                       a.dst + ")");
  }
  std::map<std::pair<std::string, std::string>, Rational> sums;
  for (const auto& s : t.supp) {
    if (s.p < 0 || s.p > 1)
      throw ModelError("probability out of [0,1] on (" + s.src + ", " + s.label +
                       ", " + s.dst + "): " + format_rational(s.p));
    sums[{s.src, s.label}] += s.p;
  }
  for (const auto& [key, sum] : sums)
    if (sum > 1)
      throw ModelError("subdistribution sum exceeds 1 at (" + key.first + ", " +
                       key.second + "): " + format_rational(sum));
}

LtsMorphism ProbMorphism::base() const {
  LtsMorphism f;
  f.source = source.underlying();
  f.target = target.underlying();
  f.state_map = state_map;
  return f;
}

ProbMorphismReport check_prob_morphism(const ProbMorphism& f) {
  ProbMorphismReport rep;
  auto b = f.base();
  auto urep = check_morphism(b);
  if (!urep.valid) {
    rep.valid = false;
    rep.detail = "underlying morphism invalid";
    return rep;
  }
  std::map<Transition, Rational> mu_target;
  for (const auto& s : f.target.supp) mu_target[s.transition()] = s.p;
  for (const auto& s : f.source.supp) {
    // Aggregate the mass of all (src, label, t') collapsing onto f(dst).
    Rational sum = 0;
    const std::string image_dst = b.apply(s.dst);
    for (const auto& s2 : f.source.supp)
      if (s2.src == s.src && s2.label == s.label && b.apply(s2.dst) == image_dst)
        sum += s2.p;
    Transition image{b.apply(s.src), s.label, image_dst};
    Rational bound = mu_target.at(image);
    if (sum > bound) {
      rep.valid = false;
      rep.detail = "aggregated mass " + format_rational(sum) + " over (" + s.src +
                   ", " + s.label + ") exceeds " + format_rational(bound) + " at (" +
                   image.src + ", " + image.label + ", " + image.dst + ")";
      return rep;
    }
  }
  return rep;
}

Lts f_forget(const ProbSystem& t) { return t.underlying(); }

ProbSystem iota_zero(const Lts& t) {
  ProbSystem p;
  p.states = t.states;
  p.initial = t.initial;
  for (const auto& tr : t.transitions) p.supp.push_back({tr.src, tr.label, tr.dst, 0});
  p.normalize();
  return p;
}

ProbBisimResult prob_bisimilarity(const ProbSystem& a, const ProbSystem& b) {
  validate_prob_system(a);
  validate_prob_system(b);
  auto ua = a.underlying();
  auto ub = b.underlying();
  auto res = strong_bisimilarity(ua, ub);
  ProbBisimResult out;
  if (!res.relation) {
    out.refutation = std::move(res.refutation);
    return out;
  }
  Span base = span_from_relation(*res.relation, ua, ub);
  ProbSpan span;
  span.apex = iota_zero(base.apex);
  span.left = ProbMorphism{span.apex, a, base.left.state_map};
  span.right = ProbMorphism{span.apex, b, base.right.state_map};
  if (!check_prob_morphism(span.left).valid || !check_prob_morphism(span.right).valid)
    throw ModelError("probabilistic span leg failed validation");
  if (!is_open(base.left, OpenCheckMode::GraphBisim).open ||
      !is_open(base.right, OpenCheckMode::GraphBisim).open)
    throw ModelError("probabilistic span leg is not open on underlyings");
  out.span = std::move(span);
  return out;
}

adj::AdjunctionInstance prob_unit_counit() {
  using adj::LawMor;
  using adj::LawObj;
  adj::AdjunctionInstance inst;
  inst.name = "prob";

  auto as_lts = [](const LawObj& o) { return std::any_cast<Lts>(o.value); };
  auto as_prob = [](const LawObj& o) { return std::any_cast<ProbSystem>(o.value); };
  auto as_ltsm = [](const LawMor& m) { return std::any_cast<LtsMorphism>(m.value); };
  auto as_probm = [](const LawMor& m) { return std::any_cast<ProbMorphism>(m.value); };

  inst.F_obj = [=](const LawObj& o) {
    return LawObj{f_forget(as_prob(o)), "F(" + o.desc + ")"};
  };
  inst.iota_obj = [=](const LawObj& o) {
    return LawObj{iota_zero(as_lts(o)), "iota(" + o.desc + ")"};
  };
  inst.F_mor = [=](const LawMor& m) {
    auto pm = as_probm(m);
    return LawMor{pm.base(), "F(" + m.desc + ")"};
  };
  inst.iota_mor = [=](const LawMor& m) {
    auto lm = as_ltsm(m);
    ProbMorphism pm{iota_zero(lm.source), iota_zero(lm.target), lm.state_map};
    return LawMor{pm, "iota(" + m.desc + ")"};
  };
  inst.unit_at = [=](const LawObj& o) {
    return LawMor{identity_morphism(as_lts(o)), "eta_" + o.desc};
  };
  inst.unit_inv_at = [=](const LawObj& o) {
    return LawMor{identity_morphism(as_lts(o)), "rho_" + o.desc};
  };
  inst.counit_at = [=](const LawObj& o) {
    auto t = as_prob(o);
    ProbMorphism eps{iota_zero(t.underlying()), t, {}};
    for (const auto& s : t.states) eps.state_map[s] = s;
    return LawMor{eps, "eps_" + o.desc};
  };
  inst.compose_M = [=](const LawMor& g, const LawMor& f) {
    return LawMor{compose(as_ltsm(g), as_ltsm(f)), g.desc + "." + f.desc};
  };
  inst.compose_Mp = [=](const LawMor& g, const LawMor& f) {
    auto gm = as_probm(g);
    auto fm = as_probm(f);
    ProbMorphism h{fm.source, gm.target, {}};
    for (const auto& [s, fs] : fm.state_map) h.state_map[s] = gm.state_map.at(fs);
    return LawMor{h, g.desc + "." + f.desc};
  };
  inst.id_M = [=](const LawObj& o) {
    return LawMor{identity_morphism(as_lts(o)), "id_" + o.desc};
  };
  inst.id_Mp = [=](const LawObj& o) {
    auto t = as_prob(o);
    ProbMorphism id{t, t, {}};
    for (const auto& s : t.states) id.state_map[s] = s;
    return LawMor{id, "id_" + o.desc};
  };
  inst.eq_M = [=](const LawMor& x, const LawMor& y) {
    auto a = as_ltsm(x);
    auto b = as_ltsm(y);
    adj::EqResult r;
    if (a.source.states != b.source.states || a.target.states != b.target.states ||
        a.state_map != b.state_map) {
      r.status = adj::LawStatus::Fail;
      r.detail = x.desc + " != " + y.desc;
    }
    return r;
  };
  inst.eq_Mp = [=](const LawMor& x, const LawMor& y) {
    auto a = as_probm(x);
    auto b = as_probm(y);
    adj::EqResult r;
    if (!(a.source == b.source) || !(a.target == b.target) ||
        a.state_map != b.state_map) {
      r.status = adj::LawStatus::Fail;
      r.detail = x.desc + " != " + y.desc;
    }
    return r;
  };
  inst.src_M = [=](const LawMor& m) {
    return LawObj{as_ltsm(m).source, "src(" + m.desc + ")"};
  };
  inst.dst_M = [=](const LawMor& m) {
    return LawObj{as_ltsm(m).target, "dst(" + m.desc + ")"};
  };
  inst.src_Mp = [=](const LawMor& m) {
    return LawObj{as_probm(m).source, "src(" + m.desc + ")"};
  };
  inst.dst_Mp = [=](const LawMor& m) {
    return LawObj{as_probm(m).target, "dst(" + m.desc + ")"};
  };
  inst.bisim_M = [=](const LawObj& x, const LawObj& y) {
    return strong_bisimilarity(as_lts(x), as_lts(y)).relation ? adj::TriVerdict::Yes
                                                              : adj::TriVerdict::No;
  };
  inst.bisim_Mp = [=](const LawObj& x, const LawObj& y) {
    return prob_bisimilarity(as_prob(x), as_prob(y)).span ? adj::TriVerdict::Yes
                                                          : adj::TriVerdict::No;
  };
  return inst;
}

}  // namespace openmaps::prob
