#include "openmaps/adjunction.hpp"

namespace openmaps::adj {

LawStatus LawReport::overall() const {
  LawStatus out = LawStatus::Pass;
  for (const auto& s : samples) {
    if (s.status == LawStatus::Fail) return LawStatus::Fail;
    if (s.status == LawStatus::Inconclusive) out = LawStatus::Inconclusive;
  }
  return out;
}

namespace {

SampleReport eq_sample(const std::string& sample, const std::string& law,
                       const EqResult& eq) {
  return SampleReport{sample, law, eq.status, eq.detail};
}

}  // namespace

LawReport check_triangle_identities(const AdjunctionInstance& inst,
                                    const std::vector<LawObj>& samples_m,
                                    const std::vector<LawObj>& samples_mp) {
  LawReport rep;
  rep.title = inst.name + ": triangle identities";
  for (const auto& x : samples_m) {
    // epsilon_{iota X} . iota(eta_X) = id_{iota X}
    LawMor lhs = inst.compose_Mp(inst.counit_at(inst.iota_obj(x)),
                                 inst.iota_mor(inst.unit_at(x)));
    rep.samples.push_back(
        eq_sample(x.desc, "counit.iota(unit) = id", inst.eq_Mp(lhs, inst.id_Mp(inst.iota_obj(x)))));

    // eta is an isomorphism with inverse rho.
    LawMor eta = inst.unit_at(x);
    LawMor rho = inst.unit_inv_at(x);
    rep.samples.push_back(eq_sample(x.desc, "rho.eta = id",
                                    inst.eq_M(inst.compose_M(rho, eta), inst.id_M(x))));
    LawObj fix = inst.F_obj(inst.iota_obj(x));
    rep.samples.push_back(eq_sample(
        x.desc, "eta.rho = id", inst.eq_M(inst.compose_M(eta, rho), inst.id_M(fix))));
  }
  for (const auto& xp : samples_mp) {
    // F(epsilon_X') . eta_{F X'} = id_{F X'}
    LawObj fxp = inst.F_obj(xp);
    LawMor lhs = inst.compose_M(inst.F_mor(inst.counit_at(xp)), inst.unit_at(fxp));
    rep.samples.push_back(
        eq_sample(xp.desc, "F(counit).unit = id", inst.eq_M(lhs, inst.id_M(fxp))));
  }
  return rep;
}

LawReport check_naturality(const AdjunctionInstance& inst,
                           const std::vector<LawMor>& morphisms_m,
                           const std::vector<LawMor>& morphisms_mp) {
  LawReport rep;
  rep.title = inst.name + ": naturality";
  for (const auto& g : morphisms_mp) {
    // eps_Y . iota F(g) = g . eps_X for g : X -> Y in M'
    LawObj x = inst.src_Mp(g), y = inst.dst_Mp(g);
    LawMor lhs = inst.compose_Mp(inst.counit_at(y), inst.iota_mor(inst.F_mor(g)));
    LawMor rhs = inst.compose_Mp(g, inst.counit_at(x));
    rep.samples.push_back(eq_sample(g.desc, "counit natural", inst.eq_Mp(lhs, rhs)));
  }
  for (const auto& f : morphisms_m) {
    // eta_Y . f = F iota(f) . eta_X for f : X -> Y in M
    LawObj x = inst.src_M(f), y = inst.dst_M(f);
    LawMor lhs = inst.compose_M(inst.unit_at(y), f);
    LawMor rhs = inst.compose_M(inst.F_mor(inst.iota_mor(f)), inst.unit_at(x));
    rep.samples.push_back(eq_sample(f.desc, "unit natural", inst.eq_M(lhs, rhs)));
  }
  return rep;
}

LawReport check_bisim_transfer(const AdjunctionInstance& inst, const LawObj& x,
                               const LawObj& y) {
  LawReport rep;
  rep.title = inst.name + ": bisimilarity transfer";
  TriVerdict in_mp = inst.bisim_Mp(x, y);
  TriVerdict in_m = inst.bisim_M(inst.F_obj(x), inst.F_obj(y));
  SampleReport sr;
  sr.sample = x.desc + " vs " + y.desc;
  sr.law = "bisim transfer";
  auto name = [](TriVerdict v) {
    return v == TriVerdict::Yes ? "yes" : v == TriVerdict::No ? "no" : "unknown";
  };
  sr.detail = std::string("M': ") + name(in_mp) + ", M: " + name(in_m);
  if (in_mp == TriVerdict::Unknown || in_m == TriVerdict::Unknown)
    sr.status = LawStatus::Inconclusive;
  else
    sr.status = in_mp == in_m ? LawStatus::Pass : LawStatus::Fail;
  rep.samples.push_back(std::move(sr));
  return rep;
}

LawReport check_functoriality(const AdjunctionInstance& inst, const LawMor& g,
                              const LawMor& f) {
  LawReport rep;
  rep.title = inst.name + ": F preserves composition";
  LawMor lhs = inst.F_mor(inst.compose_Mp(g, f));
  LawMor rhs = inst.compose_M(inst.F_mor(g), inst.F_mor(f));
  rep.samples.push_back(
      eq_sample(g.desc + " . " + f.desc, "F(g.f) = F(g).F(f)", inst.eq_M(lhs, rhs)));
  return rep;
}

}  // namespace openmaps::adj
