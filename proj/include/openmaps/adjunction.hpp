#pragma once

#include <any>
#include <functional>
#include <string>
#include <vector>

namespace openmaps::adj {

/// Opaque object / morphism handles; the registering module knows the types.
struct LawObj {
  std::any value;
  std::string desc;
};

struct LawMor {
  std::any value;
  std::string desc;
};

enum class LawStatus { Pass, Fail, Inconclusive };

enum class TriVerdict { Yes, No, Unknown };

struct EqResult {
  LawStatus status = LawStatus::Pass;
  std::string detail;  // first disagreeing element, or the reason it is undecidable
};

/// Category-specific operations of one coreflection F -| iota (F : M' -> M
/// the translation, iota : M -> M' the fully faithful embedding). Equality
/// may be restricted to a finite fragment; it reports Inconclusive rather
/// than silently passing when the fragment is too small.
struct AdjunctionInstance {
  std::string name;
  int depth = 0;  // fragment bound used by the equality tests

  std::function<LawObj(const LawObj&)> F_obj, iota_obj;
  std::function<LawMor(const LawMor&)> F_mor, iota_mor;
  std::function<LawMor(const LawObj&)> unit_at;      // eta_X : X -> F(iota X)
  std::function<LawMor(const LawObj&)> unit_inv_at;  // rho_X : F(iota X) -> X
  std::function<LawMor(const LawObj&)> counit_at;    // eps_X' : iota(F X') -> X'
  std::function<LawMor(const LawMor&, const LawMor&)> compose_M, compose_Mp;
  std::function<LawMor(const LawObj&)> id_M, id_Mp;
  std::function<EqResult(const LawMor&, const LawMor&)> eq_M, eq_Mp;
  std::function<LawObj(const LawMor&)> src_Mp, dst_Mp;  // endpoints for naturality
  std::function<LawObj(const LawMor&)> src_M, dst_M;
  std::function<TriVerdict(const LawObj&, const LawObj&)> bisim_M, bisim_Mp;
};

struct SampleReport {
  std::string sample;
  std::string law;
  LawStatus status = LawStatus::Pass;
  std::string detail;
};

struct LawReport {
  std::string title;
  std::vector<SampleReport> samples;

  LawStatus overall() const;
};

/// Both triangle identities plus eta-is-an-isomorphism, per sample.
LawReport check_triangle_identities(const AdjunctionInstance& inst,
                                    const std::vector<LawObj>& samples_m,
                                    const std::vector<LawObj>& samples_mp);

/// Counit naturality on M'-morphisms and unit naturality on M-morphisms.
LawReport check_naturality(const AdjunctionInstance& inst,
                           const std::vector<LawMor>& morphisms_m,
                           const std::vector<LawMor>& morphisms_mp);

/// Theorem-1 style transfer: bisimilarity of X, Y in M' iff bisimilarity of
/// their translations in M. Reports both verdicts.
LawReport check_bisim_transfer(const AdjunctionInstance& inst, const LawObj& x,
                               const LawObj& y);

/// F preserves composition on a sampled composable pair (functoriality).
LawReport check_functoriality(const AdjunctionInstance& inst, const LawMor& g,
                              const LawMor& f);

}  // namespace openmaps::adj
