#pragma once

#include <optional>
#include <string>
#include <vector>

#include "openmaps/adjunction.hpp"
#include "openmaps/lts.hpp"
#include "openmaps/rational.hpp"

namespace openmaps::prob {

/// One support triple with its probability. A triple with p == 0 is a real
/// transition, distinct from an absent one.
struct SupportTriple {
  std::string src;
  std::string label;
  std::string dst;
  Rational p;

  Transition transition() const { return {src, label, dst}; }
};

/// Partial probabilistic system: an LTS-with-support plus a rational
/// subdistribution mu on the support relation. Exact arithmetic throughout.
struct ProbSystem {
  std::vector<std::string> states;
  std::string initial;
  std::vector<SupportTriple> supp;  // sorted, unique triples

  Lts underlying() const;
  void normalize();
  bool operator==(const ProbSystem&) const = default;
};

/// 0 <= mu <= 1 pointwise, per-(s,a) sums <= 1, valid underlying LTS.
void validate_prob_system(const ProbSystem& t);

struct ProbMorphism {
  ProbSystem source;
  ProbSystem target;
  std::map<std::string, std::string> state_map;

  LtsMorphism base() const;
};

struct ProbMorphismReport {
  bool valid = true;
  std::string detail;  // first violated triple with the aggregated sum
};

/// Underlying morphism validity plus the aggregated-probability inequality
/// for every support triple.
ProbMorphismReport check_prob_morphism(const ProbMorphism& f);

Lts f_forget(const ProbSystem& t);

/// Attaches the everywhere-0 distribution to the transition relation.
ProbSystem iota_zero(const Lts& t);

struct ProbSpan {
  ProbSystem apex;  // everywhere-0 distribution
  ProbMorphism left;
  ProbMorphism right;
};

struct ProbBisimResult {
  std::optional<ProbSpan> span;
  std::vector<BisimRefutationEntry> refutation;
};

/// Probabilistic bisimilarity via the transfer to underlying systems: a span
/// over the everywhere-0 apex exists iff the underlyings are bisimilar.
ProbBisimResult prob_bisimilarity(const ProbSystem& a, const ProbSystem& b);

/// The coreflection instance (identity unit/counit) for the law checker.
/// LawObj in M holds an Lts, in M' a ProbSystem; LawMor holds LtsMorphism /
/// ProbMorphism respectively.
adj::AdjunctionInstance prob_unit_counit();

}  // namespace openmaps::prob
