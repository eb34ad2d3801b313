#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "openmaps/lts.hpp"
#include "openmaps/rational.hpp"

namespace openmaps::obs {

enum class Metric { Sup, Euclidean };

using RationalVec = std::vector<Rational>;
using FloatVec = std::vector<double>;
using ObsPoint = std::variant<RationalVec, FloatVec, std::string>;

/// Pseudometric observation space. Rational vector spaces are exact: sup
/// distances are rationals, euclidean comparisons go through squared values.
/// Float vector spaces compare within `float_tolerance`.
struct ObsSpace {
  enum class Kind { RationalVector, FloatVector, Discrete };
  Kind kind = Kind::RationalVector;
  int dim = 1;
  Metric metric = Metric::Sup;
  std::vector<std::string> labels;  // Discrete only
  double float_tolerance = 1e-9;

  bool point_ok(const ObsPoint& p) const;
};

/// Distance magnitude: exact for rational spaces (stored squared in the
/// euclidean case), plain double otherwise.
struct Distance {
  std::optional<Rational> exact;
  bool exact_is_squared = false;
  double value = 0.0;

  bool leq(const ObsSpace& space, const Rational& eps) const;
};

Distance distance(const ObsSpace& space, const ObsPoint& x, const ObsPoint& y);

/// d(x, y) <= eps, exact on rational spaces.
bool within(const ObsSpace& space, const ObsPoint& x, const ObsPoint& y,
            const Rational& eps);

/// Exact triangle-inequality test d(x,z) <= d(x,y) + d(y,z) (sqrt-free for
/// euclidean rational spaces).
bool triangle_holds(const ObsSpace& space, const ObsPoint& x, const ObsPoint& y,
                    const ObsPoint& z);

struct ObsSystem {
  Lts underlying;
  ObsSpace space;
  std::map<std::string, ObsPoint> omega;

  const ObsPoint& observe(const std::string& state) const;
};

void validate_obs_system(const ObsSystem& t);

struct BoundedMorphism {
  LtsMorphism underlying;
  Rational bound;  // epsilon
};

/// max over all source states of d(omega(s), omega'(f(s))).
Distance tightest_bound(const ObsSystem& src, const ObsSystem& dst,
                        const LtsMorphism& f);

/// Checks that f is a valid morphism on underlyings and eps-bounded.
bool check_bounded_morphism(const ObsSystem& src, const ObsSystem& dst,
                            const BoundedMorphism& f);

inline Lts forget_observations(const ObsSystem& t) { return t.underlying; }

struct ApproxBisim {
  BisimRelation relation;
  Rational epsilon;
};

/// Certificate entry for non-(eps-)bisimilarity. round == 0 means the pair
/// was excluded by the observation gap; round >= 1 cites an unanswered move
/// whose responses were all eliminated earlier.
struct ApproxRefutationEntry {
  std::pair<std::string, std::string> pair;
  int round = 0;
  bool left_to_right = true;
  Transition move;  // meaningful when round >= 1
};

struct ApproxBisimResult {
  std::optional<ApproxBisim> relation;
  std::vector<ApproxRefutationEntry> refutation;
};

/// Greatest eps-approximate bisimulation containing the initial pair, by
/// seeding with the observation-compatible pairs and refining with the two
/// strong-bisimulation transfer conditions.
ApproxBisimResult approx_bisimilarity(const ObsSystem& a, const ObsSystem& b,
                                      const Rational& eps);

bool check_approx_refutation(const std::vector<ApproxRefutationEntry>& cert,
                             const ObsSystem& a, const ObsSystem& b,
                             const Rational& eps);

/// Validates an eps-approximate bisimulation candidate.
bool check_approx_bisim(const ObsSystem& a, const ObsSystem& b, const ApproxBisim& r);

struct ObsSpan {
  ObsSystem apex;  // T_R with omega(s, s') = omega(s)
  LtsMorphism left;
  LtsMorphism right;
  Distance left_bound;   // 0 by construction
  Distance right_bound;  // <= eps of the relation
};

/// Realizes the span of a 0-bounded and an eps-bounded open morphism from an
/// approximate bisimulation; throws ModelError when the relation is invalid.
ObsSpan span_from_approx(const ObsSystem& a, const ObsSystem& b, const ApproxBisim& r);

/// Relation of a span of bounded morphisms; epsilon = sum of the leg bounds
/// (exact for non-squared distance magnitudes).
ApproxBisim relation_from_obs_span(const ObsSystem& a, const ObsSystem& b,
                                   const ObsSpan& span);

struct VUnfolding {
  ObsSystem tree;  // over the run tree; omega(run) = omega(ending state)
  LtsMorphism unf;
  std::set<std::string> frontier;
  std::optional<int> depth_bound;
};

VUnfolding v_unfold(const ObsSystem& t, int depth);

}  // namespace openmaps::obs
