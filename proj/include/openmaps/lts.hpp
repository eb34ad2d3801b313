#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace openmaps {

/// Raised on malformed input (dangling state ids, bad schemas, broken
/// invariants). Distinct from a negative verdict, which is ordinary output.
struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Transition {
  std::string src;
  std::string label;
  std::string dst;

  auto operator<=>(const Transition&) const = default;
};

/// Finite labelled transition system. States and labels are opaque strings;
/// `states` and `transitions` are kept sorted and duplicate-free.
struct Lts {
  std::vector<std::string> states;
  std::string initial;
  std::vector<Transition> transitions;

  bool has_state(const std::string& s) const;
  void normalize();  // sort + dedupe
};

/// Checks the Lts structural invariants; throws ModelError on violation.
void validate_lts(const Lts& t);

/// The chain-shaped system spelling `word`, states "0".."n".
Lts linear_system(const std::vector<std::string>& word);

std::set<std::string> reachable_states(const Lts& t);

/// Total state map between two systems. Validity (initial preservation +
/// transition preservation) is a verdict, not a construction invariant.
struct LtsMorphism {
  Lts source;
  Lts target;
  std::map<std::string, std::string> state_map;

  const std::string& apply(const std::string& s) const;
};

struct MorphismReport {
  bool valid = true;
  bool initial_violation = false;
  std::vector<Transition> violated_transitions;  // source transitions not preserved
};

/// Verifies the morphism conditions. Throws ModelError when the map is not
/// total over source states or mentions unknown target states.
MorphismReport check_morphism(const LtsMorphism& f);

LtsMorphism identity_morphism(const Lts& t);
LtsMorphism compose(const LtsMorphism& g, const LtsMorphism& f);  // g after f

/// A run i -a1-> s1 ... -an-> sn, i.e. a path instance L(a1..an) -> T.
struct Run {
  std::vector<Transition> steps;  // chained from the initial state

  std::vector<std::string> word() const;
  const std::string& end(const Lts& system) const;
};

bool is_valid_run(const Lts& system, const Run& run);

struct BisimRelation {
  std::set<std::pair<std::string, std::string>> pairs;
};

/// One failed transfer instance of a candidate bisimulation.
struct TransferViolation {
  std::pair<std::string, std::string> pair;
  bool left_to_right = true;  // which side issued the unmatched transition
  Transition move;
};

/// Checks both strong-bisimulation transfer conditions for every pair.
std::optional<TransferViolation> find_transfer_violation(const BisimRelation& r,
                                                         const Lts& left,
                                                         const Lts& right);

enum class BisimEngine { NaiveFixpoint, NaiveFixpointSerial, PartitionRefinement };

/// Inductive non-bisimilarity certificate: pairs eliminated from the greatest
/// fixpoint, each with the move no response survives. Re-checkable without
/// re-running the engine.
struct BisimRefutationEntry {
  std::pair<std::string, std::string> pair;
  int round = 0;              // elimination round; responses cite earlier rounds
  bool left_to_right = true;  // side of the unanswered move
  Transition move;
};

struct BisimResult {
  std::optional<BisimRelation> relation;  // greatest bisim when initials related
  std::vector<BisimRefutationEntry> refutation;  // nonempty when not bisimilar
};

/// Greatest strong bisimulation between the reachable parts, or absent when
/// the initial states are not related.
BisimResult strong_bisimilarity(const Lts& a, const Lts& b,
                                BisimEngine engine = BisimEngine::NaiveFixpoint);

/// Confirms a refutation certificate against the two systems: every cited
/// move must exist and every response must land on an earlier-round entry.
bool check_refutation(const std::vector<BisimRefutationEntry>& cert, const Lts& a,
                      const Lts& b);

struct Span {
  Lts apex;
  LtsMorphism left;
  LtsMorphism right;
};

/// Apex = pairs of R with synchronized transitions; legs are projections.
/// Throws ModelError carrying the failing transfer instance when R is not a
/// strong bisimulation containing the initial pair.
Span span_from_relation(const BisimRelation& r, const Lts& left, const Lts& right);

BisimRelation relation_from_span(const Span& s);

enum class OpenCheckMode { GraphBisim, LiftingOracle };

/// Counterexample square: a run p of the source, a one-step extension label,
/// and the target transition q' that admits no lift.
struct LiftingCounterexample {
  Run run;
  std::string extension_label;
  Transition target_extension;
};

struct OpenReport {
  bool open = true;
  std::optional<LiftingCounterexample> counterexample;
};

/// Lin-openness of a valid morphism. GraphBisim decides exactly on finite
/// systems; LiftingOracle enumerates runs up to max_len and searches lifts.
OpenReport is_open(const LtsMorphism& f, OpenCheckMode mode, int max_len = 0);

/// Confirms a lifting counterexample: the square commutes and has no lift.
bool check_lifting_counterexample(const LtsMorphism& f, const LiftingCounterexample& ce);

/// All morphisms L(w) -> L(w'): empty unless w is a prefix of w', in which
/// case the unique morphism is k |-> k.
std::vector<LtsMorphism> enumerate_linear_morphisms(const std::vector<std::string>& w,
                                                    const std::vector<std::string>& w_prime);

}  // namespace openmaps
