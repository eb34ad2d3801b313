#pragma once

#include <optional>
#include <set>
#include <string>

#include "openmaps/lts.hpp"

namespace openmaps {

/// Depth-bounded run tree of a system. Tree states are runs encoded as
/// "s0 -a1-> s1 -a2-> ...", the initial state being the bare "s0". States on
/// the truncation frontier (runs of exactly depth_bound steps) are marked so
/// law checks can exclude them.
struct RunTree {
  Lts underlying;
  std::optional<int> depth_bound;
  std::set<std::string> frontier;
};

struct Unfolding {
  RunTree tree;
  LtsMorphism unf;  // run -> its ending state
};

std::string encode_run(const Lts& system, const Run& run);

/// All runs of length <= depth, as a tree, plus the unf morphism.
Unfolding unfold(const Lts& t, int depth);

/// True iff every state is reached by exactly one run: reachable, initial
/// in-degree 0, all other in-degrees exactly 1 (counting transitions).
bool is_tree(const Lts& t);

struct UnfOpenReport {
  bool morphism_valid = true;
  bool open = true;
  std::optional<LiftingCounterexample> counterexample;
};

/// Openness of unf away from the truncation frontier: back-transfer is
/// checked for every tree state of depth < `depth` only.
UnfOpenReport unf_is_open_check(const Lts& t, int depth);

/// Same check against a caller-supplied (possibly corrupted) unfolding.
UnfOpenReport unf_is_open_check(const Lts& t, const Unfolding& u);

}  // namespace openmaps
