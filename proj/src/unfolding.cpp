#include "openmaps/unfolding.hpp"

#include <deque>
#include <map>
#include <unordered_map>

namespace openmaps {

std::string encode_run(const Lts& system, const Run& run) {
  std::string out = system.initial;
  for (const auto& s : run.steps) {
    out += " -" + s.label + "-> " + s.dst;
  }
  return out;
}

Unfolding unfold(const Lts& t, int depth) {
  validate_lts(t);
  if (depth < 0) throw ModelError("unfold depth must be nonnegative");
  std::unordered_map<std::string, std::vector<const Transition*>> out;
  for (const auto& tr : t.transitions) out[tr.src].push_back(&tr);

  Unfolding u;
  u.tree.depth_bound = depth;
  u.unf.target = t;

  std::deque<Run> queue{Run{}};
  while (!queue.empty()) {
    Run run = std::move(queue.front());
    queue.pop_front();
    std::string id = encode_run(t, run);
    std::string end = run.end(t);
    u.tree.underlying.states.push_back(id);
    u.unf.state_map[id] = end;
    if (static_cast<int>(run.steps.size()) == depth) {
      u.tree.frontier.insert(id);
      continue;
    }
    for (const auto* tr : out[end]) {
      Run next = run;
      next.steps.push_back(*tr);
      u.tree.underlying.transitions.push_back({id, tr->label, encode_run(t, next)});
      queue.push_back(std::move(next));
    }
  }
  u.tree.underlying.initial = t.initial;
  u.tree.underlying.normalize();
  u.unf.source = u.tree.underlying;
  return u;
}

bool is_tree(const Lts& t) {
  validate_lts(t);
  auto reach = reachable_states(t);
  if (reach.size() != t.states.size()) return false;
  std::map<std::string, int> indeg;
  for (const auto& s : t.states) indeg[s] = 0;
  for (const auto& tr : t.transitions) indeg[tr.dst] += 1;
  if (indeg[t.initial] != 0) return false;
  for (const auto& s : t.states)
    if (s != t.initial && indeg[s] != 1) return false;
  return true;
}

UnfOpenReport unf_is_open_check(const Lts& t, int depth) {
  return unf_is_open_check(t, unfold(t, depth));
}

UnfOpenReport unf_is_open_check(const Lts& t, const Unfolding& u) {
  UnfOpenReport rep;
  try {
    auto morep = check_morphism(u.unf);
    if (!morep.valid) {
      rep.morphism_valid = false;
      rep.open = false;
      return rep;
    }
  } catch (const ModelError&) {
    rep.morphism_valid = false;
    rep.open = false;
    return rep;
  }

  std::unordered_map<std::string, std::vector<const Transition*>> tree_out, sys_out;
  for (const auto& tr : u.tree.underlying.transitions) tree_out[tr.src].push_back(&tr);
  for (const auto& tr : t.transitions) sys_out[tr.src].push_back(&tr);

  for (const auto& node : u.tree.underlying.states) {
    if (u.tree.frontier.count(node)) continue;  // excluded truncation frontier
    const std::string& end = u.unf.apply(node);
    for (const auto* tr : sys_out[end]) {
      bool lifted = false;
      for (const auto* te : tree_out[node])
        if (te->label == tr->label && u.unf.apply(te->dst) == tr->dst) {
          lifted = true;
          break;
        }
      if (!lifted) {
        rep.open = false;
        rep.counterexample = LiftingCounterexample{Run{}, tr->label, *tr};
        return rep;
      }
    }
  }
  return rep;
}

}  // namespace openmaps
