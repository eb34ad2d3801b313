#include "openmaps/lts.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "openmaps/bisim_kernels.hpp"

namespace openmaps {

bool Lts::has_state(const std::string& s) const {
  return std::binary_search(states.begin(), states.end(), s);
}

void Lts::normalize() {
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());
  std::sort(transitions.begin(), transitions.end());
  transitions.erase(std::unique(transitions.begin(), transitions.end()),
                    transitions.end());
}

void validate_lts(const Lts& t) {
  if (t.states.empty()) throw ModelError("system has no states");
  if (!std::is_sorted(t.states.begin(), t.states.end()))
    throw ModelError("states not normalized");
  if (!t.has_state(t.initial))
    throw ModelError("initial state '" + t.initial + "' not in state set");
  for (const auto& tr : t.transitions) {
    if (!t.has_state(tr.src))
      throw ModelError("transition source '" + tr.src + "' not in state set");
    if (!t.has_state(tr.dst))
      throw ModelError("transition target '" + tr.dst + "' not in state set");
  }
}

Lts linear_system(const std::vector<std::string>& word) {
  Lts t;
  t.initial = "0";
  for (size_t k = 0; k <= word.size(); ++k) t.states.push_back(std::to_string(k));
  for (size_t k = 0; k < word.size(); ++k)
    t.transitions.push_back({std::to_string(k), word[k], std::to_string(k + 1)});
  t.normalize();
  return t;
}

std::set<std::string> reachable_states(const Lts& t) {
  std::set<std::string> seen{t.initial};
  std::deque<std::string> queue{t.initial};
  std::unordered_map<std::string, std::vector<const Transition*>> out;
  for (const auto& tr : t.transitions) out[tr.src].push_back(&tr);
  while (!queue.empty()) {
    auto s = queue.front();
    queue.pop_front();
    for (const auto* tr : out[s])
      if (seen.insert(tr->dst).second) queue.push_back(tr->dst);
  }
  return seen;
}

const std::string& LtsMorphism::apply(const std::string& s) const {
  auto it = state_map.find(s);
  if (it == state_map.end())
    throw ModelError("state map not defined on '" + s + "'");
  return it->second;
}

MorphismReport check_morphism(const LtsMorphism& f) {
  validate_lts(f.source);
  validate_lts(f.target);
  for (const auto& s : f.source.states) {
    auto it = f.state_map.find(s);
    if (it == f.state_map.end())
      throw ModelError("state map not total: missing '" + s + "'");
    if (!f.target.has_state(it->second))
      throw ModelError("state map sends '" + s + "' to unknown target state '" +
                       it->second + "'");
  }
  MorphismReport rep;
  if (f.apply(f.source.initial) != f.target.initial) {
    rep.valid = false;
    rep.initial_violation = true;
  }
  std::set<Transition> target_set(f.target.transitions.begin(),
                                  f.target.transitions.end());
  for (const auto& tr : f.source.transitions) {
    Transition image{f.apply(tr.src), tr.label, f.apply(tr.dst)};
    if (!target_set.count(image)) {
      rep.valid = false;
      rep.violated_transitions.push_back(tr);
    }
  }
  return rep;
}

LtsMorphism identity_morphism(const Lts& t) {
  LtsMorphism f;
  f.source = t;
  f.target = t;
  for (const auto& s : t.states) f.state_map[s] = s;
  return f;
}

LtsMorphism compose(const LtsMorphism& g, const LtsMorphism& f) {
  LtsMorphism h;
  h.source = f.source;
  h.target = g.target;
  for (const auto& [s, fs] : f.state_map) h.state_map[s] = g.apply(fs);
  return h;
}

std::vector<std::string> Run::word() const {
  std::vector<std::string> w;
  w.reserve(steps.size());
  for (const auto& t : steps) w.push_back(t.label);
  return w;
}

const std::string& Run::end(const Lts& system) const {
  return steps.empty() ? system.initial : steps.back().dst;
}

bool is_valid_run(const Lts& system, const Run& run) {
  std::set<Transition> ts(system.transitions.begin(), system.transitions.end());
  std::string at = system.initial;
  for (const auto& step : run.steps) {
    if (step.src != at || !ts.count(step)) return false;
    at = step.dst;
  }
  return true;
}

std::optional<TransferViolation> find_transfer_violation(const BisimRelation& r,
                                                         const Lts& left,
                                                         const Lts& right) {
  std::unordered_map<std::string, std::vector<const Transition*>> lout, rout;
  for (const auto& t : left.transitions) lout[t.src].push_back(&t);
  for (const auto& t : right.transitions) rout[t.src].push_back(&t);
  for (const auto& [s, sp] : r.pairs) {
    for (const auto* t : lout[s]) {
      bool ok = false;
      for (const auto* tp : rout[sp])
        if (tp->label == t->label && r.pairs.count({t->dst, tp->dst})) {
          ok = true;
          break;
        }
      if (!ok) return TransferViolation{{s, sp}, true, *t};
    }
    for (const auto* tp : rout[sp]) {
      bool ok = false;
      for (const auto* t : lout[s])
        if (t->label == tp->label && r.pairs.count({t->dst, tp->dst})) {
          ok = true;
          break;
        }
      if (!ok) return TransferViolation{{s, sp}, false, *tp};
    }
  }
  return std::nullopt;
}

namespace {

BisimResult bisim_via_fixpoint(const Lts& a, const Lts& b, bool parallel) {
  auto [ia, ib] = kernels::index_pair(a, b);
  auto trace = kernels::greatest_bisim_traced(
      ia, ib, kernels::full_seed(static_cast<int>(ia.states.size()),
                                 static_cast<int>(ib.states.size())),
      parallel);
  BisimResult res;
  if (trace.final.at(ia.initial, ib.initial)) {
    BisimRelation rel;
    for (int i = 0; i < trace.final.na; ++i)
      for (int j = 0; j < trace.final.nb; ++j)
        if (trace.final.at(i, j)) rel.pairs.insert({ia.states[i], ib.states[j]});
    res.relation = std::move(rel);
    return res;
  }
  // Build the refutation certificate from the elimination trace. A pair
  // removed in round r cites a move whose responses were all removed in
  // rounds < r; the Jacobi sweep guarantees such a move exists.
  auto removed_before = [&](int t, int tp, int round) {
    size_t q = static_cast<size_t>(t) * trace.final.nb + tp;
    return !trace.final.bits[q] && trace.removed_round[q] < round;
  };
  for (int i = 0; i < trace.final.na; ++i) {
    for (int j = 0; j < trace.final.nb; ++j) {
      size_t p = static_cast<size_t>(i) * trace.final.nb + j;
      int round = trace.removed_round[p];
      if (round == 0) continue;
      BisimRefutationEntry entry;
      entry.pair = {ia.states[i], ib.states[j]};
      entry.round = round;
      bool found = false;
      for (const auto& [l, t] : ia.succ[i]) {
        bool unanswered = true;
        for (const auto& [lp, tp] : ib.succ[j])
          if (lp == l && !removed_before(t, tp, round)) {
            unanswered = false;
            break;
          }
        if (unanswered) {
          entry.left_to_right = true;
          entry.move = {ia.states[i], ia.labels[l], ia.states[t]};
          found = true;
          break;
        }
      }
      if (!found) {
        for (const auto& [l, tp] : ib.succ[j]) {
          bool unanswered = true;
          for (const auto& [la, t] : ia.succ[i])
            if (la == l && !removed_before(t, tp, round)) {
              unanswered = false;
              break;
            }
          if (unanswered) {
            entry.left_to_right = false;
            entry.move = {ib.states[j], ib.labels[l], ib.states[tp]};
            found = true;
            break;
          }
        }
      }
      if (found) res.refutation.push_back(entry);
    }
  }
  return res;
}

}  // namespace

BisimResult strong_bisimilarity(const Lts& a, const Lts& b, BisimEngine engine) {
  validate_lts(a);
  validate_lts(b);
  if (engine == BisimEngine::PartitionRefinement) {
    auto [ia, ib] = kernels::index_pair(a, b);
    auto block = kernels::partition_refinement(ia, ib);
    const int na = static_cast<int>(ia.states.size());
    BisimResult res;
    if (block[ia.initial] != block[na + ib.initial]) {
      // Certificates come from the fixpoint engine; rebuild one for parity.
      return bisim_via_fixpoint(a, b, false);
    }
    BisimRelation rel;
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < static_cast<int>(ib.states.size()); ++j)
        if (block[i] == block[na + j]) rel.pairs.insert({ia.states[i], ib.states[j]});
    res.relation = std::move(rel);
    return res;
  }
  return bisim_via_fixpoint(a, b, engine == BisimEngine::NaiveFixpoint);
}

bool check_refutation(const std::vector<BisimRefutationEntry>& cert, const Lts& a,
                      const Lts& b) {
  if (cert.empty()) return false;
  std::map<std::pair<std::string, std::string>, int> round_of;
  for (const auto& e : cert) round_of[e.pair] = e.round;
  bool initial_cited = false;
  std::unordered_map<std::string, std::vector<const Transition*>> aout, bout;
  for (const auto& t : a.transitions) aout[t.src].push_back(&t);
  for (const auto& t : b.transitions) bout[t.src].push_back(&t);
  std::set<Transition> aset(a.transitions.begin(), a.transitions.end());
  std::set<Transition> bset(b.transitions.begin(), b.transitions.end());
  for (const auto& e : cert) {
    if (e.pair == std::make_pair(a.initial, b.initial)) initial_cited = true;
    // The cited move must exist on its side...
    if (e.left_to_right) {
      if (e.move.src != e.pair.first || !aset.count(e.move)) return false;
      for (const auto* tp : bout[e.pair.second]) {
        if (tp->label != e.move.label) continue;
        auto it = round_of.find({e.move.dst, tp->dst});
        if (it == round_of.end() || it->second >= e.round) return false;
      }
    } else {
      if (e.move.src != e.pair.second || !bset.count(e.move)) return false;
      for (const auto* t : aout[e.pair.first]) {
        if (t->label != e.move.label) continue;
        auto it = round_of.find({t->dst, e.move.dst});
        if (it == round_of.end() || it->second >= e.round) return false;
      }
    }
  }
  return initial_cited;
}

Span span_from_relation(const BisimRelation& r, const Lts& left, const Lts& right) {
  if (!r.pairs.count({left.initial, right.initial}))
    throw ModelError("relation does not contain the initial pair");
  if (auto v = find_transfer_violation(r, left, right)) {
    throw ModelError("relation is not a strong bisimulation: pair (" +
                     v->pair.first + ", " + v->pair.second + ") fails on " +
                     (v->left_to_right ? "left" : "right") + " move '" +
                     v->move.label + "' to '" + v->move.dst + "'");
  }
  auto pair_id = [](const std::string& s, const std::string& sp) {
    return "(" + s + "," + sp + ")";
  };
  Span span;
  span.apex.initial = pair_id(left.initial, right.initial);
  for (const auto& [s, sp] : r.pairs) {
    span.apex.states.push_back(pair_id(s, sp));
    span.left.state_map[pair_id(s, sp)] = s;
    span.right.state_map[pair_id(s, sp)] = sp;
  }
  std::set<Transition> rset(right.transitions.begin(), right.transitions.end());
  for (const auto& [s, sp] : r.pairs) {
    for (const auto& t : left.transitions) {
      if (t.src != s) continue;
      for (const auto& [u, up] : r.pairs) {
        if (u != t.dst) continue;
        if (rset.count({sp, t.label, up}))
          span.apex.transitions.push_back({pair_id(s, sp), t.label, pair_id(u, up)});
      }
    }
  }
  span.apex.normalize();
  span.left.source = span.apex;
  span.left.target = left;
  span.right.source = span.apex;
  span.right.target = right;
  return span;
}

BisimRelation relation_from_span(const Span& s) {
  BisimRelation r;
  for (const auto& x : s.apex.states)
    r.pairs.insert({s.left.apply(x), s.right.apply(x)});
  return r;
}

namespace {

// Back-transfer check of the graph of f on the reachable part; forward
// transfer is morphism validity, which the caller has already established.
std::optional<LiftingCounterexample> graph_bisim_gap(const LtsMorphism& f) {
  std::unordered_map<std::string, std::vector<const Transition*>> sout, tout;
  for (const auto& t : f.source.transitions) sout[t.src].push_back(&t);
  for (const auto& t : f.target.transitions) tout[t.src].push_back(&t);

  // BFS keeping one witnessing run per reachable state.
  std::unordered_map<std::string, Run> run_to;
  std::deque<std::string> queue{f.source.initial};
  run_to[f.source.initial] = Run{};
  while (!queue.empty()) {
    auto s = queue.front();
    queue.pop_front();
    const Run& here = run_to[s];
    for (const auto* tp : tout[f.apply(s)]) {
      bool lifted = false;
      for (const auto* t : sout[s])
        if (t->label == tp->label && f.apply(t->dst) == tp->dst) {
          lifted = true;
          break;
        }
      if (!lifted) return LiftingCounterexample{here, tp->label, *tp};
    }
    for (const auto* t : sout[s]) {
      if (run_to.count(t->dst)) continue;
      Run next = here;
      next.steps.push_back(*t);
      run_to[t->dst] = std::move(next);
      queue.push_back(t->dst);
    }
  }
  return std::nullopt;
}

// Literal lifting search: walk runs (pruned once an end state has been
// visited at equal-or-smaller length), enumerate one-step extensions of the
// image path, and look for lifts.
std::optional<LiftingCounterexample> lifting_oracle_gap(const LtsMorphism& f,
                                                        int max_len) {
  std::unordered_map<std::string, std::vector<const Transition*>> sout, tout;
  for (const auto& t : f.source.transitions) sout[t.src].push_back(&t);
  for (const auto& t : f.target.transitions) tout[t.src].push_back(&t);

  std::unordered_set<std::string> visited{f.source.initial};
  std::deque<Run> queue{Run{}};
  while (!queue.empty()) {
    Run p = std::move(queue.front());
    queue.pop_front();
    const std::string& end = p.end(f.source);
    // q' ranges over extensions of f∘p along e : L(w) -> L(wa).
    for (const auto* tp : tout[f.apply(end)]) {
      bool has_lift = false;
      for (const auto* t : sout[end])
        if (t->label == tp->label && f.apply(t->dst) == tp->dst) {
          has_lift = true;
          break;
        }
      if (!has_lift) return LiftingCounterexample{p, tp->label, *tp};
    }
    if (static_cast<int>(p.steps.size()) >= max_len) continue;
    for (const auto* t : sout[end]) {
      if (!visited.insert(t->dst).second) continue;
      Run next = p;
      next.steps.push_back(*t);
      queue.push_back(std::move(next));
    }
  }
  return std::nullopt;
}

}  // namespace

OpenReport is_open(const LtsMorphism& f, OpenCheckMode mode, int max_len) {
  auto rep = check_morphism(f);
  if (!rep.valid) throw ModelError("is_open requires a valid morphism");
  auto gap = mode == OpenCheckMode::GraphBisim ? graph_bisim_gap(f)
                                               : lifting_oracle_gap(f, max_len);
  OpenReport out;
  if (gap) {
    out.open = false;
    out.counterexample = std::move(gap);
  }
  return out;
}

bool check_lifting_counterexample(const LtsMorphism& f,
                                  const LiftingCounterexample& ce) {
  if (!is_valid_run(f.source, ce.run)) return false;
  const std::string& end = ce.run.end(f.source);
  // The square must commute: q' extends f∘p from f(end) by the cited label.
  if (ce.target_extension.src != f.apply(end)) return false;
  if (ce.target_extension.label != ce.extension_label) return false;
  std::set<Transition> tset(f.target.transitions.begin(), f.target.transitions.end());
  if (!tset.count(ce.target_extension)) return false;
  for (const auto& t : f.source.transitions)
    if (t.src == end && t.label == ce.extension_label &&
        f.apply(t.dst) == ce.target_extension.dst)
      return false;  // a lift exists after all
  return true;
}

std::vector<LtsMorphism> enumerate_linear_morphisms(
    const std::vector<std::string>& w, const std::vector<std::string>& w_prime) {
  std::vector<LtsMorphism> out;
  if (w.size() > w_prime.size()) return out;
  for (size_t k = 0; k < w.size(); ++k)
    if (w[k] != w_prime[k]) return out;
  LtsMorphism f;
  f.source = linear_system(w);
  f.target = linear_system(w_prime);
  for (size_t k = 0; k <= w.size(); ++k)
    f.state_map[std::to_string(k)] = std::to_string(k);
  out.push_back(std::move(f));
  return out;
}

}  // namespace openmaps
