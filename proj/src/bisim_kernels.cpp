#include "openmaps/bisim_kernels.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace openmaps::kernels {

std::pair<IndexedLts, IndexedLts> index_pair(const Lts& a, const Lts& b) {
  std::set<std::string> label_set;
  for (const auto& t : a.transitions) label_set.insert(t.label);
  for (const auto& t : b.transitions) label_set.insert(t.label);
  std::unordered_map<std::string, int> label_id;
  std::vector<std::string> labels(label_set.begin(), label_set.end());
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) label_id[labels[i]] = i;

  auto build = [&](const Lts& t) {
    IndexedLts out;
    auto reach = reachable_states(t);
    out.states.assign(reach.begin(), reach.end());
    out.labels = labels;
    for (int i = 0; i < static_cast<int>(out.states.size()); ++i)
      out.index[out.states[i]] = i;
    out.initial = out.index.at(t.initial);
    out.succ.resize(out.states.size());
    for (const auto& tr : t.transitions) {
      auto is = out.index.find(tr.src);
      auto id = out.index.find(tr.dst);
      if (is == out.index.end() || id == out.index.end()) continue;  // unreachable
      int l = label_id.at(tr.label);
      out.succ[is->second].push_back({l, id->second});
    }
    for (auto& v : out.succ) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return out;
  };
  return {build(a), build(b)};
}

PairRel full_seed(int na, int nb) {
  PairRel r(na, nb);
  std::fill(r.bits.begin(), r.bits.end(), 1);
  return r;
}

namespace {

// Transfer check for one pair under the current relation: every move of one
// side must have a same-label response on the other side landing in cur.
inline bool pair_survives(const IndexedLts& a, const IndexedLts& b, const PairRel& cur,
                          int i, int j) {
  for (const auto& [l, t] : a.succ[i]) {
    bool matched = false;
    for (const auto& [lp, tp] : b.succ[j]) {
      if (lp == l && cur.at(t, tp)) {
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  for (const auto& [l, tp] : b.succ[j]) {
    bool matched = false;
    for (const auto& [la, t] : a.succ[i]) {
      if (la == l && cur.at(t, tp)) {
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

FixpointTrace run_fixpoint(const IndexedLts& a, const IndexedLts& b, PairRel seed,
                           bool parallel) {
  FixpointTrace trace;
  trace.removed_round.assign(seed.bits.size(), 0);
  PairRel cur = std::move(seed);
  const long total = static_cast<long>(cur.na) * cur.nb;
  int round = 0;
  bool changed = true;
  while (changed) {
    ++round;
    changed = false;
    PairRel next = cur;
    if (parallel) {
      bool any = false;
#pragma omp parallel for schedule(static) reduction(|| : any)
      for (long p = 0; p < total; ++p) {
        if (!cur.bits[p]) continue;
        int i = static_cast<int>(p / cur.nb), j = static_cast<int>(p % cur.nb);
        if (!pair_survives(a, b, cur, i, j)) {
          next.bits[p] = 0;
          trace.removed_round[p] = round;
          any = true;
        }
      }
      changed = any;
    } else {
      for (long p = 0; p < total; ++p) {
        if (!cur.bits[p]) continue;
        int i = static_cast<int>(p / cur.nb), j = static_cast<int>(p % cur.nb);
        if (!pair_survives(a, b, cur, i, j)) {
          next.bits[p] = 0;
          trace.removed_round[p] = round;
          changed = true;
        }
      }
    }
    cur = std::move(next);
  }
  trace.final = std::move(cur);
  return trace;
}

}  // namespace

PairRel greatest_bisim_serial(const IndexedLts& a, const IndexedLts& b, PairRel seed) {
  return run_fixpoint(a, b, std::move(seed), false).final;
}

PairRel greatest_bisim_parallel(const IndexedLts& a, const IndexedLts& b, PairRel seed) {
  return run_fixpoint(a, b, std::move(seed), true).final;
}

FixpointTrace greatest_bisim_traced(const IndexedLts& a, const IndexedLts& b,
                                    PairRel seed, bool parallel) {
  return run_fixpoint(a, b, std::move(seed), parallel);
}

std::vector<int> partition_refinement(const IndexedLts& a, const IndexedLts& b) {
  const int na = static_cast<int>(a.states.size());
  const int nb = static_cast<int>(b.states.size());
  const int n = na + nb;
  auto succ_of = [&](int s) -> const std::vector<std::pair<int, int>>& {
    return s < na ? a.succ[s] : b.succ[s - na];
  };

  std::vector<int> block(n, 0);
  int block_count = 1;
  using Sig = std::vector<std::pair<int, int>>;  // sorted unique (label, block)
  while (true) {
    std::map<Sig, int> sig_id;
    std::vector<int> next(n);
    for (int s = 0; s < n; ++s) {
      Sig sig;
      for (const auto& [l, t] : succ_of(s)) {
        int tg = s < na ? t : na + t;
        sig.push_back({l, block[tg]});
      }
      std::sort(sig.begin(), sig.end());
      sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
      // Include the old block so a sweep only ever splits blocks; the
      // partition is then stable exactly when the block count stops growing.
      sig.push_back({-1, block[s]});
      auto [it, inserted] = sig_id.try_emplace(sig, static_cast<int>(sig_id.size()));
      next[s] = it->second;
    }
    int new_count = static_cast<int>(sig_id.size());
    block = std::move(next);
    if (new_count == block_count) break;
    block_count = new_count;
  }
  return block;
}

}  // namespace openmaps::kernels
