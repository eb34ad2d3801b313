#include "openmaps/obs.hpp"

#include <algorithm>
#include <cmath>

#include "openmaps/bisim_kernels.hpp"
#include "openmaps/unfolding.hpp"

namespace openmaps::obs {

bool ObsSpace::point_ok(const ObsPoint& p) const {
  switch (kind) {
    case Kind::RationalVector:
      return std::holds_alternative<RationalVec>(p) &&
             static_cast<int>(std::get<RationalVec>(p).size()) == dim;
    case Kind::FloatVector:
      return std::holds_alternative<FloatVec>(p) &&
             static_cast<int>(std::get<FloatVec>(p).size()) == dim;
    case Kind::Discrete:
      return std::holds_alternative<std::string>(p) &&
             std::find(labels.begin(), labels.end(), std::get<std::string>(p)) !=
                 labels.end();
  }
  return false;
}

Distance distance(const ObsSpace& space, const ObsPoint& x, const ObsPoint& y) {
  Distance d;
  switch (space.kind) {
    case ObsSpace::Kind::Discrete: {
      bool eq = std::get<std::string>(x) == std::get<std::string>(y);
      d.exact = eq ? Rational(0) : Rational(1);
      d.value = eq ? 0.0 : 1.0;
      return d;
    }
    case ObsSpace::Kind::RationalVector: {
      const auto& xs = std::get<RationalVec>(x);
      const auto& ys = std::get<RationalVec>(y);
      if (space.metric == Metric::Sup) {
        Rational m = 0;
        for (size_t i = 0; i < xs.size(); ++i) {
          Rational diff = xs[i] >= ys[i] ? xs[i] - ys[i] : ys[i] - xs[i];
          if (diff > m) m = diff;
        }
        d.exact = m;
        d.value = to_double(m);
      } else {
        Rational sq = 0;
        for (size_t i = 0; i < xs.size(); ++i) {
          Rational diff = xs[i] - ys[i];
          sq += diff * diff;
        }
        d.exact = sq;
        d.exact_is_squared = true;
        d.value = std::sqrt(to_double(sq));
      }
      return d;
    }
    case ObsSpace::Kind::FloatVector: {
      const auto& xs = std::get<FloatVec>(x);
      const auto& ys = std::get<FloatVec>(y);
      if (space.metric == Metric::Sup) {
        double m = 0;
        for (size_t i = 0; i < xs.size(); ++i) m = std::max(m, std::fabs(xs[i] - ys[i]));
        d.value = m;
      } else {
        double sq = 0;
        for (size_t i = 0; i < xs.size(); ++i) sq += (xs[i] - ys[i]) * (xs[i] - ys[i]);
        d.value = std::sqrt(sq);
      }
      return d;
    }
  }
  return d;
}

bool Distance::leq(const ObsSpace& space, const Rational& eps) const {
  if (exact) {
    if (exact_is_squared) return *exact <= eps * eps;
    return *exact <= eps;
  }
  return value <= to_double(eps) + space.float_tolerance;
}

bool within(const ObsSpace& space, const ObsPoint& x, const ObsPoint& y,
            const Rational& eps) {
  return distance(space, x, y).leq(space, eps);
}

bool triangle_holds(const ObsSpace& space, const ObsPoint& x, const ObsPoint& y,
                    const ObsPoint& z) {
  Distance xz = distance(space, x, z);
  Distance xy = distance(space, x, y);
  Distance yz = distance(space, y, z);
  if (xz.exact && !xz.exact_is_squared)
    return *xz.exact <= *xy.exact + *yz.exact;
  if (xz.exact) {
    // sqrt(A) <= sqrt(B) + sqrt(C) without leaving the rationals.
    Rational a = *xz.exact, b = *xy.exact, c = *yz.exact;
    Rational lhs = a - b - c;
    if (lhs <= 0) return true;
    return lhs * lhs <= 4 * b * c;
  }
  return xz.value <= xy.value + yz.value + space.float_tolerance;
}

const ObsPoint& ObsSystem::observe(const std::string& state) const {
  auto it = omega.find(state);
  if (it == omega.end())
    throw ModelError("observation missing for state '" + state + "'");
  return it->second;
}

void validate_obs_system(const ObsSystem& t) {
  validate_lts(t.underlying);
  for (const auto& s : t.underlying.states) {
    auto it = t.omega.find(s);
    if (it == t.omega.end())
      throw ModelError("observation missing for state '" + s + "'");
    if (!t.space.point_ok(it->second))
      throw ModelError("observation for state '" + s +
                       "' does not fit the observation space");
  }
}

Distance tightest_bound(const ObsSystem& src, const ObsSystem& dst,
                        const LtsMorphism& f) {
  // The bound quantifies over every source state, not only reachable ones.
  Distance best;
  best.exact = Rational(0);
  bool first = true;
  for (const auto& s : src.underlying.states) {
    Distance d = distance(src.space, src.observe(s), dst.observe(f.apply(s)));
    if (first) {
      best = d;
      first = false;
      continue;
    }
    bool bigger = d.exact ? (*d.exact > *best.exact) : (d.value > best.value);
    if (bigger) best = d;
  }
  if (first) best.exact_is_squared = src.space.metric == Metric::Euclidean &&
                                     src.space.kind == ObsSpace::Kind::RationalVector;
  return best;
}

bool check_bounded_morphism(const ObsSystem& src, const ObsSystem& dst,
                            const BoundedMorphism& f) {
  if (!check_morphism(f.underlying).valid) return false;
  for (const auto& s : src.underlying.states)
    if (!within(src.space, src.observe(s), dst.observe(f.underlying.apply(s)), f.bound))
      return false;
  return true;
}

namespace {

kernels::PairRel obs_seed(const kernels::IndexedLts& ia, const kernels::IndexedLts& ib,
                          const ObsSystem& a, const ObsSystem& b, const Rational& eps) {
  kernels::PairRel seed(static_cast<int>(ia.states.size()),
                        static_cast<int>(ib.states.size()));
  const long total = static_cast<long>(seed.na) * seed.nb;
#pragma omp parallel for schedule(static)
  for (long p = 0; p < total; ++p) {
    int i = static_cast<int>(p / seed.nb), j = static_cast<int>(p % seed.nb);
    seed.bits[p] =
        within(a.space, a.observe(ia.states[i]), b.observe(ib.states[j]), eps) ? 1 : 0;
  }
  return seed;
}

}  // namespace

ApproxBisimResult approx_bisimilarity(const ObsSystem& a, const ObsSystem& b,
                                      const Rational& eps) {
  validate_obs_system(a);
  validate_obs_system(b);
  if (eps < 0) throw ModelError("epsilon must be nonnegative");
  auto [ia, ib] = kernels::index_pair(a.underlying, b.underlying);
  auto trace =
      kernels::greatest_bisim_traced(ia, ib, obs_seed(ia, ib, a, b, eps), true);

  ApproxBisimResult res;
  if (trace.final.at(ia.initial, ib.initial)) {
    ApproxBisim r;
    r.epsilon = eps;
    for (int i = 0; i < trace.final.na; ++i)
      for (int j = 0; j < trace.final.nb; ++j)
        if (trace.final.at(i, j)) r.relation.pairs.insert({ia.states[i], ib.states[j]});
    res.relation = std::move(r);
    return res;
  }

  auto removed_before = [&](int t, int tp, int round) {
    size_t q = static_cast<size_t>(t) * trace.final.nb + tp;
    return !trace.final.bits[q] && trace.removed_round[q] < round;
  };
  for (int i = 0; i < trace.final.na; ++i) {
    for (int j = 0; j < trace.final.nb; ++j) {
      size_t p = static_cast<size_t>(i) * trace.final.nb + j;
      if (trace.final.bits[p]) continue;
      ApproxRefutationEntry entry;
      entry.pair = {ia.states[i], ib.states[j]};
      entry.round = trace.removed_round[p];
      if (entry.round == 0) {  // excluded by the observation seed
        res.refutation.push_back(entry);
        continue;
      }
      bool found = false;
      for (const auto& [l, t] : ia.succ[i]) {
        bool unanswered = true;
        for (const auto& [lp, tp] : ib.succ[j])
          if (lp == l && !removed_before(t, tp, entry.round)) {
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
            if (la == l && !removed_before(t, tp, entry.round)) {
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

bool check_approx_refutation(const std::vector<ApproxRefutationEntry>& cert,
                             const ObsSystem& a, const ObsSystem& b,
                             const Rational& eps) {
  if (cert.empty()) return false;
  std::map<std::pair<std::string, std::string>, int> round_of;
  for (const auto& e : cert) round_of[e.pair] = e.round;
  bool initial_cited = false;
  std::set<Transition> aset(a.underlying.transitions.begin(),
                            a.underlying.transitions.end());
  std::set<Transition> bset(b.underlying.transitions.begin(),
                            b.underlying.transitions.end());
  for (const auto& e : cert) {
    if (e.pair == std::make_pair(a.underlying.initial, b.underlying.initial))
      initial_cited = true;
    if (e.round == 0) {
      if (within(a.space, a.observe(e.pair.first), b.observe(e.pair.second), eps))
        return false;
      continue;
    }
    const auto& moves = e.left_to_right ? aset : bset;
    if (e.move.src != (e.left_to_right ? e.pair.first : e.pair.second)) return false;
    if (!moves.count(e.move)) return false;
    const auto& responses = e.left_to_right ? bset : aset;
    const std::string& responder = e.left_to_right ? e.pair.second : e.pair.first;
    for (const auto& r : responses) {
      if (r.src != responder || r.label != e.move.label) continue;
      auto key = e.left_to_right ? std::make_pair(e.move.dst, r.dst)
                                 : std::make_pair(r.dst, e.move.dst);
      auto it = round_of.find(key);
      if (it == round_of.end() || it->second >= e.round) return false;
    }
  }
  return initial_cited;
}

bool check_approx_bisim(const ObsSystem& a, const ObsSystem& b, const ApproxBisim& r) {
  if (!r.relation.pairs.count({a.underlying.initial, b.underlying.initial}))
    return false;
  if (find_transfer_violation(r.relation, a.underlying, b.underlying)) return false;
  for (const auto& [s, sp] : r.relation.pairs)
    if (!within(a.space, a.observe(s), b.observe(sp), r.epsilon)) return false;
  return true;
}

ObsSpan span_from_approx(const ObsSystem& a, const ObsSystem& b, const ApproxBisim& r) {
  for (const auto& [s, sp] : r.relation.pairs)
    if (!within(a.space, a.observe(s), b.observe(sp), r.epsilon))
      throw ModelError("relation pair (" + s + ", " + sp +
                       ") exceeds the observation bound");
  Span base = span_from_relation(r.relation, a.underlying, b.underlying);

  ObsSpan out;
  out.apex.underlying = base.apex;
  out.apex.space = a.space;
  for (const auto& x : base.apex.states)
    out.apex.omega[x] = a.observe(base.left.apply(x));
  out.left = base.left;
  out.right = base.right;
  out.left_bound = tightest_bound(out.apex, a, out.left);
  out.right_bound = tightest_bound(out.apex, b, out.right);

  if (!is_open(out.left, OpenCheckMode::GraphBisim).open ||
      !is_open(out.right, OpenCheckMode::GraphBisim).open)
    throw ModelError("span construction produced a non-open leg");
  return out;
}

ApproxBisim relation_from_obs_span(const ObsSystem& a, const ObsSystem& b,
                                   const ObsSpan& span) {
  ApproxBisim r;
  for (const auto& x : span.apex.underlying.states)
    r.relation.pairs.insert({span.left.apply(x), span.right.apply(x)});
  if (span.left_bound.exact && span.right_bound.exact &&
      !span.left_bound.exact_is_squared && !span.right_bound.exact_is_squared) {
    r.epsilon = *span.left_bound.exact + *span.right_bound.exact;
  } else {
    throw ModelError(
        "epsilon accounting requires non-squared exact bounds (sup metric)");
  }
  return r;
}

VUnfolding v_unfold(const ObsSystem& t, int depth) {
  validate_obs_system(t);
  auto u = unfold(t.underlying, depth);
  VUnfolding out;
  out.tree.underlying = u.tree.underlying;
  out.tree.space = t.space;
  for (const auto& node : u.tree.underlying.states)
    out.tree.omega[node] = t.observe(u.unf.apply(node));
  out.unf = u.unf;
  out.frontier = u.tree.frontier;
  out.depth_bound = u.tree.depth_bound;
  return out;
}

}  // namespace openmaps::obs
