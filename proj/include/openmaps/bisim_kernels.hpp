#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "openmaps/lts.hpp"

namespace openmaps::kernels {

/// Integer-indexed view of one system against a shared label table.
struct IndexedLts {
  std::vector<std::string> states;  // reachable states, sorted
  std::unordered_map<std::string, int> index;
  int initial = 0;
  std::vector<std::string> labels;  // shared id -> label text
  // succ[s] holds (label_id, dst) pairs, sorted.
  std::vector<std::vector<std::pair<int, int>>> succ;
};

/// Builds indexed views of the reachable parts of `a` and `b` over one label
/// table so label ids agree across both systems.
std::pair<IndexedLts, IndexedLts> index_pair(const Lts& a, const Lts& b);

/// Dense |A| x |B| boolean pair relation.
struct PairRel {
  int na = 0, nb = 0;
  std::vector<std::uint8_t> bits;

  PairRel() = default;
  PairRel(int a, int b) : na(a), nb(b), bits(static_cast<size_t>(a) * b, 0) {}
  std::uint8_t& at(int i, int j) { return bits[static_cast<size_t>(i) * nb + j]; }
  std::uint8_t at(int i, int j) const { return bits[static_cast<size_t>(i) * nb + j]; }
  bool operator==(const PairRel&) const = default;
};

PairRel full_seed(int na, int nb);

/// Greatest fixpoint of the strong-bisimulation refinement below `seed`.
/// Synchronous (Jacobi) sweeps, serial reference implementation.
PairRel greatest_bisim_serial(const IndexedLts& a, const IndexedLts& b, PairRel seed);

/// Same fixpoint with OpenMP-parallel sweeps. Produces bit-identical output
/// to the serial kernel: each sweep writes a fresh buffer, so the result does
/// not depend on thread scheduling.
PairRel greatest_bisim_parallel(const IndexedLts& a, const IndexedLts& b, PairRel seed);

/// Elimination round per pair (0 = survived to the fixpoint, k >= 1 = removed
/// in sweep k). Used to build refutation certificates.
struct FixpointTrace {
  PairRel final;
  std::vector<int> removed_round;  // indexed like PairRel::bits
};

FixpointTrace greatest_bisim_traced(const IndexedLts& a, const IndexedLts& b,
                                    PairRel seed, bool parallel);

/// Signature-splitting partition refinement on the disjoint union of the two
/// reachable parts. Returns block ids, first for a's states then b's.
std::vector<int> partition_refinement(const IndexedLts& a, const IndexedLts& b);

}  // namespace openmaps::kernels
