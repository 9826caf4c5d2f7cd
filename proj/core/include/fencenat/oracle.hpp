#ifndef FENCENAT_ORACLE_HPP
#define FENCENAT_ORACLE_HPP

#include <vector>

#include "fencenat/fence_map.hpp"

namespace fencenat::oracle {

// Brute-force reference computations over the finite window [1, horizon].
// Everything here works from `evaluate` and the raw order-theoretic
// definitions only — no structural shortcuts — so the structural algorithms
// in the rest of the library can be tested against an independent witness.

// Table of values map(1..horizon), computed pointwise.
struct PrefixTable {
  Nat horizon;
  std::vector<Nat> values;  // values[i] = map(i+1)
};

PrefixTable tabulate(const FenceMap& m, Nat horizon);

// u <= v in the zig-zag order?  Reflexive closure of the covering pairs
// odd < odd+1, odd < odd-1.  (The order has height 1: odds below, evens
// above.)
inline bool fence_leq(Nat u, Nat v) {
  if (u == v) return true;
  return (u & 1) == 1 && (v & 1) == 0 && (u + 1 == v || v + 1 == u);
}

// Checks order-preservation of every comparable pair with both coordinates
// in [1, horizon], straight from the definition (comparable pairs are
// exactly the neighbouring ones).
bool brute_preserving(const FenceMap& m, Nat horizon);

// Maximal constancy blocks of the restriction to [1, horizon], by linear
// scan.  The last block is truncated by the horizon (its true extent may
// continue), which `last_truncated` reports.
struct BruteBlock {
  Nat start;
  Nat length;
  Nat value;
};
struct BruteBlocks {
  std::vector<BruteBlock> blocks;
  bool last_truncated;
};
BruteBlocks brute_blocks(const FenceMap& m, Nat horizon);

// Preimage positions of `value` within [1, horizon].  `complete` is set when
// the window provably contains the whole fiber: with positive drift once the
// minimum of the next tail period exceeds `value` every later value does
// too; with drift 0 the tail hits `value` beyond any horizon iff it is a
// tail_base entry.
struct BruteFiber {
  std::vector<Nat> positions;
  bool complete;
};
BruteFiber fiber(const FenceMap& m, Nat value, Nat horizon);

// Do the two maps agree pointwise on [1, horizon]?
bool agree_on_prefix(const FenceMap& a, const FenceMap& b, Nat horizon);

// Horizon policy for differential tests: at least `requested`, then doubled
// from 200 until the structural window tail_start + 2*tail_period of every
// operand fits, capped at 1'000'000.
Nat effective_horizon(Nat requested, const std::vector<const FenceMap*>& operands);

}  // namespace fencenat::oracle

#endif  // FENCENAT_ORACLE_HPP
