#pragma once

#include <cstddef>
#include <vector>

#include "fencenat/ext_nat.hpp"
#include "fencenat/fence_map.hpp"

namespace fencenat {

// The maximal-constancy-block decomposition of a map.
//
// A *block* is a maximal interval of positions on which the map is constant.
// Blocks partition the domain: consecutive blocks are adjacent, the first
// starts at 1, and adjacent blocks carry different values.  For an eventually
// quasi-periodic map the decomposition is finitely describable: finitely many
// explicit head blocks followed by either one infinite terminal block
// (constant tails) or a spatially periodic pattern of block shapes.
//
// In the periodic case, `shapes` describes the blocks covering one spatial
// period: a shape (offset, length, base_value) denotes, for every j >= 0, the
// block starting at tail_start + offset + j * spatial_period, of the given
// length, carrying base_value + j * value_drift.  The offsets/lengths of the
// shapes tile [0, spatial_period) in order.  tail_start is chosen minimal
// (head blocks that already fit the periodic pattern are absorbed into it),
// so equal decompositions have equal representations.

// One finite block.
struct Block {
  Nat start = 0;
  Nat length = 0;
  Nat value = 0;

  friend bool operator==(const Block&, const Block&) = default;
};

// One block shape of the periodic tail; see above for the semantics.
struct Shape {
  Nat offset = 0;
  Nat length = 0;
  Nat base_value = 0;

  friend bool operator==(const Shape&, const Shape&) = default;
};

enum class TailKind {
  none,            // reserved: a total map always has a tail
  infinite_block,  // one infinite terminal block
  periodic,        // shapes repeating with a spatial period
};

class BlockStream {
 public:
  static BlockStream with_infinite_tail(std::vector<Block> head,
                                        Nat tail_start, Nat tail_value);
  static BlockStream with_periodic_tail(std::vector<Block> head,
                                        Nat tail_start, Nat spatial_period,
                                        Nat value_drift,
                                        std::vector<Shape> shapes);

  const std::vector<Block>& head() const { return head_; }
  TailKind tail_kind() const { return kind_; }
  // Position where the tail begins (start of the infinite block, or of the
  // first periodic shape).
  Nat tail_start() const { return tail_start_; }
  // Value of the infinite terminal block (tail_kind == infinite_block only).
  Nat tail_value() const { return tail_value_; }
  Nat spatial_period() const { return spatial_period_; }
  Nat value_drift() const { return value_drift_; }
  const std::vector<Shape>& shapes() const { return shapes_; }

  // The i-th block, 0-based.  Total for both tail kinds; the infinite
  // terminal block reports length aleph0.
  struct Ref {
    Nat start = 0;
    ExtNat length = ExtNat::finite(0);
    Nat value = 0;
  };
  Ref block(std::size_t i) const;
  ExtNat block_count() const;

  // Number of non-singleton blocks (the infinite terminal block counts).
  ExtNat m_star_count() const;
  // Number of blocks of finite length exactly n.
  ExtNat count_blocks_of_length(Nat n) const;
  // Number of blocks of finite length > 3.
  ExtNat big_block_count() const;
  // True when every non-singleton block has finite length exactly n.
  bool all_star_lengths_equal(Nat n) const;
  // True when some block has length >= n (the infinite block qualifies).
  bool has_block_of_length_at_least(Nat n) const;
  bool all_singletons() const;

  // Queries for singleton-run indicator streams (see ms_stream): blocks with
  // value 1 are runs of singleton blocks of the underlying map, blocks with
  // value 2 are the stretches inside its non-singleton blocks.
  ExtNat count_runs_of_length(Nat n) const;
  // Run lengths that recur infinitely often (lengths of value-1 periodic
  // shapes), sorted and deduplicated; empty for an infinite terminal run.
  std::vector<Nat> recurring_run_lengths() const;

  friend bool operator==(const BlockStream&, const BlockStream&) = default;

 private:
  BlockStream() = default;

  std::vector<Block> head_;
  TailKind kind_ = TailKind::none;
  Nat tail_start_ = 0;
  Nat tail_value_ = 0;
  Nat spatial_period_ = 0;
  Nat value_drift_ = 0;
  std::vector<Shape> shapes_;
};

// The block decomposition of `m`.  Exact: head blocks are listed explicitly
// and the tail is reported as an infinite block (drift 0) or as periodic
// shapes with the map's canonical tail period as spatial period.
BlockStream block_stream(const FenceMap& m);

// Maximal runs of singleton blocks of `m`, returned as the block stream of
// the indicator map that is 1 on positions lying in singleton blocks and 2
// elsewhere.  Value-1 blocks of the result are exactly the runs; use
// count_runs_of_length / recurring_run_lengths to query them.
BlockStream ms_stream(const FenceMap& m);

// A block partition of the domain with the values forgotten: finitely many
// explicit head block lengths followed by either one infinite terminal block
// or a forever-repeating unit of block lengths.  Exactly one of
// infinite_last / non-empty unit_lengths holds.
struct BlockPartition {
  std::vector<Nat> head_lengths;
  bool infinite_last = false;
  std::vector<Nat> unit_lengths;

  friend bool operator==(const BlockPartition&, const BlockPartition&) =
      default;
};

// Forgets the values of a block stream.
BlockPartition to_partition(const BlockStream& bs);

// Canonical form: the repeating unit is folded to its minimal period and
// head lengths matching the unit pattern are absorbed into it, so two
// descriptions of the same partition of the domain become equal.
BlockPartition canonical_partition(BlockPartition p);

// True when the two descriptions partition the domain identically.
bool partition_equal(const BlockPartition& a, const BlockPartition& b);

// Number of blocks of the partition, and the length of its i-th block
// (0-based; aleph0 for the infinite terminal block).
ExtNat partition_block_count(const BlockPartition& p);
ExtNat partition_block_length(const BlockPartition& p, std::size_t i);

// The map collapsing the i-th block (1-based) of the partition to k + i - 1.
// This is the block-enumeration construction used throughout the
// factorization algorithms; its fibers are exactly the partition's blocks,
// so all fibers are convex.  Fence preservation depends on the caller's
// choice of k: k must have the parity of the first block's intended image
// anchor (the verified constructions always pass one).
FenceMap enumerate_blocks(const BlockPartition& p, Nat k);

}  // namespace fencenat
