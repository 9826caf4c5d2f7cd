#include "fencenat/block_stream.hpp"

#include <algorithm>
#include <utility>

#include "fencenat/errors.hpp"

namespace fencenat {

namespace {

void check_head(const std::vector<Block>& head, Nat tail_start) {
  Nat expect = 1;
  Nat prev_value = 0;
  for (const Block& b : head) {
    if (b.start != expect || b.length == 0 || b.value == 0)
      throw internal_error("malformed block stream head");
    if (b.value == prev_value)
      throw internal_error("adjacent blocks with equal values");
    expect = b.start + b.length;
    prev_value = b.value;
  }
  if (expect != tail_start)
    throw internal_error("block stream head does not reach the tail");
}

}  // namespace

BlockStream BlockStream::with_infinite_tail(std::vector<Block> head,
                                            Nat tail_start, Nat tail_value) {
  check_head(head, tail_start);
  if (tail_value == 0) throw internal_error("block value must be positive");
  if (!head.empty() && head.back().value == tail_value)
    throw internal_error("infinite block merges with the last head block");
  BlockStream bs;
  bs.head_ = std::move(head);
  bs.kind_ = TailKind::infinite_block;
  bs.tail_start_ = tail_start;
  bs.tail_value_ = tail_value;
  return bs;
}

BlockStream BlockStream::with_periodic_tail(std::vector<Block> head,
                                            Nat tail_start,
                                            Nat spatial_period,
                                            Nat value_drift,
                                            std::vector<Shape> shapes) {
  check_head(head, tail_start);
  if (shapes.empty() || spatial_period == 0)
    throw internal_error("periodic tail needs shapes");
  Nat expect = 0;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const Shape& s = shapes[i];
    if (s.offset != expect || s.length == 0 || s.base_value == 0)
      throw internal_error("malformed periodic tail shapes");
    if (i > 0 && s.base_value == shapes[i - 1].base_value)
      throw internal_error("adjacent shapes with equal values");
    expect = s.offset + s.length;
  }
  if (expect != spatial_period)
    throw internal_error("shapes do not tile the spatial period");
  if (shapes.back().base_value == shapes.front().base_value + value_drift)
    throw internal_error("period boundary merges adjacent blocks");
  if (!head.empty() && head.back().value == shapes.front().base_value)
    throw internal_error("first shape merges with the last head block");
  BlockStream bs;
  bs.head_ = std::move(head);
  bs.kind_ = TailKind::periodic;
  bs.tail_start_ = tail_start;
  bs.spatial_period_ = spatial_period;
  bs.value_drift_ = value_drift;
  bs.shapes_ = std::move(shapes);
  return bs;
}

BlockStream::Ref BlockStream::block(std::size_t i) const {
  if (i < head_.size()) {
    const Block& b = head_[i];
    return Ref{b.start, ExtNat::finite(b.length), b.value};
  }
  std::size_t j = i - head_.size();
  if (kind_ == TailKind::infinite_block) {
    if (j != 0)
      throw precondition_error("block index beyond the terminal block");
    return Ref{tail_start_, ExtNat::aleph0(), tail_value_};
  }
  std::size_t cycle = j / shapes_.size();
  const Shape& s = shapes_[j % shapes_.size()];
  return Ref{tail_start_ + s.offset + static_cast<Nat>(cycle) * spatial_period_,
             ExtNat::finite(s.length),
             s.base_value + static_cast<Nat>(cycle) * value_drift_};
}

ExtNat BlockStream::block_count() const {
  if (kind_ == TailKind::infinite_block)
    return ExtNat::finite(head_.size() + 1);
  return ExtNat::aleph0();
}

ExtNat BlockStream::m_star_count() const {
  Nat finite = 0;
  for (const Block& b : head_)
    if (b.length >= 2) ++finite;
  if (kind_ == TailKind::infinite_block) return ExtNat::finite(finite + 1);
  for (const Shape& s : shapes_)
    if (s.length >= 2) return ExtNat::aleph0();
  return ExtNat::finite(finite);
}

ExtNat BlockStream::count_blocks_of_length(Nat n) const {
  Nat finite = 0;
  for (const Block& b : head_)
    if (b.length == n) ++finite;
  if (kind_ == TailKind::periodic)
    for (const Shape& s : shapes_)
      if (s.length == n) return ExtNat::aleph0();
  return ExtNat::finite(finite);
}

ExtNat BlockStream::big_block_count() const {
  Nat finite = 0;
  for (const Block& b : head_)
    if (b.length > 3) ++finite;
  if (kind_ == TailKind::periodic)
    for (const Shape& s : shapes_)
      if (s.length > 3) return ExtNat::aleph0();
  return ExtNat::finite(finite);
}

bool BlockStream::all_star_lengths_equal(Nat n) const {
  for (const Block& b : head_)
    if (b.length >= 2 && b.length != n) return false;
  if (kind_ == TailKind::infinite_block) return false;
  for (const Shape& s : shapes_)
    if (s.length >= 2 && s.length != n) return false;
  return true;
}

bool BlockStream::has_block_of_length_at_least(Nat n) const {
  for (const Block& b : head_)
    if (b.length >= n) return true;
  if (kind_ == TailKind::infinite_block) return true;
  for (const Shape& s : shapes_)
    if (s.length >= n) return true;
  return false;
}

bool BlockStream::all_singletons() const {
  return m_star_count() == ExtNat::finite(0);
}

ExtNat BlockStream::count_runs_of_length(Nat n) const {
  Nat finite = 0;
  for (const Block& b : head_)
    if (b.value == 1 && b.length == n) ++finite;
  if (kind_ == TailKind::periodic)
    for (const Shape& s : shapes_)
      if (s.base_value == 1 && s.length == n) return ExtNat::aleph0();
  return ExtNat::finite(finite);
}

std::vector<Nat> BlockStream::recurring_run_lengths() const {
  std::vector<Nat> lengths;
  if (kind_ == TailKind::periodic)
    for (const Shape& s : shapes_)
      if (s.base_value == 1) lengths.push_back(s.length);
  std::sort(lengths.begin(), lengths.end());
  lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());
  return lengths;
}

namespace {

std::vector<Block> blocks_of_range(const FenceMap& m, Nat first, Nat last) {
  std::vector<Block> blocks;
  if (first > last) return blocks;
  Nat start = first;
  Nat value = evaluate(m, first);
  for (Nat x = first + 1; x <= last; ++x) {
    Nat v = evaluate(m, x);
    if (v != value) {
      blocks.push_back(Block{start, x - start, value});
      start = x;
      value = v;
    }
  }
  blocks.push_back(Block{start, last - start + 1, value});
  return blocks;
}

}  // namespace

BlockStream block_stream(const FenceMap& m) {
  FenceMap nm = m.normalized();
  const Nat N = nm.tail_start();
  const Nat p = nm.tail_period();
  const Nat d = nm.tail_drift();

  if (d == 0 && p == 1) {
    // Constant tail.  The canonical form has absorbed any trailing prefix
    // values equal to the tail value, so the infinite block starts at N.
    return BlockStream::with_infinite_tail(blocks_of_range(nm, 1, N - 1), N,
                                           nm.tail_base()[0]);
  }

  // First block start strictly inside the tail.  One exists within
  // [N+1, N+p+1]: otherwise the map would be constant across a full period,
  // contradicting the canonical form (that would fold to a constant tail).
  Nat s0 = 0;
  for (Nat x = N + 1; x <= N + p + 1; ++x) {
    if (evaluate(nm, x - 1) != evaluate(nm, x)) {
      s0 = x;
      break;
    }
  }
  if (s0 == 0) throw internal_error("periodic tail with no block boundary");

  // Blocks starting in [s0, s0 + p) repeat verbatim with spatial period p
  // and value shift d; s0 + p is again a block start.
  std::vector<Block> window = blocks_of_range(nm, s0, s0 + p - 1);
  std::vector<Shape> shapes;
  shapes.reserve(window.size());
  for (const Block& b : window)
    shapes.push_back(Shape{b.start - s0, b.length, b.value});

  std::vector<Block> head = blocks_of_range(nm, 1, s0 - 1);

  // Absorb head blocks that already fit the periodic pattern, so the tail
  // start is minimal and the representation canonical.
  while (!head.empty()) {
    const Shape& last = shapes.back();
    if (last.base_value <= d) break;  // predecessor value would be invalid
    const Block& cand = head.back();
    if (cand.length != last.length ||
        cand.value != last.base_value - d ||
        cand.start + cand.length != s0)
      break;
    head.pop_back();
    s0 -= last.length;
    // The absorbed block becomes the first shape of the shifted window.
    Shape moved{0, last.length, last.base_value - d};
    shapes.pop_back();
    for (Shape& s : shapes) s.offset += moved.length;
    shapes.insert(shapes.begin(), moved);
  }

  return BlockStream::with_periodic_tail(std::move(head), s0, p, d,
                                         std::move(shapes));
}

BlockStream ms_stream(const FenceMap& m) {
  BlockStream bs = block_stream(m);

  // Build the singleton-run indicator (1 on singleton blocks, 2 elsewhere)
  // as an eventually periodic map and decompose it.
  const Nat ts = bs.tail_start();
  std::vector<Nat> prefix;
  prefix.reserve(ts - 1);
  for (const Block& b : bs.head())
    prefix.insert(prefix.end(), b.length, b.length == 1 ? Nat{1} : Nat{2});

  if (bs.tail_kind() == TailKind::infinite_block) {
    FenceMap indicator(std::move(prefix), ts, 1, 0, {2});
    return block_stream(indicator);
  }

  std::vector<Nat> base;
  base.reserve(bs.spatial_period());
  for (const Shape& s : bs.shapes())
    base.insert(base.end(), s.length, s.length == 1 ? Nat{1} : Nat{2});
  FenceMap indicator(std::move(prefix), ts, bs.spatial_period(), 0,
                     std::move(base));
  return block_stream(indicator);
}

BlockPartition to_partition(const BlockStream& bs) {
  BlockPartition p;
  p.head_lengths.reserve(bs.head().size());
  for (const Block& b : bs.head()) p.head_lengths.push_back(b.length);
  if (bs.tail_kind() == TailKind::infinite_block) {
    p.infinite_last = true;
  } else {
    p.unit_lengths.reserve(bs.shapes().size());
    for (const Shape& s : bs.shapes()) p.unit_lengths.push_back(s.length);
  }
  return p;
}

BlockPartition canonical_partition(BlockPartition p) {
  if (p.infinite_last) return p;

  // Fold the unit to its minimal cyclic period.
  const std::size_t m = p.unit_lengths.size();
  for (std::size_t div = 1; div < m; ++div) {
    if (m % div != 0) continue;
    bool folds = true;
    for (std::size_t i = div; i < m && folds; ++i)
      folds = p.unit_lengths[i] == p.unit_lengths[i % div];
    if (folds) {
      p.unit_lengths.resize(div);
      break;
    }
  }

  // Absorb head lengths matching the unit pattern (extend the periodic part
  // maximally to the left, rotating the unit accordingly).
  while (!p.head_lengths.empty() &&
         p.head_lengths.back() == p.unit_lengths.back()) {
    p.head_lengths.pop_back();
    p.unit_lengths.insert(p.unit_lengths.begin(), p.unit_lengths.back());
    p.unit_lengths.pop_back();
  }
  return p;
}

bool partition_equal(const BlockPartition& a, const BlockPartition& b) {
  return canonical_partition(a) == canonical_partition(b);
}

ExtNat partition_block_count(const BlockPartition& p) {
  if (p.infinite_last) return ExtNat::finite(p.head_lengths.size() + 1);
  return ExtNat::aleph0();
}

ExtNat partition_block_length(const BlockPartition& p, std::size_t i) {
  if (i < p.head_lengths.size()) return ExtNat::finite(p.head_lengths[i]);
  if (p.infinite_last) {
    if (i != p.head_lengths.size())
      throw precondition_error("block index beyond the terminal block");
    return ExtNat::aleph0();
  }
  std::size_t j = (i - p.head_lengths.size()) % p.unit_lengths.size();
  return ExtNat::finite(p.unit_lengths[j]);
}

FenceMap enumerate_blocks(const BlockPartition& p, Nat k) {
  if (k == 0) throw precondition_error("block enumeration needs k >= 1");
  if (p.infinite_last == !p.unit_lengths.empty())
    throw precondition_error(
        "partition must end in an infinite block or a repeating unit");

  std::vector<Nat> prefix;
  Nat value = k;
  for (Nat len : p.head_lengths) {
    if (len == 0) throw precondition_error("zero-length block");
    prefix.insert(prefix.end(), len, value);
    ++value;
  }
  const Nat start = static_cast<Nat>(prefix.size()) + 1;

  if (p.infinite_last)
    return FenceMap(std::move(prefix), start, 1, 0, {value}).normalized();

  std::vector<Nat> base;
  for (Nat len : p.unit_lengths) {
    if (len == 0) throw precondition_error("zero-length block");
    base.insert(base.end(), len, value);
    ++value;
  }
  const Nat period = static_cast<Nat>(base.size());
  const Nat drift = static_cast<Nat>(p.unit_lengths.size());
  return FenceMap(std::move(prefix), start, period, drift, std::move(base))
      .normalized();
}

}  // namespace fencenat
