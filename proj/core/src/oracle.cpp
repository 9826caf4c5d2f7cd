#include "fencenat/oracle.hpp"

#include <algorithm>

namespace fencenat::oracle {

PrefixTable tabulate(const FenceMap& m, Nat horizon) {
  PrefixTable t;
  t.horizon = horizon;
  t.values.reserve(horizon);
  for (Nat x = 1; x <= horizon; ++x) t.values.push_back(m.evaluate(x));
  return t;
}

bool brute_preserving(const FenceMap& m, Nat horizon) {
  // The only non-trivial comparabilities are between neighbours: x <= x+1
  // for odd x, x+1 <= x for even x.
  for (Nat x = 1; x + 1 <= horizon; ++x) {
    const Nat u = m.evaluate(x), v = m.evaluate(x + 1);
    if ((x & 1) == 1) {
      if (!fence_leq(u, v)) return false;  // x < x+1 in the fence
    } else {
      if (!fence_leq(v, u)) return false;  // x+1 < x in the fence
    }
  }
  return true;
}

BruteBlocks brute_blocks(const FenceMap& m, Nat horizon) {
  BruteBlocks out;
  out.last_truncated = false;
  if (horizon == 0) return out;
  Nat start = 1;
  Nat value = m.evaluate(1);
  for (Nat x = 2; x <= horizon; ++x) {
    const Nat v = m.evaluate(x);
    if (v != value) {
      out.blocks.push_back({start, x - start, value});
      start = x;
      value = v;
    }
  }
  out.blocks.push_back({start, horizon - start + 1, value});
  // The final block extends past the horizon iff the next value matches.
  out.last_truncated = m.evaluate(horizon + 1) == value;
  return out;
}

BruteFiber fiber(const FenceMap& m, Nat value, Nat horizon) {
  BruteFiber out;
  for (Nat x = 1; x <= horizon; ++x)
    if (m.evaluate(x) == value) out.positions.push_back(x);
  if (m.tail_drift() > 0) {
    Nat next_min = m.evaluate(horizon + 1);
    for (Nat x = horizon + 1; x <= horizon + m.tail_period(); ++x)
      next_min = std::min(next_min, m.evaluate(x));
    // Each residue's values only grow, so a window minimum above `value`
    // stays above it forever.
    out.complete = horizon >= m.tail_start() && next_min > value;
  } else {
    const auto& base = m.tail_base();
    const bool tail_hits = std::find(base.begin(), base.end(), value) != base.end();
    out.complete = horizon >= m.tail_start() && !tail_hits;
  }
  return out;
}

bool agree_on_prefix(const FenceMap& a, const FenceMap& b, Nat horizon) {
  for (Nat x = 1; x <= horizon; ++x)
    if (a.evaluate(x) != b.evaluate(x)) return false;
  return true;
}

Nat effective_horizon(Nat requested, const std::vector<const FenceMap*>& operands) {
  Nat need = std::max<Nat>(requested, 1);
  for (const FenceMap* m : operands)
    need = std::max(need, m->tail_start() + 2 * m->tail_period());
  Nat h = 200;
  while (h < need) h *= 2;
  return std::min<Nat>(h, 1'000'000);
}

}  // namespace fencenat::oracle
