#include "fencenat/fence_map.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace fencenat {

FenceMap::FenceMap(std::vector<Nat> prefix, Nat tail_start, Nat tail_period,
                   Nat tail_drift, std::vector<Nat> tail_base)
    : prefix_(std::move(prefix)),
      tail_start_(tail_start),
      tail_period_(tail_period),
      tail_drift_(tail_drift),
      tail_base_(std::move(tail_base)) {
  if (tail_start_ < 1) throw precondition_error("tail_start must be >= 1");
  if (tail_period_ < 1) throw precondition_error("tail_period must be >= 1");
  if (prefix_.size() != tail_start_ - 1)
    throw precondition_error("prefix must have exactly tail_start - 1 entries, got " +
                             std::to_string(prefix_.size()));
  if (tail_base_.size() != tail_period_)
    throw precondition_error("tail_base must have exactly tail_period entries, got " +
                             std::to_string(tail_base_.size()));
  for (Nat v : prefix_)
    if (v < 1) throw precondition_error("prefix values must be >= 1");
  for (Nat v : tail_base_)
    if (v < 1) throw precondition_error("tail_base values must be >= 1");
}

Nat FenceMap::evaluate(Nat x) const {
  if (x < 1) throw precondition_error("positions start at 1");
  if (x < tail_start_) return prefix_[x - 1];
  Nat off = x - tail_start_;
  return tail_base_[off % tail_period_] + tail_drift_ * (off / tail_period_);
}

FenceMap FenceMap::normalized() const {
  std::vector<Nat> prefix = prefix_;
  Nat start = tail_start_;
  Nat p = tail_period_;
  Nat d = tail_drift_;
  std::vector<Nat> base = tail_base_;

  // Fold the period down to the least divisor satisfying the law.  Any
  // eventual quasi-period of the function is already a quasi-period from
  // `start` (see header), so testing candidate periods against the stored
  // base window is exhaustive.
  for (Nat cand = 1; cand < p; ++cand) {
    if (p % cand != 0) continue;
    Nat k = p / cand;
    if (d % k != 0) continue;
    Nat dd = d / k;
    bool ok = true;
    for (Nat i = 0; i + cand < p && ok; ++i)
      if (base[i + cand] != base[i] + dd) ok = false;
    if (ok) {
      p = cand;
      d = dd;
      base.resize(p);
      break;
    }
  }

  // Absorb prefix entries that already follow the tail law.  Extending the
  // law one step left predicts value base[p-1] - d at position start-1 (the
  // position start-1+p carries base[p-1], one drift step above it).
  while (start > 1) {
    if (base[p - 1] <= d) break;  // prediction would leave {1, 2, ...}
    Nat predicted = base[p - 1] - d;
    if (prefix.back() != predicted) break;
    prefix.pop_back();
    --start;
    base.insert(base.begin(), predicted);
    base.pop_back();
  }

  return FenceMap(std::move(prefix), start, p, d, std::move(base));
}

bool FenceMap::is_canonical() const { return same_representation(*this, normalized()); }

Nat FenceMap::min_image() const {
  // Within each tail residue the values only grow, so the minimum over
  // prefix and base witnesses the global minimum.
  Nat m = tail_base_[0];
  for (Nat v : tail_base_) m = std::min(m, v);
  for (Nat v : prefix_) m = std::min(m, v);
  return m;
}

Nat FenceMap::max_image() const {
  if (!has_finite_image())
    throw precondition_error("max_image on a map with unbounded image");
  Nat m = tail_base_[0];
  for (Nat v : tail_base_) m = std::max(m, v);
  for (Nat v : prefix_) m = std::max(m, v);
  return m;
}

bool equals(const FenceMap& a, const FenceMap& b) {
  return same_representation(a.normalized(), b.normalized());
}

std::optional<Nat> first_difference(const FenceMap& a, const FenceMap& b) {
  // Exact bound: past max(tail starts), both maps step by their drifts once
  // per lcm(periods) positions.  If the drifts-per-lcm differ, the maps
  // separate within one lcm of the bound; if they match, agreement over one
  // full lcm window plus both prefixes forces agreement everywhere.
  Nat start = std::max(a.tail_start(), b.tail_start());
  Nat l = std::lcm(a.tail_period(), b.tail_period());
  Nat bound = start + 2 * l;
  for (Nat x = 1; x <= bound; ++x)
    if (a.evaluate(x) != b.evaluate(x)) return x;
  return std::nullopt;
}

FenceMap compose(const FenceMap& a, const FenceMap& b) {
  const Nat na = a.tail_start(), pa = a.tail_period(), da = a.tail_drift();
  const Nat nb = b.tail_start(), pb = b.tail_period(), db = b.tail_drift();

  Nat period, drift, start;
  if (da > 0) {
    const Nat g = std::gcd(da, pb);
    const Nat m = pb / g;
    period = m * pa;
    drift = (da / g) * db;
    // Least start whose whole window [start, start+period) lands in b's tail
    // under a: one past the largest position where a's value is below
    // b.tail_start (such positions are finitely many since da > 0).
    Nat worst = 0;
    for (Nat r = 0; r < pa; ++r) {
      const Nat br = a.tail_base()[r];
      if (br < nb) {
        const Nat q = (nb - 1 - br) / da;  // last drift step still below nb
        worst = std::max(worst, na + q * pa + r);
      }
    }
    start = std::max(na, worst + 1);
  } else {
    // a's values repeat exactly with period pa from na, so the composite
    // does too, wherever those values land in b.
    period = pa;
    drift = 0;
    start = na;
  }

  std::vector<Nat> prefix;
  prefix.reserve(start - 1);
  for (Nat x = 1; x < start; ++x) prefix.push_back(b.evaluate(a.evaluate(x)));
  std::vector<Nat> base;
  base.reserve(period);
  for (Nat x = start; x < start + period; ++x) base.push_back(b.evaluate(a.evaluate(x)));
  return FenceMap(std::move(prefix), start, period, drift, std::move(base)).normalized();
}

FenceMap identity_map() { return FenceMap({}, 1, 1, 1, {1}); }

FenceMap power(const FenceMap& m, Nat k) {
  FenceMap acc = identity_map();
  for (Nat i = 0; i < k; ++i) acc = compose(acc, m);
  return acc;
}

bool is_fence_preserving(const FenceMap& m) {
  const Nat window = m.tail_start() + 2 * m.tail_period();
  // (i) neighbouring values may differ by at most 1; the difference pattern
  // is tail_period-periodic past tail_start.
  for (Nat x = 1; x <= window; ++x) {
    const Nat u = m.evaluate(x), v = m.evaluate(x + 1);
    const Nat gap = u > v ? u - v : v - u;
    if (gap > 1) return false;
  }
  // (ii) each position x >= 2 keeps its parity or sits inside a plateau; the
  // parity pattern is 2*tail_period-periodic past tail_start.
  for (Nat x = 2; x <= window; ++x) {
    const Nat v = m.evaluate(x);
    if ((x & 1) == (v & 1)) continue;
    if (m.evaluate(x - 1) == v && m.evaluate(x + 1) == v) continue;
    return false;
  }
  return true;
}

FenceMap build_quasi_periodic(const std::function<Nat(Nat)>& fn, Nat tail_start,
                              Nat tail_period, Nat tail_drift) {
  std::vector<Nat> prefix;
  prefix.reserve(tail_start - 1);
  for (Nat x = 1; x < tail_start; ++x) prefix.push_back(fn(x));
  std::vector<Nat> base;
  base.reserve(tail_period);
  for (Nat x = tail_start; x < tail_start + tail_period; ++x) base.push_back(fn(x));
  // Validate the claimed law over two further periods; a construction whose
  // values stray from its own (start, period, drift) derivation is a bug.
  for (Nat x = tail_start; x < tail_start + 2 * tail_period; ++x)
    if (fn(x + tail_period) != fn(x) + tail_drift)
      throw internal_error("build_quasi_periodic: callback breaks the claimed law at x=" +
                           std::to_string(x));
  return FenceMap(std::move(prefix), tail_start, tail_period, tail_drift, std::move(base))
      .normalized();
}

}  // namespace fencenat
