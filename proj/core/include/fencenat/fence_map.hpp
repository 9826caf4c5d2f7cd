#ifndef FENCENAT_FENCE_MAP_HPP
#define FENCENAT_FENCE_MAP_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "fencenat/errors.hpp"
#include "fencenat/ext_nat.hpp"

namespace fencenat {

// The zig-zag (fence) partial order on {1, 2, 3, ...}:
//
//     2   4   6   8
//      \ / \ / \ / \ ...
//       1   3   5   7
//
// i.e. the covering pairs are odd < odd+1 and odd < odd-1.  A self-map of the
// naturals is *fence-preserving* when x <= y in this order implies
// map(x) <= map(y).  Those maps form a monoid under left-to-right composition
// (x(ab) = (xa)b), and this library computes with the decidable subclass of
// *eventually quasi-periodic* maps:
//
//     map(x) = prefix[x-1]                                    for x <  tail_start
//     map(x) = tail_base[(x-tail_start) mod tail_period]
//              + tail_drift * floor((x-tail_start)/tail_period)  otherwise
//
// All positions and values are >= 1.  prefix has exactly tail_start-1
// entries, tail_base exactly tail_period entries; tail_drift may be 0
// (eventually periodic, finite image) or positive (image grows without
// bound).
//
// A FenceMap is a plain value; it is *not* forced into canonical form on
// construction, so distinct representations of the same function can be
// built, inspected, and compared.  `normalized()` returns the canonical
// representative: the tail period is folded to the least divisor that still
// satisfies the quasi-periodicity law, then the prefix is absorbed into the
// tail from the right as far as the law extends (this is the unique minimal
// (tail_period, tail_start) representation; eventual quasi-periods of a
// fixed function are closed under gcd, so a least one exists and divides all
// others).  `equals` — pointwise equality of the represented functions — is
// decided structurally on normal forms.
//
// Fence-preservation is NOT a class invariant: the type also represents
// arbitrary eventually quasi-periodic self-maps so that the decision
// procedure `is_fence_preserving` has something to decide.
class FenceMap {
 public:
  FenceMap(std::vector<Nat> prefix, Nat tail_start, Nat tail_period,
           Nat tail_drift, std::vector<Nat> tail_base);

  Nat evaluate(Nat x) const;

  const std::vector<Nat>& prefix() const { return prefix_; }
  Nat tail_start() const { return tail_start_; }
  Nat tail_period() const { return tail_period_; }
  Nat tail_drift() const { return tail_drift_; }
  const std::vector<Nat>& tail_base() const { return tail_base_; }

  FenceMap normalized() const;
  bool is_canonical() const;

  // Least value attained (the image minimum is always witnessed in the
  // prefix or the first tail period).
  Nat min_image() const;

  // The image is finite iff tail_drift == 0; its maximum is then witnessed
  // in the prefix or tail_base.
  bool has_finite_image() const { return tail_drift_ == 0; }
  Nat max_image() const;  // requires has_finite_image()

  // Structural equality of representations (same fields).  Semantic equality
  // of functions is `equals` below.
  friend bool same_representation(const FenceMap& a, const FenceMap& b) {
    return a.tail_start_ == b.tail_start_ && a.tail_period_ == b.tail_period_ &&
           a.tail_drift_ == b.tail_drift_ && a.prefix_ == b.prefix_ &&
           a.tail_base_ == b.tail_base_;
  }

 private:
  std::vector<Nat> prefix_;
  Nat tail_start_;
  Nat tail_period_;
  Nat tail_drift_;
  std::vector<Nat> tail_base_;
};

// map(x); x >= 1.
inline Nat evaluate(const FenceMap& m, Nat x) { return m.evaluate(x); }

// Canonical representative of the same function.
inline FenceMap normalize(const FenceMap& m) { return m.normalized(); }

// Pointwise equality of the represented functions (exact, structural on
// normal forms).
bool equals(const FenceMap& a, const FenceMap& b);
inline bool operator==(const FenceMap& a, const FenceMap& b) { return equals(a, b); }

// Least x with a(x) != b(x), or nullopt when the functions are equal.  A
// scan to max(tail starts) + 2 * lcm(tail periods) is exhaustive: two
// eventually quasi-periodic maps agreeing that far agree everywhere.
std::optional<Nat> first_difference(const FenceMap& a, const FenceMap& b);

// Left-to-right composition: result(x) = b(a(x)).  The result is canonical.
// The composed tail is derived structurally (no sampling): with g =
// gcd(a.drift, b.period) and m = b.period / g, the composite is quasi-periodic
// with period m * a.period, drift (a.drift / g) * b.drift, from the least
// position whose whole period-window lands in b's tail; for drift-0 a it is
// a.period-periodic from a.tail_start.
FenceMap compose(const FenceMap& a, const FenceMap& b);

// k-fold composition of m with itself; power(m, 0) is the identity.
FenceMap power(const FenceMap& m, Nat k);

// Decision procedure for membership in the fence-preserving monoid.
// A self-map is fence-preserving iff
//   (i)  |map(x) - map(x+1)| <= 1 for every x, and
//   (ii) for every x >= 2, x and map(x) have the same parity or
//        map(x-1) = map(x) = map(x+1).
// Both conditions are eventually periodic in x (with periods tail_period and
// 2*tail_period), so checking x <= tail_start + 2*tail_period is exhaustive.
bool is_fence_preserving(const FenceMap& m);

// The identity map (prefix=[], start=1, period=1, drift=1, base=[1]).
FenceMap identity_map();

// Build a map from an arbitrary value callback that is known (by
// construction) to satisfy fn(x + period) = fn(x) + drift for all
// x >= tail_start.  The claim is validated over two extra periods and an
// internal_error is thrown if it fails, so formula bugs in callers surface
// loudly.  The result is canonical.
FenceMap build_quasi_periodic(const std::function<Nat(Nat)>& fn, Nat tail_start,
                              Nat tail_period, Nat tail_drift);

}  // namespace fencenat

#endif  // FENCENAT_FENCE_MAP_HPP
