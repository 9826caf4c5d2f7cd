#pragma once

#include <vector>

#include "fencenat/fence_map.hpp"

namespace fencenat {

// Constructors for the named transformation families.  Every constructor
// returns a canonical FenceMap that passes is_fence_preserving.

// x -> x + 2 (the injective shift; image is {3, 4, ...}).
FenceMap xi();

// x -> x for x < k, x -> k otherwise (rank k; infinite terminal block).
FenceMap alpha_gen(Nat k);

// x -> x for x < k; {k, k+1, k+2} -> k; x -> x - 2 for x >= k + 3.
// The unique map with |nb| = 2, c = 3, full image, and min(nb) = k.
FenceMap beta_gen(Nat k);

// x -> k - x + 1 for x <= k, x -> x - k + 1 otherwise (descending staircase
// then ascending tail).  Fence-preserving only for odd k; even k is
// rejected with a parity-violation error.
FenceMap lambda_gen(Nat k);

// x -> anchor for x <= k, x -> anchor + x - k otherwise, where the anchor is
// 1 for odd k and 2 for even k (constant head of length exactly k).
FenceMap delta_gen(Nat k);

// The map 4n-3 -> 2n-1, {4n-2, 4n-1, 4n} -> 2n: canonically
// (start=1, period=4, drift=2, base=[1,2,2,2]).  Its non-singleton blocks
// are exactly the triples {4n-2, 4n-1, 4n}.
FenceMap collapse_witness();

// An eventually periodic subset of the naturals: x is a member iff
// x ∈ members when x <= max(members), and iff pattern[(x-1) mod period]
// otherwise (absolute phase, so the pattern entry for x depends only on x).
struct SubsetSpec {
  std::vector<Nat> members;        // finite explicit part, sorted ascending
  Nat period = 1;                  // >= 1
  std::vector<bool> pattern;       // size == period

  bool contains(Nat x) const;
  static SubsetSpec all();
  static SubsetSpec none();
  static SubsetSpec evens();
  static SubsetSpec odds();
};

// The convex-fibered, full-image map whose value-n block has length 3 when
// n is a member of A and length 5 otherwise.  Always fence-preserving: the
// blocks have odd lengths and start at positions of alternating parity.
FenceMap alpha_family(const SubsetSpec& A);

}  // namespace fencenat
