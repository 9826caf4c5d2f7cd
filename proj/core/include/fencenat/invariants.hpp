#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fencenat/block_stream.hpp"
#include "fencenat/ext_nat.hpp"
#include "fencenat/fence_map.hpp"

namespace fencenat {

// Exact combinatorial invariants of fence-preserving maps and the class
// memberships built from them.  Everything here is computed structurally
// from the eventually-quasi-periodic representation — infinite cardinalities
// are certified by recurrence in the periodic tail, never by sampling.

// The preimage of one value.
struct FiberInfo {
  ExtNat size = ExtNat::finite(0);
  // Whether the fiber is a set of consecutive positions (empty and singleton
  // fibers count as convex).
  bool convex = true;
  // All positions when the fiber is finite; for an infinite fiber (drift-0
  // maps only), the positions up to one period past the tail start.
  std::vector<Nat> positions;
};

// Exact fiber of `v` under `m`.
FiberInfo fiber_info(const FenceMap& m, Nat v);

// Least position mapped to `v`; nullopt when `v` is not in the image.
std::optional<Nat> min_fiber_position(const FenceMap& m, Nat v);

// Whether the image of `m` is all of the domain (every value >= 1 is hit).
bool image_is_full(const FenceMap& m);

// An exact description of a set of values that is either finite or
// eventually periodic.
//   - finite cardinality: `elements` lists every member, sorted.
//   - infinite cardinality: `periodic_witness = (start, period)` holds and
//     `elements` lists every member below start + period, sorted; for
//     v >= start + period, v is a member iff v - period is.  Together these
//     determine the whole set.
struct SetReport {
  ExtNat cardinality = ExtNat::finite(0);
  std::vector<Nat> elements;
  std::optional<std::pair<Nat, Nat>> periodic_witness;

  bool contains(Nat v) const;
};

// Number of positions a with m(a) = m(a+1).
ExtNat nb_size(const FenceMap& m);

// Number of positions lying in a fiber of size >= 2; zero exactly for
// injective maps.
ExtNat c_value(const FenceMap& m);

// Image size.
ExtNat rank(const FenceMap& m);

// Image values whose fiber is not convex.
SetReport r_set(const FenceMap& m);

// Image values v with both |fiber(v)| >= 3 and |fiber(v+1)| >= 3.
SetReport q_set(const FenceMap& m);

// Least k such that m is nondecreasing on [k, infinity).  Requires infinite
// rank and finitely many non-convex fibers (which together force the
// periodic tail to be descent-free, so the least such k exists and lies
// before the tail).  Rejects maps violating either hypothesis.
Nat eventual_monotone_index(const FenceMap& m);

// K-classification within P (infinite-rank maps with finitely many big
// blocks, non-convex-fiber values, and Q-values): K(l) when l is the least
// singleton-run length recurring infinitely often, K_aleph0 when no finite
// run length recurs.
struct KClass {
  enum class Kind { not_in_p, k_finite, k_aleph0 };
  Kind kind = Kind::not_in_p;
  Nat l = 0;  // meaningful only for k_finite

  friend bool operator==(const KClass&, const KClass&) = default;
};

// Complete class-membership report for one map and one chain parameter n.
//
//   in_theta    every fiber convex
//   in_lambda   no neighbor collapses and c > 0
//   in_gamma    in_theta, infinite rank, and some fiber of size >= 3
//   in_delta    infinitely many non-singleton blocks
//   in_B        |nb| = 2, c = 3, and full image (the beta family)
//   in_P        see KClass above
//   in_omega_n  m(1) >= n and |{1..n}m| = n
//   in_*_n      the corresponding class intersected with omega_n
//   in_H_n      alpha_k or beta_k with k >= n, in lambda_n or delta_n, or xi
//   in_G_n      xi, or lambda_n, or (theta_n with |M*| in {1, aleph0} and
//               every non-singleton block of length exactly 3)
struct ClassReport {
  bool in_theta = false;
  bool in_lambda = false;
  bool in_gamma = false;
  bool in_delta = false;
  bool in_B = false;
  bool in_P = false;
  ExtNat rank = ExtNat::finite(0);
  ExtNat nb_size = ExtNat::finite(0);
  ExtNat c_value = ExtNat::finite(0);
  KClass k_class;

  Nat n = 1;
  bool in_omega_n = false;
  bool in_lambda_n = false;
  bool in_theta_n = false;
  bool in_delta_n = false;
  bool in_H_n = false;
  bool in_G_n = false;
};

ClassReport classify(const FenceMap& m, Nat n);

// Structural matches against the named families (used by classify and by
// the factorization word renderers).  Each returns the parameter k when the
// canonical form of `m` equals the named generator's.
std::optional<Nat> match_alpha_gen(const FenceMap& m);
std::optional<Nat> match_beta_gen(const FenceMap& m);
std::optional<Nat> match_lambda_gen(const FenceMap& m);
bool is_xi(const FenceMap& m);

}  // namespace fencenat
