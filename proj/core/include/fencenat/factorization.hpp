#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fencenat/fence_map.hpp"

namespace fencenat {

// Constructive factorizations into the generating families, each verifiable
// by recomposition and per-factor class certification.

// Class tag carried by an explicitly materialized factor.  The named classes
// are infinite, so factors drawn from them are stored as full maps together
// with the class the construction certifies them for; verify_word re-checks
// the certificate with classify.
struct CertifiedClass {
  enum class Tag {
    theta,     // all fibers convex
    lambda_n,  // no neighbor collapses, c > 0, and omega_n
    delta_n,   // infinitely many non-singleton blocks, and omega_n
    g3,        // theta_n with |M*| in {1, aleph0} and all big blocks length 3
  };
  Tag tag = Tag::theta;
  Nat n = 1;  // the chain parameter for lambda_n / delta_n / g3

  friend bool operator==(const CertifiedClass&, const CertifiedClass&) =
      default;
};

// One factor of a generator word: a named generator or an explicit map with
// a certified class.
class GeneratorSymbol {
 public:
  enum class Kind { xi, alpha, beta, lambda, delta, explicit_map };

  static GeneratorSymbol make_xi();
  static GeneratorSymbol make_alpha(Nat k);
  static GeneratorSymbol make_beta(Nat k);
  static GeneratorSymbol make_lambda(Nat k);
  static GeneratorSymbol make_delta(Nat k);
  static GeneratorSymbol make_explicit(FenceMap m, CertifiedClass c);

  Kind kind() const { return kind_; }
  Nat param() const { return param_; }               // named kinds only
  const FenceMap& map() const { return map_; }       // explicit_map only
  const CertifiedClass& certified() const { return certified_; }

  // The transformation this symbol denotes.
  FenceMap realize() const;

  friend bool operator==(const GeneratorSymbol&, const GeneratorSymbol&) =
      default;

 private:
  GeneratorSymbol() : map_(identity_map()) {}

  Kind kind_ = Kind::xi;
  Nat param_ = 0;
  FenceMap map_;
  CertifiedClass certified_;
};

// The generating set a word was built over.
struct TargetClass {
  enum class Kind { theta_lambda, delta_word, h_n, g_n, k_split };
  Kind kind = Kind::h_n;
  Nat n = 1;

  friend bool operator==(const TargetClass&, const TargetClass&) = default;
};

// A factorization: composing the factors left to right yields the target.
struct GeneratorWord {
  std::vector<GeneratorSymbol> factors;
  TargetClass target_class;
};

// Composition of all factors, left to right.
FenceMap compose_word(const GeneratorWord& word);

// Human-readable rendering, e.g. "xi·xi·beta_4·lambda_3".
std::string render_word(const GeneratorWord& word);

// Outcome of checking a word against a target map.
struct VerificationReport {
  bool composed_equals_target = false;
  // Position of the first disagreement with (computed, expected) values.
  std::optional<std::pair<Nat, std::pair<Nat, Nat>>> mismatch_witness;
  struct FactorCert {
    bool ok = true;
    std::string failing_predicate;  // empty when ok
  };
  std::vector<FactorCert> factor_certifications;

  bool all_ok() const;
};

// --- The constructions ---------------------------------------------------

// Splits alpha into a convex-fibered factor and a collapse-free factor:
// returns (g1, g2) with g1 having all fibers convex, g2 having no neighbor
// collapses, c(g2) > 0, g2(1) >= n, |{1..n}g2| = n, and
// compose(g1, g2) == alpha exactly.  g1 enumerates the blocks of alpha from
// the least anchor above n with the parity of the first block's value; g2 is
// the unique readout on the image of g1, extended by unit slopes off it.
std::pair<FenceMap, FenceMap> theta_lambda_factor(const FenceMap& alpha,
                                                  Nat n);

// Given g1 with all fibers convex, the same blocks as alpha, and
// min(image) >= n, returns the unique g2 with compose(g1, g2) == alpha
// defined by g2(x) = alpha(min fiber of x under g1) on the image of g1 and
// extended by unit slopes below/above it; g2 lands in lambda_n.  Rejects
// block mismatch and anchor violations.
FenceMap complete_from_theta(const FenceMap& g1, const FenceMap& alpha,
                             Nat n);

// Word for delta_gen(m) over {beta_k : k >= n}, lambda-factors admissible
// for n, and xi.
GeneratorWord delta_word(Nat m, Nat n);

// Word for a map with finitely many non-singleton blocks, over the alpha
// and beta families (parameters >= n), lambda_n members, and xi.  Rejects
// maps with infinitely many non-singleton blocks.
GeneratorWord non_delta_word(const FenceMap& alpha, Nat n);

// Word over H_n = {alpha_k, beta_k : k >= n} ∪ lambda_n ∪ delta_n ∪ {xi}.
GeneratorWord h_word(const FenceMap& alpha, Nat n);

// Word whose every factor is xi, a lambda_n member, or a g3 map (theta_n,
// |M*| in {1, aleph0}, all non-singleton blocks of length exactly 3).
GeneratorWord g_word(const FenceMap& alpha, Nat n);

// For alpha in K(l): returns (g1, g2) recomposing to alpha where g1 has full
// image, convex fibers, and collapses exactly the even-indexed non-singleton
// blocks of alpha; both factors classify into K(l') with l' > l or into
// K_aleph0.  Rejects maps not in any K(l).
std::pair<FenceMap, FenceMap> k_split(const FenceMap& alpha);

// Composes the word, compares against the target (normal-form equality plus
// an oracle prefix cross-check), and re-certifies every factor: explicit
// factors against their certified class, named factors against the
// parameter constraints of the word's target class.  Failures are reported,
// never thrown.
VerificationReport verify_word(const GeneratorWord& word,
                               const FenceMap& target);

}  // namespace fencenat
