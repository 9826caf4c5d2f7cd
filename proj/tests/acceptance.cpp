// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure.  Each criterion is self-contained and reports a short detail
// string (counts, timings, or the first counterexample found).

#include <chrono>
#include <exception>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fencenat/block_stream.hpp"
#include "fencenat/factorization.hpp"
#include "fencenat/fence_map.hpp"
#include "fencenat/generators.hpp"
#include "fencenat/invariants.hpp"
#include "fencenat/oracle.hpp"
#include "support/random_maps.hpp"

using namespace fencenat;
using testsupport::Rng;

namespace {

using Clock = std::chrono::steady_clock;

long long ms_since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() -
                                                               start)
      .count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome pass(const std::string& detail) { return {true, detail}; }
Outcome fail(const std::string& detail) { return {false, detail}; }

// --- criterion 1: oracle agreement of the preservation test ----------------

Outcome criterion_preservation_oracle() {
  Rng rng(900101);
  const Clock::time_point start = Clock::now();
  const int total = 1000;
  int preserving = 0;
  for (int i = 0; i < total; ++i) {
    const FenceMap m = testsupport::random_eqp(rng);
    const Nat h = oracle::effective_horizon(400, {&m});
    const bool structural = is_fence_preserving(m);
    if (structural != oracle::brute_preserving(m, h)) {
      return fail("disagreement with the brute-force oracle on sample " +
                  std::to_string(i));
    }
    if (structural) ++preserving;
  }
  const long long ms = ms_since(start);
  if (ms >= 5000) {
    return fail("exceeded the 5 s budget: " + std::to_string(ms) + " ms");
  }
  return pass(std::to_string(total) + " random maps (" +
              std::to_string(preserving) +
              " preserving) agree with the oracle at horizon >= 400 in " +
              std::to_string(ms) + " ms");
}

// --- criterion 2: certified theta/lambda splits ----------------------------

Outcome criterion_theta_lambda(const std::vector<FenceMap>& corpus) {
  int splits = 0;
  for (const FenceMap& m : corpus) {
    for (Nat n = 1; n <= 8; ++n) {
      auto [g1, g2] = theta_lambda_factor(m, n);
      if (!classify(g1, 1).in_theta) {
        return fail("first factor left the convex-fibered class at n=" +
                    std::to_string(n));
      }
      if (!classify(g2, n).in_lambda_n) {
        return fail("second factor left lambda_n at n=" + std::to_string(n));
      }
      if (!equals(compose(g1, g2), m)) {
        return fail("split failed to recompose at n=" + std::to_string(n));
      }
      ++splits;
    }
  }
  return pass(std::to_string(corpus.size()) + " maps x n in [1,8]: " +
              std::to_string(splits) + " certified splits recompose exactly");
}

// --- criterion 3: delta words over the whole table --------------------------

Outcome criterion_delta_words() {
  const Clock::time_point start = Clock::now();
  int cases = 0;
  for (Nat m = 1; m <= 20; ++m) {
    for (Nat n = 1; n <= 20; ++n) {
      const GeneratorWord w = delta_word(m, n);
      for (const GeneratorSymbol& s : w.factors) {
        switch (s.kind()) {
          case GeneratorSymbol::Kind::xi:
          case GeneratorSymbol::Kind::beta:
          case GeneratorSymbol::Kind::lambda:
            break;
          case GeneratorSymbol::Kind::explicit_map:
            if (s.certified().tag == CertifiedClass::Tag::lambda_n) break;
            [[fallthrough]];
          default:
            return fail("factor outside beta_n, lambda_n, xi at m=" +
                        std::to_string(m) + ", n=" + std::to_string(n));
        }
      }
      if (!verify_word(w, delta_gen(m)).all_ok()) {
        return fail("word failed verification at m=" + std::to_string(m) +
                    ", n=" + std::to_string(n));
      }
      ++cases;
    }
  }
  const long long ms = ms_since(start);
  if (ms >= 2000) {
    return fail("exceeded the 2 s budget: " + std::to_string(ms) + " ms");
  }
  return pass(std::to_string(cases) + " (m, n) cases verified in " +
              std::to_string(ms) + " ms");
}

// --- criterion 4: h- and g-words across the corpus and forced branches ------

Outcome criterion_h_g_words(const std::vector<FenceMap>& corpus) {
  int words = 0;
  for (const FenceMap& m : corpus) {
    for (Nat n = 1; n <= 8; ++n) {
      if (!verify_word(h_word(m, n), m).all_ok()) {
        return fail("h-word failed at n=" + std::to_string(n));
      }
      if (!verify_word(g_word(m, n), m).all_ok()) {
        return fail("g-word failed at n=" + std::to_string(n));
      }
      words += 2;
    }
  }

  struct Forced {
    FenceMap map;
    Nat n;
  };
  const std::vector<Forced> forced = {
      // injective maps
      {xi(), 1},
      {identity_map(), 1},
      {testsupport::descending_map(5, 1), 2},
      // finitely many collapse blocks, ending in an infinite terminal block
      {alpha_gen(2), 1},
      {alpha_gen(5), 3},
      // finitely many collapse blocks, all finite
      {beta_gen(2), 1},
      {FenceMap({2, 2}, 3, 1, 1, {3}), 1},
      // infinitely many collapse blocks, first n values distinct
      {collapse_witness(), 1},
      {testsupport::delta_even_start(), 1},
      {testsupport::k3_member(), 2},
      // infinitely many collapse blocks, shared values among the first n
      {collapse_witness(), 3},
      {testsupport::delta_odd_start(), 2},
      {testsupport::delta_even_start(), 2},
      // named generators
      {alpha_gen(4), 2},
      {beta_gen(6), 4},
      {lambda_gen(5), 3},
      {xi(), 6},
  };
  for (const Forced& f : forced) {
    if (!verify_word(h_word(f.map, f.n), f.map).all_ok()) {
      return fail("forced h-word case failed at n=" + std::to_string(f.n));
    }
    if (!verify_word(g_word(f.map, f.n), f.map).all_ok()) {
      return fail("forced g-word case failed at n=" + std::to_string(f.n));
    }
    words += 2;
  }
  return pass(std::to_string(words) +
              " factorization words verified (recomposition and per-factor "
              "certificates)");
}

// --- criterion 5: closure laws ----------------------------------------------

Outcome criterion_closure_laws() {
  Rng rng(900105);

  const std::vector<FenceMap>& lam = testsupport::lambda_pool();
  for (const FenceMap& m : lam) {
    if (!classify(m, 1).in_lambda) return fail("lambda pool member left Lambda");
  }
  for (int i = 0; i < 500; ++i) {
    const FenceMap& a = lam[testsupport::pick(rng, 0, lam.size() - 1)];
    const FenceMap& b = lam[testsupport::pick(rng, 0, lam.size() - 1)];
    if (!classify(compose(a, b), 1).in_lambda) {
      return fail("Lambda is not closed: composite left the class");
    }
  }

  const std::vector<FenceMap> gam = testsupport::gamma_pool(rng);
  for (const FenceMap& m : gam) {
    if (!classify(m, 1).in_gamma) return fail("gamma pool member left Gamma");
  }
  for (int i = 0; i < 500; ++i) {
    const FenceMap& a = gam[testsupport::pick(rng, 0, gam.size() - 1)];
    const FenceMap& b = gam[testsupport::pick(rng, 0, gam.size() - 1)];
    if (!classify(compose(a, b), 1).in_gamma) {
      return fail("Gamma is not closed: composite left the class");
    }
  }

  for (int i = 0; i < 500; ++i) {
    const FenceMap a = testsupport::random_preserving(rng);
    const FenceMap b = testsupport::random_preserving(rng);
    if (!(c_value(a) <= c_value(compose(a, b)))) {
      return fail("c decreased under right composition");
    }
  }

  const std::vector<FenceMap> outside = testsupport::non_p_pool();
  for (const FenceMap& m : outside) {
    if (classify(m, 1).in_P) return fail("non-P pool member classified into P");
  }
  for (int i = 0; i < 500; ++i) {
    const FenceMap& m = outside[testsupport::pick(rng, 0, outside.size() - 1)];
    const FenceMap b = testsupport::random_preserving(rng);
    if (classify(compose(m, b), 1).in_P || classify(compose(b, m), 1).in_P) {
      return fail("the complement of P absorbed back into P");
    }
  }

  return pass("Lambda closure, Gamma closure, c-monotonicity, and the ideal "
              "law each hold on 500 sampled pairs");
}

// --- criterion 6: K-class splits ---------------------------------------------

Outcome criterion_k_split() {
  const std::vector<testsupport::KMember> corpus = testsupport::k_corpus();
  if (corpus.size() < 100) {
    return fail("corpus too small: " + std::to_string(corpus.size()));
  }
  for (const testsupport::KMember& member : corpus) {
    const KClass expected{KClass::Kind::k_finite, member.l};
    if (!(classify(member.map, 1).k_class == expected)) {
      return fail("corpus member misclassified for K(" +
                  std::to_string(member.l) + ")");
    }
    auto [g1, g2] = k_split(member.map);
    if (!equals(compose(g1, g2), member.map)) {
      return fail("K-split failed to recompose for K(" +
                  std::to_string(member.l) + ")");
    }
    for (const FenceMap* g : {&g1, &g2}) {
      const KClass kc = classify(*g, 1).k_class;
      if (kc.kind == KClass::Kind::not_in_p) {
        return fail("K-split factor left P");
      }
      if (kc.kind == KClass::Kind::k_finite && kc.l <= member.l) {
        return fail("K-split factor did not strictly increase the run "
                    "length: K(" +
                    std::to_string(kc.l) + ") from K(" +
                    std::to_string(member.l) + ")");
      }
    }
  }
  return pass(std::to_string(corpus.size()) +
              " members of K(1), K(2), K(3) split into strictly finer "
              "classes and recompose exactly");
}

// --- criterion 7: strictness of the H- and G-chains --------------------------

Outcome criterion_chains() {
  for (Nat n = 1; n <= 8; ++n) {
    const FenceMap h_witness = alpha_gen(n);
    if (!classify(h_witness, n).in_H_n || classify(h_witness, n + 1).in_H_n) {
      return fail("alpha_n failed to separate H_n from H_{n+1} at n=" +
                  std::to_string(n));
    }
    const FenceMap g_witness = testsupport::g_chain_witness(n);
    if (!classify(g_witness, n).in_G_n || classify(g_witness, n + 1).in_G_n) {
      return fail("witness failed to separate G_n from G_{n+1} at n=" +
                  std::to_string(n));
    }
    if (!classify(xi(), n).in_G_n) {
      return fail("xi left G_n at n=" + std::to_string(n));
    }
  }

  // inclusion direction of both chains, sampled
  Rng rng(900107);
  for (int i = 0; i < 100; ++i) {
    const FenceMap m = testsupport::random_preserving(rng);
    for (Nat n = 1; n <= 8; ++n) {
      const ClassReport fine = classify(m, n + 1);
      const ClassReport coarse = classify(m, n);
      if (fine.in_H_n && !coarse.in_H_n) return fail("H-chain inclusion failed");
      if (fine.in_G_n && !coarse.in_G_n) return fail("G-chain inclusion failed");
    }
  }

  // every non-xi map falls out of the G-chain just past its first value
  int rejected = 0;
  for (int i = 0; i < 4000 && rejected < 200; ++i) {
    const FenceMap m = testsupport::random_preserving(rng);
    if (is_xi(m)) continue;
    if (classify(m, m.evaluate(1) + 1).in_G_n) {
      return fail("a non-xi map stayed in G_{map(1)+1}");
    }
    ++rejected;
  }
  if (rejected < 200) {
    return fail("only " + std::to_string(rejected) + " non-xi samples drawn");
  }
  return pass("both chains strict for n in [1,8]; xi in every G_n; 200 "
              "non-xi maps leave G just past their first value");
}

// --- criterion 8: composites of the subset family have a long block ----------

Outcome criterion_family_composites() {
  Rng rng(900108);
  const int total = 100;
  for (int i = 0; i < total; ++i) {
    const SubsetSpec a = testsupport::random_subset_spec(rng);
    const SubsetSpec b = testsupport::random_subset_spec(rng);
    const FenceMap composite = compose(alpha_family(a), alpha_family(b));
    if (!block_stream(composite).has_block_of_length_at_least(9)) {
      return fail("composite of two family maps had no block of length >= 9 "
                  "on sample " +
                  std::to_string(i));
    }
  }
  return pass(std::to_string(total) +
              " random family pairs: every composite has a block of length "
              ">= 9");
}

// --- criterion 9: structural laws --------------------------------------------

Outcome criterion_structural_laws() {
  Rng rng(900109);
  const std::vector<FenceMap> corpus = testsupport::preserving_corpus(510, rng);

  for (const FenceMap& m : corpus) {
    if (!testsupport::star_blocks_odd(m)) {
      return fail("a collapse block away from position 1 has even length");
    }
  }

  for (const FenceMap& m : corpus) {
    const Nat h = oracle::effective_horizon(100, {&m});
    if (!testsupport::image_convex_on(m, h)) {
      return fail("the image over a finite window is not convex");
    }
  }

  int normalizations = 0;
  for (int i = 0; i < 510; ++i) {
    const FenceMap m = testsupport::random_eqp(rng);
    const FenceMap canon = m.normalized();
    if (!same_representation(canon.normalized(), canon)) {
      return fail("normalization is not idempotent");
    }
    const Nat factor = testsupport::pick(rng, 2, 4);
    const Nat rotations = testsupport::pick(rng, 0, 5);
    const FenceMap refolded =
        testsupport::unfold(canon, factor, rotations).normalized();
    if (!same_representation(refolded, canon)) {
      return fail("an unfolded description normalized to a different form");
    }
    ++normalizations;
  }

  for (int i = 0; i < 500; ++i) {
    const FenceMap a = testsupport::random_preserving(rng);
    const FenceMap b = testsupport::random_preserving(rng);
    const FenceMap c = testsupport::random_preserving(rng);
    if (!equals(compose(compose(a, b), c), compose(a, compose(b, c)))) {
      return fail("composition is not associative");
    }
  }

  for (const FenceMap& m : corpus) {
    const Nat h = oracle::effective_horizon(150, {&m});
    if (!testsupport::blocks_agree(m, h)) {
      return fail("structural blocks disagree with the brute-force scan");
    }
  }

  return pass("parity, image convexity, canonical forms (" +
              std::to_string(normalizations) +
              " unfoldings), associativity, and oracle block agreement all "
              "hold on >= 500 samples each");
}

}  // namespace

int main() {
  Rng corpus_rng(900102);
  const std::vector<FenceMap> corpus =
      testsupport::preserving_corpus(300, corpus_rng);

  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, criterion_preservation_oracle},
      {2, [&] { return criterion_theta_lambda(corpus); }},
      {3, criterion_delta_words},
      {4, [&] { return criterion_h_g_words(corpus); }},
      {5, criterion_closure_laws},
      {6, criterion_k_split},
      {7, criterion_chains},
      {8, criterion_family_composites},
      {9, criterion_structural_laws},
  };

  bool all_pass = true;
  for (const auto& [number, body] : criteria) {
    Outcome outcome;
    try {
      outcome = body();
    } catch (const std::exception& e) {
      outcome = fail(std::string("unexpected exception: ") + e.what());
    }
    all_pass = all_pass && outcome.pass;
    std::cout << "criterion " << number << ": "
              << (outcome.pass ? "PASS" : "FAIL") << " — " << outcome.detail
              << "\n";
  }
  return all_pass ? 0 : 1;
}
