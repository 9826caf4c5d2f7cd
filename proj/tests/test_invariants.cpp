// Combinatorial invariants (nb, c, rank, R, Q, fibers) and the class
// membership report.

#include "doctest.h"

#include <algorithm>

#include "fencenat/errors.hpp"
#include "fencenat/factorization.hpp"
#include "fencenat/fence_map.hpp"
#include "fencenat/generators.hpp"
#include "fencenat/invariants.hpp"
#include "fencenat/oracle.hpp"
#include "support/random_maps.hpp"

using namespace fencenat;
using testsupport::Rng;

namespace {

// gamma2 of the split of xi at n = 1: values 5,4,3,4,5,6,...
FenceMap xi_completion() { return FenceMap({5, 4}, 3, 1, 1, {3}); }

}  // namespace

TEST_SUITE("invariants") {

TEST_CASE("nb_size counts neighbor collapses") {
  CHECK(nb_size(beta_gen(4)) == ExtNat::finite(2));
  CHECK(nb_size(xi()) == ExtNat::finite(0));
  CHECK(nb_size(collapse_witness()) == ExtNat::aleph0());
  CHECK(nb_size(alpha_gen(3)) == ExtNat::aleph0());
  CHECK(nb_size(lambda_gen(5)) == ExtNat::finite(0));
}

TEST_CASE("c_value counts positions inside non-singleton fibers") {
  CHECK(c_value(beta_gen(7)) == ExtNat::finite(3));
  CHECK(c_value(xi()) == ExtNat::finite(0));
  // 5,4,3,4,5,6,...: the descent crosses values 4 AND 5, so the doubled
  // fibers are {2,4} and {1,5} and c counts all four positions.
  CHECK(c_value(xi_completion()) == ExtNat::finite(4));
  // 3,2,1,2,3,4,...: same doubled-fiber shape, {2,4} and {1,5}.
  CHECK(c_value(lambda_gen(3)) == ExtNat::finite(4));
  CHECK(c_value(collapse_witness()) == ExtNat::aleph0());
  CHECK(c_value(testsupport::zigzag_map(0)) == ExtNat::aleph0());
}

TEST_CASE("rank is the image size") {
  CHECK(rank(alpha_gen(5)) == ExtNat::finite(5));
  CHECK(rank(xi()) == ExtNat::aleph0());
  CHECK(rank(alpha_gen(1)) == ExtNat::finite(1));
  CHECK(rank(testsupport::zigzag_map(2)) == ExtNat::finite(2));
  CHECK(rank(testsupport::descending_map(2, 4)) == ExtNat::aleph0());
}

TEST_CASE("fiber_info reports exact fibers") {
  const FiberInfo f4 = fiber_info(beta_gen(4), 4);
  CHECK(f4.size == ExtNat::finite(3));
  CHECK(f4.convex);
  CHECK(f4.positions == std::vector<Nat>{4, 5, 6});

  const FiberInfo f = fiber_info(xi_completion(), 4);
  CHECK(f.size == ExtNat::finite(2));
  CHECK_FALSE(f.convex);
  CHECK(f.positions == std::vector<Nat>{2, 4});

  const FiberInfo miss = fiber_info(xi(), 2);
  CHECK(miss.size == ExtNat::finite(0));
  CHECK(miss.convex);

  const FiberInfo inf = fiber_info(testsupport::zigzag_map(0), 2);
  CHECK(inf.size == ExtNat::aleph0());
  CHECK_FALSE(inf.convex);

  CHECK(min_fiber_position(beta_gen(4), 4) == 4);
  CHECK(min_fiber_position(xi(), 3) == 1);
  CHECK_FALSE(min_fiber_position(xi(), 2).has_value());

  CHECK(image_is_full(beta_gen(9)));
  CHECK(image_is_full(identity_map()));
  CHECK_FALSE(image_is_full(xi()));
  CHECK_FALSE(image_is_full(alpha_gen(4)));
}

TEST_CASE("r_set reports values with non-convex fibers") {
  const SetReport rw = r_set(collapse_witness());
  CHECK(rw.cardinality == ExtNat::finite(0));
  CHECK(rw.elements.empty());

  const SetReport rc = r_set(xi_completion());
  CHECK(rc.cardinality == ExtNat::finite(2));
  CHECK(rc.elements == std::vector<Nat>{4, 5});
  CHECK(rc.contains(4));
  CHECK(rc.contains(5));
  CHECK_FALSE(rc.contains(3));

  // 1,2,1,2,...: both fibers are non-convex, but the image is just {1,2}.
  const SetReport rz = r_set(testsupport::zigzag_map(0));
  CHECK(rz.cardinality == ExtNat::finite(2));
  CHECK(rz.elements == std::vector<Nat>{1, 2});
  CHECK_FALSE(rz.contains(3));

  // 1,2,1,2,3,4,3,4,5,...: every value recurs non-adjacently, so R is the
  // whole image and infinite.
  const SetReport rinf = r_set(FenceMap({}, 1, 4, 2, {1, 2, 1, 2}));
  CHECK(rinf.cardinality == ExtNat::aleph0());
  REQUIRE(rinf.periodic_witness.has_value());
  CHECK(rinf.contains(1));
  CHECK(rinf.contains(2));
  CHECK(rinf.contains(17));
}

TEST_CASE("q_set reports adjacent fat-fiber values") {
  CHECK(q_set(collapse_witness()).cardinality == ExtNat::finite(0));
  CHECK(q_set(xi()).cardinality == ExtNat::finite(0));

  const FenceMap stacked({}, 1, 6, 2, {1, 1, 1, 2, 2, 2});
  REQUIRE(is_fence_preserving(stacked));
  const SetReport q = q_set(stacked);
  CHECK(q.cardinality == ExtNat::aleph0());
  CHECK(q.contains(1));
  CHECK(q.contains(3));

  // Fat fibers at non-adjacent values only: Q stays empty.
  CHECK(q_set(testsupport::k2_member()).cardinality == ExtNat::finite(0));
  CHECK(q_set(delta_gen(5)).cardinality == ExtNat::finite(0));
}

TEST_CASE("eventual_monotone_index") {
  CHECK(eventual_monotone_index(xi()) == 1);
  CHECK(eventual_monotone_index(lambda_gen(5)) == 5);
  CHECK(eventual_monotone_index(beta_gen(3)) == 1);
  CHECK(eventual_monotone_index(xi_completion()) == 3);

  CHECK_THROWS_AS(eventual_monotone_index(alpha_gen(3)), precondition_error);
  CHECK_THROWS_AS(eventual_monotone_index(testsupport::zigzag_map(0)),
                  precondition_error);
}

TEST_CASE("monotone index soundness on random maps") {
  Rng rng(5050001);
  int checked = 0;
  for (int i = 0; i < 300 && checked < 120; ++i) {
    const FenceMap m = testsupport::random_preserving(rng);
    if (rank(m) != ExtNat::aleph0() || r_set(m).cardinality.is_aleph0()) continue;
    ++checked;
    const Nat k = eventual_monotone_index(m);
    const Nat h = oracle::effective_horizon(200, {&m});
    for (Nat x = std::max<Nat>(k, 1); x < h; ++x) {
      REQUIRE(m.evaluate(x) <= m.evaluate(x + 1));
    }
    // Minimality: some descent survives right before k.
    if (k > 1) CHECK(m.evaluate(k - 1) > m.evaluate(k));
  }
  CHECK(checked >= 100);
}

TEST_CASE("classify frozen cases") {
  const ClassReport l3 = classify(lambda_gen(3), 3);
  CHECK(l3.in_lambda);
  CHECK(l3.in_lambda_n);
  CHECK(l3.in_omega_n);
  CHECK_FALSE(l3.in_theta);
  CHECK(l3.in_H_n);
  CHECK(l3.in_G_n);

  const ClassReport w = classify(collapse_witness(), 1);
  CHECK(w.in_P);
  CHECK(w.k_class == KClass{KClass::Kind::k_finite, 1});
  CHECK(w.in_delta);
  CHECK(w.in_delta_n);
  CHECK(w.in_theta);
  CHECK(w.in_gamma);
  CHECK_FALSE(w.in_lambda);
  CHECK_FALSE(w.in_B);
  CHECK(w.in_omega_n);
  CHECK(w.in_H_n);
  CHECK(w.in_G_n);
  CHECK(w.rank == ExtNat::aleph0());
  CHECK(w.nb_size == ExtNat::aleph0());
  CHECK(w.c_value == ExtNat::aleph0());

  // The witness fails Omega_2, so it leaves both chains at n = 2.
  const ClassReport w2 = classify(collapse_witness(), 2);
  CHECK_FALSE(w2.in_omega_n);
  CHECK_FALSE(w2.in_G_n);
  CHECK_FALSE(w2.in_H_n);

  const ClassReport x = classify(xi(), 1);
  CHECK_FALSE(x.in_gamma);
  CHECK_FALSE(x.in_lambda);
  CHECK(x.in_G_n);
  CHECK(x.in_H_n);
  CHECK(x.in_theta);
  CHECK(x.in_P);
  CHECK(x.k_class == KClass{KClass::Kind::k_aleph0, 0});

  const ClassReport b = classify(beta_gen(4), 2);
  CHECK(b.in_B);
  CHECK(b.in_H_n);
  CHECK_FALSE(b.in_G_n);
  CHECK(b.nb_size == ExtNat::finite(2));
  CHECK(b.c_value == ExtNat::finite(3));
  CHECK_FALSE(classify(beta_gen(4), 5).in_H_n);

  CHECK(classify(alpha_gen(4), 4).in_H_n);
  CHECK_FALSE(classify(alpha_gen(4), 5).in_H_n);
  CHECK_FALSE(classify(alpha_gen(4), 4).in_P);  // finite rank
}

TEST_CASE("matchers recognize the named families") {
  CHECK(match_alpha_gen(alpha_gen(4)) == 4);
  CHECK_FALSE(match_alpha_gen(beta_gen(4)).has_value());
  CHECK(match_beta_gen(beta_gen(7)) == 7);
  CHECK_FALSE(match_beta_gen(xi()).has_value());
  CHECK(match_lambda_gen(lambda_gen(9)) == 9);
  CHECK(match_lambda_gen(testsupport::descending_map(1, 5)) == 5);
  CHECK_FALSE(match_lambda_gen(testsupport::descending_map(3, 5)).has_value());
  CHECK(is_xi(xi()));
  CHECK(is_xi(FenceMap({}, 1, 2, 2, {3, 4})));
  CHECK_FALSE(is_xi(identity_map()));
}

TEST_CASE("report coherence on random maps") {
  Rng rng(5050002);
  for (int i = 0; i < 250; ++i) {
    const FenceMap m = testsupport::random_preserving(rng);
    const Nat n = testsupport::pick(rng, 1, 6);
    const ClassReport rep = classify(m, n);

    CHECK(rep.in_lambda ==
          (rep.nb_size == ExtNat::finite(0) && rep.c_value > ExtNat::finite(0)));
    CHECK(rep.in_P == (rep.k_class.kind != KClass::Kind::not_in_p));
    if (rep.in_lambda_n) {
      CHECK(rep.in_lambda);
      CHECK(rep.in_omega_n);
    }
    if (rep.in_theta_n) CHECK(rep.in_theta);
    if (rep.in_delta_n) CHECK(rep.in_delta);
    if (rep.in_gamma) CHECK(rep.in_theta);
    // Singleton blocks are exactly the absence of adjacent collapses; a
    // zero c additionally rules out non-adjacent repeats.
    CHECK((rep.nb_size == ExtNat::finite(0)) ==
          block_stream(m).all_singletons());
    if (rep.c_value == ExtNat::finite(0)) {
      CHECK(block_stream(m).all_singletons());
    }
    if (rep.in_omega_n) CHECK(m.evaluate(1) >= n);
  }
}

TEST_CASE("c is monotone under composition") {
  Rng rng(5050003);
  for (int i = 0; i < 200; ++i) {
    const FenceMap a = testsupport::random_preserving(rng);
    const FenceMap b = testsupport::random_preserving(rng);
    CHECK(c_value(a) <= c_value(compose(a, b)));
  }
}

TEST_CASE("Lambda and Gamma are closed under composition") {
  Rng rng(5050004);
  const auto& lam = testsupport::lambda_pool();
  for (const FenceMap& m : lam) {
    const ClassReport rep = classify(m, 1);
    REQUIRE(rep.in_lambda);
  }
  for (int i = 0; i < 150; ++i) {
    const FenceMap& a = lam[testsupport::pick(rng, 0, lam.size() - 1)];
    const FenceMap& b = lam[testsupport::pick(rng, 0, lam.size() - 1)];
    CHECK(classify(compose(a, b), 1).in_lambda);
  }
  const auto gam = testsupport::gamma_pool(rng);
  for (const FenceMap& m : gam) REQUIRE(classify(m, 1).in_gamma);
  for (int i = 0; i < 150; ++i) {
    const FenceMap& a = gam[testsupport::pick(rng, 0, gam.size() - 1)];
    const FenceMap& b = gam[testsupport::pick(rng, 0, gam.size() - 1)];
    CHECK(classify(compose(a, b), 1).in_gamma);
  }
}

TEST_CASE("the complement of P is an ideal") {
  Rng rng(5050005);
  const auto outside = testsupport::non_p_pool();
  for (const FenceMap& m : outside) REQUIRE_FALSE(classify(m, 1).in_P);
  for (int i = 0; i < 150; ++i) {
    const FenceMap& m = outside[testsupport::pick(rng, 0, outside.size() - 1)];
    const FenceMap b = testsupport::random_preserving(rng);
    CHECK_FALSE(classify(compose(m, b), 1).in_P);
    CHECK_FALSE(classify(compose(b, m), 1).in_P);
  }
}

TEST_CASE("R-values propagate through composition over covered fibers") {
  Rng rng(5050006);
  int exercised = 0;
  for (int i = 0; i < 400 && exercised < 60; ++i) {
    const FenceMap a = testsupport::random_preserving(rng);
    const FenceMap b = testsupport::random_preserving(rng);
    const SetReport rb = r_set(b);
    if (!rb.cardinality.is_finite() || rb.elements.empty()) continue;
    const Nat h = oracle::effective_horizon(400, {&a, &b});
    std::set<Nat> image_a;
    for (Nat x = 1; x <= h; ++x) image_a.insert(a.evaluate(x));
    const SetReport rab = r_set(compose(a, b));
    for (Nat v : rb.elements) {
      const oracle::BruteFiber fib = oracle::fiber(b, v, h);
      if (!fib.complete) continue;
      bool covered = true;
      for (Nat pos : fib.positions) covered = covered && image_a.count(pos) > 0;
      if (!covered) continue;
      ++exercised;
      CHECK(rab.contains(v));
    }
  }
  CHECK(exercised >= 40);
}

}  // TEST_SUITE
