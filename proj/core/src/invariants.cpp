#include "fencenat/invariants.hpp"

#include <algorithm>
#include <set>

#include "fencenat/errors.hpp"
#include "fencenat/generators.hpp"

namespace fencenat {

namespace {

// Largest value appearing in the prefix or the tail base.  Fibers of values
// above it are "stable": under drift d > 0 they translate rigidly by one
// spatial period per +d of value, so membership in value-indexed sets is
// periodic with period d from here on.
Nat stable_threshold(const FenceMap& nm) {
  Nat v0 = 1;
  for (Nat v : nm.prefix()) v0 = std::max(v0, v);
  for (Nat v : nm.tail_base()) v0 = std::max(v0, v);
  return v0;
}

bool contiguous(const std::vector<Nat>& sorted_positions) {
  for (std::size_t i = 1; i < sorted_positions.size(); ++i)
    if (sorted_positions[i] != sorted_positions[i - 1] + 1) return false;
  return true;
}

}  // namespace

FiberInfo fiber_info(const FenceMap& m, Nat v) {
  FenceMap nm = m.normalized();
  const Nat N = nm.tail_start();
  const Nat p = nm.tail_period();
  const Nat d = nm.tail_drift();
  const std::vector<Nat>& base = nm.tail_base();

  FiberInfo info;
  for (std::size_t i = 0; i < nm.prefix().size(); ++i)
    if (nm.prefix()[i] == v) info.positions.push_back(static_cast<Nat>(i) + 1);

  if (d == 0) {
    bool in_base = std::find(base.begin(), base.end(), v) != base.end();
    if (in_base) {
      const bool prefix_hit = !info.positions.empty();
      for (Nat r = 0; r < p; ++r)
        if (base[r] == v) info.positions.push_back(N + r);
      info.size = ExtNat::aleph0();
      // An infinite fiber is a final segment only when the whole tail is
      // constant at v and v never occurs earlier (the canonical form has
      // already absorbed any adjacent prefix occurrences).
      info.convex = (p == 1 && !prefix_hit);
      return info;
    }
    info.size = ExtNat::finite(info.positions.size());
    info.convex = contiguous(info.positions);
    return info;
  }

  for (Nat r = 0; r < p; ++r) {
    if (v >= base[r] && (v - base[r]) % d == 0)
      info.positions.push_back(N + r + p * ((v - base[r]) / d));
  }
  std::sort(info.positions.begin(), info.positions.end());
  info.size = ExtNat::finite(info.positions.size());
  info.convex = contiguous(info.positions);
  return info;
}

std::optional<Nat> min_fiber_position(const FenceMap& m, Nat v) {
  FiberInfo info = fiber_info(m, v);
  if (info.positions.empty()) return std::nullopt;
  return *std::min_element(info.positions.begin(), info.positions.end());
}

bool image_is_full(const FenceMap& m) {
  FenceMap nm = m.normalized();
  if (nm.tail_drift() == 0) return false;  // finite image
  const Nat bound = stable_threshold(nm) + nm.tail_drift();
  for (Nat v = 1; v <= bound; ++v)
    if (fiber_info(nm, v).size == ExtNat::finite(0)) return false;
  return true;
}

bool SetReport::contains(Nat v) const {
  if (periodic_witness) {
    const Nat start = periodic_witness->first;
    const Nat period = periodic_witness->second;
    while (v >= start + period) v -= period;
  }
  return std::binary_search(elements.begin(), elements.end(), v);
}

ExtNat nb_size(const FenceMap& m) {
  BlockStream bs = block_stream(m);
  if (bs.tail_kind() == TailKind::infinite_block) return ExtNat::aleph0();
  for (const Shape& s : bs.shapes())
    if (s.length >= 2) return ExtNat::aleph0();
  Nat count = 0;
  for (const Block& b : bs.head()) count += b.length - 1;
  return ExtNat::finite(count);
}

ExtNat c_value(const FenceMap& m) {
  FenceMap nm = m.normalized();
  const Nat d = nm.tail_drift();
  if (d == 0) return ExtNat::aleph0();  // some tail value has infinite fiber

  const Nat v0 = stable_threshold(nm);
  // A stable fiber of size >= 2 recurs for every further value in its
  // residue class, so the union of non-singleton fibers is infinite.
  for (Nat v = v0 + 1; v <= v0 + d; ++v)
    if (fiber_info(nm, v).size >= ExtNat::finite(2)) return ExtNat::aleph0();

  Nat count = 0;
  for (Nat v = 1; v <= v0; ++v) {
    FiberInfo info = fiber_info(nm, v);
    if (info.size >= ExtNat::finite(2)) count += info.positions.size();
  }
  return ExtNat::finite(count);
}

ExtNat rank(const FenceMap& m) {
  FenceMap nm = m.normalized();
  if (nm.tail_drift() > 0) return ExtNat::aleph0();
  std::set<Nat> values(nm.prefix().begin(), nm.prefix().end());
  values.insert(nm.tail_base().begin(), nm.tail_base().end());
  return ExtNat::finite(values.size());
}

namespace {

// Shared driver for the value-set reports: collects members of an
// eventually periodic value predicate.  With drift 0 the image is finite
// and the set is listed outright; with drift d > 0 membership is scanned on
// [1, v0 + d] and the representatives in (v0, v0 + d] decide whether full
// residue classes belong (making the set infinite with period d).
template <typename Member>
SetReport value_set_report(const FenceMap& nm, Member member) {
  SetReport report;
  const Nat d = nm.tail_drift();

  if (d == 0) {
    std::set<Nat> image(nm.prefix().begin(), nm.prefix().end());
    image.insert(nm.tail_base().begin(), nm.tail_base().end());
    for (Nat v : image)
      if (member(v)) report.elements.push_back(v);
    report.cardinality = ExtNat::finite(report.elements.size());
    return report;
  }

  const Nat v0 = stable_threshold(nm);
  bool infinite = false;
  for (Nat v = 1; v <= v0 + d; ++v) {
    if (member(v)) {
      report.elements.push_back(v);
      if (v > v0) infinite = true;
    }
  }
  if (infinite) {
    report.cardinality = ExtNat::aleph0();
    report.periodic_witness = std::make_pair(v0 + 1, d);
  } else {
    report.cardinality = ExtNat::finite(report.elements.size());
  }
  return report;
}

}  // namespace

SetReport r_set(const FenceMap& m) {
  FenceMap nm = m.normalized();
  return value_set_report(nm, [&](Nat v) {
    FiberInfo info = fiber_info(nm, v);
    return info.size > ExtNat::finite(0) && !info.convex;
  });
}

SetReport q_set(const FenceMap& m) {
  FenceMap nm = m.normalized();
  return value_set_report(nm, [&](Nat v) {
    return fiber_info(nm, v).size >= ExtNat::finite(3) &&
           fiber_info(nm, v + 1).size >= ExtNat::finite(3);
  });
}

Nat eventual_monotone_index(const FenceMap& m) {
  FenceMap nm = m.normalized();
  if (rank(nm).is_finite())
    throw precondition_error(
        "eventual monotone index requires infinite rank");
  if (r_set(nm).cardinality.is_aleph0())
    throw precondition_error(
        "eventual monotone index requires finitely many non-convex fibers");

  // With finitely many non-convex fibers the periodic tail is descent-free
  // (a recurring descent would re-visit infinitely many values), so the
  // last adjacent descent lies before the tail.
  const Nat N = nm.tail_start();
  const Nat p = nm.tail_period();
  Nat last_descent = 0;
  for (Nat x = 1; x <= N + 2 * p; ++x) {
    if (evaluate(nm, x) > evaluate(nm, x + 1)) {
      if (x >= N) throw internal_error("descent inside a monotone tail");
      last_descent = x;
    }
  }
  return last_descent + 1;
}

std::optional<Nat> match_alpha_gen(const FenceMap& m) {
  FenceMap nm = m.normalized();
  if (nm.tail_drift() != 0 || nm.tail_period() != 1) return std::nullopt;
  const Nat k = nm.tail_start();
  if (nm.tail_base()[0] != k) return std::nullopt;
  for (std::size_t i = 0; i < nm.prefix().size(); ++i)
    if (nm.prefix()[i] != static_cast<Nat>(i) + 1) return std::nullopt;
  return k;
}

std::optional<Nat> match_beta_gen(const FenceMap& m) {
  FenceMap nm = m.normalized();
  if (nm.tail_drift() != 1 || nm.tail_period() != 1) return std::nullopt;
  const Nat k = nm.tail_base()[0];
  if (nm.tail_start() != k + 2) return std::nullopt;
  const std::vector<Nat>& prefix = nm.prefix();  // expected 1..k-1, k, k
  if (prefix.size() != k + 1) return std::nullopt;
  for (Nat i = 0; i + 1 < k; ++i)
    if (prefix[i] != i + 1) return std::nullopt;
  if (prefix[k - 1] != k || prefix[k] != k) return std::nullopt;
  return k;
}

std::optional<Nat> match_lambda_gen(const FenceMap& m) {
  FenceMap nm = m.normalized();
  if (nm.tail_drift() != 1 || nm.tail_period() != 1) return std::nullopt;
  if (nm.tail_base()[0] != 1) return std::nullopt;
  const Nat j = nm.tail_start();
  if (j % 2 == 0) return std::nullopt;
  const std::vector<Nat>& prefix = nm.prefix();  // expected j, j-1, ..., 2
  if (prefix.size() != j - 1) return std::nullopt;
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (prefix[i] != j - static_cast<Nat>(i)) return std::nullopt;
  return j;
}

bool is_xi(const FenceMap& m) {
  return equals(m, xi());
}

ClassReport classify(const FenceMap& m, Nat n) {
  if (n == 0) throw precondition_error("class parameter must be positive");
  FenceMap nm = m.normalized();
  BlockStream bs = block_stream(nm);
  SetReport r = r_set(nm);
  SetReport q = q_set(nm);

  ClassReport rep;
  rep.rank = rank(nm);
  rep.nb_size = nb_size(nm);
  rep.c_value = c_value(nm);
  rep.in_theta = r.cardinality == ExtNat::finite(0);
  rep.in_lambda = rep.nb_size == ExtNat::finite(0) &&
                  rep.c_value > ExtNat::finite(0);
  rep.in_gamma = rep.in_theta && rep.rank.is_aleph0() &&
                 bs.has_block_of_length_at_least(3);
  rep.in_delta = bs.m_star_count().is_aleph0();
  rep.in_B = rep.nb_size == ExtNat::finite(2) &&
             rep.c_value == ExtNat::finite(3) && image_is_full(nm);
  rep.in_P = rep.rank.is_aleph0() && bs.big_block_count().is_finite() &&
             r.cardinality.is_finite() && q.cardinality.is_finite();
  if (rep.in_P) {
    std::vector<Nat> recurring = ms_stream(nm).recurring_run_lengths();
    if (recurring.empty()) {
      rep.k_class = KClass{KClass::Kind::k_aleph0, 0};
    } else {
      rep.k_class = KClass{KClass::Kind::k_finite, recurring.front()};
    }
  }

  rep.n = n;
  std::set<Nat> initial;
  for (Nat x = 1; x <= n; ++x) initial.insert(evaluate(nm, x));
  rep.in_omega_n = evaluate(nm, 1) >= n && initial.size() == n;
  rep.in_lambda_n = rep.in_lambda && rep.in_omega_n;
  rep.in_theta_n = rep.in_theta && rep.in_omega_n;
  rep.in_delta_n = rep.in_delta && rep.in_omega_n;

  std::optional<Nat> alpha_k = match_alpha_gen(nm);
  std::optional<Nat> beta_k = match_beta_gen(nm);
  const bool xi_here = is_xi(nm);
  rep.in_H_n = (alpha_k && *alpha_k >= n) || (beta_k && *beta_k >= n) ||
               rep.in_lambda_n || rep.in_delta_n || xi_here;
  rep.in_G_n =
      xi_here || rep.in_lambda_n ||
      (rep.in_theta_n &&
       (bs.m_star_count() == ExtNat::finite(1) ||
        bs.m_star_count().is_aleph0()) &&
       bs.all_star_lengths_equal(3));
  return rep;
}

}  // namespace fencenat
