#include "fencenat/generators.hpp"

#include <algorithm>

#include "fencenat/errors.hpp"

namespace fencenat {

FenceMap xi() {
  return FenceMap({}, 1, 1, 1, {3});
}

FenceMap alpha_gen(Nat k) {
  if (k == 0) throw precondition_error("alpha generator needs k >= 1");
  std::vector<Nat> prefix(k - 1);
  for (Nat i = 0; i + 1 < k; ++i) prefix[i] = i + 1;
  return FenceMap(std::move(prefix), k, 1, 0, {k});
}

FenceMap beta_gen(Nat k) {
  if (k == 0) throw precondition_error("beta generator needs k >= 1");
  std::vector<Nat> prefix(k + 1);
  for (Nat i = 0; i + 1 < k; ++i) prefix[i] = i + 1;
  prefix[k - 1] = k;
  prefix[k] = k;
  return FenceMap(std::move(prefix), k + 2, 1, 1, {k});
}

FenceMap lambda_gen(Nat j) {
  if (j % 2 == 0) throw precondition_error("lambda generator needs odd j");
  if (j == 1) return identity_map();
  std::vector<Nat> prefix(j - 1);
  for (Nat i = 0; i + 1 < j; ++i) prefix[i] = j - i;
  return FenceMap(std::move(prefix), j, 1, 1, {1});
}

FenceMap delta_gen(Nat n) {
  if (n == 0) throw precondition_error("delta generator needs n >= 1");
  const Nat anchor = (n % 2 == 1) ? 1 : 2;
  std::vector<Nat> prefix(n - 1, anchor);
  return FenceMap(std::move(prefix), n, 1, 1, {anchor});
}

FenceMap collapse_witness() {
  return FenceMap({}, 1, 4, 2, {1, 2, 2, 2});
}

bool SubsetSpec::contains(Nat x) const {
  if (x == 0) throw precondition_error("subset membership is over positives");
  if (!members.empty() && x <= members.back())
    return std::binary_search(members.begin(), members.end(), x);
  return pattern[(x - 1) % period];
}

SubsetSpec SubsetSpec::all() {
  return SubsetSpec{{}, 1, {true}};
}

SubsetSpec SubsetSpec::none() {
  return SubsetSpec{{}, 1, {false}};
}

SubsetSpec SubsetSpec::evens() {
  return SubsetSpec{{}, 2, {false, true}};
}

SubsetSpec SubsetSpec::odds() {
  return SubsetSpec{{}, 2, {true, false}};
}

FenceMap alpha_family(const SubsetSpec& spec) {
  if (spec.period == 0 || spec.pattern.size() != spec.period)
    throw precondition_error("subset pattern must tile its period");
  if (!std::is_sorted(spec.members.begin(), spec.members.end()) ||
      std::adjacent_find(spec.members.begin(), spec.members.end()) !=
          spec.members.end() ||
      (!spec.members.empty() && spec.members.front() == 0))
    throw precondition_error("subset members must be distinct positives");

  // Value v occupies a block of odd length: 3 when v is in the set, 5
  // otherwise.  Membership is eventually periodic, so past the listed
  // members one pattern period of blocks repeats spatially with the value
  // rising by `period` per repetition.
  const Nat listed = spec.members.empty() ? 0 : spec.members.back();

  std::vector<Nat> prefix;
  for (Nat v = 1; v <= listed; ++v) {
    const Nat len = spec.contains(v) ? 3 : 5;
    prefix.insert(prefix.end(), len, v);
  }
  const Nat tail_start = static_cast<Nat>(prefix.size()) + 1;

  std::vector<Nat> base;
  for (Nat v = listed + 1; v <= listed + spec.period; ++v) {
    const Nat len = spec.contains(v) ? 3 : 5;
    base.insert(base.end(), len, v);
  }
  const Nat spatial_period = static_cast<Nat>(base.size());
  return FenceMap(std::move(prefix), tail_start, spatial_period, spec.period,
                  std::move(base))
      .normalized();
}

}  // namespace fencenat
