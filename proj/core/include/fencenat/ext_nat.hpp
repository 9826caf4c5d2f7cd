#ifndef FENCENAT_EXT_NAT_HPP
#define FENCENAT_EXT_NAT_HPP

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

#include "fencenat/errors.hpp"

namespace fencenat {

// Positions and values of the maps in this library live in {1, 2, 3, ...}.
using Nat = std::uint64_t;

// A natural number extended with a single infinite element aleph_0.
// Cardinalities of the structural invariants (rank, collapse set, block
// counts, ...) are either finite or countably infinite, and the library never
// detects infinity by sampling -- an ExtNat is created infinite only from a
// structural argument (e.g. "the recurring tail pattern contains a repeated
// value").  Total order: every finite value < aleph_0.  Addition saturates at
// aleph_0.
class ExtNat {
 public:
  constexpr ExtNat() : finite_(true), value_(0) {}

  static constexpr ExtNat finite(Nat n) { return ExtNat(true, n); }
  static constexpr ExtNat aleph0() { return ExtNat(false, 0); }

  constexpr bool is_finite() const { return finite_; }
  constexpr bool is_aleph0() const { return !finite_; }

  // Finite value accessor; throws on aleph_0 rather than returning a
  // sentinel, so arithmetic mistakes surface immediately.
  constexpr Nat value() const {
    if (!finite_) throw precondition_error("ExtNat::value() on aleph_0");
    return value_;
  }

  friend constexpr bool operator==(ExtNat a, ExtNat b) {
    return a.finite_ == b.finite_ && (!a.finite_ || a.value_ == b.value_);
  }

  friend constexpr std::strong_ordering operator<=>(ExtNat a, ExtNat b) {
    if (a.finite_ && b.finite_) return a.value_ <=> b.value_;
    if (a.finite_) return std::strong_ordering::less;     // finite < aleph_0
    if (b.finite_) return std::strong_ordering::greater;  // aleph_0 > finite
    return std::strong_ordering::equal;
  }

  friend constexpr ExtNat operator+(ExtNat a, ExtNat b) {
    if (a.finite_ && b.finite_) return finite(a.value_ + b.value_);
    return aleph0();
  }
  ExtNat& operator+=(ExtNat o) { return *this = *this + o; }

  std::string to_string() const {
    return finite_ ? std::to_string(value_) : std::string("aleph0");
  }

  friend std::ostream& operator<<(std::ostream& os, ExtNat n) {
    return os << n.to_string();
  }

 private:
  constexpr ExtNat(bool finite, Nat value) : finite_(finite), value_(value) {}

  bool finite_;
  Nat value_;
};

}  // namespace fencenat

#endif  // FENCENAT_EXT_NAT_HPP
