#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "ultralattice/rational.hpp"

namespace ultralattice {

/// A value in 2^{Z[1/p]} ∪ {0}, stored by its exponent: Exact(e) is 2^{-e}.
///
/// BelowPrecision(n) stands for "some value ≤ 2^{-n} that the current
/// truncation cannot resolve"; comparisons that would need the exact
/// magnitude throw IncomparableAtPrecision.
class NormValue {
 public:
  enum class Kind { Zero, Exact, BelowPrecision };

  static NormValue zero() { return NormValue(Kind::Zero, 0, 0); }
  static NormValue exact(Rational exponent) { return NormValue(Kind::Exact, exponent, 0); }
  static NormValue below_precision(std::int64_t n) {
    if (n <= 0) throw Error(ErrorKind::InvalidArgument, "BelowPrecision needs N > 0");
    return NormValue(Kind::BelowPrecision, 0, n);
  }

  Kind kind() const { return kind_; }
  bool is_zero() const { return kind_ == Kind::Zero; }
  bool is_exact() const { return kind_ == Kind::Exact; }
  bool is_below_precision() const { return kind_ == Kind::BelowPrecision; }
  /// Exponent of an Exact value; throws otherwise.
  const Rational& exponent() const;
  std::int64_t precision_bound() const { return bound_; }
  /// Set when a BelowPrecision bound had to be kept although the true bound
  /// got weaker (multiplication by a value > 1).
  bool precision_lost() const { return precision_lost_; }

  std::string str() const;
  static NormValue parse(std::string_view text);

  friend bool operator==(const NormValue& a, const NormValue& b) {
    return a.kind_ == b.kind_ && a.exponent_ == b.exponent_ && a.bound_ == b.bound_;
  }

 private:
  NormValue(Kind k, Rational e, std::int64_t b) : kind_(k), exponent_(e), bound_(b) {}

  Kind kind_;
  Rational exponent_;
  std::int64_t bound_;
  bool precision_lost_ = false;

  friend NormValue nv_mul(const NormValue& a, const NormValue& b);
};

/// Exact(s); throws NotPPowerDenominator unless s has denominator p^j.
NormValue nv_from_exponent(const Rational& s, int p);
NormValue nv_mul(const NormValue& a, const NormValue& b);
/// Value ordering (Exact(1) > Exact(2)); throws IncomparableAtPrecision.
std::strong_ordering nv_compare(const NormValue& a, const NormValue& b);
/// r-th power for a positive integer or p-power root exponent r.
NormValue nv_pow(const NormValue& a, const Rational& r);
NormValue nv_max(const NormValue& a, const NormValue& b);
NormValue nv_min(const NormValue& a, const NormValue& b);
inline bool nv_le(const NormValue& a, const NormValue& b) { return nv_compare(a, b) != std::strong_ordering::greater; }

}  // namespace ultralattice
