#include "ultralattice/valnorm.hpp"

#include <cctype>
#include <charconv>

namespace ultralattice {

const Rational& NormValue::exponent() const {
  if (kind_ != Kind::Exact) throw Error(ErrorKind::InvalidArgument, "exponent of a non-exact value");
  return exponent_;
}

std::string NormValue::str() const {
  switch (kind_) {
    case Kind::Zero: return "0";
    case Kind::Exact: return "2^-(" + exponent_.str() + ")";
    case Kind::BelowPrecision: return "<=2^-(" + std::to_string(bound_) + ")";
  }
  return "?";
}

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw Error(ErrorKind::SyntaxError, "bad norm value '" + std::string(whole) + "'");
  return v;
}

Rational parse_ratio(std::string_view s, std::string_view whole) {
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(s, whole));
  return Rational(parse_int(s.substr(0, slash), whole), parse_int(s.substr(slash + 1), whole));
}

}  // namespace

NormValue NormValue::parse(std::string_view text) {
  if (text == "0") return zero();
  constexpr std::string_view exact_prefix = "2^-(";
  constexpr std::string_view below_prefix = "<=2^-(";
  if (text.size() > below_prefix.size() && text.starts_with(below_prefix) && text.back() == ')') {
    auto body = text.substr(below_prefix.size(), text.size() - below_prefix.size() - 1);
    return below_precision(parse_int(body, text));
  }
  if (text.size() > exact_prefix.size() && text.starts_with(exact_prefix) && text.back() == ')') {
    auto body = text.substr(exact_prefix.size(), text.size() - exact_prefix.size() - 1);
    Rational e = parse_ratio(body, text);
    // keep the rendering bit-exact: only lowest terms are accepted
    if (e.str() != body) throw Error(ErrorKind::SyntaxError, "exponent not in lowest terms: '" + std::string(text) + "'");
    return exact(e);
  }
  throw Error(ErrorKind::SyntaxError, "bad norm value '" + std::string(text) + "'");
}

NormValue nv_from_exponent(const Rational& s, int p) {
  if (!p_power_exponent(s.den(), p))
    throw Error(ErrorKind::NotPPowerDenominator,
                "exponent " + s.str() + " has a denominator that is not a power of " + std::to_string(p));
  return NormValue::exact(s);
}

NormValue nv_mul(const NormValue& a, const NormValue& b) {
  using K = NormValue::Kind;
  if (a.kind_ == K::Zero || b.kind_ == K::Zero) return NormValue::zero();
  if (a.kind_ == K::Exact && b.kind_ == K::Exact) return NormValue::exact(a.exponent_ + b.exponent_);
  if (a.kind_ == K::BelowPrecision && b.kind_ == K::BelowPrecision) {
    NormValue r = NormValue::below_precision(a.bound_ + b.bound_);
    r.precision_lost_ = a.precision_lost_ || b.precision_lost_;
    return r;
  }
  const NormValue& bp = a.kind_ == K::BelowPrecision ? a : b;
  const NormValue& ex = a.kind_ == K::BelowPrecision ? b : a;
  if (ex.exponent_ >= Rational(0)) {
    // value ≤ 2^{-(n+e)} ≤ 2^{-(n+⌊e⌋)}
    NormValue r = NormValue::below_precision(bp.bound_ + ex.exponent_.floor());
    r.precision_lost_ = bp.precision_lost_;
    return r;
  }
  NormValue r = bp;
  r.precision_lost_ = true;
  return r;
}

std::strong_ordering nv_compare(const NormValue& a, const NormValue& b) {
  using K = NormValue::Kind;
  if (a.kind() == K::Zero || b.kind() == K::Zero) {
    if (a.kind() == b.kind()) return std::strong_ordering::equal;
    return a.kind() == K::Zero ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (a.kind() == K::Exact && b.kind() == K::Exact) {
    // larger exponent means smaller value
    return b.exponent() <=> a.exponent();
  }
  if (a.kind() == K::BelowPrecision && b.kind() == K::BelowPrecision)
    throw Error(ErrorKind::IncomparableAtPrecision, "two values below precision: " + a.str() + " vs " + b.str());
  const bool a_below = a.kind() == K::BelowPrecision;
  const NormValue& bp = a_below ? a : b;
  const NormValue& ex = a_below ? b : a;
  if (ex.exponent() > Rational(bp.precision_bound()))
    throw Error(ErrorKind::IncomparableAtPrecision, bp.str() + " vs " + ex.str());
  return a_below ? std::strong_ordering::less : std::strong_ordering::greater;
}

NormValue nv_pow(const NormValue& a, const Rational& r) {
  if (r <= Rational(0)) throw Error(ErrorKind::InvalidArgument, "nv_pow needs a positive exponent");
  if (a.is_zero()) return a;
  if (a.is_below_precision()) {
    if (!r.is_integer()) throw Error(ErrorKind::IncomparableAtPrecision, "root of a value below precision");
    return NormValue::below_precision(a.precision_bound() * r.num());
  }
  return NormValue::exact(a.exponent() * r);
}

NormValue nv_max(const NormValue& a, const NormValue& b) { return nv_compare(a, b) == std::strong_ordering::less ? b : a; }
NormValue nv_min(const NormValue& a, const NormValue& b) { return nv_compare(a, b) == std::strong_ordering::greater ? b : a; }

}  // namespace ultralattice
