#include <random>

#include "doctest.h"
#include "ultralattice/valnorm.hpp"

using namespace ultralattice;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an ultralattice::Error");
  return ErrorKind::InvalidArgument;
}

NormValue ex(std::int64_t n, std::int64_t d = 1) { return NormValue::exact(Rational(n, d)); }

}  // namespace

TEST_CASE("nv_from_exponent") {
  CHECK(nv_from_exponent(Rational(0), 2) == ex(0));
  CHECK(nv_from_exponent(Rational(1), 2) == ex(1));
  CHECK(nv_from_exponent(Rational(3, 4), 2).str() == "2^-(3/4)");
  CHECK(nv_from_exponent(Rational(5, 9), 3) == ex(5, 9));
  CHECK(kind_of([] { nv_from_exponent(Rational(1, 3), 2); }) == ErrorKind::NotPPowerDenominator);
  CHECK(kind_of([] { nv_from_exponent(Rational(1, 6), 2); }) == ErrorKind::NotPPowerDenominator);
}

TEST_CASE("nv_mul examples") {
  CHECK(nv_mul(ex(1), ex(-1)) == ex(0));
  CHECK(nv_mul(NormValue::zero(), ex(5)) == NormValue::zero());
  CHECK(nv_mul(ex(1, 2), ex(1, 2)) == ex(1));
}

TEST_CASE("nv_mul below precision") {
  const auto bp = NormValue::below_precision(8);
  CHECK(nv_mul(bp, ex(2)) == NormValue::below_precision(10));
  // 2^{-8}·2^{-3/2} ≤ 2^{-9}; claiming 2^{-10} would be false
  CHECK(nv_mul(bp, ex(3, 2)) == NormValue::below_precision(9));
  auto lost = nv_mul(bp, ex(-3));
  CHECK(lost == NormValue::below_precision(8));
  CHECK(lost.precision_lost());
  CHECK_FALSE(nv_mul(bp, ex(0)).precision_lost());
  CHECK(nv_mul(bp, NormValue::below_precision(4)) == NormValue::below_precision(12));
  CHECK(nv_mul(bp, NormValue::zero()) == NormValue::zero());
}

TEST_CASE("nv_compare examples") {
  CHECK(nv_compare(ex(1), ex(2)) == std::strong_ordering::greater);
  CHECK(nv_compare(NormValue::zero(), ex(100)) == std::strong_ordering::less);
  CHECK(kind_of([] { nv_compare(NormValue::below_precision(8), ex(10)); }) == ErrorKind::IncomparableAtPrecision);
  CHECK(nv_compare(NormValue::below_precision(8), ex(8)) != std::strong_ordering::greater);
  CHECK(nv_compare(NormValue::below_precision(8), ex(3)) == std::strong_ordering::less);
  CHECK(nv_compare(NormValue::zero(), NormValue::below_precision(8)) == std::strong_ordering::less);
  CHECK(kind_of([] { nv_compare(NormValue::below_precision(8), NormValue::below_precision(9)); }) ==
        ErrorKind::IncomparableAtPrecision);
}

TEST_CASE("rendering round trip") {
  for (const auto& v : {NormValue::zero(), ex(3), ex(-1, 2), ex(7, 27), NormValue::below_precision(16)})
    CHECK(NormValue::parse(v.str()) == v);
  CHECK(ex(3).str() == "2^-(3)");
  CHECK(NormValue::zero().str() == "0");
  CHECK(NormValue::below_precision(16).str() == "<=2^-(16)");
  CHECK(kind_of([] { NormValue::parse("2^-(2/4)"); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { NormValue::parse("2^(1)"); }) == ErrorKind::SyntaxError);
}

TEST_CASE("monoid laws on random exponents") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> num(-40, 40);
  std::uniform_int_distribution<int> depth(0, 3);
  auto draw = [&] { return Rational(num(rng), ipow(3, depth(rng))); };
  for (int i = 0; i < 500; ++i) {
    Rational s = draw(), t = draw(), u = draw();
    auto a = nv_from_exponent(s, 3), b = nv_from_exponent(t, 3), c = nv_from_exponent(u, 3);
    CHECK(nv_mul(a, b) == nv_mul(b, a));
    CHECK(nv_mul(nv_mul(a, b), c) == nv_mul(a, nv_mul(b, c)));
    CHECK(nv_mul(a, ex(0)) == a);
    CHECK(nv_mul(a, b) == nv_from_exponent(s + t, 3));
    // a ≤ b iff ac ≤ bc
    CHECK(nv_le(a, b) == nv_le(nv_mul(a, c), nv_mul(b, c)));
  }
}

TEST_CASE("max, min and powers") {
  CHECK(nv_max(ex(1), ex(2)) == ex(1));
  CHECK(nv_min(ex(1), ex(2)) == ex(2));
  CHECK(nv_max(NormValue::zero(), ex(2)) == ex(2));
  CHECK(nv_pow(ex(3, 2), Rational(2)) == ex(3));
  CHECK(nv_pow(ex(1), Rational(1, 2)) == ex(1, 2));
}
