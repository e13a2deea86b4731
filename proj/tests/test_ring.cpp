#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "ultralattice/ring.hpp"

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

/// Schoolbook product over a dense tick array, truncated at hi.
std::map<std::int64_t, int> dense_product(const RingElement::Terms& a, const RingElement::Terms& b, int p, std::int64_t hi) {
  std::map<std::int64_t, int> acc;
  for (const auto& [s, c] : a)
    for (const auto& [t, d] : b)
      if (s + t < hi) acc[s + t] = (acc[s + t] + c * d) % p;
  std::erase_if(acc, [](const auto& kv) { return kv.second == 0; });
  return acc;
}

}  // namespace

TEST_CASE("parse examples") {
  auto cfg = RingConfig::make(2, 1, 8);
  auto x = parse_element("1 + T^(3/2)", cfg);
  CHECK(x.factor(0) == RingElement::Terms{{0, 1}, {3, 1}});
  CHECK(kind_of([&] { parse_element("T^(1/4)", cfg); }) == ErrorKind::DepthExceeded);
  auto cfg3 = RingConfig::make(3, 1, 8);
  CHECK(parse_element("T^(1/3)*T^(2/3)", cfg3) == RingElement::monomial(cfg3, Rational(1)));
}

TEST_CASE("parse errors and grammar corners") {
  auto cfg = RingConfig::make(3, 1, 8);
  CHECK(kind_of([&] { parse_element("T^(1/5)", cfg); }) == ErrorKind::NotPPowerDenominator);
  CHECK(kind_of([&] { parse_element("T^8", cfg); }) == ErrorKind::PrecisionExceeded);
  CHECK(kind_of([&] { parse_element("T^(-9)", cfg); }) == ErrorKind::PrecisionExceeded);
  CHECK(kind_of([&] { parse_element("1 + + T", cfg); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([&] { parse_element("2*X", cfg); }) == ErrorKind::SyntaxError);
  CHECK(parse_element("4*T", cfg) == RingElement::monomial(cfg, Rational(1)));
  CHECK(parse_element("T - T", cfg).is_zero());
  CHECK(parse_element("-T^(1/3)", cfg) == RingElement::monomial(cfg, Rational(1, 3), 2));
  CHECK(parse_element("  2 * T ^ ( 2 / 3 )", cfg) == RingElement::monomial(cfg, Rational(2, 3), 2));
  CHECK(parse_element("0", cfg).is_zero());
}

TEST_CASE("tuple syntax for product factors") {
  auto cfg = RingConfig::make(2, 0, 8, 2);
  auto x = parse_element("(T | 1)", cfg);
  CHECK(x.factor(0) == RingElement::Terms{{1, 1}});
  CHECK(x.factor(1) == RingElement::Terms{{0, 1}});
  CHECK(render_element(x) == "(T | 1)");
  CHECK(parse_element("1 + T", cfg).factor(1) == RingElement::Terms{{0, 1}, {1, 1}});
  CHECK(kind_of([&] { parse_element("(T | 1 | 1)", cfg); }) == ErrorKind::SyntaxError);
}

TEST_CASE("arithmetic examples") {
  auto cfg = RingConfig::make(2, 1, 8);
  auto a = parse_element("1 + T", cfg);
  CHECK(elt_add(a, a).is_zero());
  auto r = RingElement::monomial(cfg, Rational(1, 2));
  CHECK(elt_mul(r, r) == RingElement::monomial(cfg, Rational(1)));

  auto cfg4 = RingConfig::make(2, 0, 4);
  auto prod = elt_mul(parse_element("1+T^3", cfg4), parse_element("1+T^2", cfg4));
  CHECK(render_element(prod) == "1 + T^2 + T^3");
  CHECK(prod.truncated());
  CHECK_FALSE(elt_mul(parse_element("1+T", cfg4), parse_element("1+T", cfg4)).truncated());
  CHECK(kind_of([&] { elt_add(a, parse_element("1", cfg4)); }) == ErrorKind::ConfigMismatch);
}

TEST_CASE("norm examples") {
  auto cfg = RingConfig::make(2, 1, 8);
  CHECK(elt_norm(RingElement::zero(cfg)) == NormValue::zero());
  CHECK(elt_norm(parse_element("T^(3/2)+T^2", cfg)) == ex(3, 2));
  auto cfg2 = RingConfig::make(2, 0, 8, 2);
  CHECK(elt_norm(parse_element("(T | 1)", cfg2)) == ex(0));
  // truncating arithmetic that wipes out everything is not the literal zero
  auto cfg4 = RingConfig::make(2, 0, 4);
  auto t2 = parse_element("T^2", cfg4);
  CHECK(elt_norm(elt_mul(t2, t2)) == NormValue::below_precision(4));
}

TEST_CASE("spectral seminorm and unit checks") {
  auto cfg = RingConfig::make(2, 1, 16);
  CHECK(spectral_seminorm(parse_element("1+T", cfg), 6) == ex(0));
  CHECK(spectral_seminorm(RingElement::zero(cfg), 3) == NormValue::zero());
  auto cfg2 = RingConfig::make(2, 0, 16, 2);
  CHECK(spectral_seminorm(parse_element("(T | 1)", cfg2), 4) == ex(0));
  CHECK(kind_of([&] { spectral_seminorm(parse_element("T^4", RingConfig::make(2, 0, 8)), 3); }) ==
        ErrorKind::PrecisionExceeded);

  CHECK(is_norm_multiplicative_unit(RingElement::monomial(cfg, Rational(1, 2))));
  CHECK(is_norm_multiplicative_unit(RingElement::one(cfg)));
  CHECK_FALSE(is_norm_multiplicative_unit(parse_element("(T | 1)", cfg2)));
  CHECK(kind_of([&] { is_norm_multiplicative_unit(parse_element("(T | 0)", cfg2)); }) == ErrorKind::NotInvertible);
}

TEST_CASE("inverse times element is one up to precision") {
  auto cfg = RingConfig::make(3, 1, 6);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    auto x = oracle::random_element(rng, cfg, -3, 9, 4);
    auto y = elt_mul(x, elt_inverse(x));
    // x^{-1} is exact below T^N, so x·x^{-1} - 1 starts at T^{N + v(x)} at worst
    const std::int64_t v = x.factor(0).begin()->first;
    CHECK(y.factor(0).begin()->first == 0);
    CHECK(y.factor(0).begin()->second == 1);
    for (auto it = std::next(y.factor(0).begin()); it != y.factor(0).end(); ++it)
      CHECK(it->first >= 6 * cfg.scale() + v);
  }
}

TEST_CASE("base change keeps support and norm") {
  auto cfg0 = RingConfig::make(2, 0, 8);
  auto t = parse_element("T", cfg0);
  auto t2 = base_change_level(t, 2);
  CHECK(t2.config().k == 2);
  CHECK(elt_norm(t2) == elt_norm(t));
  CHECK(base_change_level(RingElement::zero(cfg0), 2).is_zero());
  auto cfg1 = RingConfig::make(2, 1, 8);
  auto x = parse_element("1+T^(1/2)", cfg1);
  CHECK(render_element(base_change_level(x, 3)) == render_element(x));
  CHECK(kind_of([&] { base_change_level(x, 0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("ring properties on random elements") {
  std::mt19937_64 rng(3);
  for (int p : {2, 3, 5}) {
    auto cfg = RingConfig::make(p, 1, 6);
    const std::int64_t lo = -3 * cfg.scale(), hi = 6 * cfg.scale();
    for (int i = 0; i < 60; ++i) {
      auto a = oracle::random_element(rng, cfg, lo, hi, 3);
      auto b = oracle::random_element(rng, cfg, lo / 2, hi, 3);
      auto prod = elt_mul(a, b);
      std::map<std::int64_t, int> got(prod.factor(0).begin(), prod.factor(0).end());
      CHECK(got == dense_product(a.factor(0), b.factor(0), p, hi));
      if (!prod.is_zero()) CHECK(elt_norm(prod) == nv_mul(elt_norm(a), elt_norm(b)));

      auto sum = elt_add(a, b);
      if (!sum.is_zero()) {
        CHECK(nv_le(elt_norm(sum), nv_max(elt_norm(a), elt_norm(b))));
        if (!(elt_norm(a) == elt_norm(b))) CHECK(elt_norm(sum) == nv_max(elt_norm(a), elt_norm(b)));
      }

      Rational s(static_cast<std::int64_t>(i % 5) - 2, p);
      auto shifted = elt_shift(a, s);
      if (!shifted.truncated()) CHECK(elt_norm(shifted) == nv_mul(NormValue::exact(s), elt_norm(a)));

      CHECK(parse_element(render_element(a), cfg) == a);
    }
  }
}

TEST_CASE("product rings are submultiplicative") {
  std::mt19937_64 rng(5);
  auto cfg = RingConfig::make(2, 1, 6, 2);
  for (int i = 0; i < 60; ++i) {
    auto a = oracle::random_element(rng, cfg, -4, 12, 2);
    auto b = oracle::random_element(rng, cfg, -4, 12, 2);
    auto prod = elt_mul(a, b);
    if (prod.is_zero()) continue;
    CHECK(nv_le(elt_norm(prod), nv_mul(elt_norm(a), elt_norm(b))));
    CHECK(parse_element(render_element(a), cfg) == a);
  }
}

TEST_CASE("config json") {
  auto cfg = RingConfig::make(3, 2, 12, 2);
  nlohmann::json j = cfg;
  CHECK(j.dump() == R"({"N":12,"factors":2,"k":2,"p":3})");
  CHECK(j.get<RingConfig>() == cfg);
  auto cfg_floor = RingConfig::make(2, 0, 8, 1, -3);
  nlohmann::json jf = cfg_floor;
  CHECK(jf.at("floor") == -3);
  CHECK(jf.get<RingConfig>() == cfg_floor);
  CHECK(kind_of([] { RingConfig::make(4, 0, 8); }) == ErrorKind::InvalidArgument);
}
