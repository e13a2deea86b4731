#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "ultralattice/lattice.hpp"

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

Vector vec(const RingConfig& cfg, std::vector<std::string> entries) { return parse_vector(entries, cfg); }

Lattice lat(const RingConfig& cfg, int rank, std::vector<std::vector<std::string>> gens) {
  std::vector<Vector> vs;
  for (auto& g : gens) vs.push_back(vec(cfg, g));
  return Lattice::make(cfg, rank, std::move(vs));
}

Lattice random_lattice(std::mt19937_64& rng, const RingConfig& cfg, int rank, int ngens) {
  std::vector<Vector> gens;
  const std::int64_t s = cfg.scale();
  for (int i = 0; i < ngens; ++i) {
    Vector g;
    for (int c = 0; c < rank; ++c) g.push_back(oracle::random_element(rng, cfg, -2 * s, 4 * s, 2));
    gens.push_back(std::move(g));
  }
  return Lattice::make(cfg, rank, std::move(gens));
}

Vector random_vector(std::mt19937_64& rng, const RingConfig& cfg, int rank) {
  Vector x;
  const std::int64_t s = cfg.scale();
  for (int c = 0; c < rank; ++c) x.push_back(oracle::random_element(rng, cfg, -2 * s, 5 * s, 2));
  return x;
}

}  // namespace

TEST_CASE("lattice_reduce examples") {
  auto cfg = RingConfig::make(2, 1, 8);
  auto r = lattice_reduce(lat(cfg, 1, {{"T"}, {"T^(1/2)"}}));
  REQUIRE(r.generators.size() == 1);
  CHECK(render_vector(r.generators[0]) == std::vector<std::string>{"T^(1/2)"});
  auto id = lattice_reduce(Lattice::unit_ball(cfg, 2));
  CHECK(id.generators == Lattice::unit_ball(cfg, 2).generators);
  CHECK(lattice_reduce(Lattice::make(cfg, 2, {})).generators.empty());
  CHECK(kind_of([&] { lattice_reduce(lat(cfg, 1, {{"T^(15/2)"}})); }) == ErrorKind::PrecisionLoss);
}

TEST_CASE("membership examples") {
  auto cfg = RingConfig::make(2, 1, 8);
  auto A = Lattice::unit_ball(cfg, 1);
  CHECK(membership(zero_vector(cfg, 1), A, Rational(5)));
  CHECK(membership(vec(cfg, {"T^(3/2)"}), A, Rational(1)));
  CHECK_FALSE(membership(vec(cfg, {"T^(3/2)"}), A, Rational(2)));
  auto L = lat(cfg, 1, {{"T^(1/2)"}, {"T"}});
  CHECK(membership(vec(cfg, {"1"}), L, Rational(-1, 2)));
  CHECK_FALSE(membership(vec(cfg, {"1"}), L, Rational(0)));
  // a finer shift base-changes the query
  CHECK(membership(vec(cfg, {"T"}), A, Rational(3, 4)));
}

TEST_CASE("gauge examples") {
  auto cfg = RingConfig::make(2, 1, 8);
  auto A = Lattice::unit_ball(cfg, 1);
  CHECK(gauge(zero_vector(cfg, 1), A) == NormValue::zero());
  CHECK(gauge(vec(cfg, {"T^(3/2)"}), A) == ex(3, 2));
  CHECK(gauge(vec(cfg, {"1"}), lat(cfg, 1, {{"T^(1/2)"}, {"T"}})) == ex(-1, 2));
}

TEST_CASE("gauge on free modules is the max norm") {
  std::mt19937_64 rng(21);
  for (auto cfg : {RingConfig::make(2, 1, 8), RingConfig::make(3, 1, 6), RingConfig::make(2, 0, 8, 2)}) {
    auto A3 = Lattice::unit_ball(cfg, 3);
    PreparedLattice prepared(A3);
    for (int i = 0; i < 40; ++i) {
      auto x = random_vector(rng, cfg, 3);
      CHECK(prepared.gauge(x) == vec_norm(x));
    }
  }
}

TEST_CASE("membership and gauge agree with the brute-force F_p oracle") {
  std::mt19937_64 rng(99);
  for (auto cfg : {RingConfig::make(2, 1, 6, 1, -3), RingConfig::make(3, 1, 4, 1, -3), RingConfig::make(2, 1, 5, 2, -3)}) {
    for (int i = 0; i < 12; ++i) {
      auto L = random_lattice(rng, cfg, 2, 1 + i % 3);
      std::optional<PreparedLattice> prepared;
      try {
        prepared.emplace(L);
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::PrecisionLoss);
        continue;
      }
      for (int j = 0; j < 6; ++j) {
        Vector x = j % 2 ? random_vector(rng, cfg, 2) : vec_scale(oracle::random_element(rng, cfg, 0, 6, 2), L.generators[0]);
        for (std::int64_t s : {-4, -1, 0, 1, 3})
          CHECK(prepared->member_ticks(x, s) == oracle::member(L, x, s));
        auto g = prepared->gauge(x);
        auto expected = oracle::gauge_ticks(L, x);
        if (!expected) {
          CHECK(g.is_zero());
          continue;
        }
        // the lattice may have several factors; compare the minimum over them
        std::optional<std::int64_t> best;
        for (int f = 0; f < cfg.factors; ++f) {
          auto t = prepared->gauge_ticks(x, f);
          if (t && (!best || *t < *best)) best = t;
        }
        CHECK(best == expected);
      }
    }
  }
}

TEST_CASE("reduction is idempotent and spans the same module") {
  std::mt19937_64 rng(5);
  auto cfg = RingConfig::make(2, 1, 8, 1, -4);
  for (int i = 0; i < 30; ++i) {
    auto L = random_lattice(rng, cfg, 2, 3);
    auto R = lattice_reduce(L);
    CHECK(lattice_equal(L, R));
    CHECK(lattice_reduce(R).generators == R.generators);
  }
}

TEST_CASE("unitball_span examples") {
  auto cfg = RingConfig::make(2, 1, 8);
  // F_p + T·A_{≤1} at level 1 is F_p[T, T^(3/2)]
  auto L = Lattice::make(cfg, 1, {vec(cfg, {"1"})}, CoeffRing::monomial({Rational(1), Rational(3, 2)}));
  auto S = unitball_span(L);
  CHECK(S.coeff.is_unit_ball());
  CHECK(lattice_equal(S, Lattice::unit_ball(cfg, 1)));
  CHECK(unitball_span(Lattice::unit_ball(cfg, 2)).generators == Lattice::unit_ball(cfg, 2).generators);
  CHECK(unitball_span(Lattice::make(cfg, 1, {})).generators.empty());
}

TEST_CASE("monoid tables") {
  auto cfg = RingConfig::make(2, 0, 8);
  auto t = monoid_table(CoeffRing::monomial({Rational(2), Rational(3)}), cfg);
  CHECK(t.conductor == 2);
  CHECK(t.contains(0));
  CHECK_FALSE(t.contains(1));
  CHECK(t.contains(5));
  auto t1 = monoid_table(CoeffRing::monomial({Rational(1), Rational(3, 2)}), RingConfig::make(2, 1, 8));
  CHECK(t1.conductor == 2);
  CHECK_FALSE(t1.contains(1));
  CHECK(kind_of([] { monoid_table(CoeffRing::monomial({Rational(2)}), RingConfig::make(2, 0, 8)); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("almost elements examples") {
  auto cfg0 = RingConfig::make(2, 0, 8);
  auto A = Lattice::unit_ball(cfg0, 1);
  auto r = almost_elements(A, 4);
  CHECK(r.lattice.depth == 4);
  CHECK(r.stable == true);
  CHECK(lattice_equal(r.lattice, A));

  auto cfg1 = RingConfig::make(2, 1, 8);
  auto Fp_plus_T = Lattice::make(cfg1, 1, {vec(cfg1, {"1"})}, CoeffRing::monomial({Rational(1), Rational(3, 2)}));
  CHECK(lattice_equal(almost_elements(Fp_plus_T, 3).lattice, Lattice::unit_ball(cfg1, 1)));

  auto poly = Lattice::make(cfg0, 1, {vec(cfg0, {"1"})}, CoeffRing::monomial({Rational(1)}));
  auto r3 = almost_elements(poly, 3);
  CHECK(r3.lattice.cfg.k == 3);
  CHECK(lattice_equal(r3.lattice, Lattice::unit_ball(cfg0.at_level(3), 1)));
}

TEST_CASE("almost element laws on random lattices") {
  std::mt19937_64 rng(8);
  auto cfg = RingConfig::make(2, 1, 8, 1, -4);
  for (int i = 0; i < 15; ++i) {
    auto L = random_lattice(rng, cfg, 2, 2);
    auto a = almost_elements(L, 2);
    CHECK(a.stable == true);
    CHECK(lattice_equal(almost_elements(a.lattice, 2, false).lattice, a.lattice));
    PreparedLattice pa(a.lattice);
    PreparedLattice pl(lattice_base_change(L, 2));
    for (const auto& g : a.lattice.generators) CHECK(nv_le(pl.gauge(g), ex(0)));
    for (int j = 0; j < 5; ++j) {
      auto x = vec_base_change(random_vector(rng, cfg, 2), 2);
      CHECK(pa.gauge(x) == pl.gauge(x));
    }
  }
}

TEST_CASE("gauge is a seminorm and dominance holds") {
  std::mt19937_64 rng(17);
  auto cfg = RingConfig::make(3, 1, 6, 1, -3);
  for (int i = 0; i < 10; ++i) {
    auto L = random_lattice(rng, cfg, 2, 2);
    auto big = L;
    big.generators.push_back(random_vector(rng, cfg, 2));
    PreparedLattice pl(L), pb(big);
    for (int j = 0; j < 6; ++j) {
      auto x = vec_scale(RingElement::monomial(cfg, Rational(1)), random_vector(rng, cfg, 2));
      auto y = vec_scale(RingElement::monomial(cfg, Rational(1)), random_vector(rng, cfg, 2));
      auto f = oracle::random_element(rng, cfg, 0, 9, 2);
      auto sum = vec_add(x, y);
      if (!vec_is_zero(sum)) CHECK(nv_le(pl.gauge(sum), nv_max(pl.gauge(x), pl.gauge(y))));
      auto fx = vec_scale(f, x);
      if (!vec_is_zero(fx)) CHECK(nv_le(pl.gauge(fx), nv_mul(elt_norm(f), pl.gauge(x))));
      CHECK(nv_le(pb.gauge(x), pl.gauge(x)));
    }
  }
}

TEST_CASE("canonical pi-adic norms") {
  auto cfg = RingConfig::make(2, 1, 8);
  auto A = Lattice::unit_ball(cfg, 1);
  auto x = vec(cfg, {"T^(3/2)"});
  CHECK(canonical_pi_adic_norm(x, A, 0) == ex(1));
  CHECK(canonical_pi_adic_norm(x, A, 1) == ex(3, 2));
  CHECK(canonical_pi_adic_norm(zero_vector(cfg, 1), A, 1) == NormValue::zero());
  CHECK(discrete_norm_infimum(x, A) == ex(3, 2));
  CHECK(discrete_norm_infimum(vec(cfg, {"1"}), A) == ex(0));
  CHECK(discrete_norm_infimum(zero_vector(cfg, 1), A) == NormValue::zero());
  CHECK(canonical_pi_adic_norm(vec(cfg, {"T^(-1/2)"}), A, 0) == ex(-1));
}

TEST_CASE("subring gauge checks") {
  auto cfg = RingConfig::make(2, 1, 12);
  auto A = Lattice::unit_ball(cfg, 1);
  auto rep = subring_gauge_checks(A, {parse_element("T^(1/2)", cfg), parse_element("1+T", cfg)});
  CHECK(rep.pass());
  CHECK(rep.multiplicative == true);
  CHECK(subring_gauge_checks(A, {RingElement::zero(cfg)}).pass());

  auto cfg0 = RingConfig::make(2, 0, 12);
  auto B = Lattice::make(cfg0, 1, {vec(cfg0, {"1"})}, CoeffRing::monomial({Rational(2), Rational(3)}));
  auto rb = subring_gauge_checks(B, {parse_element("T^2", cfg0), parse_element("T^3", cfg0)});
  CHECK(rb.submultiplicative);
  CHECK(rb.power_multiplicative == true);

  // a lattice whose gauge is not submultiplicative: T^{-1}·A_{≤1} is no subring
  auto bad = Lattice::make(cfg0, 1, {vec(cfg0, {"T^(-1)"})});
  auto rbad = subring_gauge_checks(bad, {parse_element("T^(-1)", cfg0)}, false);
  CHECK_FALSE(rbad.pass());
  CHECK_FALSE(rbad.witnesses.empty());
}

TEST_CASE("lattice json round trip") {
  auto cfg = RingConfig::make(2, 1, 8);
  auto L = lat(cfg, 2, {{"T^(1/2)", "0"}, {"1", "1 + T"}});
  nlohmann::json j = L;
  auto back = lattice_from_json(j);
  CHECK(back.generators == L.generators);
  CHECK(back.cfg == cfg);
  auto M = Lattice::make(cfg, 1, {vec(cfg, {"1"})}, CoeffRing::monomial({Rational(1), Rational(3, 2)}));
  nlohmann::json jm = M;
  CHECK(jm.at("coeff_ring").at("monomial") == nlohmann::json::array({"1", "3/2"}));
  CHECK(lattice_from_json(jm).coeff == M.coeff);
  const auto too_deep = nlohmann::json::parse(R"j({"cfg":{"p":2,"k":0,"N":8},"rank":1,"generators":[["T^(1/2)"]]})j");
  CHECK(kind_of([&] { lattice_from_json(too_deep); }) == ErrorKind::DepthExceeded);
}
