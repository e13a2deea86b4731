#include "ultralattice/harness.hpp"

#include <chrono>
#include <functional>
#include <iomanip>
#include <sstream>

#include "ultralattice/almostmod.hpp"
#include "ultralattice/tensor.hpp"

namespace ultralattice {

namespace {

using Terms = RingElement::Terms;

Terms random_terms(std::mt19937_64& rng, const RingConfig& cfg, int count, std::int64_t lo, std::int64_t hi) {
  Terms t;
  std::uniform_int_distribution<std::int64_t> tick(lo, hi - 1);
  std::uniform_int_distribution<int> coeff(1, cfg.p - 1);
  for (int i = 0; i < count; ++i) t[tick(rng)] = static_cast<std::uint8_t>(coeff(rng));
  return t;
}

enum class Outcome { Pass, Fail, Undecided, Skip };

struct Ctx {
  std::mt19937_64& rng;
  const SuiteConfig& sc;
  const RingConfig& cfg;
  nlohmann::json inputs = nlohmann::json::object();
  std::string detail;

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  bool coin() { return uniform(0, 1) == 1; }
  std::int64_t scale() const { return cfg.scale(); }
  /// Exponent range for generators and map entries.
  std::int64_t exp_hi() const { return std::max<std::int64_t>(1, std::min<std::int64_t>(3 * scale(), cfg.N * scale() / 4)); }
  std::int64_t sample_lo() const { return std::max<std::int64_t>(cfg.floor * scale(), -2 * scale()); }
  std::int64_t sample_hi() const { return std::min<std::int64_t>(3 * scale(), cfg.N * scale() / 2); }
  int rank() { return uniform(1, sc.max_rank); }

  Vector sample(int n, int support = 2) {
    for (;;) {
      Vector x = gen_random_vector(rng, cfg, n, support, sample_lo(), sample_hi());
      if (!vec_is_zero(x)) return x;
    }
  }
  std::vector<Vector> samples(int n) {
    std::vector<Vector> out;
    for (int i = 0; i < sc.samples; ++i) out.push_back(sample(n));
    return out;
  }
  Outcome fail(std::string why) {
    detail = std::move(why);
    return Outcome::Fail;
  }
};

nlohmann::json vectors_json(const std::vector<Vector>& vs) {
  auto j = nlohmann::json::array();
  for (const auto& v : vs) j.push_back(render_vector(v));
  return j;
}

bool full_rank(const Lattice& L) {
  try {
    PreparedLattice P(L);
    for (int f = 0; f < L.cfg.factors; ++f)
      if (P.rank(f) != static_cast<std::size_t>(L.rank)) return false;
    return true;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::PrecisionLoss) return false;
    throw;
  }
}

Lattice full_rank_lattice(Ctx& c, int rank, int support = 2) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    Lattice L = gen_random_lattice(c.rng, c.cfg, rank, std::min(4, rank + c.uniform(0, 2)), support);
    if (full_rank(L)) return L;
  }
  return Lattice::unit_ball(c.cfg, rank);
}

std::vector<Vector> random_images(Ctx& c, int n1, int n2, std::int64_t lo = 0) {
  std::vector<Vector> out;
  for (int i = 0; i < n1; ++i) out.push_back(gen_random_vector(c.rng, c.cfg, n2, 1, lo, c.exp_hi()));
  return out;
}

/// Square images of full rank, i.e. an injective map A^n → A^n.
std::vector<Vector> injective_images(Ctx& c, int n) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    auto images = random_images(c, n, n);
    if (full_rank(Lattice::make(c.cfg, n, images))) return images;
  }
  return Lattice::unit_ball(c.cfg, n).generators;
}

Vector apply(const std::vector<Vector>& images, const Vector& x, const RingConfig& cfg, int n2) {
  Vector out = zero_vector(cfg, n2);
  for (std::size_t i = 0; i < images.size(); ++i) out = vec_add(out, vec_scale(x[i], images[i]));
  return out;
}

bool any_truncated(const Vector& v) {
  return std::any_of(v.begin(), v.end(), [](const RingElement& e) { return e.truncated(); });
}

// --- checks ----------------------------------------------------------------

Outcome check_norm_gauge(Ctx& c) {
  const int n = c.uniform(1, std::max(3, c.sc.max_rank));
  const Vector x = gen_random_vector(c.rng, c.cfg, n, 3, c.sample_lo(), c.cfg.N * c.scale());
  c.inputs["x"] = render_vector(x);
  const NormValue g = gauge(x, Lattice::unit_ball(c.cfg, n));
  const NormValue v = vec_norm(x);
  if (g == v) return Outcome::Pass;
  return c.fail("gauge " + g.str() + " but norm " + v.str());
}

Outcome check_almost_laws(Ctx& c) {
  const int n = c.rank();
  const Lattice L = full_rank_lattice(c, n);
  const int K = c.sc.effective_depth();
  c.inputs["lattice"] = L;
  c.inputs["depth"] = K;
  const AlmostElements E = almost_elements(L, K);
  if (E.stable == false) {
    c.detail = "almost elements change between depth K and K + 1";
    return Outcome::Undecided;
  }
  if (!lattice_equal(almost_elements(E.lattice, K, false).lattice, E.lattice)) return c.fail("not idempotent");
  for (const auto& g : E.lattice.generators)
    if (!nv_le(gauge(g, L), NormValue::exact(Rational(0)))) return c.fail("generator of gauge > 1");
  const PreparedLattice PL(L), PE(E.lattice);
  for (const auto& x : c.samples(n))
    if (!(PL.gauge(x) == PE.gauge(vec_base_change(x, E.lattice.cfg.k)))) {
      c.inputs["x"] = render_vector(x);
      return c.fail("gauge changes under almost_elements");
    }
  return Outcome::Pass;
}

Outcome check_subring_saturation(Ctx& c, int instance) {
  std::vector<Rational> gens;
  if (instance % 2 == 0) {
    gens = {Rational(1)};
  } else {
    for (std::int64_t j = 0; j < c.scale(); ++j) gens.push_back(Rational(c.scale() + j, c.scale()));
  }
  const Lattice A0 = Lattice::make(c.cfg, 1, {{RingElement::one(c.cfg)}}, CoeffRing::monomial(gens));
  c.inputs["lattice"] = A0;
  const AlmostElements E = almost_elements(A0, c.sc.effective_depth());
  if (lattice_equal(E.lattice, Lattice::unit_ball(c.cfg, 1))) return Outcome::Pass;
  return c.fail("saturation is not the unit ball");
}

Outcome check_round_trip(Ctx& c) {
  const int n = c.rank();
  const Lattice L = full_rank_lattice(c, n);
  const int K = c.sc.effective_depth();
  c.inputs["lattice"] = L;
  const Lattice E = almost_elements(L, K).lattice;
  const PreparedLattice PL(L), PE(E);
  // almost elements lie in the closed unit ball of the gauge ...
  for (const auto& g : E.generators)
    if (!nv_le(gauge(g, L), NormValue::exact(Rational(0)))) return c.fail("almost element outside the unit ball");
  // ... and every element of gauge exactly 1 is an almost element
  std::vector<Vector> probes = c.samples(n);
  probes.insert(probes.end(), L.generators.begin(), L.generators.end());
  for (const auto& x : probes) {
    const NormValue g = PL.gauge(x);
    if (!g.is_exact()) continue;
    const Rational s = g.exponent();
    Vector y;
    try {
      y = vec_shift(x, Rational(0) - s);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::PrecisionExceeded) continue;
      throw;
    }
    if (any_truncated(y)) continue;
    if (!PE.member(vec_base_change(y, E.cfg.k), Rational(0))) {
      c.inputs["x"] = render_vector(y);
      return c.fail("unit-ball element is not an almost element");
    }
  }
  return Outcome::Pass;
}

Outcome check_isometry(Ctx& c) {
  const int n1 = c.rank();
  const int n2 = std::min(n1 + c.uniform(0, 1), 4);
  const Lattice L1 = full_rank_lattice(c, n1);
  std::vector<Vector> images;
  if (c.coin()) {
    // identity on the first coordinates plus a random tail
    for (int i = 0; i < n1; ++i) {
      Vector v = gen_random_vector(c.rng, c.cfg, n2, 1, 0, c.exp_hi());
      v[static_cast<std::size_t>(i)] = RingElement::one(c.cfg);
      images.push_back(std::move(v));
    }
  } else {
    images = random_images(c, n1, n2);
  }
  std::vector<Vector> tgens;
  for (const auto& g : L1.generators) tgens.push_back(apply(images, g, c.cfg, n2));
  if (c.coin()) {
    // complement the image by the remaining coordinate axes
    for (int i = n1; i < n2; ++i) tgens.push_back(unit_vector(c.cfg, n2, i));
  } else {
    const Lattice extra = full_rank_lattice(c, n2);
    tgens.insert(tgens.end(), extra.generators.begin(), extra.generators.end());
  }
  const Lattice L2 = Lattice::make(c.cfg, n2, tgens);
  if (!full_rank(L2)) return Outcome::Skip;
  const LatticeMap f = LatticeMap::make(L1, L2, images);
  c.inputs["map"] = f;
  if (!kernel_lattice(f).generators.empty()) return Outcome::Skip;
  const Verdict v = isometry_check(f);
  if (v.outcome == Verdict::Outcome::Undecided) {
    c.detail = v.note;
    return Outcome::Undecided;
  }
  const PreparedLattice P1(L1), P2(L2);
  auto preserved = [&](const Vector& x) {
    const NormValue a = P1.gauge(x), b = P2.gauge(f.apply(x));
    return a.is_below_precision() || b.is_below_precision() || a == b;
  };
  if (v.no()) {
    if (!v.witness || preserved(*v.witness)) return c.fail("verdict no without a gauge-breaking witness");
    return Outcome::Pass;
  }
  std::vector<Vector> probes = c.samples(n1);
  for (const auto& b : lattice_reduce(unitball_span(L1)).generators)
    for (std::int64_t j = 0; j < c.scale(); ++j) probes.push_back(vec_shift(b, ticks_to_exponent(j, c.cfg)));
  for (const auto& x : probes)
    if (!preserved(x)) {
      c.inputs["x"] = render_vector(x);
      return c.fail("verdict yes but the gauge changes");
    }
  return Outcome::Pass;
}

Outcome check_strictness(Ctx& c) {
  const int n = c.rank();
  const Lattice L1 = full_rank_lattice(c, n, 1);
  const std::vector<Vector> images = injective_images(c, n);
  std::vector<Vector> tgens;
  for (const auto& g : L1.generators) tgens.push_back(apply(images, g, c.cfg, n));
  const Lattice extra = full_rank_lattice(c, n, 1);
  tgens.insert(tgens.end(), extra.generators.begin(), extra.generators.end());
  const LatticeMap f = LatticeMap::make(L1, Lattice::make(c.cfg, n, tgens), images);
  c.inputs["map"] = f;
  if (!kernel_lattice(f).generators.empty()) return Outcome::Skip;
  const auto samples = c.samples(n);
  c.inputs["samples"] = vectors_json(samples);
  const StrictnessReport r = strictness_bounds(f, samples);
  if (r.pass()) return Outcome::Pass;
  std::string why = "m_tor " + r.m_tor.str() + ", m_est " + r.m_est.str();
  for (const auto& w : r.witnesses) why += "; " + w;
  return c.fail(why);
}

Outcome check_tensor(Ctx& c) {
  const int n1 = c.rank();
  const Lattice L1 = full_rank_lattice(c, n1, 1);
  const Lattice L2 = gen_random_lattice(c.rng, c.cfg, 1, 1, 1);
  Vector x = gen_random_vector(c.rng, c.cfg, n1, n1 == 1 ? 2 : 1, 0, 2 * c.scale());
  c.inputs["l1"] = L1;
  c.inputs["l2"] = L2;
  c.inputs["x"] = render_vector(x);
  const TensorResult t = tensor_lattices(L1, L2);
  if (!full_rank(t.torsion_free_part) || vec_is_zero(x)) return Outcome::Skip;
  const NormValue g = tensor_gauge(x, t);
  NormValue o = NormValue::zero();
  try {
    o = tensor_norm_oracle(x, L1, L2, 3);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::BudgetExceeded) return Outcome::Skip;
    throw;
  }
  if (!(g == o)) return c.fail("tensor gauge " + g.str() + " but oracle " + o.str());
  const int K = c.sc.effective_depth();
  const Lattice ball = tensor_unit_ball(L1, L2, K);
  if (!lattice_equal(ball, almost_elements(t.torsion_free_part, K, false).lattice)) return c.fail("unit ball of the tensor differs");
  if (!(gauge(x, ball) == g)) return c.fail("gauge against the tensor unit ball differs");
  return Outcome::Pass;
}

Outcome check_discrete_infimum(Ctx& c) {
  const int n = c.rank();
  const Lattice L = full_rank_lattice(c, n);
  const Vector x = c.sample(n);
  c.inputs["lattice"] = L;
  c.inputs["x"] = render_vector(x);
  try {
    const NormValue g = gauge(x, L);
    if (!(discrete_norm_infimum(x, L) == g)) return c.fail("infimum differs from gauge");
    NormValue prev = canonical_pi_adic_norm(x, L, 0);
    for (int m = 1; m <= c.cfg.k; ++m) {
      const NormValue cur = canonical_pi_adic_norm(x, L, m);
      if (!nv_le(cur, prev)) return c.fail("grid norms increase with depth");
      prev = cur;
    }
    if (!(prev == g)) return c.fail("finest grid norm differs from gauge");
  } catch (const std::logic_error& e) {
    return c.fail(e.what());
  }
  return Outcome::Pass;
}

Outcome check_submetric(Ctx& c) {
  const int n = c.rank();
  const Lattice L1 = full_rank_lattice(c, n);
  const Lattice L2 = full_rank_lattice(c, n);
  const std::vector<Vector> images = random_images(c, n, n, c.coin() ? 0 : -c.scale());
  c.inputs["l1"] = L1;
  c.inputs["l2"] = L2;
  c.inputs["images"] = vectors_json(images);
  const Lattice basis = lattice_reduce(unitball_span(L1));
  const PreparedLattice P1(L1), P2(L2);
  bool maps_ball = true;
  for (const auto& g : basis.generators) maps_ball = maps_ball && P2.member(apply(images, g, c.cfg, n), Rational(0));
  std::vector<Vector> probes = c.samples(n);
  probes.insert(probes.end(), basis.generators.begin(), basis.generators.end());
  bool non_increasing = true;
  for (const auto& x : probes) {
    const Vector y = apply(images, x, c.cfg, n);
    if (any_truncated(y)) continue;
    non_increasing = non_increasing && nv_le(P2.gauge(y), P1.gauge(x));
  }
  if (maps_ball == non_increasing) return Outcome::Pass;
  return c.fail(maps_ball ? "unit ball preserved but a gauge increases" : "gauges never increase but the unit ball escapes");
}

Outcome check_subring_gauges(Ctx& c, int instance) {
  const int kind = instance % 4;
  const RingConfig cfg = kind == 3 ? RingConfig::make(c.cfg.p, c.cfg.k, c.cfg.N, 2, c.cfg.floor) : c.cfg;
  Lattice B0 = Lattice::unit_ball(cfg, 1);
  if (kind == 1) B0 = Lattice::make(cfg, 1, {{RingElement::one(cfg)}}, CoeffRing::monomial({Rational(1)}));
  if (kind == 2) {
    std::vector<Rational> gens;
    for (std::int64_t j = 0; j < cfg.scale(); ++j) gens.push_back(Rational(cfg.scale() + j, cfg.scale()));
    B0 = Lattice::make(cfg, 1, {{RingElement::one(cfg)}}, CoeffRing::monomial(gens));
  }
  // cubes of the samples must stay above the Laurent floor
  const std::int64_t lo = std::max<std::int64_t>(-cfg.scale(), cfg.floor * cfg.scale() / 3);
  std::vector<RingElement> samples;
  for (int i = 0; i < c.sc.samples; ++i) samples.push_back(gen_random_vector(c.rng, cfg, 1, 2, lo, c.sample_hi())[0]);
  c.inputs["lattice"] = B0;
  c.inputs["samples"] = vectors_json({samples});
  const SubringReport r = subring_gauge_checks(B0, samples);
  std::string why;
  for (const auto& w : r.witnesses) why += w + "; ";
  if (!r.pass()) return c.fail(why);
  if (kind == 0 && r.multiplicative != true) return c.fail("unit-ball gauge is not multiplicative");
  if (kind == 3 && r.power_multiplicative != true) return c.fail("unit-ball gauge is not power-multiplicative");
  return Outcome::Pass;
}

Outcome check_comparison(Ctx& c) {
  const int n = c.rank();
  const Lattice L1 = full_rank_lattice(c, n);
  const Lattice L2 = full_rank_lattice(c, n);
  c.inputs["l1"] = L1;
  c.inputs["l2"] = L2;
  std::optional<ComparisonBound> found;
  try {
    found = seminorm_comparison_bound(L1, L2, c.samples(n));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotCommensurable) return Outcome::Skip;
    throw;
  }
  const ComparisonBound& b = *found;
  if (!b.verified) return c.fail("bound fails on its own samples");
  const PreparedLattice P1(L1), P2(L2);
  for (const auto& x : c.samples(n))
    if (!nv_le(P2.gauge(x), nv_mul(b.C, P1.gauge(x)))) {
      c.inputs["x"] = render_vector(x);
      return c.fail("gauge_2 exceeds C * gauge_1 with m = " + b.m.str());
    }
  return Outcome::Pass;
}

struct Check {
  std::string id;
  std::string statement;
  std::function<Outcome(Ctx&, int)> run;
};

const std::vector<Check>& registry() {
  static const std::vector<Check> checks = {
      {"a", "norm on A^n equals the gauge of the unit-ball lattice", [](Ctx& c, int) { return check_norm_gauge(c); }},
      {"b", "almost elements are idempotent, preserve the gauge and have gauge <= 1",
       [](Ctx& c, int) { return check_almost_laws(c); }},
      {"c", "almost elements of F_p[T] and F_p + T*A_{<=1} are A_{<=1}", check_subring_saturation},
      {"d", "closed unit ball of the gauge equals the almost elements", [](Ctx& c, int) { return check_round_trip(c); }},
      {"e", "isometry iff injective modulo T", [](Ctx& c, int) { return check_isometry(c); }},
      {"f", "torsion exponent and norm-estimate exponent agree up to 2/p^n", [](Ctx& c, int) { return check_strictness(c); }},
      {"g", "tensor gauge equals the decomposition infimum; unit ball of the tensor",
       [](Ctx& c, int) { return check_tensor(c); }},
      {"h", "discrete grid norms decrease to the gauge", [](Ctx& c, int) { return check_discrete_infimum(c); }},
      {"i", "unit ball maps into unit ball iff gauges never increase", [](Ctx& c, int) { return check_submetric(c); }},
      {"j", "subring gauges are submultiplicative, power-multiplicative when root-closed",
       check_subring_gauges},
      {"k", "gauge_2 <= 2^{2m} gauge_1 for commensurable lattices", [](Ctx& c, int) { return check_comparison(c); }},
  };
  return checks;
}


}  // namespace

int SuiteConfig::count_for(const std::string& id) const {
  auto it = counts.find(id);
  return it == counts.end() ? instances : it->second;
}

void to_json(nlohmann::json& j, const SuiteConfig& sc) {
  j = nlohmann::json{{"seed", sc.seed},       {"cfg", sc.cfg},
                     {"instances", sc.instances}, {"counts", sc.counts},
                     {"samples", sc.samples}, {"max_rank", sc.max_rank},
                     {"undecided_threshold", sc.undecided_threshold}};
  if (sc.depth) j["depth"] = *sc.depth;
  if (!sc.only.empty()) j["only"] = sc.only;
  if (!sc.negate.empty()) j["negate"] = sc.negate;
}

SuiteConfig suite_config_from_json(const nlohmann::json& j) {
  SuiteConfig sc;
  try {
    if (j.contains("seed")) sc.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("cfg")) sc.cfg = j.at("cfg").get<RingConfig>();
    if (j.contains("instances")) sc.instances = j.at("instances").get<int>();
    if (j.contains("counts")) sc.counts = j.at("counts").get<std::map<std::string, int>>();
    if (j.contains("samples")) sc.samples = j.at("samples").get<int>();
    if (j.contains("depth")) sc.depth = j.at("depth").get<int>();
    if (j.contains("max_rank")) sc.max_rank = j.at("max_rank").get<int>();
    if (j.contains("undecided_threshold")) sc.undecided_threshold = j.at("undecided_threshold").get<int>();
    if (j.contains("only")) sc.only = j.at("only").get<std::vector<std::string>>();
    if (j.contains("negate")) sc.negate = j.at("negate").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::SyntaxError, std::string("suite JSON: ") + e.what());
  }
  if (sc.max_rank < 1 || sc.max_rank > 4) throw Error(ErrorKind::InvalidArgument, "max_rank must lie in [1, 4]");
  if (sc.instances < 0 || sc.samples < 0) throw Error(ErrorKind::InvalidArgument, "counts must be non-negative");
  return sc;
}

int SuiteReport::total_failed() const {
  int n = 0;
  for (const auto& c : checks) n += c.failed;
  return n;
}

int SuiteReport::total_undecided() const {
  int n = 0;
  for (const auto& c : checks) n += c.undecided;
  return n;
}

nlohmann::json report_json(const SuiteReport& r, bool with_times) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    nlohmann::json j{{"id", c.id},           {"statement", c.statement}, {"passed", c.passed},
                     {"failed", c.failed},   {"undecided", c.undecided}, {"skipped", c.skipped},
                     {"counterexamples", c.counterexamples}, {"undecided_examples", c.undecided_examples}};
    if (with_times) j["seconds"] = c.seconds;
    checks.push_back(std::move(j));
  }
  return {{"config", r.config}, {"checks", checks}, {"pass", r.pass()}};
}

std::string report_table(const SuiteReport& r, bool with_times) {
  std::ostringstream out;
  out << std::left << std::setw(6) << "check" << std::right << std::setw(7) << "pass" << std::setw(7) << "fail"
      << std::setw(7) << "undec" << std::setw(7) << "skip";
  if (with_times) out << std::setw(9) << "seconds";
  out << "  statement\n";
  for (const auto& c : r.checks) {
    out << std::left << std::setw(6) << c.id << std::right << std::setw(7) << c.passed << std::setw(7) << c.failed
        << std::setw(7) << c.undecided << std::setw(7) << c.skipped;
    if (with_times) out << std::setw(9) << std::fixed << std::setprecision(3) << c.seconds;
    out << "  " << c.statement << "\n";
  }
  out << (r.pass() ? "PASS" : "FAIL") << ": " << r.total_failed() << " failed, " << r.total_undecided()
      << " undecided (threshold " << r.config.undecided_threshold << ")\n";
  return out.str();
}

std::vector<std::string> check_ids() {
  std::vector<std::string> ids;
  for (const auto& c : registry()) ids.push_back(c.id);
  return ids;
}

Vector gen_random_vector(std::mt19937_64& rng, const RingConfig& cfg, int n, int support, std::int64_t lo, std::int64_t hi) {
  std::uniform_int_distribution<int> count(0, support);
  Vector v;
  for (int i = 0; i < n; ++i) {
    std::vector<Terms> per;
    for (int f = 0; f < cfg.factors; ++f) per.push_back(random_terms(rng, cfg, count(rng), lo, hi));
    v.emplace_back(cfg, std::move(per), false);
  }
  return v;
}

Lattice gen_random_lattice(std::mt19937_64& rng, const RingConfig& cfg, int rank, int gen_count, int support) {
  if (rank < 1 || rank > 4 || gen_count < 0 || gen_count > 4 || support < 1 || support > 6)
    throw Error(ErrorKind::InvalidArgument, "random lattices need rank, gen_count <= 4 and support in [1, 6]");
  const std::int64_t hi = std::max<std::int64_t>(1, std::min<std::int64_t>(3 * cfg.scale(), cfg.N * cfg.scale() / 4));
  std::vector<Vector> gens;
  for (int g = 0; g < gen_count; ++g) {
    Vector v = gen_random_vector(rng, cfg, rank, support, 0, hi);
    // one coordinate always carries a term in every factor
    const auto pivot = std::uniform_int_distribution<int>(0, rank - 1)(rng);
    std::vector<Terms> per;
    for (int f = 0; f < cfg.factors; ++f) {
      Terms t = v[static_cast<std::size_t>(pivot)].factor(f);
      if (t.empty()) t = random_terms(rng, cfg, 1, 0, hi);
      per.push_back(std::move(t));
    }
    v[static_cast<std::size_t>(pivot)] = RingElement(cfg, std::move(per), false);
    gens.push_back(std::move(v));
  }
  return Lattice::make(cfg, rank, std::move(gens));
}

SuiteReport run_suite(const SuiteConfig& sc) {
  SuiteReport report;
  report.config = sc;
  const auto& checks = registry();
  for (std::size_t idx = 0; idx < checks.size(); ++idx) {
    const auto& check = checks[idx];
    if (!sc.only.empty() && std::find(sc.only.begin(), sc.only.end(), check.id) == sc.only.end()) continue;
    CheckReport cr;
    cr.id = check.id;
    cr.statement = check.statement;
    std::seed_seq seq{static_cast<std::uint32_t>(sc.seed), static_cast<std::uint32_t>(sc.seed >> 32),
                      static_cast<std::uint32_t>(idx)};
    std::mt19937_64 rng(seq);
    const auto start = std::chrono::steady_clock::now();
    const int count = sc.count_for(check.id);
    for (int i = 0; i < count; ++i) {
      Ctx ctx{rng, sc, sc.cfg, nlohmann::json::object(), {}};
      Outcome o;
      try {
        o = check.run(ctx, i);
      } catch (const Error& e) {
        ctx.detail = e.what();
        if (e.kind() == ErrorKind::PrecisionUndecidable || e.kind() == ErrorKind::PrecisionLoss) {
          o = Outcome::Undecided;
        } else {
          o = Outcome::Fail;
        }
      }
      if (check.id == sc.negate) {
        if (o == Outcome::Pass) {
          o = Outcome::Fail;
          ctx.detail = "negated for self-test";
        } else if (o == Outcome::Fail) {
          o = Outcome::Pass;
        }
      }
      const nlohmann::json bundle{{"check", check.id}, {"seed", sc.seed},       {"instance", i},
                                  {"cfg", sc.cfg},     {"inputs", ctx.inputs}, {"detail", ctx.detail}};
      switch (o) {
        case Outcome::Pass: ++cr.passed; break;
        case Outcome::Skip: ++cr.skipped; break;
        case Outcome::Undecided:
          ++cr.undecided;
          cr.undecided_examples.push_back(bundle);
          break;
        case Outcome::Fail:
          ++cr.failed;
          cr.counterexamples.push_back(bundle);
          break;
      }
    }
    cr.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.checks.push_back(std::move(cr));
  }
  return report;
}

}  // namespace ultralattice
