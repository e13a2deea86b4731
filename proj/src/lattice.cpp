#include "ultralattice/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "ultralattice/error.hpp"

namespace ultralattice {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if (a % b != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

void require_rank(const Vector& v, int rank) {
  if (static_cast<int>(v.size()) != rank) throw Error(ErrorKind::ConfigMismatch, "vector length does not match lattice rank");
}

}  // namespace

// ---------------------------------------------------------------------------
// Vectors

Vector zero_vector(const RingConfig& cfg, int n) { return Vector(static_cast<std::size_t>(n), RingElement::zero(cfg)); }

Vector unit_vector(const RingConfig& cfg, int n, int i) {
  Vector v = zero_vector(cfg, n);
  v.at(static_cast<std::size_t>(i)) = RingElement::one(cfg);
  return v;
}

Vector vec_add(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::ConfigMismatch, "vector lengths differ");
  Vector out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(elt_add(a[i], b[i]));
  return out;
}

Vector vec_sub(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::ConfigMismatch, "vector lengths differ");
  Vector out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(elt_sub(a[i], b[i]));
  return out;
}

Vector vec_scale(const RingElement& f, const Vector& v) {
  Vector out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(elt_mul(f, e));
  return out;
}

Vector vec_shift(const Vector& v, const Rational& s) {
  Vector out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(elt_shift(e, s));
  return out;
}

bool vec_is_zero(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](const RingElement& e) { return e.is_zero(); });
}

Vector vec_base_change(const Vector& v, int new_k) {
  Vector out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(base_change_level(e, new_k));
  return out;
}

NormValue vec_norm(const Vector& v) {
  NormValue best = NormValue::zero();
  for (const auto& e : v) {
    NormValue n = elt_norm(e);
    if (n.is_zero()) continue;
    if (best.is_zero()) {
      best = n;
      continue;
    }
    best = nv_max(best, n);
  }
  return best;
}

Vector parse_vector(const std::vector<std::string>& entries, const RingConfig& cfg) {
  Vector v;
  v.reserve(entries.size());
  for (const auto& s : entries) v.push_back(parse_element(s, cfg));
  return v;
}

std::vector<std::string> render_vector(const Vector& v) {
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(render_element(e));
  return out;
}

// ---------------------------------------------------------------------------
// Coefficient rings and lattices

CoeffRing CoeffRing::monomial(std::vector<Rational> gens) {
  if (gens.empty()) throw Error(ErrorKind::InvalidArgument, "monomial subring needs at least one generator");
  for (const auto& g : gens)
    if (g <= Rational(0)) throw Error(ErrorKind::InvalidArgument, "monomial generators must have positive exponent");
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  CoeffRing r;
  r.kind = Kind::Monomial;
  r.monomial_gens = std::move(gens);
  return r;
}

MonoidTable monoid_table(const CoeffRing& ring, const RingConfig& cfg) {
  MonoidTable table;
  if (ring.is_unit_ball()) return table;
  std::vector<std::int64_t> ticks;
  std::int64_t g = 0;
  for (const auto& e : ring.monomial_gens) {
    ticks.push_back(exponent_to_ticks(e, cfg));
    g = std::gcd(g, ticks.back());
  }
  if (g != 1)
    throw Error(ErrorKind::InvalidArgument, "graded computations need monomial generators with coprime ticks at level " + std::to_string(cfg.k));
  std::sort(ticks.begin(), ticks.end());
  // Schur's bound on the Frobenius number keeps the table finite.
  const std::int64_t bound = ticks.front() * ticks.back() + 1;
  std::vector<bool> in(static_cast<std::size_t>(bound + 1), false);
  in[0] = true;
  std::int64_t last_gap = -1;
  for (std::int64_t t = 1; t <= bound; ++t) {
    for (auto a : ticks)
      if (a <= t && in[static_cast<std::size_t>(t - a)]) {
        in[static_cast<std::size_t>(t)] = true;
        break;
      }
    if (!in[static_cast<std::size_t>(t)]) last_gap = t;
  }
  table.conductor = last_gap + 1;
  table.member.assign(in.begin(), in.begin() + table.conductor);
  return table;
}

Lattice Lattice::make(const RingConfig& cfg, int rank, std::vector<Vector> gens, CoeffRing coeff) {
  Lattice L;
  L.cfg = cfg;
  L.rank = rank;
  L.generators = std::move(gens);
  L.coeff = std::move(coeff);
  L.validate();
  return L;
}

Lattice Lattice::unit_ball(const RingConfig& cfg, int rank) {
  std::vector<Vector> gens;
  for (int i = 0; i < rank; ++i) gens.push_back(unit_vector(cfg, rank, i));
  return make(cfg, rank, std::move(gens));
}

void Lattice::validate() const {
  cfg.validate();
  if (rank < 1) throw Error(ErrorKind::InvalidArgument, "lattice rank must be positive");
  for (const auto& g : generators) {
    require_rank(g, rank);
    for (const auto& e : g)
      if (!(e.config() == cfg)) throw Error(ErrorKind::ConfigMismatch, "generator entry uses a different ring config");
  }
  if (!coeff.is_unit_ball()) {
    if (cfg.factors != 1) throw Error(ErrorKind::Unsupported, "monomial coefficient rings need a single factor");
    for (const auto& e : coeff.monomial_gens) (void)exponent_to_ticks(e, cfg);
  }
}

void to_json(nlohmann::json& j, const Lattice& L) {
  j = nlohmann::json::object();
  j["cfg"] = L.cfg;
  j["rank"] = L.rank;
  if (L.coeff.is_unit_ball()) {
    j["coeff_ring"] = "unit_ball";
  } else {
    auto arr = nlohmann::json::array();
    for (const auto& e : L.coeff.monomial_gens) arr.push_back(e.str());
    j["coeff_ring"] = {{"monomial", arr}};
  }
  auto gens = nlohmann::json::array();
  for (const auto& g : L.generators) gens.push_back(render_vector(g));
  j["generators"] = gens;
  if (L.depth) j["depth"] = *L.depth;
}

namespace {

Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (!j.is_string()) throw Error(ErrorKind::SyntaxError, "exponent must be an integer or a string a/b");
  const auto s = j.get<std::string>();
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(std::stoll(s));
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::SyntaxError, "bad exponent '" + s + "'");
  }
}

}  // namespace

Lattice lattice_from_json(const nlohmann::json& j) {
  try {
    RingConfig cfg = j.at("cfg").get<RingConfig>();
    int rank = j.at("rank").get<int>();
    CoeffRing coeff;
    if (j.contains("coeff_ring")) {
      const auto& c = j.at("coeff_ring");
      if (c.is_string()) {
        if (c.get<std::string>() != "unit_ball") throw Error(ErrorKind::SyntaxError, "unknown coeff_ring");
      } else {
        std::vector<Rational> gens;
        for (const auto& e : c.at("monomial")) gens.push_back(rational_from_json(e));
        coeff = CoeffRing::monomial(std::move(gens));
      }
    }
    std::vector<Vector> gens;
    for (const auto& g : j.at("generators")) gens.push_back(parse_vector(g.get<std::vector<std::string>>(), cfg));
    Lattice L = Lattice::make(cfg, rank, std::move(gens), std::move(coeff));
    if (j.contains("depth")) L.depth = j.at("depth").get<int>();
    return L;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::SyntaxError, std::string("lattice JSON: ") + e.what());
  }
}

std::int64_t precision_guard_ticks(const RingConfig& cfg) {
  Rational guard(1);
  if (const char* env = std::getenv("ULTRALATTICE_PRECISION_GUARD"); env && *env)
    guard = rational_from_json(nlohmann::json(std::string(env)));
  if (guard < Rational(0)) throw Error(ErrorKind::InvalidArgument, "precision guard must be non-negative");
  return (guard * Rational(cfg.scale())).ceil();
}

// ---------------------------------------------------------------------------
// Window conversion

dvr::Window lattice_window(const RingConfig& cfg) {
  dvr::Window w;
  w.p = cfg.p;
  // One extra T-unit below the floor leaves room for T^{-1/p^n} shifts.
  w.lo = static_cast<std::int64_t>(cfg.floor - 1) * cfg.scale();
  w.hi = static_cast<std::int64_t>(cfg.N) * cfg.scale();
  return w;
}

dvr::Vec to_window(const Vector& v, int factor, const dvr::Window& w) {
  dvr::Vec out = w.zero_vec(v.size());
  for (std::size_t c = 0; c < v.size(); ++c)
    for (const auto& [t, coeff] : v[c].factor(factor)) {
      if (t < w.lo) throw Error(ErrorKind::PrecisionExceeded, "term below the working window");
      if (t >= w.hi) continue;
      out[c][static_cast<std::size_t>(t - w.lo)] = coeff;
    }
  return out;
}

Vector from_window(const dvr::Vec& v, int factor, const dvr::Window& w, const RingConfig& cfg) {
  Vector out;
  out.reserve(v.size());
  const std::int64_t floor_tick = static_cast<std::int64_t>(cfg.floor) * cfg.scale();
  for (const auto& s : v) {
    std::vector<RingElement::Terms> terms(static_cast<std::size_t>(cfg.factors));
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!s[i]) continue;
      const std::int64_t t = w.lo + static_cast<std::int64_t>(i);
      if (t < floor_tick) throw Error(ErrorKind::PrecisionExceeded, "generator falls below the Laurent floor");
      terms[static_cast<std::size_t>(factor)][t] = s[i];
    }
    out.emplace_back(cfg, std::move(terms), false);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Prepared lattices

PreparedLattice::PreparedLattice(const Lattice& L) : lattice_(L), window_(lattice_window(L.cfg)) {
  const std::int64_t limit = window_.hi - precision_guard_ticks(L.cfg);
  for (int f = 0; f < L.cfg.factors; ++f) {
    std::vector<dvr::Vec> rows;
    for (const auto& g : L.generators) rows.push_back(to_window(g, f, window_));
    auto h = dvr::HowellForm::build(window_, static_cast<std::size_t>(L.rank), std::move(rows));
    for (const auto& r : h.rows())
      if (r.essential && window_.lo + static_cast<std::int64_t>(r.val) >= limit)
        throw Error(ErrorKind::PrecisionLoss, "pivot T^(" + ticks_to_exponent(window_.lo + static_cast<std::int64_t>(r.val), L.cfg).str() +
                                                  ") lies within the guard band of T^" + std::to_string(L.cfg.N));
    forms_.push_back(std::move(h));
  }
}

bool PreparedLattice::member_ticks(const Vector& x, std::int64_t s) const {
  require_rank(x, lattice_.rank);
  for (int f = 0; f < lattice_.cfg.factors; ++f) {
    auto shifted = dvr::shift(to_window(x, f, window_), -s);
    if (!shifted) return false;
    if (!forms_[static_cast<std::size_t>(f)].contains(*shifted)) return false;
  }
  return true;
}

bool PreparedLattice::member(const Vector& x, const Rational& s) const {
  auto t = s.scaled(lattice_.cfg.scale());
  if (!t) throw Error(ErrorKind::DepthExceeded, "shift " + s.str() + " is finer than the lattice level");
  return member_ticks(x, *t);
}

std::optional<std::int64_t> PreparedLattice::gauge_ticks(const Vector& x, int factor, std::int64_t step) const {
  require_rank(x, lattice_.rank);
  const dvr::Vec xf = to_window(x, factor, window_);
  const std::size_t v = dvr::valuation(xf);
  if (v == window_.size()) return std::nullopt;
  const auto& h = forms_[static_cast<std::size_t>(factor)];
  auto member_at = [&](std::int64_t s) {
    auto shifted = dvr::shift(xf, -s);
    return shifted && h.contains(*shifted);
  };
  const std::int64_t minexp = window_.lo + static_cast<std::int64_t>(v);
  std::int64_t good = floor_div(minexp - window_.hi, step);   // everything shifts past hi
  std::int64_t bad = ceil_div(minexp - window_.lo + 1, step);  // lowest term drops below lo
  while (bad - good > 1) {
    const std::int64_t mid = good + (bad - good) / 2;
    if (member_at(mid * step))
      good = mid;
    else
      bad = mid;
  }
  return good * step;
}

NormValue PreparedLattice::gauge(const Vector& x) const {
  std::optional<std::int64_t> best;
  for (int f = 0; f < lattice_.cfg.factors; ++f) {
    auto g = gauge_ticks(x, f);
    if (g && (!best || *g < *best)) best = g;
  }
  if (!best) return NormValue::zero();
  return NormValue::exact(ticks_to_exponent(*best, lattice_.cfg));
}

}  // namespace ultralattice
