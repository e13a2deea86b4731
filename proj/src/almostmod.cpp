#include "ultralattice/almostmod.hpp"

#include <algorithm>

#include "ultralattice/error.hpp"
#include "ultralattice/graded.hpp"
#include "ultralattice/internal.hpp"

namespace ultralattice {

// ---------------------------------------------------------------------------
// Presentations and maps

ModulePresentation ModulePresentation::make(const RingConfig& cfg, CoeffRing coeff, int ambient_rank, std::vector<Vector> gens,
                                            std::vector<Vector> relations) {
  ModulePresentation P;
  P.cfg = cfg;
  P.coeff = std::move(coeff);
  P.ambient_rank = ambient_rank;
  P.gens = std::move(gens);
  P.relations = std::move(relations);
  P.validate();
  return P;
}

ModulePresentation ModulePresentation::free_quotient(const RingConfig& cfg, CoeffRing coeff, int m, std::vector<Vector> relations) {
  std::vector<Vector> gens;
  for (int i = 0; i < m; ++i) gens.push_back(unit_vector(cfg, m, i));
  return make(cfg, std::move(coeff), m, std::move(gens), std::move(relations));
}

void ModulePresentation::validate() const {
  // the generator and relation lattices carry the shape checks
  (void)Lattice::make(cfg, ambient_rank, gens, coeff);
  (void)Lattice::make(cfg, ambient_rank, relations, coeff);
}

void to_json(nlohmann::json& j, const ModulePresentation& P) {
  j = nlohmann::json::object();
  j["cfg"] = P.cfg;
  nlohmann::json lat = Lattice::make(P.cfg, P.ambient_rank, {}, P.coeff);
  j["coeff_ring"] = lat["coeff_ring"];
  j["rank"] = P.ambient_rank;
  auto gens = nlohmann::json::array();
  for (const auto& g : P.gens) gens.push_back(render_vector(g));
  j["gens"] = gens;
  auto rels = nlohmann::json::array();
  for (const auto& r : P.relations) rels.push_back(render_vector(r));
  j["relations"] = rels;
}

ModulePresentation presentation_from_json(const nlohmann::json& j) {
  try {
    nlohmann::json shell = {{"cfg", j.at("cfg")}, {"generators", nlohmann::json::array()}};
    if (j.contains("coeff_ring")) shell["coeff_ring"] = j.at("coeff_ring");
    const auto& gens = j.at("gens");
    int rank = 0;
    if (gens.is_number_integer())
      rank = gens.get<int>();
    else
      rank = j.at("rank").get<int>();
    shell["rank"] = rank;
    Lattice base = lattice_from_json(shell);
    std::vector<Vector> rels;
    for (const auto& r : j.at("relations")) rels.push_back(parse_vector(r.get<std::vector<std::string>>(), base.cfg));
    if (gens.is_number_integer()) return ModulePresentation::free_quotient(base.cfg, base.coeff, rank, std::move(rels));
    std::vector<Vector> gv;
    for (const auto& g : gens) gv.push_back(parse_vector(g.get<std::vector<std::string>>(), base.cfg));
    return ModulePresentation::make(base.cfg, base.coeff, rank, std::move(gv), std::move(rels));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::SyntaxError, std::string("presentation JSON: ") + e.what());
  }
}

LatticeMap LatticeMap::make(Lattice source, Lattice target, std::vector<Vector> images) {
  if (static_cast<int>(images.size()) != source.rank)
    throw Error(ErrorKind::InvalidArgument, "a lattice map needs one image per source coordinate");
  int level = std::max(source.cfg.k, target.cfg.k);
  for (const auto& v : images) {
    if (static_cast<int>(v.size()) != target.rank) throw Error(ErrorKind::InvalidArgument, "image has the wrong length");
    for (const auto& e : v) level = std::max(level, e.config().k);
  }
  LatticeMap f;
  f.source = lattice_base_change(source, level);
  f.target = lattice_base_change(target, level);
  for (auto& v : images) f.images.push_back(vec_base_change(v, level));
  if (!(f.source.cfg == f.target.cfg)) throw Error(ErrorKind::ConfigMismatch, "source and target use different rings");
  PreparedLattice t(unitball_span(f.target));
  for (const auto& g : f.source.generators)
    if (!t.member_ticks(f.apply(g), 0))
      throw Error(ErrorKind::InvalidArgument, "map sends a source generator outside the target lattice");
  return f;
}

Vector LatticeMap::apply(const Vector& x) const {
  if (static_cast<int>(x.size()) != source.rank) throw Error(ErrorKind::ConfigMismatch, "vector length does not match source rank");
  Vector out = zero_vector(target.cfg, target.rank);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!x[i].is_zero()) out = vec_add(out, vec_scale(x[i], images[i]));
  return out;
}

void to_json(nlohmann::json& j, const LatticeMap& f) {
  auto images = nlohmann::json::array();
  for (const auto& v : f.images) images.push_back(render_vector(v));
  j = {{"source", f.source}, {"target", f.target}, {"images", images}};
}

LatticeMap map_from_json(const nlohmann::json& j) {
  try {
    Lattice source = lattice_from_json(j.at("source"));
    Lattice target = lattice_from_json(j.at("target"));
    std::vector<Vector> images;
    for (const auto& v : j.at("images")) images.push_back(parse_vector(v.get<std::vector<std::string>>(), target.cfg));
    return LatticeMap::make(std::move(source), std::move(target), std::move(images));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::SyntaxError, std::string("map JSON: ") + e.what());
  }
}

std::string to_string(Verdict::Outcome o) {
  switch (o) {
    case Verdict::Outcome::Yes: return "yes";
    case Verdict::Outcome::No: return "no";
    case Verdict::Outcome::Undecided: return "undecided-at-precision";
  }
  return "?";
}

void to_json(nlohmann::json& j, const Verdict& v) {
  j = {{"outcome", to_string(v.outcome)}, {"depth", v.depth}, {"precision", v.precision}};
  if (v.witness) j["witness"] = render_vector(*v.witness);
  if (!v.note.empty()) j["note"] = v.note;
}

// ---------------------------------------------------------------------------
// Precision changes

namespace {

RingElement rebase(const RingElement& x, const RingConfig& cfg) { return RingElement(cfg, x.factors(), x.truncated()); }

Vector rebase(const Vector& v, const RingConfig& cfg) {
  Vector out;
  for (const auto& e : v) out.push_back(rebase(e, cfg));
  return out;
}

std::vector<Vector> rebase(const std::vector<Vector>& vs, const RingConfig& cfg) {
  std::vector<Vector> out;
  for (const auto& v : vs) out.push_back(rebase(v, cfg));
  return out;
}

}  // namespace

ModulePresentation with_precision(const ModulePresentation& P, int N) {
  RingConfig cfg = RingConfig::make(P.cfg.p, P.cfg.k, N, P.cfg.factors, P.cfg.floor);
  return ModulePresentation::make(cfg, P.coeff, P.ambient_rank, rebase(P.gens, cfg), rebase(P.relations, cfg));
}

Lattice with_precision(const Lattice& L, int N) {
  RingConfig cfg = RingConfig::make(L.cfg.p, L.cfg.k, N, L.cfg.factors, L.cfg.floor);
  Lattice out = Lattice::make(cfg, L.rank, rebase(L.generators, cfg), L.coeff);
  out.depth = L.depth;
  return out;
}

namespace detail {

LatticeMap with_precision(const LatticeMap& f, int N) {
  LatticeMap g;
  g.source = ultralattice::with_precision(f.source, N);
  g.target = ultralattice::with_precision(f.target, N);
  g.images = rebase(f.images, g.target.cfg);
  return g;
}

// ---------------------------------------------------------------------------
// Torsion over the valuation ring: Smith form of the relation coordinates.

DvrDecomposition decompose(const ModulePresentation& P) {
  if (!P.coeff.is_unit_ball()) throw Error(ErrorKind::Unsupported, "valuation-ring decomposition needs unit-ball coefficients");
  const auto& cfg = P.cfg;
  const auto w = lattice_window(cfg);
  const auto n = static_cast<std::size_t>(P.ambient_rank);
  const std::int64_t guard = precision_guard_ticks(cfg);
  DvrDecomposition out;
  for (int f = 0; f < cfg.factors; ++f) {
    std::vector<dvr::Vec> urows;
    for (const auto& g : P.gens) urows.push_back(to_window(g, f, w));
    auto hU = dvr::HowellForm::build(w, n, urows);

    std::vector<dvr::Vec> basis;
    std::vector<std::size_t> cols;
    std::int64_t deepest = w.lo;
    for (const auto& r : hU.rows())
      if (r.essential) {
        basis.push_back(r.v);
        cols.push_back(r.col);
        deepest = std::max(deepest, w.lo + static_cast<std::int64_t>(r.val));
      }
    const std::size_t r = basis.size();
    if (deepest >= w.hi - guard) throw Error(ErrorKind::PrecisionLoss, "generator pivot within the guard band");

    auto project = [&](const dvr::Vec& v) {
      dvr::Vec out(r);
      for (std::size_t i = 0; i < r; ++i) out[i] = v[cols[i]];
      return out;
    };
    std::vector<dvr::Vec> pbasis;
    for (const auto& b : basis) pbasis.push_back(project(b));
    auto hC = dvr::HowellForm::build(w, r, pbasis);
    if (hC.rows().size() != r || hC.essential_rank() != r)
      throw Error(ErrorKind::PrecisionLoss, "generator basis is not triangular at this precision");

    // Q[i][t]: coordinate of relation i on basis row t.
    std::vector<std::vector<dvr::Series>> Q;
    for (const auto& rel : P.relations) {
      dvr::Vec x = to_window(rel, f, w);
      if (dvr::is_zero(x)) continue;
      if (!hU.contains(x)) throw Error(ErrorKind::InvalidArgument, "relation outside the span of the generators");
      dvr::Vec rem;
      auto q = hC.coordinates(project(x), &rem);
      if (!dvr::is_zero(rem)) throw Error(ErrorKind::PrecisionLoss, "relation coordinates are not determined at this precision");
      Q.push_back(std::move(q));
    }
    const std::size_t m = w.size();
    const std::int64_t cap = w.hi - deepest - guard;  // coordinates are exact below u^cap
    const std::size_t rows = Q.size();

    std::vector<std::int64_t> div(r, -1);
    for (std::size_t t = 0; t < std::min(rows, r); ++t) {
      std::size_t bi = rows, bj = r, bv = m;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < r; ++j) {
          const std::size_t v = dvr::valuation(Q[i][j]);
          if (v < bv) {
            bv = v;
            bi = i;
            bj = j;
          }
        }
      if (bi == rows || static_cast<std::int64_t>(bv) >= cap) break;
      std::swap(Q[t], Q[bi]);
      for (auto& row : Q) std::swap(row[t], row[bj]);
      std::swap(basis[t], basis[bj]);
      // make the pivot u^bv: column t /= unit, so basis_t *= unit
      dvr::Series unit(m, 0);
      std::copy(Q[t][t].begin() + static_cast<std::ptrdiff_t>(bv), Q[t][t].end(), unit.begin());
      const dvr::Series unit_inv = dvr::unit_inverse(unit, w.p, m);
      for (auto& row : Q) row[t] = dvr::scale({row[t]}, unit_inv, w.p)[0];
      basis[t] = dvr::scale(basis[t], unit, w.p);
      auto quotient = [&](const dvr::Series& s) {
        dvr::Series q(m, 0);
        std::copy(s.begin() + static_cast<std::ptrdiff_t>(bv), s.end(), q.begin());
        return q;
      };
      for (std::size_t i = 0; i < rows; ++i) {
        if (i == t || dvr::valuation(Q[i][t]) == m) continue;
        dvr::Series q = quotient(Q[i][t]);
        dvr::Vec row_i(Q[i].begin(), Q[i].end());
        dvr::Vec row_t(Q[t].begin(), Q[t].end());
        dvr::sub_scaled(row_i, q, row_t, w.p);
        std::copy(row_i.begin(), row_i.end(), Q[i].begin());
      }
      for (std::size_t j = 0; j < r; ++j) {
        if (j == t || dvr::valuation(Q[t][j]) == m) continue;
        dvr::Series q = quotient(Q[t][j]);
        // column j -= q·column t, hence basis_t += q·basis_j
        for (auto& row : Q) {
          dvr::Vec cj{row[j]};
          dvr::sub_scaled(cj, q, dvr::Vec{row[t]}, w.p);
          row[j] = cj[0];
        }
        dvr::Series neg(m, 0);
        for (std::size_t i = 0; i < m; ++i) neg[i] = static_cast<std::uint8_t>((w.p - q[i]) % w.p);
        dvr::sub_scaled(basis[t], neg, basis[j], w.p);
      }
      div[t] = static_cast<std::int64_t>(bv);
    }
    for (std::size_t t = 0; t < r; ++t) {
      Vector b = from_window(basis[t], f, w, cfg);
      if (div[t] < 0) {
        out.free_basis.push_back(std::move(b));
        continue;
      }
      if (div[t] == 0) continue;
      out.torsion.push_back({div[t], std::move(b)});
    }
  }
  std::stable_sort(out.torsion.begin(), out.torsion.end(),
                   [](const TorsionSummand& a, const TorsionSummand& b) { return a.ticks < b.ticks; });
  return out;
}

bool same_invariants(const DvrDecomposition& a, const RingConfig& ca, const DvrDecomposition& b, const RingConfig& cb) {
  if (a.free_basis.size() != b.free_basis.size() || a.torsion.size() != b.torsion.size()) return false;
  for (std::size_t i = 0; i < a.torsion.size(); ++i)
    if (ticks_to_exponent(a.torsion[i].ticks, ca) != ticks_to_exponent(b.torsion[i].ticks, cb)) return false;
  return true;
}

DvrDecomposition certified_decompose(const ModulePresentation& P) {
  DvrDecomposition d = decompose(P);
  ModulePresentation P2 = ultralattice::with_precision(P, 2 * P.cfg.N);
  if (!same_invariants(d, P.cfg, decompose(P2), P2.cfg))
    throw Error(ErrorKind::PrecisionUndecidable, "torsion invariants change between precision N and 2N");
  return d;
}

}  // namespace detail

namespace {

struct GradedData {
  MonoidTable S;
  std::vector<graded::Homogeneous> U, W;
};

GradedData graded_data(const ModulePresentation& P) {
  GradedData g{monoid_table(P.coeff, P.cfg), {}, {}};
  for (const auto& v : P.gens)
    if (!vec_is_zero(v)) g.U.push_back(graded::require_homogeneous(v));
  for (const auto& v : P.relations)
    if (!vec_is_zero(v)) g.W.push_back(graded::require_homogeneous(v));
  return g;
}

}  // namespace

ModulePresentation present_cokernel(const LatticeMap& f) {
  std::vector<Vector> rels;
  for (const auto& g : f.source.generators) rels.push_back(f.apply(g));
  return ModulePresentation::make(f.target.cfg, f.target.coeff, f.target.rank, f.target.generators, std::move(rels));
}

TorsionInfo torsion_info(const ModulePresentation& P) {
  auto d = detail::certified_decompose(P);
  TorsionInfo info;
  for (const auto& t : d.torsion) info.divisors.push_back(ticks_to_exponent(t.ticks, P.cfg));
  info.free_rank = static_cast<int>(d.free_basis.size());
  return info;
}

ModulePresentation torsion_submodule(const ModulePresentation& P) {
  if (P.coeff.is_unit_ball()) {
    auto d = detail::certified_decompose(P);
    std::vector<Vector> gens, rels;
    for (const auto& t : d.torsion) {
      gens.push_back(t.generator);
      rels.push_back(vec_shift(t.generator, ticks_to_exponent(t.ticks, P.cfg)));
    }
    return ModulePresentation::make(P.cfg, P.coeff, P.ambient_rank, std::move(gens), std::move(rels));
  }
  auto g = graded_data(P);
  auto tor = graded::torsion(P.cfg.p, static_cast<std::size_t>(P.ambient_rank), g.S, g.U, g.W);
  std::vector<Vector> gens;
  for (const auto& h : tor.gens) gens.push_back(graded::to_vector(h, P.cfg));
  for (const auto& r : P.relations) gens.push_back(r);
  return ModulePresentation::make(P.cfg, P.coeff, P.ambient_rank, std::move(gens), P.relations);
}

std::optional<Rational> torsion_exponent(const ModulePresentation& P) {
  if (P.coeff.is_unit_ball()) {
    auto d = detail::certified_decompose(P);
    if (d.torsion.empty()) return Rational(0);
    return ticks_to_exponent(d.torsion.back().ticks, P.cfg);
  }
  auto g = graded_data(P);
  auto tor = graded::torsion(P.cfg.p, static_cast<std::size_t>(P.ambient_rank), g.S, g.U, g.W);
  return ticks_to_exponent(tor.exponent, P.cfg);
}

}  // namespace ultralattice
