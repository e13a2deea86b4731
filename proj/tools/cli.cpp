#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "ultralattice/almostmod.hpp"
#include "ultralattice/harness.hpp"
#include "ultralattice/tensor.hpp"

namespace ultralattice::cli {

namespace {

struct Options {
  std::optional<int> p, k, N, factors, depth;
  std::optional<std::uint64_t> seed;
  std::string format = "table";
};

/// Thrown for malformed input files or arguments after parsing succeeded.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

/// Flags override the values stored in a file.
void override_cfg(nlohmann::json& cfg, const Options& o) {
  if (!cfg.is_object()) cfg = nlohmann::json::object();
  if (o.p) cfg["p"] = *o.p;
  if (o.k) cfg["k"] = *o.k;
  if (o.N) {
    cfg["N"] = *o.N;
    if (!cfg.contains("floor")) cfg["floor"] = -*o.N;
  }
  if (o.factors) cfg["factors"] = *o.factors;
}

RingConfig flag_cfg(const Options& o) {
  nlohmann::json j{{"p", 2}, {"k", 1}, {"N", 16}};
  override_cfg(j, o);
  return j.get<RingConfig>();
}

Lattice load_lattice(const std::string& path, const Options& o) {
  auto j = read_json(path);
  override_cfg(j["cfg"], o);
  return lattice_from_json(j);
}

LatticeMap load_map(const std::string& path, const Options& o) {
  auto j = read_json(path);
  if (j.contains("source")) override_cfg(j["source"]["cfg"], o);
  if (j.contains("target")) override_cfg(j["target"]["cfg"], o);
  return map_from_json(j);
}

/// "[\"1\", \"T\"]" or a comma-separated list of entries.
Vector parse_vector_arg(const std::string& text, const RingConfig& cfg) {
  std::vector<std::string> entries;
  if (!text.empty() && text.front() == '[') {
    try {
      entries = nlohmann::json::parse(text).get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(std::string("vector: ") + e.what());
    }
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) entries.push_back(item);
  }
  return parse_vector(entries, cfg);
}

std::string join(const std::vector<std::string>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
  return s + "]";
}

void print_lattice(std::ostream& out, const Lattice& L, const Options& o) {
  if (o.format == "json") {
    out << nlohmann::json(L).dump(2) << "\n";
    return;
  }
  out << "rank " << L.rank << ", level " << L.cfg.k << (L.depth ? ", depth " + std::to_string(*L.depth) : "") << "\n";
  for (const auto& g : L.generators) out << join(render_vector(g)) << "\n";
}

int print_verdict(std::ostream& out, const Verdict& v, const RingConfig& cfg, const Options& o) {
  if (o.format == "json") {
    nlohmann::json j = v;
    j["cfg"] = cfg;
    out << j.dump(2) << "\n";
  } else {
    out << to_string(v.outcome) << "\n";
    if (v.witness) out << "witness: " << join(render_vector(*v.witness)) << "\n";
    if (!v.note.empty()) out << "note: " << v.note << "\n";
  }
  return v.outcome == Verdict::Outcome::Undecided ? Undecidable : Ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lattices, gauges and almost modules over truncated perfectoid Laurent series"};
  app.require_subcommand(1);
  Options o;
  auto add_cfg_flags = [&](CLI::App* sc) {
    sc->add_option("--p", o.p, "residue characteristic")->check(CLI::Range(2, 251));
    sc->add_option("--k", o.k, "root level: exponents in (1/p^k)Z")->check(CLI::NonNegativeNumber);
    sc->add_option("--N", o.N, "T-adic precision")->check(CLI::PositiveNumber);
    sc->add_option("--factors", o.factors, "number of product factors")->check(CLI::PositiveNumber);
    sc->add_option("--format", o.format, "output format")->check(CLI::IsMember({"table", "json"}));
  };

  std::string elt, lattice_path, vector_text, map_path, l1_path, l2_path, suite_path;
  bool unit_ball = false;

  auto* norm = app.add_subcommand("norm", "norm of a ring element");
  norm->add_option("element", elt)->required();
  add_cfg_flags(norm);

  auto* gauge_cmd = app.add_subcommand("gauge", "gauge of a vector against a lattice");
  gauge_cmd->add_option("lattice", lattice_path)->required();
  gauge_cmd->add_option("vector", vector_text)->required();
  add_cfg_flags(gauge_cmd);

  auto* almost = app.add_subcommand("almost-elements", "module of almost elements of a lattice");
  almost->add_option("lattice", lattice_path)->required();
  almost->add_option("--depth", o.depth, "root depth K")->check(CLI::NonNegativeNumber);
  add_cfg_flags(almost);

  auto* iso = app.add_subcommand("almost-iso", "is a lattice map an almost isomorphism");
  iso->add_option("map", map_path)->required();
  iso->add_option("--depth", o.depth, "root depth K")->check(CLI::NonNegativeNumber);
  add_cfg_flags(iso);

  auto* isometry = app.add_subcommand("isometry", "is a lattice map isometric for the gauges");
  isometry->add_option("map", map_path)->required();
  add_cfg_flags(isometry);

  auto* tensor = app.add_subcommand("tensor", "tensor product of two lattices");
  tensor->add_option("l1", l1_path)->required();
  tensor->add_option("l2", l2_path)->required();
  tensor->add_flag("--unit-ball", unit_ball, "print the unit ball of the tensor seminorm");
  tensor->add_option("--depth", o.depth, "root depth K")->check(CLI::NonNegativeNumber);
  add_cfg_flags(tensor);

  auto* verify = app.add_subcommand("verify", "run the randomized verification suite");
  verify->add_option("--seed", o.seed, "suite seed");
  verify->add_option("--suite", suite_path, "suite configuration JSON");
  verify->add_option("--depth", o.depth, "root depth K")->check(CLI::NonNegativeNumber);
  add_cfg_flags(verify);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return Ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return Ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return Usage;
  }

  try {
    if (norm->parsed()) {
      const RingConfig cfg = flag_cfg(o);
      const NormValue v = elt_norm(parse_element(elt, cfg));
      if (o.format == "json")
        out << nlohmann::json{{"cfg", cfg}, {"element", elt}, {"norm", v.str()}}.dump(2) << "\n";
      else
        out << v.str() << "\n";
      return Ok;
    }
    if (gauge_cmd->parsed()) {
      const Lattice L = load_lattice(lattice_path, o);
      const NormValue v = gauge(parse_vector_arg(vector_text, L.cfg), L);
      if (o.format == "json")
        out << nlohmann::json{{"cfg", L.cfg}, {"vector", vector_text}, {"gauge", v.str()}}.dump(2) << "\n";
      else
        out << v.str() << "\n";
      return Ok;
    }
    if (almost->parsed()) {
      const Lattice L = load_lattice(lattice_path, o);
      const AlmostElements E = almost_elements(L, o.depth.value_or(L.cfg.k + 2));
      if (E.stable == false) {
        err << "almost elements change between depth " << E.depth << " and " << E.depth + 1 << "\n";
        return Undecidable;
      }
      print_lattice(out, E.lattice, o);
      return Ok;
    }
    if (iso->parsed()) {
      const LatticeMap f = load_map(map_path, o);
      return print_verdict(out, is_almost_iso(f, o.depth.value_or(f.source.cfg.k + 2)), f.source.cfg, o);
    }
    if (isometry->parsed()) {
      const LatticeMap f = load_map(map_path, o);
      return print_verdict(out, isometry_check(f), f.source.cfg, o);
    }
    if (tensor->parsed()) {
      const Lattice L1 = load_lattice(l1_path, o), L2 = load_lattice(l2_path, o);
      if (unit_ball) {
        print_lattice(out, tensor_unit_ball(L1, L2, o.depth.value_or(L1.cfg.k + 2)), o);
        return Ok;
      }
      const TensorResult t = tensor_lattices(L1, L2);
      if (o.format == "json") {
        out << nlohmann::json(t).dump(2) << "\n";
      } else {
        out << "torsion: " << (t.has_torsion ? "yes" : "no") << "\n";
        for (const auto& n : t.notes) out << "note: " << n << "\n";
        out << "torsion-free part:\n";
        print_lattice(out, t.torsion_free_part, o);
      }
      return Ok;
    }
    if (verify->parsed()) {
      SuiteConfig sc = suite_path.empty() ? SuiteConfig{} : suite_config_from_json(read_json(suite_path));
      if (o.seed) sc.seed = *o.seed;
      if (o.depth) sc.depth = *o.depth;
      if (o.p || o.k || o.N || o.factors) {
        nlohmann::json cfg = sc.cfg;
        override_cfg(cfg, o);
        sc.cfg = cfg.get<RingConfig>();
      }
      const auto start = std::chrono::steady_clock::now();
      const SuiteReport r = run_suite(sc);
      const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (o.format == "json")
        out << report_json(r, false).dump(2) << "\n";
      else
        out << report_table(r, false);
      err << "wall time " << seconds << " s\n";
      if (r.total_failed() > 0) return Failure;
      return r.pass() ? Ok : Undecidable;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return Usage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::PrecisionUndecidable:
      case ErrorKind::PrecisionLoss:
        return Undecidable;
      case ErrorKind::SyntaxError:
      case ErrorKind::NotPPowerDenominator:
      case ErrorKind::DepthExceeded:
      case ErrorKind::PrecisionExceeded:
      case ErrorKind::InvalidArgument:
      case ErrorKind::ConfigMismatch:
        return Usage;
      default:
        return Failure;
    }
  }
  return Usage;
}

}  // namespace ultralattice::cli
