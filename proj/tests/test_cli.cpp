#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

namespace {

struct Run {
  int rc;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int rc = ultralattice::cli::run(args, out, err);
  return {rc, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("ultralattice_cli_" + name);
  std::ofstream(path) << text;
  return path.string();
}

const char* kLattice = R"j({"cfg":{"p":2,"k":1,"N":16},"rank":2,"generators":[["T^(1/2)","0"],["0","T"]]})j";

}  // namespace

TEST_CASE("cli norm") {
  auto r = run({"norm", "T^(3/2)+T^2", "--p", "2", "--k", "1", "--N", "16"});
  CHECK(r.rc == 0);
  CHECK(r.out == "2^-(3/2)\n");
  CHECK(run({"norm", "0"}).out == "0\n");

  auto j = nlohmann::json::parse(run({"norm", "T", "--format", "json"}).out);
  CHECK(j.at("norm") == "2^-(1)");
  CHECK(j.at("cfg").at("p") == 2);
}

TEST_CASE("cli gauge") {
  const auto path = write_temp("L.json", kLattice);
  CHECK(run({"gauge", path, "0"}).out == "0\n");
  CHECK(run({"gauge", path, "T^(1/2),T"}).out == "2^-(0)\n");
  CHECK(run({"gauge", path, R"j(["1","T"])j"}).out == "2^-(-1/2)\n");
}

TEST_CASE("cli flags override the file configuration") {
  const auto path = write_temp("L3.json", kLattice);
  CHECK(run({"gauge", path, "T^(1/4),0"}).rc == 2);
  auto r = run({"gauge", path, "T^(1/4),0", "--k", "2"});
  CHECK(r.rc == 0);
  CHECK(r.out == "2^-(-1/4)\n");
}

TEST_CASE("cli almost-elements and tensor") {
  const auto path = write_temp("La.json", kLattice);
  auto a = run({"almost-elements", path, "--depth", "2"});
  CHECK(a.rc == 0);
  CHECK(a.out == "rank 2, level 2, depth 2\n[T^(1/2), 0]\n[0, T]\n");

  auto t = run({"tensor", path, path});
  CHECK(t.rc == 0);
  CHECK(t.out.find("torsion: no") != std::string::npos);
  // emitted lattices are accepted back as input
  const auto ae = write_temp("ae.json", run({"almost-elements", path, "--format", "json"}).out);
  auto g = run({"gauge", ae, "T^(1/8),0"});
  CHECK(g.rc == 0);
  CHECK(g.out == "2^-(-3/8)\n");

  auto tj = nlohmann::json::parse(run({"tensor", path, path, "--format", "json"}).out);
  CHECK(tj.at("torsion_free_generators").size() == 4);
}

TEST_CASE("cli map verdicts") {
  const std::string lat = R"j({"cfg":{"p":2,"k":1,"N":16},"rank":1,"generators":[["1"]]})j";
  const std::string sub = R"j({"cfg":{"p":2,"k":1,"N":16},"rank":1,"generators":[["T^(1/2)"]]})j";
  const auto iso = write_temp("iso.json", R"j({"source":)j" + lat + R"j(,"target":)j" + lat + R"j(,"images":[["1"]]})j");
  auto r = run({"isometry", iso});
  CHECK(r.rc == 0);
  CHECK(r.out.rfind("yes", 0) == 0);

  // T^{1/2}·A ↪ A is not isometric and not an almost isomorphism at depth 1
  const auto inc = write_temp("inc.json", R"j({"source":)j" + sub + R"j(,"target":)j" + lat + R"j(,"images":[["1"]]})j");
  CHECK(run({"isometry", inc}).out.rfind("no", 0) == 0);
  auto v = run({"almost-iso", inc, "--depth", "1"});
  CHECK(v.rc == 0);
  CHECK(v.out.rfind("no", 0) == 0);
  auto vj = nlohmann::json::parse(run({"almost-iso", inc, "--depth", "1", "--format", "json"}).out);
  CHECK(vj.at("cfg").at("k") == 1);
}

TEST_CASE("cli exit codes") {
  CHECK(run({}).rc == 2);
  CHECK(run({"norm"}).rc == 2);
  CHECK(run({"norm", "T^(1/3)"}).rc == 2);
  CHECK(run({"norm", "T^("}).rc == 2);
  CHECK(run({"norm", "T^(1/4)"}).rc == 2);
  CHECK(run({"norm", "T^20"}).rc == 2);
  CHECK(run({"gauge", "/nonexistent/L.json", "0"}).rc == 2);
  CHECK(run({"gauge", write_temp("bad.json", "{not json"), "0"}).rc == 2);
  CHECK(run({"norm", "T", "--format", "xml"}).rc == 2);
  CHECK(run({"norm", "--help"}).rc == 0);
}

TEST_CASE("cli verify") {
  auto r = run({"verify", "--seed", "1"});
  CHECK(r.rc == 0);
  CHECK(r.out.find("PASS: 0 failed, 0 undecided") != std::string::npos);
  CHECK(r.err.find("wall time") != std::string::npos);
  // timings stay out of stdout so the table is reproducible
  CHECK(run({"verify", "--seed", "1"}).out == r.out);

  const auto suite = write_temp("suite.json", R"j({"seed":3,"instances":2,"negate":"a"})j");
  auto neg = run({"verify", "--suite", suite});
  CHECK(neg.rc == 1);
  CHECK(neg.out.find("FAIL") != std::string::npos);
}
