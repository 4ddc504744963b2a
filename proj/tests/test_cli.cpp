#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "hypstretch/surface.hpp"

using json = nlohmann::json;
using namespace hyp;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

// Runs the CLI with the given arguments, capturing stdout.
RunResult run(const std::string& args) {
  std::string outfile = std::string(WORK_DIR) + "/cli_stdout.txt";
  std::string cmd = std::string(HYPSTRETCH_BIN) + " " + args + " > " +
                    outfile + " 2>/dev/null";
  int status = std::system(cmd.c_str());
  RunResult r;
  r.code = (status >= 0) ? (status >> 8) & 0xff : -1;
  std::ifstream f(outfile);
  std::stringstream ss;
  ss << f.rdbuf();
  r.out = ss.str();
  return r;
}

std::string surface(const std::string& name) {
  return std::string(SURFACE_DIR) + "/" + name;
}

std::string work(const std::string& name) {
  return std::string(WORK_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Surface load_file(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(f.good());
  return load_surface(f);
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("check command") {
  RunResult ok = run("check " + surface("pants.json"));
  CHECK(ok.code == 0);
  CHECK(contains(ok.out, "valid, 2 pieces, B = whole surface"));

  RunResult crowned = run("check " + surface("crown_quadchain.json"));
  CHECK(crowned.code == 0);
  CHECK(contains(crowned.out, "crown 0: quads 0 3, 2 spikes"));

  CHECK(run("check " + work("does_not_exist.json")).code == 2);

  // Dangling edge: violation listed, exit 1.
  {
    std::ofstream f(work("dangling.json"));
    f << R"({"topology":{"g":0,"b":3,"p":0},
            "pieces":[{"id":0,"kind":"hexagon","shears":[1,1,1]},
                      {"id":1,"kind":"hexagon","shears":[1,1,1]}],
            "gluings":[{"from":[0,"l1"],"to":[1,"l1"]},
                       {"from":[0,"l2"],"to":[1,"l3"]}]})";
  }
  RunResult bad = run("check " + work("dangling.json"));
  CHECK(bad.code == 1);
  CHECK(contains(bad.out, "invalid"));
}

TEST_CASE("stretch command: identity, semigroup, doubling") {
  std::string in = surface("pants.json");

  // t = 0: output equals input up to float formatting.
  REQUIRE(run("stretch " + in + " --t 0 --out " + work("p0.json")).code == 0);
  Surface a = load_file(in), b = load_file(work("p0.json"));
  REQUIRE(a.pieces.size() == b.pieces.size());
  for (size_t i = 0; i < a.pieces.size(); ++i) {
    CHECK(a.pieces[i].s1 == b.pieces[i].s1);
    CHECK(a.pieces[i].s2 == b.pieces[i].s2);
    CHECK(a.pieces[i].s3 == b.pieces[i].s3);
  }

  // File-level semigroup: t twice equals 2t directly.
  std::string ht = surface("holed_torus.json");
  REQUIRE(run("stretch " + ht + " --t 0.3 --out " + work("h1.json")).code ==
          0);
  REQUIRE(run("stretch " + work("h1.json") + " --t 0.3 --out " +
              work("h2.json")).code == 0);
  REQUIRE(run("stretch " + ht + " --t 0.6 --out " + work("h3.json")).code ==
          0);
  Surface twice = load_file(work("h2.json")), direct = load_file(work(
      "h3.json"));
  REQUIRE(twice.gluings.size() == direct.gluings.size());
  for (size_t i = 0; i < twice.gluings.size(); ++i)
    if (direct.gluings[i].shear)
      CHECK(std::abs(*twice.gluings[i].shear - *direct.gluings[i].shear) <
            1e-9);

  // t = ln 2 doubles every hexagon shear.
  char tln2[32];
  std::snprintf(tln2, sizeof tln2, "%.17g", std::log(2.0));
  REQUIRE(run("stretch " + in + " --t " + tln2 + " --out " +
              work("p2.json")).code == 0);
  Surface d = load_file(work("p2.json"));
  for (size_t i = 0; i < a.pieces.size(); ++i) {
    CHECK(std::abs(d.pieces[i].s1 - 2 * a.pieces[i].s1) < 1e-12);
    CHECK(std::abs(d.pieces[i].s2 - 2 * a.pieces[i].s2) < 1e-12);
    CHECK(std::abs(d.pieces[i].s3 - 2 * a.pieces[i].s3) < 1e-12);
  }

  // Output records metadata and still passes check.
  json j = json::parse(slurp(work("p2.json")));
  CHECK(j.contains("metadata"));
  CHECK(j["metadata"]["input_hash"].get<std::string>().size() == 16);
  CHECK(run("check " + work("p2.json")).code == 0);

  // Stretching an invalid surface fails with exit 1.
  CHECK(run("stretch " + work("dangling.json") + " --t 1 --out " +
            work("x.json")).code == 1);
  // Negative t rejected by flag validation.
  CHECK(run("stretch " + in + " --t -1 --out " + work("x.json")).code != 0);
}

TEST_CASE("lengths and distance commands") {
  RunResult len = run("lengths " + surface("pants.json") + " --depth 1");
  CHECK(len.code == 0);
  CHECK(contains(len.out, "boundary:0\t3.40982566472"));
  CHECK(contains(len.out, "arc:0.a3 0.a2\t1"));

  // distance(X, X) = 0.
  RunResult zero = run("distance " + surface("pants.json") + " " +
                       surface("pants.json") + " --depth 1");
  CHECK(zero.code == 0);
  CHECK(contains(zero.out, "lower bound at depth 1: 0"));

  // distance(X, stretch(X, t)) = t with a leaf-arc witness.
  REQUIRE(run("stretch " + surface("pants.json") + " --t 0.4 --out " +
              work("p04.json")).code == 0);
  RunResult est = run("distance " + surface("pants.json") + " " +
                      work("p04.json") + " --depth 2");
  CHECK(est.code == 0);
  bool found = contains(est.out, "lower bound at depth 2: 0.4\n") ||
               contains(est.out, "lower bound at depth 2: 0.4 ");
  CHECK(found);
  CHECK(contains(est.out, "witness: arc:"));

  // The curves-only variant can only be smaller (here: no positive curve
  // ratio at this depth, so the boundary ratio wins).
  RunResult cur = run("distance " + surface("pants.json") + " " +
                      work("p04.json") + " --depth 2 --curves-only");
  CHECK(cur.code == 0);
  CHECK(!contains(cur.out, "arc:"));

  // Combinatorial mismatch: exit 1.
  CHECK(run("distance " + surface("pants.json") + " " +
            surface("holed_torus.json") + " --depth 1").code == 1);
}

TEST_CASE("verify command: golden report and failure path") {
  RunResult r = run("verify " + surface("pants.json") + " --t 0.25,1");
  CHECK(r.code == 0);
  json rep = json::parse(r.out);
  CHECK(rep["pass"].get<bool>());
  CHECK((rep["t"] == json::array({0.25, 1.0})));

  // Schema round-trip.
  CHECK((json::parse(rep.dump()) == rep));

  // Golden comparison: same check names, tolerances and outcomes; values
  // reproduce to well under each tolerance.
  json golden = json::parse(slurp(std::string(GOLDEN_DIR) +
                                  "/pants_verify_checks.json"));
  REQUIRE(rep["checks"].size() == golden.size());
  for (size_t i = 0; i < golden.size(); ++i) {
    CHECK((rep["checks"][i]["name"] == golden[i]["name"]));
    CHECK((rep["checks"][i]["tolerance"] == golden[i]["tolerance"]));
    CHECK((rep["checks"][i]["pass"] == golden[i]["pass"]));
    CHECK(std::abs(rep["checks"][i]["value"].get<double>() -
                   golden[i]["value"].get<double>()) < 1e-9);
  }

  // A structurally broken surface fails verification with exit 1.
  RunResult bad = run("verify " + work("dangling.json") + " --t 0.5");
  CHECK(bad.code == 1);
  CHECK(!json::parse(bad.out)["pass"].get<bool>());
}

TEST_CASE("render command: golden files and determinism") {
  std::string ht = surface("holed_torus.json");
  REQUIRE(run("render " + ht + " --out " + work("a.svg") +
              " --foliation").code == 0);
  REQUIRE(run("render " + ht + " --out " + work("b.svg") +
              " --foliation").code == 0);
  std::string a = slurp(work("a.svg"));
  CHECK(a == slurp(work("b.svg")));  // byte-identical across runs
  CHECK(a == slurp(std::string(GOLDEN_DIR) + "/holed_torus.svg"));

  // The quad contributes its center and two special points; foliation leaves
  // are present.
  CHECK(contains(a, "fill=\"#c03030\""));
  CHECK(contains(a, "stroke=\"#2e8b57\""));
  CHECK(contains(a, "stroke=\"#9ec2e8\""));

  REQUIRE(run("render " + surface("pants.json") + " --out " + work("p.svg") +
              " --clip 2.5").code == 0);
  std::string p = slurp(work("p.svg"));
  CHECK(p == slurp(std::string(GOLDEN_DIR) + "/pants.svg"));
  // Hexagons have no foliation sectors and no centers; special points only.
  CHECK(!contains(p, "stroke=\"#9ec2e8\""));
  CHECK(!contains(p, "fill=\"#c03030\""));
  CHECK(contains(p, "stroke=\"#2e8b57\""));

  CHECK(run("render " + work("dangling.json") + " --out " +
            work("x.svg")).code == 1);
  CHECK(run("render " + ht + " --out /nonexistent_dir/x.svg").code == 2);
}
