#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fdde/cli.hpp"

namespace fs = std::filesystem;
using namespace fdde::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "fdde");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("fdde_test_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("example51 default run") {
  const auto dir = fresh_dir("ex51");
  const auto r = run({"--out-dir", dir.string(), "example51"});
  REQUIRE(r.code == kOk);
  CHECK(r.out.find("verdict=CertifiedAsymptoticallyStable") != std::string::npos);

  const auto rows = lines(slurp(dir / "example51.csv"));
  CHECK(rows.front() == "t,x1,x2,x3,x4");
  CHECK(rows.size() == 1 + 64 + 1280 + 1);
  CHECK(rows[1] == "-1,0.6,0.25,0.2,-0.25");
  std::stringstream last(rows.back());
  std::string cell;
  std::getline(last, cell, ',');
  CHECK(cell == "20");
  while (std::getline(last, cell, ',')) CHECK(std::abs(std::stod(cell)) < 0.02);

  const std::string svg = slurp(dir / "example51.svg");
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("viewBox=\"0 0 800 500\"") != std::string::npos);
  CHECK(count(svg, "<polyline") == 4);
  CHECK(count(svg, "class=\"zero\"") == 1);
  CHECK(count(svg, "<svg") == 1);
  CHECK(count(svg, "</svg>") == 1);
  CHECK(count(svg, "<g") == count(svg, "</g>"));
  CHECK(count(svg, "<text") == count(svg, "</text>"));
}

TEST_CASE("example51 variants") {
  const auto dir = fresh_dir("ex51_short");
  auto r = run({"--out-dir", dir.string(), "--t-end", "0.5", "example51"});
  REQUIRE(r.code == kOk);
  CHECK(lines(slurp(dir / "example51.csv")).size() == 1 + (32 + 64 + 1));

  r = run({"--out-dir", dir.string(), "--f", "zero", "example51"});
  REQUIRE(r.code == kOk);
  const auto rows = lines(slurp(dir / "example51.csv"));
  std::stringstream last(rows.back());
  std::string cell;
  std::getline(last, cell, ',');
  while (std::getline(last, cell, ',')) CHECK(std::abs(std::stod(cell)) < 0.02);

  r = run({"--out-dir", dir.string(), "--a", "3", "--b", "0", "--t-end", "100", "example51"});
  CHECK(r.code == kNumericalFailure);
}

TEST_CASE("outputs are byte-identical across runs") {
  const auto d1 = fresh_dir("det1");
  const auto d2 = fresh_dir("det2");
  for (const auto& d : {d1, d2}) {
    REQUIRE(run({"--out-dir", d.string(), "--t-end", "5", "example51"}).code == kOk);
    REQUIRE(run({"--out-dir", d.string(), "stability-map", "--verify"}).code == kOk);
  }
  for (const char* name : {"example51.csv", "example51.svg", "stability_map.csv", "stability_map.svg"}) {
    CHECK(slurp(d1 / name) == slurp(d2 / name));
  }
}

TEST_CASE("stability map") {
  const auto dir = fresh_dir("map");
  const auto r = run({"--out-dir", dir.string(), "stability-map", "--verify"});
  REQUIRE(r.code == kOk);
  CHECK(r.out.find("verify: 10/10 zero right-half-plane counts, 0 disagreements") != std::string::npos);
  const auto rows = lines(slurp(dir / "stability_map.csv"));
  CHECK(rows.front() == "a,b,class");
  REQUIRE(rows.size() == 1 + 41 * 41);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::stringstream ss(rows[i]);
    std::string a, b, c;
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    std::getline(ss, c, ',');
    const double av = std::stod(a), bv = std::stod(b);
    const char* expect = (av <= bv && bv < -av) ? "StableCriterion" : (av + bv >= 0) ? "NonnegativeSum" : "Inconclusive";
    CHECK(c == expect);
  }
  const std::string svg = slurp(dir / "stability_map.svg");
  CHECK(count(svg, "<rect") >= 41 * 41);
  CHECK(svg.find("viewBox=\"0 0 800 500\"") != std::string::npos);

  const auto wide = fresh_dir("map_wide");
  REQUIRE(run({"--out-dir", wide.string(), "stability-map", "--a-range", "-6", "-4", "--b-range", "0", "1", "--grid",
               "3"})
              .code == kOk);
  CHECK(slurp(wide / "stability_map.csv").find("-5,0.5,StableCriterion") != std::string::npos);

  CHECK(run({"--out-dir", wide.string(), "stability-map", "--grid", "1"}).code == kUsageError);
}

TEST_CASE("solve and compare") {
  const auto dir = fresh_dir("solve");
  auto r = run({"--out-dir", dir.string(), "--t-end", "2", "--h", "0.0625", "solve", "--scheme", "picard"});
  REQUIRE(r.code == kOk);
  auto rows = lines(slurp(dir / "trajectory.csv"));
  CHECK(rows.front() == "t,x,scheme,h");
  CHECK(rows.size() == 1 + 16 + 32 + 1);
  CHECK(rows[1] == "-1,0.6,Picard,0.0625");

  r = run({"--out-dir", dir.string(), "--t-end", "2", "--h", "0.0625", "solve", "--compare"});
  REQUIRE(r.code == kOk);
  CHECK(r.out.find("max_deviation=") != std::string::npos);
  rows = lines(slurp(dir / "trajectory.csv"));
  CHECK(rows.size() == 1 + 2 * 49);
  const auto cmp = lines(slurp(dir / "comparison.csv"));
  REQUIRE(cmp.size() == 2);
  CHECK(cmp[0] == "max_deviation,t_at_max,picard_iterations");

  r = run({"--out-dir", dir.string(), "--history", "affine", "0.1", "-0.15", "--f", "polynomial", "--term", "1,2,0",
           "--term", "1,0,3", "--t-end", "1", "solve"});
  CHECK(r.code == kOk);
  CHECK(lines(slurp(dir / "trajectory.csv"))[1] == "-1,-0.25,ABM,0.015625");
}

TEST_CASE("ml-eval") {
  auto r = run({"ml-eval", "--t", "0.5", "2"});
  REQUIRE(r.code == kOk);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "t,value");
  CHECK(rows[1].rfind("0.5,0.1538386099500", 0) == 0);

  r = run({"ml-eval", "--beta", "alpha", "--t", "1", "10", "--decay", "--l1"});
  REQUIRE(r.code == kOk);
  CHECK(r.out.find("t,value,compensated\n") == 0);
  CHECK(r.out.find("value,error_estimate,split_point\n0.2222") != std::string::npos);

  CHECK(run({"ml-eval", "--t", "0"}).code == kUsageError);
  CHECK(run({"ml-eval", "--beta", "2", "--t", "1"}).code == kUsageError);
}

TEST_CASE("roots") {
  const auto dir = fresh_dir("roots");
  auto r = run({"--out-dir", dir.string(), "roots"});
  REQUIRE(r.code == kOk);
  CHECK(r.out.find("winding_count=0") != std::string::npos);
  CHECK(r.out.find("right_half_plane_root_free=true") != std::string::npos);
  CHECK(slurp(dir / "roots.csv") == "re,im,residual,multiplicity\n");

  r = run({"--out-dir", dir.string(), "--a", "1", "--b", "0", "roots", "--im-lo", "-1", "--im-hi", "1"});
  REQUIRE(r.code == kOk);
  CHECK(r.out.find("winding_count=1") != std::string::npos);
  CHECK(r.out.find("right_half_plane_root_free=false") != std::string::npos);
  CHECK(lines(slurp(dir / "roots.csv")).size() == 2);

  r = run({"--out-dir", dir.string(), "--a", "1", "--b", "0", "roots", "--re-lo", "1", "--re-hi", "2"});
  CHECK(r.code == kNumericalFailure);
}

TEST_CASE("certify") {
  auto r = run({"certify"});
  REQUIRE(r.code == kOk);
  CHECK(r.out.find("verdict=CertifiedAsymptoticallyStable") != std::string::npos);
  CHECK(r.out.find("sup_E1=") != std::string::npos);
  r = run({"--a", "1", "--b", "0", "--f", "zero", "certify"});
  REQUIRE(r.code == kOk);
  CHECK(r.out.find("verdict=Inconclusive") != std::string::npos);
}

TEST_CASE("config file with flag override") {
  const auto dir = fresh_dir("config");
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "# benchmark with a shorter horizon\n";
    cfg << "t-end=0.5\n";
    cfg << "a=-4\n";
  }
  auto r = run({"--config", (dir / "run.cfg").string(), "--out-dir", dir.string(), "--a", "-5", "solve"});
  REQUIRE(r.code == kOk);
  const auto rows = lines(slurp(dir / "trajectory.csv"));
  CHECK(rows.size() == 1 + 64 + 32 + 1);

  // Flag value -5 wins over the file's -4: compare with a direct run.
  const auto ref = fresh_dir("config_ref");
  REQUIRE(run({"--out-dir", ref.string(), "--t-end", "0.5", "solve"}).code == kOk);
  CHECK(slurp(dir / "trajectory.csv") == slurp(ref / "trajectory.csv"));
}

TEST_CASE("usage errors name the field") {
  auto r = run({"--alpha", "1.5", "solve"});
  CHECK(r.code == kUsageError);
  CHECK(r.err.find("alpha") != std::string::npos);

  r = run({"--h", "0.3", "solve"});
  CHECK(r.code == kUsageError);
  CHECK(r.err.find("h") != std::string::npos);

  r = run({"--history", "affine", "x", "1", "solve"});
  CHECK(r.code == kUsageError);
  CHECK(r.err.find("history") != std::string::npos);

  r = run({"--f", "polynomial", "--term", "1,2", "solve"});
  CHECK(r.code == kUsageError);
  CHECK(r.err.find("term") != std::string::npos);

  CHECK(run({"--theta", "1.0", "solve"}).code == kUsageError);
  CHECK(run({"--f", "x^2", "solve"}).code == kUsageError);
  CHECK(run({}).code == kUsageError);
  CHECK(run({"frobnicate"}).code == kUsageError);
  CHECK(run({"--alpha", "abc", "solve"}).code == kUsageError);
  CHECK(run({"--help"}).code == kOk);
}
