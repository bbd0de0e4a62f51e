#include "doctest.h"

#include "fiberspin/cli.hpp"

#include "json.hpp"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using fiberspin::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "fiberspin");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("fiberspin_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

}  // namespace

TEST_CASE("usage errors") {
  CHECK(call({}).code == 1);
  CHECK(call({"frobnicate"}).code == 1);
  CHECK(call({"solve", "--epsilon", "0.25"}).code == 1);
  const auto r = call({"solve", "--delta", "0.1", "--epsilon", "0.25", "--kappa", "1.2"});
  CHECK(r.code == 1);
  CHECK(r.err.find("kappa < 1") != std::string::npos);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("bounds") {
  auto r = call({"bounds", "--delta", "0.133", "--epsilon", "0.25", "--kappa", "0.1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("2.565") != std::string::npos);
  CHECK(r.out.find("2.128") != std::string::npos);
  CHECK(r.out.find("MayExist") != std::string::npos);

  r = call({"bounds", "--delta", "3", "--epsilon", "1", "--kappa", "0", "--json"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["verdict"] == "CannotExist");
  CHECK(j["ratio"].get<double>() == 3.0);
  CHECK(j["p_kappa"].get<double>() == 3.0);

  r = call({"bounds", "--delta", "0.01", "--epsilon", "0.1", "--kappa", "0.48", "--json"});
  const auto k = nlohmann::json::parse(r.out);
  CHECK(k["p_kappa"].get<double>() == doctest::Approx(1.1856));
  CHECK(k["verdict"] == "MayExist");
}

TEST_CASE("solve") {
  const auto csv = scratch() / "solution.csv";
  const auto svg = scratch() / "solution.svg";
  auto r = call({"solve", "--delta", "0.1", "--epsilon", "0.25", "--kappa", "0.1", "--out",
                 csv.string(), "--svg", svg.string()});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("# fiberspin solve | tol=1e-08", 0) == 0);
  CHECK(r.out.find("length=1") != std::string::npos);
  CHECK(r.out.find("q0           0.1251") != std::string::npos);
  const auto rows = lines(slurp(csv));
  REQUIRE(rows.size() > 10);
  CHECK(rows[0] == "s,u,q,r,beta,phi,x,y,A");
  CHECK(rows[1].rfind("0,1,", 0) == 0);
  CHECK(slurp(svg).find("<polyline") != std::string::npos);

  r = call({"solve", "--delta", "0.1", "--epsilon", "0.25", "--kappa", "0.1", "--json"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["outcome"] == "Converged");
  CHECK(j["q0"].get<double>() == doctest::Approx(0.1252).epsilon(1e-3));
  CHECK(j["settings"]["tol"].get<double>() == 1e-8);
  CHECK(r.err.empty());

  r = call({"solve", "--delta", "0.135", "--epsilon", "0.25", "--kappa", "0.1"});
  CHECK(r.code == 2);
  CHECK(r.out.find("NoConvergence") != std::string::npos);
  CHECK(r.out.find("continuation") != std::string::npos);
}

TEST_CASE("inviscid") {
  const auto csv = scratch() / "inviscid.csv";
  const auto svg = scratch() / "inviscid.svg";
  auto r = call({"inviscid", "--epsilon", "0.16", "--kappa", "0.5", "--compare-zero-kappa", "--svg",
                 svg.string(), "--out", csv.string()});
  CHECK(r.code == 0);
  const auto rows = lines(slurp(csv));
  REQUIRE(rows.size() > 3);
  CHECK(rows[0] == "s,v,r,beta,w");
  CHECK(rows[1].rfind("0,0.16,1,0,", 0) == 0);
  std::istringstream second(rows[2]);
  std::string cell;
  std::vector<double> vals;
  while (std::getline(second, cell, ',')) vals.push_back(std::stod(cell));
  CHECK(vals[0] > 0.0);
  CHECK(vals[3] < 0.0);
  const auto s = slurp(svg);
  CHECK(s.find("kappa=0.5") != std::string::npos);
  CHECK(s.find("kappa=0<") != std::string::npos);

  r = call({"inviscid", "--epsilon", "0.16", "--kappa", "0.5", "--json"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["u_dd0"].get<double>() == doctest::Approx(-652.34375));
}

TEST_CASE("sweep") {
  const auto empty = scratch() / "empty.plan";
  std::ofstream(empty) << "# nothing here\n";
  const auto out = scratch() / "empty.csv";
  auto r = call({"sweep", "--plan", empty.string(), "--out", out.string()});
  CHECK(r.code == 0);
  CHECK(lines(slurp(out)).size() == 1);

  const auto bad = scratch() / "bad.plan";
  std::ofstream(bad) << "epsilon = 0.2\nkappa = 3\ndelta = 0.1\n";
  CHECK(call({"sweep", "--plan", bad.string()}).code == 1);
  CHECK(call({"sweep", "--plan", (scratch() / "missing.plan").string()}).code == 1);

  const auto blocks = scratch() / "blocks.plan";
  std::ofstream(blocks) << "epsilon = 0.25\nkappa = 0.1\ndelta = 0.1, 0.125, 0.13, 0.133, 0.135\n"
                          "[grid]\nepsilon = 0.1\ndelta = 0.01\nkappa = 0.3, 0.4, 0.45, 0.475, 0.48\n";
  const auto tcsv = scratch() / "blocks.csv";
  const auto map_svg = scratch() / "map.svg";
  const auto q0_svg = scratch() / "q0.svg";
  r = call({"sweep", "--plan", blocks.string(), "--out", tcsv.string(), "--jobs", "4", "--svg",
            map_svg.string(), "--svg-q0", q0_svg.string(), "--no-timing"});
  CHECK(r.code == 0);
  const auto rows = lines(slurp(tcsv));
  REQUIRE(rows.size() == 11);
  for (int i = 1; i <= 10; ++i) {
    const bool fail = i == 5 || i == 10;
    CHECK((rows[i].find(",Converged,") != std::string::npos) == !fail);
    CHECK(rows[i].substr(rows[i].size() - 2) == ",0");
  }
  CHECK(slurp(map_svg).find("p(kappa)") != std::string::npos);
  CHECK(slurp(q0_svg).find("<circle") != std::string::npos);

  r = call({"sweep", "--plan", empty.string(), "--json"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["records"].empty());
}

TEST_CASE("boundary") {
  auto r = call({"boundary", "--epsilon", "0.25", "--kappa", "0.1", "--resolution", "0.5"});
  CHECK(r.code == 1);
  CHECK(r.err.find("scan step") != std::string::npos);

  r = call({"boundary", "--epsilon", "0.25", "--kappa", "0.1", "--resolution", "1e-3", "--jobs",
            "4", "--json"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  const double lo = j["delta_lo"], hi = j["delta_hi"];
  CHECK(lo >= 0.13);
  CHECK(hi <= 0.14);
  CHECK(hi - lo <= 1e-3);
  CHECK(j["relative_gap"].get<double>() >= 0.0);

  r = call({"boundary", "--epsilon", "0.25", "--kappa", "0.1", "--tol", "1e-15"});
  CHECK(r.code == 3);
}
