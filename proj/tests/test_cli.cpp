#include "cli_commands.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using nlohmann::json;
using namespace ncst::cli;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
  std::vector<const char*> argv{"ncst"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("double formatting round-trips") {
  for (double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 6.02214076e23, 5e-324, std::exp(-std::numbers::pi / 2)}) {
    std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(NAN) == "nan");
  CHECK(format_double(-INFINITY) == "-inf");
}

TEST_CASE("parameter resolution") {
  json p = resolve_params("walk", {{"t-over-ell", 2}});
  CHECK(p["t-over-ell"].get<double>() == 2.0);
  CHECK(p["nmax"].get<long long>() == 200);
  CHECK(p["tol"].get<double>() == 1.0);
  CHECK_THROWS_AS(resolve_params("walk", {{"bogus", 1}}), std::invalid_argument);
  CHECK_THROWS_AS(resolve_params("walk", {{"nmax", 1.5}}), std::invalid_argument);
  CHECK_THROWS_AS(resolve_params("nothing", json::object()), std::invalid_argument);
  CHECK_THROWS_AS(resolve_params("walk", {{"tol", -1}}), std::domain_error);
  CHECK_THROWS_AS(execute("walk", {{"nmax", 0}}), std::domain_error);
  CHECK_THROWS_AS(execute("barrier", {{"lambda", 0.9}, {"V", 0.5}}), std::domain_error);
}

TEST_CASE("every subcommand passes its gating checks with defaults") {
  for (const auto& spec : commands()) {
    INFO(spec.name);
    Result r = execute(spec.name, json::object());
    CHECK(r.passed());
    CHECK_FALSE(r.checks.empty());
    CHECK(r.csv.find('\n') != std::string::npos);
  }
}

TEST_CASE("tolerance scale can force a failure") {
  Result r = execute("barrier", {{"tol", 1e-6}});
  CHECK_FALSE(r.passed());
}

TEST_CASE("walk output rows") {
  Result r = execute("walk", {{"nmax", 3}});
  std::istringstream in(r.csv);
  std::string header, row0;
  std::getline(in, header);
  std::getline(in, row0);
  CHECK(header == "n,P_n,c_re,c_im,prob,c_printed_abs,prob_printed");
  double c0 = std::stod(row0.substr(row0.find(',', 2) + 1));
  CHECK(std::abs(c0 - 0.2078795763507619) < 1e-15);
}

TEST_CASE("command line exit codes") {
  CHECK(invoke({"--no-such-flag"}).code == 2);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"walk", "--nmax", "abc"}).code == 2);
  CHECK(invoke({"walk", "--nmax", "0"}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
  CHECK(invoke({"barrier", "--tol", "1e-9"}).code == 1);
  auto ok = invoke({"walk", "--nmax", "4"});
  CHECK(ok.code == 0);
  CHECK(ok.out.rfind("n,P_n", 0) == 0);
  CHECK(ok.err.find("PASS walk") != std::string::npos);
  CHECK(invoke({"replay", "/nonexistent/manifest.json"}).code == 2);
}

TEST_CASE("manifest replay is byte identical") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "ncst_test_cli";
  fs::create_directories(dir);
  auto f = [&](const char* s) { return (dir / s).string(); };
  REQUIRE(invoke({"diffraction", "--N", "20", "--grid", "31", "--out", f("a.csv"), "--json-manifest", f("a.json")}).code == 0);
  REQUIRE(invoke({"replay", f("a.json"), "--out", f("b.csv"), "--json-manifest", f("b.json")}).code == 0);
  CHECK(slurp(f("a.csv")) == slurp(f("b.csv")));
  json a = json::parse(slurp(f("a.json"))), b = json::parse(slurp(f("b.json")));
  CHECK(a["parameters"]["N"] == 20);
  CHECK(a["parameters"]["grid"] == 31);
  CHECK(a.contains("wall_time_s"));
  a.erase("wall_time_s");
  b.erase("wall_time_s");
  CHECK(a == b);
  fs::remove_all(dir);
}
