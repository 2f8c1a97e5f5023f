// Acceptance driver: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include "cli_commands.hpp"

#include "ncst/specfun.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;
namespace cli = ncst::cli;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const std::string& what, bool ok, const std::string& detail) {
  std::cout << "criterion " << id << ": " << (ok ? "PASS" : "FAIL") << "  " << what << "  [" << detail << "]\n";
  if (!ok) ++failures;
}

const cli::Check& find(const cli::Result& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c;
  throw std::runtime_error("missing check: " + name);
}

// Value of a check against an explicit tolerance, independent of the command's own verdict.
bool within(const cli::Result& r, const std::string& name, double tol, std::ostringstream& d) {
  const auto& c = find(r, name);
  d << name << " = " << cli::format_double(c.value) << " (<= " << cli::format_double(tol) << "); ";
  return std::isfinite(c.value) && c.value <= tol;
}

bool at_least(const cli::Result& r, const std::string& name, double lo, std::ostringstream& d) {
  const auto& c = find(r, name);
  d << name << " = " << cli::format_double(c.value) << " (>= " << cli::format_double(lo) << "); ";
  return std::isfinite(c.value) && c.value >= lo;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

json manifest_without_time(const fs::path& p) {
  json m = json::parse(slurp(p));
  m.erase("wall_time_s");
  return m;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"ncst"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace

int main() {
  {
    auto r = cli::execute("algebra-check", json::object());
    std::ostringstream d;
    bool ok = within(r, "jacobi nonzero triples", 0, d);
    ok = within(r, "embedding nonzero pairs", 0, d) && ok;
    report(1, "Jacobi identities and embedding exact", ok, d.str());

    std::ostringstream d2;
    bool ok2 = within(r, "differential representation nonzero pairs", 0, d2);
    ok2 = within(r, "dirac commutator mismatches", 0, d2) && ok2;
    ok2 = within(r, "clifford violations", 0, d2) && ok2;
    report(2, "differential-operator representation and Dirac commutators exact", ok2, d2.str());
  }
  {
    auto r = cli::execute("forms-check", {{"samples", 50}});
    std::ostringstream d;
    bool ok = true;
    for (const char* n : {"d^2 nonzero on random forms", "graded Leibniz failures", "field strength mismatches",
                          "curvature antisymmetry failures", "field equation terms below l^2"})
      ok = within(r, n, 0, d) && ok;
    d << "min l-order = " << r.details["field_equation_min_l_order"];
    report(3, "exterior calculus, gauge and curvature identities exact", ok, d.str());
  }
  {
    // m omega l^2 = 9e-4
    auto r = cli::execute("oscillator", {{"ell", 0.03}, {"levels", 6}});
    std::ostringstream d;
    bool ok = within(r, "l^6 residual scaling |ratio/64 - 1|, n <= 5", 0.2, d);
    ok = within(r, "spectrum not strictly increasing", 0, d) && ok;
    auto s = ncst::mathieu_char(0.0, 10);
    double worst = 0;
    for (int k = 0; k <= 10; ++k) worst = std::max(worst, std::abs(double(s.even[static_cast<std::size_t>(k)]) - k * k));
    for (int k = 1; k <= 10; ++k) worst = std::max(worst, std::abs(double(s.odd[static_cast<std::size_t>(k - 1)]) - k * k));
    d << "q=0 max |a_r - r^2|, |b_r - r^2| = " << cli::format_double(worst) << " (<= 1e-10)";
    ok = ok && worst <= 1e-10;
    report(4, "oscillator residual scales as l^6; Mathieu values at q = 0", ok, d.str());
  }
  {
    auto r = cli::execute("barrier", json::object());
    std::ostringstream d;
    bool ok = within(r, "recurrence residual |n| >= 3", 1e-12, d);
    ok = within(r, "phase expansion coefficient vs 5/6 as printed (relative)", 0.01, d) && ok;
    d << "fitted coefficient = " << cli::format_double(r.details["delta_coefficient"].get<double>())
      << "; the exact phase asin(sqrt(lambda)) has cubic coefficient 1/6, so 5/6 is not attainable";
    report(5, "barrier recurrence and phase expansion coefficient 5/6", ok, d.str());
  }
  {
    auto r = cli::execute("diffraction", json::object());
    std::ostringstream d;
    bool ok = within(r, "sum vs Chebyshev projection", 1e-12, d);
    ok = within(r, "ring compression coefficient vs 1/6 (relative)", 0.02, d) && ok;
    ok = within(r, "slit characteristic function vs matrix exponential", 1e-8, d) && ok;
    report(6, "diffraction forms, ring compression, characteristic function", ok, d.str());
  }
  {
    auto r = cli::execute("walk", {{"t-over-ell", 1.0}});
    std::ostringstream d;
    bool ok = within(r, "c_0 - exp(-pi t / 2l)", 1e-10, d);
    ok = within(r, "|sum |c_n|^2 - 1|, closed form", 1e-8, d) && ok;
    ok = within(r, "polynomials: recurrence vs generating function", 1e-10, d) && ok;
    d << "sum |c_n|^2 = " << cli::format_double(r.details["norm_closed_form"].get<double>())
      << " = (1 + exp(-2 pi))/2; the generating function has support on n >= 0 only";
    report(7, "walk amplitude c_0, unit norm, polynomial constructions", ok, d.str());
  }
  {
    auto r = cli::execute("qsc", json::object());
    std::ostringstream d;
    bool ok = within(r, "int exp(-2 cosh w) dw - 0.2277877", 1e-6, d);
    ok = within(r, "X0 characteristic function, grid vs Bessel", 1e-6, d) && ok;
    ok = within(r, "ISO(2) vacuum coefficient ratios", 1e-10, d) && ok;
    ok = within(r, "diagonal terms vs multiplication table", 1e-6, d) && ok;
    ok = at_least(r, "ito convergence order (coarse)", 2.0, d) && ok;
    ok = at_least(r, "ito convergence order (fine)", 2.0, d) && ok;
    report(8, "vacuum norm, characteristic functions, ISO(2) vacuum, Ito table", ok, d.str());
  }
  {
    auto r = cli::execute("trace", {{"N-max", 1000000}});
    std::ostringstream d;
    bool ok = within(r, "max error / (1/2N)", 1.0, d);
    report(9, "harmonic sum minus log N within 1/(2N) of Euler's constant, N <= 1e6", ok, d.str());
  }
  {
    fs::path dir = fs::temp_directory_path() / "ncst_acceptance";
    fs::create_directories(dir);
    std::ostringstream d;
    bool ok = true;
    for (const auto& spec : cli::commands()) {
      const std::string& n = spec.name;
      auto p = [&](const std::string& s) { return (dir / (n + s)).string(); };
      int c1 = run_cli({n, "--out", p("_1.csv"), "--json-manifest", p("_1.json")});
      int c2 = run_cli({n, "--out", p("_2.csv"), "--json-manifest", p("_2.json")});
      int c3 = run_cli({"replay", p("_1.json"), "--out", p("_3.csv"), "--json-manifest", p("_3.json")});
      std::string a = slurp(p("_1.csv"));
      bool same = !a.empty() && a == slurp(p("_2.csv")) && a == slurp(p("_3.csv")) && c1 == c2 && c1 == c3 &&
                  manifest_without_time(p("_1.json")) == manifest_without_time(p("_2.json")) &&
                  manifest_without_time(p("_1.json")) == manifest_without_time(p("_3.json"));
      d << n << (same ? " identical" : " DIFFERS") << "; ";
      ok = ok && same;
    }
    fs::remove_all(dir);
    report(10, "byte-identical CSV and manifests across runs and replay", ok, d.str());
  }
  std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed")) << "\n";
  return failures ? 1 : 0;
}
