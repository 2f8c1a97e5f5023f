#include "ncst/reps.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace ncst;

namespace {

double relation(const TruncatedRep& rep, const std::string& a, const std::string& b,
                std::vector<std::pair<std::string, cd>> rhs) {
  return relation_residual(rep, Relation{a, b, std::move(rhs)});
}

}  // namespace

TEST_CASE("circle representation actions") {
  const int N = 10;
  auto rep = iso2_circle(N, 2.0);
  for (int n = -N; n <= N; ++n) {
    CVec e = CVec::Zero(rep.dimension);
    e(circle_index(n, N)) = 1;
    CVec xe = rep.op("X") * e;
    CHECK((xe - double(n) * e).norm() < 1e-15);
    if (n > -N) {
      CVec v = rep.op("V+") * e;
      CHECK(std::abs(v(circle_index(n - 1, N)) - 2.0) < 1e-15);
      CVec w = (cd(0, 1) * rep.op("P") + rep.op("I")) * e;
      CHECK((v - w).norm() < 1e-15);
    }
  }
  CHECK(relation(rep, "P", "X", {{"I", cd(0, -1)}}) < 1e-12);
  CHECK(relation(rep, "I", "X", {{"P", cd(0, 1)}}) < 1e-12);
  CHECK(max_residual(residual_report(rep)) < 1e-12);
  for (auto n : {"X", "P", "I"}) CHECK(hermiticity_defect(rep, n) < 1e-15);
}

TEST_CASE("circle characteristic function is J0") {
  auto rep = iso2_circle(200, 1.0);
  std::vector<double> s;
  for (int k = 0; k <= 50; ++k) s.push_back(0.1 * k);
  auto st = momentum_statistics(rep, 0, s);
  CHECK(std::abs(st.characteristic[0] - 1.0) < 1e-12);
  double worst = 0;
  for (std::size_t k = 0; k < s.size(); ++k) worst = std::max(worst, std::abs(st.characteristic[k] - bessel_j(0, s[k])));
  CHECK(worst < 1e-8);
  auto small = iso2_circle(6, 1.0);
  CHECK_THROWS(momentum_statistics(small, 0, {30.0}));
}

TEST_CASE("arcsine law emerges as the truncation grows") {
  double prev = 1e9;
  for (int N : {10, 40, 160}) {
    auto st = momentum_statistics(iso2_circle(N, 1.0), 0, {});
    double l1 = arcsine_l1(st, 1.0, 8);
    CHECK(l1 < prev);
    prev = l1;
  }
  CHECK(prev < 0.05);
}

TEST_CASE("Parseval on the circle") {
  std::mt19937 rng(5);
  std::normal_distribution<double> g;
  std::vector<CVec> v;
  for (int t = 0; t < 5; ++t) {
    CVec c(2 * 8 + 1);
    for (int i = 0; i < c.size(); ++i) c(i) = cd(g(rng), g(rng));
    v.push_back(c);
  }
  CHECK(circle_parseval_defect(8, v) < 1e-12);
}

TEST_CASE("hyperbola: second-order convergence and continuous time spectrum") {
  auto coarse = iso11_hyperbola(201, 6.0);
  auto fine = iso11_hyperbola(401, 6.0);
  SpMat pi = coarse.op("P0") * coarse.op("I") - coarse.op("I") * coarse.op("P0");
  CHECK(pi.norm() == 0.0);
  double rc = relation(coarse, "X0", "I", {{"P0", cd(0, -1)}});
  double rf = relation(fine, "X0", "I", {{"P0", cd(0, -1)}});
  CHECK(rf < rc);
  CHECK(std::log2(rc / rf) > 1.8);
  double pc = relation(coarse, "X0", "P0", {{"I", cd(0, -1)}});
  double pf = relation(fine, "X0", "P0", {{"I", cd(0, -1)}});
  CHECK(std::log2(pc / pf) > 1.8);
  // same spacing h, longer domains: the smallest eigenvalue gap shrinks like 1/L
  double s1 = x0_min_spacing(iso11_hyperbola(201, 5.0));
  double s2 = x0_min_spacing(iso11_hyperbola(401, 10.0));
  double s3 = x0_min_spacing(iso11_hyperbola(801, 20.0));
  CHECK(s2 < 0.6 * s1);
  CHECK(s3 < 0.6 * s2);
}

TEST_CASE("cone C2 operators") {
  auto coarse = cone2_rep(cone2_grid(10, 16));
  auto fine = cone2_rep(cone2_grid(24, 32));
  // l p0 = r is diagonal
  const auto& p0 = fine.op("p0");
  CHECK(p0.nonZeros() == fine.dimension);
  CHECK(relation(fine, "x1", "p1", {{"I", cd(0, 1)}}) < 1e-6);
  CHECK(relation(fine, "x0", "x1", {{"M01", cd(0, 1)}}) < 1e-5);
  double rc = max_residual(residual_report(coarse));
  double rf = max_residual(residual_report(fine));
  CHECK(rf < rc);
  CHECK(rf < 1e-5);
}

TEST_CASE("cone C4 operators") {
  auto coarse = cone4_rep(cone4_grid(6, 8, 8, 8));
  auto fine = cone4_rep(cone4_grid(6, 8, 14, 14));
  for (auto a : {"p0", "p1", "p2", "p3", "I"})
    for (auto b : {"p0", "p1", "p2", "p3", "I"}) {
      SpMat c = fine.op(a) * fine.op(b) - fine.op(b) * fine.op(a);
      CHECK(c.norm() == 0.0);
    }
  double mc = relation(coarse, "M23", "M12", {{"M31", cd(0, -1)}});
  double mf = relation(fine, "M23", "M12", {{"M31", cd(0, -1)}});
  // M23 and M12 only touch theta1 and theta2, resolved at both sizes
  CHECK(mc < 1e-10);
  CHECK(mf < 1e-10);
  auto rc = residual_report(coarse);
  auto rf = residual_report(fine);
  REQUIRE(rf.size() == 105);
  CHECK(max_residual(rf) < max_residual(rc));
  CHECK(max_residual(rf) < 1e-3);
}

TEST_CASE("cone C4 measure quadrature") {
  auto cg = cone4_grid(8, 8, 16, 16, {0.0, std::numbers::pi}, {0.0, std::numbers::pi});
  auto w = cone4_measure_weights(cg);
  // int r^2 dr over [0.5, 1.5] * 2 pi * int sin = 2 * int sin^2 = pi / 2
  double exact = (std::pow(1.5, 3) - std::pow(0.5, 3)) / 3 * 2 * std::numbers::pi * 2 * std::numbers::pi / 2;
  CHECK(std::abs(w.sum() - exact) < 1e-12);
  double mom = 0;
  for (int p = 0; p < cg.grid.size(); ++p) {
    auto x = cg.grid.point(p);
    mom += w(p) * x[0] * x[0] * std::cos(x[1]) * std::cos(x[1]);
  }
  double exact2 = (std::pow(1.5, 5) - std::pow(0.5, 5)) / 5 * std::numbers::pi * 2 * std::numbers::pi / 2;
  CHECK(std::abs(mom - exact2) < 1e-12);
}

TEST_CASE("Heisenberg dual coordinates on the cone") {
  const std::pair<double, double> t3{0.4, 1.2};
  auto coarse = heisenberg_dual_check(cone4_rep(cone4_grid(6, 8, 8, 8, {0.6, 2.5}, t3)));
  auto fine = heisenberg_dual_check(cone4_rep(cone4_grid(14, 8, 14, 14, {0.6, 2.5}, t3)));
  CHECK(fine.residual < coarse.residual);
  CHECK(fine.entries[0][0] < 1e-6);
  CHECK(fine.entries[0][1] < 1e-6);
  CHECK(fine.residual < 1e-4);
}

TEST_CASE("trace sequences") {
  const double euler = 0.5772156649015329;
  for (std::size_t N : {10u, 1000u, 100000u}) CHECK(std::abs(harmonic_minus_log(N) - euler) < 1.0 / (2.0 * N));
  std::vector<double> mu(1000000);
  for (std::size_t n = 0; n < mu.size(); ++n) mu[n] = 1.0 / static_cast<double>(n + 1);
  double g3 = dixmier_sequence(mu, 1000), g6 = dixmier_sequence(mu, 1000000);
  CHECK(std::abs(g6 - 1) < std::abs(g3 - 1));
  CHECK(std::abs(g6 - 1 - euler / std::log(1e6)) < 1e-6);
  CHECK(trace_integral([](int c) { return CMat::Zero(c, c).eval(); }, 7) == cd(0));
  CHECK(std::abs(circle_trace([](double x) { return std::exp(-x * x); }, 40) - std::sqrt(std::numbers::pi)) < 1e-3);
}
