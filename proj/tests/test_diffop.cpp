#include "ncst/diffop.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace ncst;

TEST_CASE("generator images") {
  Coeff I = Coeff::i();
  CHECK(m5_rep("p0", -1) == I * PolyDiffOp::d(0));
  CHECK(m5_rep("I", -1) == PolyDiffOp(Coeff(1)) + (I * Coeff::ell()) * PolyDiffOp::d(4));
  // xi_0 = xi^0, xi_1 = -xi^1
  PolyDiffOp m01 = I * (PolyDiffOp::xi(0) * PolyDiffOp::d(1) + PolyDiffOp::xi(1) * PolyDiffOp::d(0));
  CHECK(m5_rep("M01", -1) == m01);
  CHECK_THROWS(m5_rep("q7", -1));
}

TEST_CASE("Leibniz rule of composition") {
  CHECK(op_commutator(PolyDiffOp::d(0), PolyDiffOp::xi(0)) == PolyDiffOp(Coeff(1)));
  CHECK(op_commutator(PolyDiffOp::d(0), PolyDiffOp::xi(1)).is_zero());
  // d^2 xi^2 = xi^2 d^2 + 4 xi d + 2
  PolyDiffOp d2 = PolyDiffOp::d(2) * PolyDiffOp::d(2);
  PolyDiffOp x2 = PolyDiffOp::xi(2) * PolyDiffOp::xi(2);
  PolyDiffOp expect = x2 * d2 + Coeff(4) * (PolyDiffOp::xi(2) * PolyDiffOp::d(2)) + PolyDiffOp(Coeff(2));
  CHECK(d2 * x2 == expect);
}

TEST_CASE("selected commutators of the representation") {
  for (int eps : {-1, 1}) {
    CHECK(op_commutator(m5_rep("p0", eps), m5_rep("x0", eps)) == Coeff::i() * m5_rep("I", eps));
    CHECK(op_commutator(m5_rep("x0", eps), m5_rep("x1", eps)) ==
          (Coeff(-eps) * Coeff::i() * Coeff::ell(2)) * m5_rep("M01", eps));
  }
}

TEST_CASE("full table is reproduced for both signs") {
  for (int eps : {-1, 1}) {
    auto rep = verify_m5_rep(eps);
    CHECK(rep.pairs_checked == 120);
    CHECK(rep.ok());
  }
}

TEST_CASE("dropping the unit from I is detected") {
  std::vector<PolyDiffOp> img;
  for (int g = 0; g < gen::kCount; ++g) img.push_back(m5_rep(g, -1));
  img[gen::kI] = (Coeff::i() * Coeff::ell()) * PolyDiffOp::d(4);
  auto rep = verify_m5_rep(-1, img);
  CHECK_FALSE(rep.ok());
  bool px = false;
  for (const auto& f : rep.failures)
    if (f.first == "p0,x0") px = true;
  CHECK(px);
}

TEST_CASE("commutator is a Lie bracket on random operators") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> small(-2, 2), idx(0, 4), coin(0, 1);
  auto random_op = [&] {
    PolyDiffOp r;
    for (int t = 0; t < 3; ++t) {
      PolyDiffOp term(Coeff(small(rng)));
      for (int f = 0; f < 2; ++f)
        term = term * (coin(rng) ? PolyDiffOp::xi(idx(rng)) : PolyDiffOp::d(idx(rng)));
      r += term;
    }
    return r;
  };
  for (int k = 0; k < 20; ++k) {
    PolyDiffOp a = random_op(), b = random_op(), c = random_op();
    CHECK(op_commutator(a, b) == Coeff(-1) * op_commutator(b, a));
    PolyDiffOp jac = op_commutator(op_commutator(a, b), c) + op_commutator(op_commutator(b, c), a) +
                     op_commutator(op_commutator(c, a), b);
    CHECK(jac.is_zero());
    CHECK((a * b) * c == a * (b * c));
  }
}

TEST_CASE("gamma matrices") {
  auto g = gamma_set();
  CHECK(clifford_violations(g) == 0);
  auto bad = g;
  bad[4] = Coeff(-1) * bad[4] * bad[0];
  CHECK(clifford_violations(bad) > 0);
}

TEST_CASE("Dirac commutators") {
  auto com = dirac_commutators();
  auto g = gamma_set();
  CHECK(com[static_cast<std::size_t>(gen::p(0))].is_zero());
  CHECK(com[gen::kI].is_zero());
  for (int mu = 0; mu < 4; ++mu) {
    PolyDiffOp expect =
        PolyDiffOp::matrix(Coeff(gen::eta(mu)) * Coeff::i() * g[static_cast<std::size_t>(mu)]) * m5_rep("I", -1) +
        PolyDiffOp::matrix(Coeff::i() * g[4]) * (Coeff::ell() * m5_rep(gen::p(mu), -1));
    CHECK(com[static_cast<std::size_t>(gen::x(mu))] == expect);
  }
}

TEST_CASE("printer is deterministic") {
  std::string a = m5_rep("x2", -1).str();
  std::string b = m5_rep("x2", -1).str();
  CHECK(a == b);
  CHECK(m5_rep("p0", -1).str() == "i d0^1");
  CHECK(PolyDiffOp().str() == "0");
}
