#include "ncst/envelope.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace ncst;

TEST_CASE("basic commutators") {
  for (int eps : {-1, 1}) {
    const Envelope& env = Envelope::standard(eps);
    CHECK(commutator(env.x(0), env.x(1)) == (Coeff(-eps) * Coeff::i() * Coeff::ell(2)) * env.M(0, 1));
    CHECK(commutator(env.p(0), env.x(0)) == Coeff::i() * env.ipow(1));
    CHECK(commutator(env.p(2), env.x(2)) == -Coeff::i() * env.ipow(1));
    CHECK(commutator(env.x(3), env.ipow(1)) == (Coeff(eps) * Coeff::i() * Coeff::ell(2)) * env.p(3));
  }
  const Envelope& env = Envelope::standard(-1);
  CHECK(commutator(env.x(0), env.x(1)) == (Coeff::i() * Coeff::ell(2)) * env.M(0, 1));
}

TEST_CASE("normal form ordering") {
  const Envelope& env = Envelope::standard(-1);
  // x0 p0 = p0 x0 - i I
  NcElement xp = env.x(0) * env.p(0);
  NcElement expect = env.p(0) * env.x(0) - Coeff::i() * env.ipow(1);
  CHECK(xp == expect);
  CHECK(xp.terms().size() == 2);
  CHECK((env.ipow(1) * env.ipow(-1)) == env.one());
  CHECK((env.ipow(-2) * env.ipow(3)) == env.ipow(1));
}

TEST_CASE("unit law and associativity on random elements") {
  const Envelope& env = Envelope::standard(-1);
  std::mt19937 rng(2024);
  for (int t = 0; t < 100; ++t) {
    NcElement a = random_element(env, rng, 2, 2);
    NcElement b = random_element(env, rng, 2, 2);
    NcElement c = random_element(env, rng, 2, 2);
    CHECK(env.one() * a == a);
    CHECK(a * env.one() == a);
    CHECK((a * b) * c == a * (b * c));
  }
}

TEST_CASE("commutators with the inverse of I") {
  for (int eps : {-1, 1}) {
    const Envelope& env = Envelope::standard(eps);
    NcElement inv = env.ipow(-1);
    CHECK(commutator(env.p(0), inv).is_zero());
    CHECK(commutator(env.x(0), inv) == (Coeff(-eps) * Coeff::i() * Coeff::ell(2)) * (env.p(0) * env.ipow(-2)));
    // Heisenberg dual coordinate: [p_mu, y^nu] = i delta
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) {
        NcElement c = commutator(env.p(mu), heisenberg_dual(env, nu));
        CHECK(c == (mu == nu ? Coeff::i() * env.one() : env.scalar(Coeff(0))));
      }
  }
}

TEST_CASE("derivations on generators") {
  const Envelope& env = Envelope::standard(-1);
  CHECK(env.derive(Derivation::D0, env.x(0)) == env.ipow(1));
  CHECK(env.derive(Derivation::D1, env.x(1)) == -env.ipow(1));
  CHECK(env.derive(Derivation::D4, env.x(0)) == Coeff::ell() * env.p(0));
  CHECK(env.derive(Derivation::D4, env.p(0)).is_zero());
  CHECK(env.derive(Derivation::Dilation, env.p(0)) == env.p(0));
  CHECK(env.derive(Derivation::Dilation, env.ipow(3)) == Coeff(3) * env.ipow(3));
  CHECK(env.derive(Derivation::D2, env.ipow(-1)).is_zero());
  // d_sigma(M_{mu nu}) = eta_{sigma mu} p_nu - eta_{sigma nu} p_mu
  CHECK(env.derive(Derivation::D0, env.M(0, 1)) == env.p(1));
  CHECK(env.derive(Derivation::D1, env.M(0, 1)) == env.p(0));
}

TEST_CASE("derivations satisfy Leibniz and commute") {
  for (int eps : {-1, 1}) {
    const Envelope& env = Envelope::standard(eps);
    std::mt19937 rng(99 + eps);
    for (int t = 0; t < 30; ++t) {
      NcElement a = random_element(env, rng, 2, 2);
      NcElement b = random_element(env, rng, 2, 2);
      for (int d = 0; d < 6; ++d) {
        Derivation D = derivation_from_index(d);
        CHECK(env.derive(D, a * b) == env.derive(D, a) * b + a * env.derive(D, b));
      }
    }
    for (int g = 0; g < gen::kCount; ++g)
      for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b) {
          auto Da = derivation_from_index(a), Db = derivation_from_index(b);
          CHECK(env.derive(Da, env.derive(Db, env.generator(g))) ==
                env.derive(Db, env.derive(Da, env.generator(g))));
        }
  }
}

TEST_CASE("derivations respect the defining relations") {
  for (int eps : {-1, 1}) {
    const Envelope& env = Envelope::standard(eps);
    const auto& alg = env.algebra();
    for (int d = 0; d < 6; ++d) {
      Derivation D = derivation_from_index(d);
      for (int a = 0; a < gen::kCount; ++a)
        for (int b = 0; b < gen::kCount; ++b) {
          NcElement ga = env.generator(a), gb = env.generator(b);
          NcElement lhs = commutator(env.derive(D, ga), gb) + commutator(ga, env.derive(D, gb));
          NcElement rhs = env.derive(D, env.from_lincomb(alg.bracket(a, b)));
          CHECK(lhs == rhs);
        }
    }
  }
}

TEST_CASE("plane wave commutator through finite order") {
  const Envelope& env = Envelope::standard(-1);
  std::array<Rational, 4> k1{Rational(1), Rational(0), Rational(0), Rational(0)};
  for (int order = 0; order <= 3; ++order) {
    auto rep = planewave_commutator_order(env, k1, order);
    CHECK(rep.ok());
  }
  auto printed = planewave_commutator_order(env, k1, 1);
  CHECK_FALSE(printed.printed_residual[0].is_zero());
  std::array<Rational, 4> k2{Rational(1, 3), Rational(-2, 5), Rational(3, 7), Rational(1, 2)};
  CHECK(planewave_commutator_order(env, k2, 2).ok());
  CHECK_THROWS(planewave_commutator_order(env, k2, 5));
}

TEST_CASE("ell order bookkeeping") {
  const Envelope& env = Envelope::standard(-1);
  CHECK(ell_order(env.derive(Derivation::D4, env.x(0))) == 1);
  CHECK(ell_order(commutator(env.x(0), env.x(1))) == 2);
  CHECK(ell_order(env.p(0)) == 0);
  CHECK_THROWS(ell_order(env.scalar(Coeff(0))));
}

TEST_CASE("text form is stable") {
  const Envelope& env = Envelope::standard(-1);
  CHECK((env.x(0) * env.p(0)).str() == "(-i)*I^1 + (1)*p0*x0");
  CHECK(env.scalar(Coeff(0)).str() == "0");
}
