#include "ncst/liealg.hpp"

#include <catch_amalgamated.hpp>

using namespace ncst;

namespace {
LinComb single(int g, const Coeff& c) { return LinComb{{g, c}}; }
}  // namespace

TEST_CASE("r0 brackets") {
  auto r0 = build_r0();
  REQUIRE(r0.dim() == 15);
  CHECK(r0.bracket(gen::p(0), gen::x(0)) == single(gen::kI, Coeff::i()));
  CHECK(r0.bracket(gen::p(1), gen::x(1)) == single(gen::kI, -Coeff::i()));
  CHECK(r0.bracket(gen::x(0), gen::x(1)).empty());
  for (int g = 0; g < 15; ++g) CHECK(r0.bracket(g, gen::kI).empty());
}

TEST_CASE("deformed brackets") {
  for (int eps : {1, -1}) {
    auto d = build_deformed(eps, 1);
    CHECK(d.bracket(gen::x(0), gen::x(1)) ==
          single(gen::m_index(0, 1), -eps * Coeff::i() * Coeff::ell(2)));
    CHECK(d.bracket(gen::x(0), gen::kI) == single(gen::p(0), eps * Coeff::i() * Coeff::ell(2)));
  }
  CHECK_THROWS(build_deformed(2, 1));
}

TEST_CASE("M-M bracket matches the hand expansion") {
  // [M01, M02] = i(-M12 eta_00) = -i M12.
  auto d = build_deformed(-1, 1);
  CHECK(d.bracket(gen::m_index(0, 1), gen::m_index(0, 2)) ==
        single(gen::m_index(1, 2), -Coeff::i()));
  // [M12, M13] = i(-M23 eta_11) = i M23.
  CHECK(d.bracket(gen::m_index(1, 2), gen::m_index(1, 3)) ==
        single(gen::m_index(2, 3), Coeff::i()));
  CHECK(d.bracket(gen::m_index(0, 1), gen::m_index(2, 3)).empty());
}

TEST_CASE("pseudo-orthogonal algebra") {
  auto so = build_pseudo_orthogonal({1, -1, -1, -1, -1, -1});
  REQUIRE(so.dim() == 15);
  CHECK(so.generators.front() == "M01");
  CHECK(so.generators.back() == "M45");
  CHECK(so.bracket(0, 9).empty());  // M01, M23
  CHECK(check_jacobi(so).ok());
  CHECK(check_jacobi(build_pseudo_orthogonal({1, -1, -1, -1, 1})).ok());
  CHECK_THROWS(build_pseudo_orthogonal({1, -1, -1}));
  CHECK_THROWS(build_pseudo_orthogonal({1, -1, -1, -1, 2}));
}

TEST_CASE("Jacobi identity holds for every sign choice") {
  CHECK(check_jacobi(build_r0()).ok());
  for (int e : {1, -1})
    for (int ep : {1, -1}) {
      auto rep = check_jacobi(build_deformed(e, ep));
      CHECK(rep.triples_checked == 455);
      CHECK(rep.ok());
    }
}

TEST_CASE("corrupted structure breaks Jacobi") {
  auto d = build_deformed(-1, 1);
  LinComb v = d.bracket(gen::x(0), gen::kI);
  lc_add(v, gen::p(0), Coeff(1));
  d.set(gen::x(0), gen::kI, v);
  auto rep = check_jacobi(d);
  CHECK_FALSE(rep.ok());
  CHECK(rep.first_residual != "0");
}

TEST_CASE("contraction limit reproduces r0") {
  for (int e : {1, -1})
    for (int ep : {1, -1}) {
      auto c = contraction_limit(build_deformed(e, ep));
      auto r0 = build_r0();
      CHECK(c.structure == r0.structure);
    }
}

TEST_CASE("embedding into so(6)") {
  for (int e : {1, -1})
    for (int ep : {1, -1}) {
      auto rep = check_embedding(e, ep);
      CHECK(rep.pairs_checked == 120);
      CHECK(rep.ok());
      CHECK_FALSE(check_embedding(e, ep, EmbeddingVariant::AsPrinted).ok());
      CHECK_FALSE(check_embedding(e, ep, EmbeddingVariant::FlippedX).ok());
    }
  // [M04/R, l M05] under the bracket convention equals i (l/R) M54.
  auto so = build_pseudo_orthogonal({1, -1, -1, -1, 1, -1});
  LinComb br = so.bracket(embed_generator(gen::p(0), EmbeddingVariant::Consistent),
                          embed_generator(gen::x(0), EmbeddingVariant::Consistent));
  LinComb expect = lc_scale(embed_generator(gen::kI, EmbeddingVariant::Consistent), Coeff::i());
  CHECK(br == expect);
}

TEST_CASE("json serialization") {
  auto j = to_json(build_deformed(-1, 1));
  CHECK(j["generators"].size() == 15);
  bool found = false;
  for (const auto& t : j["structure"])
    if (t[0] == "x0" && t[1] == "I") {
      found = true;
      CHECK(t[2] == "p0");
      CHECK(t[3] == "-i*l^2");
    }
  CHECK(found);
}
