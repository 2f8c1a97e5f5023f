#ifndef NCST_LIEALG_HPP
#define NCST_LIEALG_HPP

#include "ncst/exact.hpp"

#include <json.hpp>

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncst {

/// Linear combination of generators: generator index -> coefficient.
using LinComb = std::map<int, Coeff>;

inline void lc_add(LinComb& acc, int g, const Coeff& c) {
  if (c.is_zero()) return;
  auto it = acc.find(g);
  if (it == acc.end()) {
    acc.emplace(g, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) acc.erase(it);
  }
}

inline void lc_add(LinComb& acc, const LinComb& v, const Coeff& scale = Coeff(1)) {
  for (const auto& [g, c] : v) lc_add(acc, g, c * scale);
}

inline LinComb lc_scale(const LinComb& v, const Coeff& s) {
  LinComb r;
  lc_add(r, v, s);
  return r;
}

inline std::string lc_str(const LinComb& v, const std::vector<std::string>& labels) {
  if (v.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [g, c] : v) {
    if (!first) s += " + ";
    first = false;
    s += "(" + c.str() + ")*" + labels.at(static_cast<std::size_t>(g));
  }
  return s;
}

/// Indices into the shared generator order of the deformed algebra.
namespace gen {
constexpr int kCount = 15;
constexpr int kP0 = 6;
constexpr int kX0 = 10;
constexpr int kI = 14;

inline int p(int mu) { return kP0 + mu; }
inline int x(int mu) { return kX0 + mu; }

/// Index of M_{mu nu} for mu < nu, both in 0..3.
inline int m_index(int mu, int nu) {
  static constexpr std::array<std::array<int, 4>, 4> table{{
      {-1, 0, 1, 2},
      {0, -1, 3, 4},
      {1, 3, -1, 5},
      {2, 4, 5, -1},
  }};
  if (mu == nu) throw std::invalid_argument("m_index: equal indices");
  return table[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)];
}

/// Pair (mu, nu) with mu < nu for an M generator index in 0..5.
inline std::pair<int, int> m_pair(int idx) {
  static constexpr std::array<std::pair<int, int>, 6> pairs{
      {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  return pairs.at(static_cast<std::size_t>(idx));
}

inline std::vector<std::string> labels() {
  return {"M01", "M02", "M03", "M12", "M13", "M23", "p0", "p1",
          "p2",  "p3",  "x0",  "x1",  "x2",  "x3",  "I"};
}

inline int label_index(const std::string& s) {
  auto l = labels();
  for (std::size_t k = 0; k < l.size(); ++k)
    if (l[k] == s) return static_cast<int>(k);
  throw std::invalid_argument("unknown generator label: " + s);
}

/// Minkowski metric diagonal entry, eta = (1,-1,-1,-1).
inline int eta(int mu) { return mu == 0 ? 1 : -1; }
}  // namespace gen

/// Antisymmetric M_{ab} stored on a < b: returns the signed generator.
/// Used with a general index table so the same code serves so(p,q).
struct MIndexer {
  std::vector<std::vector<int>> idx;  // idx[a][b] for a < b, -1 on diagonal

  explicit MIndexer(int n) : idx(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), -1)) {
    int k = 0;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        idx[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = k;
        idx[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = k;
        ++k;
      }
  }
  /// Adds c * M_{ab} to acc (M_{aa} = 0, M_{ba} = -M_{ab}).
  void add(LinComb& acc, int a, int b, const Coeff& c) const {
    if (a == b) return;
    int g = idx[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    lc_add(acc, g, a < b ? c : -c);
  }
};

/// [M_ab, M_cd] = i(-M_bd eta_ac - M_ac eta_bd + M_bc eta_ad + M_ad eta_bc).
inline LinComb so_bracket(const MIndexer& ix, const std::vector<int>& eta, int a, int b, int c,
                          int d) {
  LinComb r;
  auto e = [&](int u, int v) { return u == v ? eta[static_cast<std::size_t>(u)] : 0; };
  Coeff I = Coeff::i();
  if (int s = e(a, c)) ix.add(r, b, d, -s * I);
  if (int s = e(b, d)) ix.add(r, a, c, -s * I);
  if (int s = e(a, d)) ix.add(r, b, c, s * I);
  if (int s = e(b, c)) ix.add(r, a, d, s * I);
  return r;
}

struct LieAlgebraSpec {
  std::vector<std::string> generators;
  std::vector<std::vector<LinComb>> structure;  // structure[a][b] = [g_a, g_b]
  int eps = -1;
  int eps_prime = 1;

  std::size_t dim() const { return generators.size(); }
  const LinComb& bracket(int a, int b) const {
    return structure.at(static_cast<std::size_t>(a)).at(static_cast<std::size_t>(b));
  }
  void set(int a, int b, const LinComb& v) {
    structure[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = v;
    structure[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = lc_scale(v, Coeff(-1));
  }
  /// Bilinear extension of the bracket.
  LinComb bracket(const LinComb& u, const LinComb& v) const {
    LinComb r;
    for (const auto& [a, ca] : u)
      for (const auto& [b, cb] : v) lc_add(r, bracket(a, b), ca * cb);
    return r;
  }
};

namespace detail {
inline LieAlgebraSpec empty_spec(std::vector<std::string> labels) {
  LieAlgebraSpec s;
  std::size_t n = labels.size();
  s.generators = std::move(labels);
  s.structure.assign(n, std::vector<LinComb>(n));
  return s;
}

/// Fills the relations of the deformed algebra; `deform` = false gives R0.
inline LieAlgebraSpec build_family(int eps, int eps_prime, bool deform) {
  using namespace gen;
  LieAlgebraSpec s = empty_spec(labels());
  s.eps = eps;
  s.eps_prime = eps_prime;
  MIndexer ix(4);
  std::vector<int> eta4{1, -1, -1, -1};
  Coeff I = Coeff::i();

  for (int m = 0; m < 6; ++m)
    for (int n = m + 1; n < 6; ++n) {
      auto [a, b] = m_pair(m);
      auto [c, d] = m_pair(n);
      s.set(m, n, so_bracket(ix, eta4, a, b, c, d));
    }
  // [M_{mu nu}, v_lambda] = i(v_mu eta_{nu lambda} - v_nu eta_{mu lambda}) for v = p, x.
  for (int m = 0; m < 6; ++m) {
    auto [mu, nu] = m_pair(m);
    for (int lam = 0; lam < 4; ++lam) {
      for (int base : {kP0, kX0}) {
        LinComb r;
        if (nu == lam) lc_add(r, base + mu, eta(nu) * I);
        if (mu == lam) lc_add(r, base + nu, -eta(mu) * I);
        s.set(m, base + lam, r);
      }
    }
  }
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      LinComb r;
      if (mu == nu) lc_add(r, kI, eta(mu) * I);
      s.set(p(mu), x(nu), r);
    }
    if (!deform) continue;
    for (int nu = mu + 1; nu < 4; ++nu) {
      s.set(p(mu), p(nu), LinComb{{m_index(mu, nu), -eps_prime * I * Coeff::rinv(2)}});
      s.set(x(mu), x(nu), LinComb{{m_index(mu, nu), -eps * I * Coeff::ell(2)}});
    }
    s.set(p(mu), kI, LinComb{{x(mu), -eps_prime * I * Coeff::rinv(2)}});
    s.set(x(mu), kI, LinComb{{p(mu), eps * I * Coeff::ell(2)}});
  }
  return s;
}
}  // namespace detail

/// Undeformed algebra with central I.
inline LieAlgebraSpec build_r0() { return detail::build_family(-1, 1, false); }

/// Two-parameter deformation with l and 1/R kept symbolic.
inline LieAlgebraSpec build_deformed(int eps, int eps_prime) {
  if ((eps != 1 && eps != -1) || (eps_prime != 1 && eps_prime != -1))
    throw std::invalid_argument("build_deformed: signs must be +1 or -1");
  return detail::build_family(eps, eps_prime, true);
}

/// so(p,q) in the M_ab basis, labels M01..M45 for a length-6 signature.
inline LieAlgebraSpec build_pseudo_orthogonal(const std::vector<int>& sig) {
  if (sig.size() != 5 && sig.size() != 6)
    throw std::invalid_argument("build_pseudo_orthogonal: signature length must be 5 or 6");
  for (int v : sig)
    if (v != 1 && v != -1) throw std::invalid_argument("build_pseudo_orthogonal: entries must be +-1");
  int n = static_cast<int>(sig.size());
  std::vector<std::string> labels;
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      labels.push_back("M" + std::to_string(a) + std::to_string(b));
      pairs.emplace_back(a, b);
    }
  LieAlgebraSpec s = detail::empty_spec(labels);
  if (n == 6) {
    s.eps_prime = sig[4];
    s.eps = sig[5];
  }
  MIndexer ix(n);
  for (std::size_t u = 0; u < pairs.size(); ++u)
    for (std::size_t v = u + 1; v < pairs.size(); ++v)
      s.set(static_cast<int>(u), static_cast<int>(v),
            so_bracket(ix, sig, pairs[u].first, pairs[u].second, pairs[v].first, pairs[v].second));
  return s;
}

struct JacobiReport {
  std::size_t triples_checked = 0;
  std::size_t nonzero_triples = 0;
  std::size_t antisymmetry_violations = 0;
  std::string first_residual = "0";  // symbolic residual of the first failing triple

  bool ok() const { return nonzero_triples == 0 && antisymmetry_violations == 0; }
};

/// Exact Jacobi sweep over all triples a < b < c plus the antisymmetry check.
inline JacobiReport check_jacobi(const LieAlgebraSpec& alg) {
  JacobiReport rep;
  int n = static_cast<int>(alg.dim());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      LinComb sum = alg.bracket(a, b);
      lc_add(sum, alg.bracket(b, a));
      if (!sum.empty()) ++rep.antisymmetry_violations;
    }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        LinComb r = alg.bracket(alg.bracket(a, b), LinComb{{c, Coeff(1)}});
        lc_add(r, alg.bracket(alg.bracket(b, c), LinComb{{a, Coeff(1)}}));
        lc_add(r, alg.bracket(alg.bracket(c, a), LinComb{{b, Coeff(1)}}));
        ++rep.triples_checked;
        if (!r.empty()) {
          if (rep.nonzero_triples == 0)
            rep.first_residual = alg.generators[static_cast<std::size_t>(a)] + "," +
                                 alg.generators[static_cast<std::size_t>(b)] + "," +
                                 alg.generators[static_cast<std::size_t>(c)] + ": " +
                                 lc_str(r, alg.generators);
          ++rep.nonzero_triples;
        }
      }
  return rep;
}

/// Applies l -> 0 and 1/R -> 0 to every structure coefficient.
inline LieAlgebraSpec contraction_limit(const LieAlgebraSpec& alg) {
  LieAlgebraSpec s = alg;
  for (auto& row : s.structure)
    for (auto& v : row) {
      LinComb r;
      for (const auto& [g, c] : v) lc_add(r, g, c.ell_to_zero().rinv_to_zero());
      v = r;
    }
  return s;
}

/// Applies only 1/R -> 0, giving the algebra at infinite radius.
inline LieAlgebraSpec contraction_limit_rinv(const LieAlgebraSpec& alg) {
  LieAlgebraSpec s = alg;
  for (auto& row : s.structure)
    for (auto& v : row) {
      LinComb r;
      for (const auto& [g, c] : v) lc_add(r, g, c.rinv_to_zero());
      v = r;
    }
  return s;
}

inline bool same_structure(const LieAlgebraSpec& a, const LieAlgebraSpec& b) {
  return a.generators == b.generators && a.structure == b.structure;
}

/// How the unit I is mapped into so(p,q).  Consistent uses I = (l/R) M_54;
/// AsPrinted uses I = (l/R) M_45; FlippedX additionally negates the x map.
enum class EmbeddingVariant { Consistent, AsPrinted, FlippedX };

struct EmbeddingReport {
  std::size_t pairs_checked = 0;
  std::size_t nonzero_pairs = 0;
  std::vector<std::pair<std::string, std::string>> residuals;  // (pair, residual) when nonzero

  bool ok() const { return nonzero_pairs == 0; }
};

/// Image of a deformed-algebra generator in so(6) with signature (1,-1,-1,-1,eps',eps).
inline LinComb embed_generator(int g, EmbeddingVariant v) {
  using namespace gen;
  MIndexer ix(6);
  LinComb r;
  if (g < 6) {
    auto [mu, nu] = m_pair(g);
    ix.add(r, mu, nu, Coeff(1));
  } else if (g < kX0) {
    ix.add(r, g - kP0, 4, Coeff::rinv());
  } else if (g < kI) {
    Coeff c = v == EmbeddingVariant::FlippedX ? -Coeff::ell() : Coeff::ell();
    ix.add(r, g - kX0, 5, c);
  } else {
    Coeff lr = Coeff::ell() * Coeff::rinv();
    if (v == EmbeddingVariant::AsPrinted) ix.add(r, 4, 5, lr);
    else ix.add(r, 5, 4, lr);
  }
  return r;
}

/// Compares [phi(a), phi(b)] in so(6) with phi([a, b]) for all pairs a <= b.
inline EmbeddingReport check_embedding(int eps, int eps_prime,
                                       EmbeddingVariant variant = EmbeddingVariant::Consistent) {
  LieAlgebraSpec def = build_deformed(eps, eps_prime);
  LieAlgebraSpec so6 = build_pseudo_orthogonal({1, -1, -1, -1, eps_prime, eps});
  std::vector<LinComb> img;
  for (int g = 0; g < gen::kCount; ++g) img.push_back(embed_generator(g, variant));
  EmbeddingReport rep;
  for (int a = 0; a < gen::kCount; ++a)
    for (int b = a; b < gen::kCount; ++b) {
      LinComb lhs = so6.bracket(img[static_cast<std::size_t>(a)], img[static_cast<std::size_t>(b)]);
      for (const auto& [g, c] : def.bracket(a, b)) lc_add(lhs, img[static_cast<std::size_t>(g)], -c);
      ++rep.pairs_checked;
      if (!lhs.empty()) {
        ++rep.nonzero_pairs;
        rep.residuals.emplace_back(def.generators[static_cast<std::size_t>(a)] + "," +
                                       def.generators[static_cast<std::size_t>(b)],
                                   lc_str(lhs, so6.generators));
      }
    }
  return rep;
}

/// Generator list followed by sparse (a, b, target, coefficient) triples with a < b.
inline nlohmann::json to_json(const LieAlgebraSpec& alg) {
  nlohmann::json j;
  j["generators"] = alg.generators;
  j["eps"] = alg.eps;
  j["eps_prime"] = alg.eps_prime;
  nlohmann::json triples = nlohmann::json::array();
  int n = static_cast<int>(alg.dim());
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (const auto& [g, c] : alg.bracket(a, b))
        triples.push_back({alg.generators[static_cast<std::size_t>(a)],
                           alg.generators[static_cast<std::size_t>(b)],
                           alg.generators[static_cast<std::size_t>(g)], c.str()});
  j["structure"] = triples;
  return j;
}

}  // namespace ncst

#endif
