#ifndef NCST_ENVELOPE_HPP
#define NCST_ENVELOPE_HPP

#include "ncst/liealg.hpp"

#include <array>
#include <compare>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace ncst {

/// PBW monomial: exponents of M01..M23, p0..p3, x0..x3 (in that order)
/// followed by an integer power of I.  Negative powers encode I^-1.
struct Mono {
  std::array<int, 14> e{};
  int ipow = 0;

  auto operator<=>(const Mono&) const = default;
  bool operator==(const Mono&) const = default;

  int degree() const {
    int d = 0;
    for (int v : e) d += v;
    return d;
  }
  /// Highest generator index present, or -1.
  int last_letter() const {
    for (int g = 13; g >= 0; --g)
      if (e[static_cast<std::size_t>(g)] > 0) return g;
    return -1;
  }
  /// Letters in PBW order, with multiplicity.
  std::vector<int> letters() const {
    std::vector<int> l;
    for (int g = 0; g < 14; ++g)
      for (int k = 0; k < e[static_cast<std::size_t>(g)]; ++k) l.push_back(g);
    return l;
  }
};

class Envelope;

/// Element of the enveloping algebra in PBW normal form.  Products need the
/// commutation table, reached through the attached Envelope; elements built
/// from scalars alone carry no context until combined with one that does.
class NcElement {
 public:
  NcElement() = default;
  NcElement(long long c) : NcElement(Coeff(c)) {}
  NcElement(const Coeff& c) {
    if (!c.is_zero()) terms_.emplace(Mono{}, c);
  }

  const std::map<Mono, Coeff>& terms() const { return terms_; }
  const Envelope* env() const { return env_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Mono& m, const Coeff& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_.emplace(m, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  NcElement operator-() const {
    NcElement r;
    r.env_ = env_;
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
  }
  NcElement& operator+=(const NcElement& o) {
    adopt(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  NcElement& operator-=(const NcElement& o) {
    adopt(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend NcElement operator+(NcElement a, const NcElement& b) { return a += b; }
  friend NcElement operator-(NcElement a, const NcElement& b) { return a -= b; }
  friend NcElement operator*(const Coeff& s, const NcElement& a) {
    NcElement r;
    r.env_ = a.env_;
    for (const auto& [m, c] : a.terms_) r.add_term(m, s * c);
    return r;
  }
  friend NcElement operator*(const NcElement& a, const NcElement& b);
  NcElement& operator*=(const NcElement& o) { return *this = *this * o; }
  friend bool operator==(const NcElement& a, const NcElement& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const NcElement& a, const NcElement& b) { return !(a == b); }

  /// Multiplies every term on the right by I^k.
  NcElement shift_ipow(int k) const {
    NcElement r;
    r.env_ = env_;
    for (const auto& [m, c] : terms_) {
      Mono n = m;
      n.ipow += k;
      r.terms_.emplace(n, c);
    }
    return r;
  }

  /// Applies a map to every coefficient.
  template <class F>
  NcElement map_coeffs(F f) const {
    NcElement r;
    r.env_ = env_;
    for (const auto& [m, c] : terms_) r.add_term(m, f(c));
    return r;
  }

  NcElement ell_to_zero() const {
    return map_coeffs([](const Coeff& c) { return c.ell_to_zero(); });
  }

  std::string str() const;

  void set_env(const Envelope* e) { env_ = e; }

 private:
  void adopt(const NcElement& o) {
    if (!env_) env_ = o.env_;
  }

  std::map<Mono, Coeff> terms_;
  const Envelope* env_ = nullptr;
};

/// Derivations acting on the enveloping algebra: d0..d3, d4 and the dilation.
enum class Derivation { D0, D1, D2, D3, D4, Dilation };

inline Derivation derivation_from_index(int a) {
  if (a < 0 || a > 5) throw std::invalid_argument("derivation index out of range");
  return static_cast<Derivation>(a);
}

/// Multiplication context for the deformed algebra at 1/R = 0 with sign eps.
/// The right-multiplication cache is guarded, so a context may be shared.
class Envelope {
 public:
  explicit Envelope(int eps) : eps_(eps), alg_(contraction_limit_rinv(build_deformed(eps, 1))) {}

  Envelope(const Envelope&) = delete;
  Envelope& operator=(const Envelope&) = delete;

  /// Shared contexts for eps = +1 and eps = -1.
  static const Envelope& standard(int eps) {
    static const Envelope minus(-1);
    static const Envelope plus(1);
    if (eps == -1) return minus;
    if (eps == 1) return plus;
    throw std::invalid_argument("Envelope: eps must be +1 or -1");
  }

  int eps() const { return eps_; }
  const LieAlgebraSpec& algebra() const { return alg_; }

  NcElement one() const { return scalar(Coeff(1)); }
  NcElement scalar(const Coeff& c) const {
    NcElement r(c);
    r.set_env(this);
    return r;
  }
  NcElement generator(int g) const {
    NcElement r;
    r.set_env(this);
    Mono m;
    if (g == gen::kI) m.ipow = 1;
    else m.e.at(static_cast<std::size_t>(g)) = 1;
    r.add_term(m, Coeff(1));
    return r;
  }
  NcElement generator(const std::string& label) const { return generator(gen::label_index(label)); }
  NcElement M(int mu, int nu) const {
    if (mu < nu) return generator(gen::m_index(mu, nu));
    return -generator(gen::m_index(nu, mu));
  }
  NcElement p(int mu) const { return generator(gen::p(mu)); }
  NcElement x(int mu) const { return generator(gen::x(mu)); }
  /// I^k for any integer k.
  NcElement ipow(int k) const {
    NcElement r;
    r.set_env(this);
    Mono m;
    m.ipow = k;
    r.add_term(m, Coeff(1));
    return r;
  }
  NcElement from_lincomb(const LinComb& v) const {
    NcElement r = scalar(Coeff(0));
    for (const auto& [g, c] : v) r += c * generator(g);
    return r;
  }

  NcElement mul(const NcElement& a, const NcElement& b) const {
    NcElement r = scalar(Coeff(0));
    for (const auto& [mb, cb] : b.terms()) {
      std::vector<int> letters = mb.letters();
      for (const auto& [ma, ca] : a.terms()) {
        NcElement cur = mono_elem(ma, ca * cb);
        for (int g : letters) cur = rmul_elem(cur, g);
        r += cur.shift_ipow(mb.ipow);
      }
    }
    return r;
  }

  NcElement commutator(const NcElement& a, const NcElement& b) const { return mul(a, b) - mul(b, a); }

  /// Derivation action, extended to monomials by the Leibniz rule.
  NcElement derive(Derivation d, const NcElement& a) const {
    NcElement r = scalar(Coeff(0));
    for (const auto& [m, c] : a.terms()) r += c * derive_mono(d, m);
    return r;
  }

  /// Image of a single generator under a derivation.
  NcElement derive_generator(Derivation d, int g) const {
    NcElement z = scalar(Coeff(0));
    if (d == Derivation::Dilation) {
      if ((g >= gen::kP0 && g < gen::kX0) || g == gen::kI) return generator(g);
      return z;
    }
    int a = static_cast<int>(d);
    if (g < 6) {
      if (a == 4) return z;
      auto [mu, nu] = gen::m_pair(g);
      NcElement r = z;
      if (a == mu) r += Coeff(gen::eta(a)) * p(nu);
      if (a == nu) r -= Coeff(gen::eta(a)) * p(mu);
      return r;
    }
    if (g >= gen::kX0 && g < gen::kI) {
      int mu = g - gen::kX0;
      if (a == 4) return Coeff::ell() * p(mu);
      if (a == mu) return Coeff(gen::eta(a)) * ipow(1);
      return z;
    }
    return z;
  }

 private:
  NcElement mono_elem(const Mono& m, const Coeff& c) const {
    NcElement r = scalar(Coeff(0));
    r.add_term(m, c);
    return r;
  }

  NcElement rmul_elem(const NcElement& a, int g) const {
    NcElement r = scalar(Coeff(0));
    for (const auto& [m, c] : a.terms()) r += c * rmul(m, g);
    return r;
  }

  /// m * g in normal form, for g a non-I generator.
  NcElement rmul(const Mono& m, int g) const {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find({m, g});
      if (it != cache_.end()) return it->second;
    }
    NcElement r = rmul_uncached(m, g);
    std::lock_guard<std::mutex> lock(mu_);
    cache_.emplace(std::make_pair(m, g), r);
    return r;
  }

  NcElement rmul_uncached(const Mono& m, int g) const {
    if (m.ipow != 0) {
      // I^a x = x I^a - a i eps l^2 p I^(a-1); I commutes with M and p.
      Mono m0 = m;
      m0.ipow = 0;
      NcElement r = rmul(m0, g).shift_ipow(m.ipow);
      if (g >= gen::kX0) {
        Coeff c = Coeff(-m.ipow) * Coeff::i() * Coeff(eps_) * Coeff::ell(2);
        r += (c * rmul(m0, g - gen::kX0 + gen::kP0)).shift_ipow(m.ipow - 1);
      }
      return r;
    }
    int h = m.last_letter();
    if (h <= g) {
      Mono n = m;
      ++n.e[static_cast<std::size_t>(g)];
      return mono_elem(n, Coeff(1));
    }
    // m = m' h, so m g = (m' g) h + m' [h, g]
    Mono mp = m;
    --mp.e[static_cast<std::size_t>(h)];
    NcElement r = rmul_elem(rmul(mp, g), h);
    for (const auto& [t, c] : alg_.bracket(h, g)) {
      if (t == gen::kI) {
        Mono n = mp;
        n.ipow += 1;
        r.add_term(n, c);
      } else {
        r += c * rmul(mp, t);
      }
    }
    return r;
  }

  NcElement mono_from_letters(const std::vector<int>& l, std::size_t from, std::size_t to, int ipow) const {
    Mono m;
    for (std::size_t k = from; k < to; ++k) ++m.e[static_cast<std::size_t>(l[k])];
    m.ipow = ipow;
    return mono_elem(m, Coeff(1));
  }

  NcElement derive_mono(Derivation d, const Mono& m) const {
    std::vector<int> l = m.letters();
    NcElement r = scalar(Coeff(0));
    for (std::size_t j = 0; j < l.size(); ++j) {
      NcElement dj = derive_generator(d, l[j]);
      if (dj.is_zero()) continue;
      NcElement left = mono_from_letters(l, 0, j, 0);
      NcElement right = mono_from_letters(l, j + 1, l.size(), m.ipow);
      r += mul(mul(left, dj), right);
    }
    // d(I^k) vanishes for d0..d4; the dilation scales I^k by k.
    if (d == Derivation::Dilation && m.ipow != 0)
      r += Coeff(m.ipow) * mono_elem(m, Coeff(1));
    return r;
  }

  int eps_;
  LieAlgebraSpec alg_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<Mono, int>, NcElement> cache_;
};

inline NcElement operator*(const NcElement& a, const NcElement& b) {
  const Envelope* e = a.env() ? a.env() : b.env();
  if (!e) {
    // Both operands are scalars.
    NcElement r;
    for (const auto& [ma, ca] : a.terms())
      for (const auto& [mb, cb] : b.terms()) r.add_term(Mono{}, ca * cb);
    return r;
  }
  return e->mul(a, b);
}

inline NcElement commutator(const NcElement& a, const NcElement& b) { return a * b - b * a; }

inline std::string NcElement::str() const {
  if (terms_.empty()) return "0";
  static const auto labels = gen::labels();
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")";
    for (std::size_t g = 0; g < 14; ++g)
      if (m.e[g]) os << "*" << labels[g] << (m.e[g] > 1 ? "^" + std::to_string(m.e[g]) : "");
    if (m.ipow) os << "*I^" << m.ipow;
  }
  return os.str();
}

/// Lowest power of l among all coefficients; throws on zero.
inline int ell_order(const NcElement& a) {
  if (a.is_zero()) throw std::domain_error("ell_order of zero element");
  int best = 0;
  bool first = true;
  for (const auto& [m, c] : a.terms()) {
    int o = *c.ell_order();
    if (first || o < best) best = o;
    first = false;
  }
  return best;
}

/// Order of a possibly-zero element; empty for zero.
inline std::optional<int> ell_order_or_none(const NcElement& a) {
  if (a.is_zero()) return std::nullopt;
  return ell_order(a);
}

/// y^nu = (1/2){x^nu, I^-1}, with x^nu = eta^{nu nu} x_nu.
inline NcElement heisenberg_dual(const Envelope& env, int nu) {
  NcElement xu = Coeff(gen::eta(nu)) * env.x(nu);
  NcElement inv = env.ipow(-1);
  return Coeff::rational(1, 2) * (xu * inv + inv * xu);
}

struct PlaneWaveReport {
  int order = 0;
  std::vector<NcElement> residual;         // per momentum index mu, using [p_mu, T] = -k_mu T
  std::vector<NcElement> printed_residual;  // same with the factor +i k_mu
  bool ok() const {
    for (const auto& r : residual)
      if (!r.is_zero()) return false;
    return true;
  }
};

/// Truncated series T = sum_{j<=order} (iA)^j/j! with A = k_nu y^nu.  The
/// commutator [p_mu, T] is compared with -k_mu times the series through
/// order-1, which is the exact truncation of [p_mu, e^{iA}] = -k_mu e^{iA}.
inline PlaneWaveReport planewave_commutator_order(const Envelope& env, const std::array<Rational, 4>& k,
                                                  int order) {
  if (order < 0 || order > 4) throw std::invalid_argument("planewave: order must be in 0..4");
  NcElement A = env.scalar(Coeff(0));
  for (int nu = 0; nu < 4; ++nu)
    if (k[static_cast<std::size_t>(nu)] != 0)
      A += Coeff(GaussRational(k[static_cast<std::size_t>(nu)])) * heisenberg_dual(env, nu);
  NcElement iA = Coeff::i() * A;
  std::vector<NcElement> T{env.one()};
  for (int j = 1; j <= order; ++j) T.push_back(Coeff::rational(1, j) * (T.back() * iA));
  NcElement series = env.scalar(Coeff(0)), lower = env.scalar(Coeff(0));
  for (int j = 0; j <= order; ++j) {
    series += T[static_cast<std::size_t>(j)];
    if (j < order) lower += T[static_cast<std::size_t>(j)];
  }
  PlaneWaveReport rep;
  rep.order = order;
  for (int mu = 0; mu < 4; ++mu) {
    Coeff kmu(GaussRational(k[static_cast<std::size_t>(mu)]));
    NcElement com = commutator(env.p(mu), series);
    rep.residual.push_back(com + kmu * lower);
    rep.printed_residual.push_back(com - (Coeff::i() * kmu) * lower);
  }
  return rep;
}

/// Random element with small integer coefficients, optional l powers and I^-1.
inline NcElement random_element(const Envelope& env, std::mt19937& rng, int n_terms, int max_degree,
                                bool allow_inverse = true) {
  std::uniform_int_distribution<int> coef(-3, 3), gsel(0, 13), deg(0, max_degree), ell(0, 2),
      ip(allow_inverse ? -1 : 0, 1);
  NcElement r = env.scalar(Coeff(0));
  for (int t = 0; t < n_terms; ++t) {
    NcElement term = env.scalar(Coeff::monomial(GaussRational(coef(rng)), ell(rng)));
    int d = deg(rng);
    for (int k = 0; k < d; ++k) term = term * env.generator(gsel(rng));
    term = term * env.ipow(ip(rng));
    r += term;
  }
  return r;
}

}  // namespace ncst

#endif
