#ifndef NCST_FORMS_HPP
#define NCST_FORMS_HPP

#include "ncst/diffop.hpp"
#include "ncst/envelope.hpp"

#include <array>
#include <bit>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace ncst {

/// Exterior form over the basis theta^0..theta^4 with coefficients in Ring.
/// Only increasing index tuples are stored, keyed by a 5-bit mask.
template <class Ring>
class BasicForm {
 public:
  using Mask = unsigned;

  BasicForm() = default;

  static BasicForm zero() { return {}; }
  static BasicForm scalar(const Ring& r) {
    BasicForm f;
    f.add(0u, r);
    return f;
  }
  /// b * theta^{a1} ^ ... ^ theta^{ak} for any index order; reindexing applies the sign.
  static BasicForm basis(const std::vector<int>& idx, const Ring& b) {
    BasicForm f;
    int s = sort_sign(idx);
    if (s == 0) return f;
    Mask m = 0;
    for (int a : idx) m |= 1u << a;
    f.add(m, s > 0 ? b : Ring(-b));
    return f;
  }

  const std::map<Mask, Ring>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }

  /// Degree of the form; -1 for zero, and the common degree otherwise.
  int degree() const {
    if (c_.empty()) return -1;
    return std::popcount(c_.begin()->first);
  }

  Ring coeff(Mask m) const {
    auto it = c_.find(m);
    return it == c_.end() ? Ring() : it->second;
  }

  void add(Mask m, const Ring& r) {
    if (is_zero_ring(r)) return;
    auto it = c_.find(m);
    if (it == c_.end()) {
      c_.emplace(m, r);
    } else {
      it->second += r;
      if (is_zero_ring(it->second)) c_.erase(it);
    }
  }

  BasicForm& operator+=(const BasicForm& o) {
    for (const auto& [m, r] : o.c_) add(m, r);
    return *this;
  }
  BasicForm& operator-=(const BasicForm& o) {
    for (const auto& [m, r] : o.c_) add(m, -r);
    return *this;
  }
  friend BasicForm operator+(BasicForm a, const BasicForm& b) { return a += b; }
  friend BasicForm operator-(BasicForm a, const BasicForm& b) { return a -= b; }
  BasicForm operator-() const {
    BasicForm r;
    for (const auto& [m, x] : c_) r.add(m, -x);
    return r;
  }
  friend bool operator==(const BasicForm& a, const BasicForm& b) { return a.c_ == b.c_; }

  /// Sign that sorts a tuple into increasing order; 0 on repeated indices.
  static int sort_sign(std::vector<int> idx) {
    int s = 1;
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j + 1 < idx.size() - i; ++j) {
        if (idx[j] == idx[j + 1]) return 0;
        if (idx[j] > idx[j + 1]) {
          std::swap(idx[j], idx[j + 1]);
          s = -s;
        }
      }
    for (std::size_t j = 0; j + 1 < idx.size(); ++j)
      if (idx[j] == idx[j + 1]) return 0;
    return s;
  }

  /// Sign of theta^I ^ theta^J relative to theta^(I u J); 0 if they overlap.
  static int merge_sign(Mask I, Mask J) {
    if (I & J) return 0;
    int inversions = 0;
    for (int j = 0; j < 5; ++j)
      if (J & (1u << j)) inversions += std::popcount(I >> (j + 1));
    return inversions % 2 ? -1 : 1;
  }

  static std::vector<int> indices(Mask m) {
    std::vector<int> v;
    for (int a = 0; a < 5; ++a)
      if (m & (1u << a)) v.push_back(a);
    return v;
  }

 private:
  static bool is_zero_ring(const Ring& r) { return r == Ring(); }

  std::map<Mask, Ring> c_;
};

template <class Ring>
BasicForm<Ring> wedge(const BasicForm<Ring>& a, const BasicForm<Ring>& b) {
  using F = BasicForm<Ring>;
  F r;
  for (const auto& [I, x] : a.coeffs())
    for (const auto& [J, y] : b.coeffs()) {
      int s = F::merge_sign(I, J);
      if (s == 0) continue;
      Ring p = x * y;
      r.add(I | J, s > 0 ? p : Ring(-p));
    }
  return r;
}

/// Exterior derivative d(b theta^I) = sum_a d_a(b) theta^a ^ theta^I.
template <class Ring, class Deriv>
BasicForm<Ring> ext_d(const BasicForm<Ring>& w, const Deriv& D) {
  using F = BasicForm<Ring>;
  F r;
  for (const auto& [I, b] : w.coeffs())
    for (int a = 0; a < 5; ++a) {
      int s = F::merge_sign(1u << a, I);
      if (s == 0) continue;
      Ring db = D(a, b);
      r.add(I | (1u << a), s > 0 ? db : Ring(-db));
    }
  return r;
}

/// Value of a form on derivations d_{a1},...,d_{ak} (determinant pairing, no 1/k!).
template <class Ring>
Ring evaluate(const BasicForm<Ring>& w, const std::vector<int>& args) {
  using F = BasicForm<Ring>;
  int s = F::sort_sign(args);
  if (s == 0) return Ring();
  typename F::Mask m = 0;
  for (int a : args) m |= 1u << a;
  Ring v = w.coeff(m);
  return s > 0 ? v : Ring(-v);
}

/// Exterior derivative from the alternating-sum formula over commuting
/// derivations: dw(d1..d_{p+1}) = sum_k (-1)^(k+1) d_k(w(d1..^k..d_{p+1})).
template <class Ring, class Deriv>
BasicForm<Ring> ext_d_alternating(const BasicForm<Ring>& w, int p, const Deriv& D) {
  using F = BasicForm<Ring>;
  F r;
  for (typename F::Mask m = 0; m < 32; ++m) {
    if (std::popcount(m) != p + 1) continue;
    std::vector<int> idx = F::indices(m);
    Ring total{};
    for (std::size_t k = 0; k < idx.size(); ++k) {
      std::vector<int> rest;
      for (std::size_t j = 0; j < idx.size(); ++j)
        if (j != k) rest.push_back(idx[j]);
      Ring term = D(idx[k], evaluate(w, rest));
      if (k % 2 == 0) total += term;
      else total -= term;
    }
    r.add(m, total);
  }
  return r;
}

/// Interior product with d_a: removes theta^a with sign (-1)^(number of indices below a).
template <class Ring>
BasicForm<Ring> contract(int a, const BasicForm<Ring>& w) {
  using F = BasicForm<Ring>;
  F r;
  for (const auto& [I, b] : w.coeffs()) {
    if (!(I & (1u << a))) continue;
    int below = std::popcount(I & ((1u << a) - 1u));
    r.add(I & ~(1u << a), below % 2 ? Ring(-b) : b);
  }
  return r;
}

/// L_a = d i_a + i_a d.
template <class Ring, class Deriv>
BasicForm<Ring> lie_derive(int a, const BasicForm<Ring>& w, const Deriv& D) {
  return ext_d(contract(a, w), D) + contract(a, ext_d(w, D));
}

template <class Ring>
std::string form_str(const BasicForm<Ring>& w) {
  if (w.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, b] : w.coeffs()) {
    if (!first) os << "\n";
    first = false;
    os << "theta";
    for (int a : BasicForm<Ring>::indices(m)) os << a;
    os << ": " << b.str();
  }
  return os.str();
}

/// Derivation functor for enveloping-algebra coefficients.
struct NcDeriv {
  const Envelope* env;
  NcElement operator()(int a, const NcElement& x) const { return env->derive(derivation_from_index(a), x); }
};

using Form = BasicForm<NcElement>;

/// Square matrix over a ring, for internal-symmetry factors.
template <class R, int N>
struct MatRing {
  std::array<R, N * N> a{};

  R& operator()(int i, int j) { return a[static_cast<std::size_t>(N * i + j)]; }
  const R& operator()(int i, int j) const { return a[static_cast<std::size_t>(N * i + j)]; }

  MatRing& operator+=(const MatRing& o) {
    for (std::size_t k = 0; k < a.size(); ++k) a[k] += o.a[k];
    return *this;
  }
  MatRing& operator-=(const MatRing& o) {
    for (std::size_t k = 0; k < a.size(); ++k) a[k] -= o.a[k];
    return *this;
  }
  friend MatRing operator+(MatRing x, const MatRing& y) { return x += y; }
  friend MatRing operator-(MatRing x, const MatRing& y) { return x -= y; }
  MatRing operator-() const {
    MatRing r;
    for (std::size_t k = 0; k < a.size(); ++k) r.a[k] = -a[k];
    return r;
  }
  friend MatRing operator*(const MatRing& x, const MatRing& y) {
    MatRing r;
    for (int i = 0; i < N; ++i)
      for (int k = 0; k < N; ++k)
        for (int j = 0; j < N; ++j) r(i, j) += x(i, k) * y(k, j);
    return r;
  }
  friend bool operator==(const MatRing& x, const MatRing& y) {
    for (std::size_t k = 0; k < x.a.size(); ++k)
      if (!(x.a[k] == y.a[k])) return false;
    return true;
  }
  std::string str() const {
    std::string s = "[";
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (k) s += (k % N == 0) ? "; " : ", ";
      s += a[k].str();
    }
    return s + "]";
  }
};

template <class R, int N, class Deriv>
struct MatDeriv {
  Deriv inner;
  MatRing<R, N> operator()(int d, const MatRing<R, N>& m) const {
    MatRing<R, N> r;
    for (std::size_t k = 0; k < m.a.size(); ++k) r.a[k] = inner(d, m.a[k]);
    return r;
  }
};

/// a + eps b with eps^2 = 0, for first-order gauge variations.
template <class R>
struct Dual {
  R a{}, b{};

  Dual& operator+=(const Dual& o) {
    a += o.a;
    b += o.b;
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    a -= o.a;
    b -= o.b;
    return *this;
  }
  friend Dual operator+(Dual x, const Dual& y) { return x += y; }
  friend Dual operator-(Dual x, const Dual& y) { return x -= y; }
  Dual operator-() const { return {-a, -b}; }
  friend Dual operator*(const Dual& x, const Dual& y) { return {x.a * y.a, x.a * y.b + x.b * y.a}; }
  friend bool operator==(const Dual& x, const Dual& y) { return x.a == y.a && x.b == y.b; }
  std::string str() const { return a.str() + " + eps*(" + b.str() + ")"; }
};

template <class R, class Deriv>
struct DualDeriv {
  Deriv inner;
  Dual<R> operator()(int d, const Dual<R>& x) const { return {inner(d, x.a), inner(d, x.b)}; }
};

template <class Ring>
using ConnectionT = std::array<Ring, 5>;
using Connection = ConnectionT<NcElement>;

/// F_ij = d_i(A_j) - d_j(A_i) + [A_i, A_j] for all i, j.
template <class Ring, class Deriv>
std::array<std::array<Ring, 5>, 5> field_strength(const ConnectionT<Ring>& A, const Deriv& D) {
  std::array<std::array<Ring, 5>, 5> F{};
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      const Ring& Ai = A[static_cast<std::size_t>(i)];
      const Ring& Aj = A[static_cast<std::size_t>(j)];
      F[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = D(i, Aj) - D(j, Ai) + (Ai * Aj - Aj * Ai);
    }
  return F;
}

/// Connection as the 1-form A_i theta^i.
template <class Ring>
BasicForm<Ring> connection_form(const ConnectionT<Ring>& A) {
  BasicForm<Ring> w;
  for (int i = 0; i < 5; ++i) w.add(1u << i, A[static_cast<std::size_t>(i)]);
  return w;
}

/// nabla^2(1) = d_j(A_i) theta^j ^ theta^i + A_j A_i theta^j ^ theta^i.
template <class Ring, class Deriv>
BasicForm<Ring> curvature_form(const ConnectionT<Ring>& A, const Deriv& D) {
  BasicForm<Ring> w = connection_form(A);
  return ext_d(w, D) + wedge(w, w);
}

/// Field strength packaged as a 2-form sum_{i<j} F_ij theta^i ^ theta^j.
template <class Ring>
BasicForm<Ring> field_strength_form(const std::array<std::array<Ring, 5>, 5>& F) {
  BasicForm<Ring> w;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      w.add((1u << i) | (1u << j), F[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
  return w;
}

/// Metric (1,-1,-1,-1,-1) used to raise indices in the gauge sector.
inline int eta5(int a) { return a == 0 ? 1 : -1; }

/// F_ab F^ab summed over a, b in 0..4, factor order preserved.
template <class Ring>
Ring action_density(const std::array<std::array<Ring, 5>, 5>& F) {
  Ring s{};
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) {
      const Ring& f = F[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      Ring p = f * f;
      if (eta5(a) * eta5(b) > 0) s += p;
      else s -= p;
    }
  return s;
}

/// The two pieces of the action density: mu-nu part and the (4, mu) part.
template <class Ring>
std::pair<Ring, Ring> action_density_split(const std::array<std::array<Ring, 5>, 5>& F) {
  Ring mn{}, fm{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const Ring& f = F[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      Ring p = f * f;
      if (eta5(a) * eta5(b) > 0) mn += p;
      else mn -= p;
    }
  for (int mu = 0; mu < 4; ++mu) {
    const Ring& f = F[4][static_cast<std::size_t>(mu)];
    Ring p = f * f;
    if (eta5(4) * eta5(mu) > 0) fm += p;
    else fm -= p;
  }
  return {mn, fm};
}

using Metric = std::array<std::array<NcElement, 5>, 5>;
using Christoffel = std::array<std::array<std::array<NcElement, 5>, 5>, 5>;  // G[a][b][c] = Gamma^a_bc
using Riemann = std::array<Christoffel, 5>;                                   // R[a][b][c][e] = R^a_bce

inline Metric flat_metric(const Envelope& env) {
  Metric g{};
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b)
      g[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = env.scalar(Coeff(a == b ? eta5(a) : 0));
  return g;
}

/// Right side of the compatibility relation: (1/2){d_e g_bd + d_d g_eb - d_b g_de}.
inline Christoffel christoffel_rhs(const Envelope& env, const Metric& g) {
  Christoffel r{};
  auto d = [&](int a, const NcElement& x) { return env.derive(derivation_from_index(a), x); };
  auto G = [&](int i, int j) -> const NcElement& { return g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; };
  for (int b = 0; b < 5; ++b)
    for (int dd = 0; dd < 5; ++dd)
      for (int e = 0; e < 5; ++e)
        r[static_cast<std::size_t>(b)][static_cast<std::size_t>(dd)][static_cast<std::size_t>(e)] =
            Coeff::rational(1, 2) * (d(e, G(b, dd)) + d(dd, G(e, b)) - d(b, G(dd, e)));
  return r;
}

/// Residual[b][d][e] = sum_a g_ab Gamma^a_de - rhs_bde, with g on the left.
inline Christoffel christoffel_residual(const Envelope& env, const Metric& g, const Christoffel& Gam) {
  Christoffel rhs = christoffel_rhs(env, g);
  Christoffel res{};
  for (std::size_t b = 0; b < 5; ++b)
    for (std::size_t d = 0; d < 5; ++d)
      for (std::size_t e = 0; e < 5; ++e) {
        NcElement s = env.scalar(Coeff(0));
        for (std::size_t a = 0; a < 5; ++a)
          if (!g[a][b].is_zero() && !Gam[a][d][e].is_zero()) s += g[a][b] * Gam[a][d][e];
        res[b][d][e] = s - rhs[b][d][e];
      }
  return res;
}

/// Gamma for a diagonal metric whose entries are c_b I^k_b (c_b a nonzero number):
/// Gamma^b_de = g_bb^{-1} rhs_bde.
inline Christoffel solve_christoffel_diagonal(const Envelope& env, const Metric& g) {
  Christoffel rhs = christoffel_rhs(env, g);
  Christoffel G{};
  for (std::size_t b = 0; b < 5; ++b) {
    const NcElement& gb = g[b][b];
    if (gb.terms().size() != 1) throw std::invalid_argument("solve_christoffel_diagonal: entry not invertible");
    const auto& [m, c] = *gb.terms().begin();
    if (m.degree() != 0 || c.size() != 1 || c.terms().begin()->first != Coeff::Key{0, 0})
      throw std::invalid_argument("solve_christoffel_diagonal: entry not of the form c I^k");
    NcElement inv = env.scalar(Coeff(GaussRational(1) / c.terms().begin()->second)) * env.ipow(-m.ipow);
    for (std::size_t d = 0; d < 5; ++d)
      for (std::size_t e = 0; e < 5; ++e) G[b][d][e] = inv * rhs[b][d][e];
  }
  return G;
}

/// R^a_bce = d_b(G^a_ce) - d_c(G^a_be) + G^a_bn G^n_ce - G^a_cn G^n_be (Abelian derivations).
inline Riemann curvature(const Envelope& env, const Christoffel& G) {
  Riemann R{};
  auto d = [&](std::size_t a, const NcElement& x) {
    return env.derive(derivation_from_index(static_cast<int>(a)), x);
  };
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t b = 0; b < 5; ++b)
      for (std::size_t c = 0; c < 5; ++c)
        for (std::size_t e = 0; e < 5; ++e) {
          NcElement s = d(b, G[a][c][e]) - d(c, G[a][b][e]);
          for (std::size_t n = 0; n < 5; ++n) {
            if (!G[a][b][n].is_zero() && !G[n][c][e].is_zero()) s += G[a][b][n] * G[n][c][e];
            if (!G[a][c][n].is_zero() && !G[n][b][e].is_zero()) s -= G[a][c][n] * G[n][b][e];
          }
          R[a][b][c][e] = s;
        }
  return R;
}

/// l-order bookkeeping of the gauge field equation.  A_mu are given as they
/// are; A_4 = l * Abar_4.  Each deviation term from d^mu F_{mu nu} = 0 is
/// recorded with its lowest power of l (empty when identically zero).
struct FieldEqOrderReport {
  struct Term {
    std::string name;
    int nu;
    std::optional<int> order;
    bool vanishes_at_l0;
  };
  std::vector<Term> terms;
  /// True when the l^2 bracket with -dbar^4[Abar_4, A_nu] as printed equals d^4 F_{4 nu}.
  bool printed_bracket_matches = true;
  /// Same comparison with +dbar^4[Abar_4, A_nu].
  bool corrected_bracket_matches = true;

  int min_order() const {
    int m = 1000;
    for (const auto& t : terms)
      if (t.order) m = std::min(m, *t.order);
    return m;
  }
  bool ok() const {
    for (const auto& t : terms)
      if (t.order && *t.order < 2) return false;
    return true;
  }
};

inline FieldEqOrderReport field_eq_order_check(const Envelope& env, const std::array<NcElement, 4>& A_mu,
                                               const NcElement& Abar4) {
  NcDeriv D{&env};
  Connection A{};
  for (std::size_t mu = 0; mu < 4; ++mu) A[mu] = A_mu[mu];
  A[4] = Coeff::ell() * Abar4;
  auto F = field_strength(A, D);
  FieldEqOrderReport rep;
  auto record = [&](const std::string& name, int nu, const NcElement& v) {
    bool l0 = v.is_zero() || v.ell_to_zero().is_zero();
    rep.terms.push_back({name, nu, ell_order_or_none(v), l0});
  };
  auto dbar4 = [&](const NcElement& x) { return Coeff::ell(-1) * D(4, x); };
  for (int nu = 0; nu < 4; ++nu) {
    std::size_t n = static_cast<std::size_t>(nu);
    NcElement d4F = Coeff(eta5(4)) * D(4, F[4][n]);
    NcElement AmuF = env.scalar(Coeff(0)), dmuAA = env.scalar(Coeff(0));
    for (int mu = 0; mu < 4; ++mu) {
      std::size_t m = static_cast<std::size_t>(mu);
      AmuF += Coeff(eta5(mu)) * commutator(A[m], F[m][n]);
      dmuAA += Coeff(eta5(mu)) * D(mu, commutator(A[m], A[n]));
    }
    NcElement A4F = Coeff(eta5(4)) * commutator(A[4], F[4][n]);
    record("d^4 F_4nu", nu, d4F);
    record("-[A^mu, F_mu nu]", nu, -AmuF);
    record("-[A^4, F_4nu]", nu, -A4F);
    record("d^mu [A_mu, A_nu]", nu, dmuAA);

    NcElement base = Coeff(eta5(4)) * (dbar4(dbar4(A[n])) - dbar4(D(nu, Abar4)));
    NcElement br = Coeff(eta5(4)) * dbar4(commutator(Abar4, A[n]));
    NcElement printed = Coeff::ell(2) * (base - br);
    NcElement corrected = Coeff::ell(2) * (base + br);
    if (printed != d4F) rep.printed_bracket_matches = false;
    if (corrected != d4F) rep.corrected_bracket_matches = false;
  }
  return rep;
}

/// Operator image of an element without negative powers of I (eps = -1 representation).
inline PolyDiffOp to_diffop(const NcElement& a) {
  if (a.env() && a.env()->eps() != -1) throw std::invalid_argument("to_diffop: eps = -1 only");
  PolyDiffOp r;
  for (const auto& [m, c] : a.terms()) {
    if (m.ipow < 0) throw std::invalid_argument("to_diffop: negative power of I");
    PolyDiffOp t(c);
    for (int g : m.letters()) t = t * m5_rep(g, -1);
    for (int k = 0; k < m.ipow; ++k) t = t * m5_rep(gen::kI, -1);
    r += t;
  }
  return r;
}

/// [D, g] compared with sum_a i gamma^a rho(c_a), where dg = c_a theta^a.
inline bool dirac_matches_ext_d(const Envelope& env, const NcElement& g) {
  auto gam = gamma_set();
  PolyDiffOp D = dirac_operator(gam);
  PolyDiffOp lhs = op_commutator(D, to_diffop(g));
  Form dg = ext_d(Form::scalar(g), NcDeriv{&env});
  PolyDiffOp rhs;
  for (int a = 0; a < 5; ++a)
    rhs += PolyDiffOp::matrix(Coeff::i() * gam[static_cast<std::size_t>(a)]) * to_diffop(dg.coeff(1u << a));
  return lhs == rhs;
}

/// Anti-hermitian su(2) basis tau_k = i sigma_k / 2 as 2x2 matrices over the envelope.
inline std::array<MatRing<NcElement, 2>, 3> su2_basis(const Envelope& env) {
  std::array<MatRing<NcElement, 2>, 3> t{};
  Coeff h = Coeff::rational(1, 2) * Coeff::i();
  Coeff half = Coeff::rational(1, 2);
  for (auto& m : t)
    for (auto& e : m.a) e = env.scalar(Coeff(0));
  t[0](0, 1) = env.scalar(h);
  t[0](1, 0) = env.scalar(h);
  t[1](0, 1) = env.scalar(half);
  t[1](1, 0) = env.scalar(-half);
  t[2](0, 0) = env.scalar(h);
  t[2](1, 1) = env.scalar(-h);
  return t;
}

}  // namespace ncst

#endif
