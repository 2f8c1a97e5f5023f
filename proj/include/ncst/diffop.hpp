#ifndef NCST_DIFFOP_HPP
#define NCST_DIFFOP_HPP

#include "ncst/liealg.hpp"

#include <array>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace ncst {

/// 4x4 matrix of exact coefficients, row-major.
struct Mat4 {
  std::array<Coeff, 16> a{};

  static Mat4 identity(const Coeff& c = Coeff(1)) {
    Mat4 m;
    for (int k = 0; k < 4; ++k) m.a[static_cast<std::size_t>(5 * k)] = c;
    return m;
  }
  Coeff& operator()(int r, int c) { return a[static_cast<std::size_t>(4 * r + c)]; }
  const Coeff& operator()(int r, int c) const { return a[static_cast<std::size_t>(4 * r + c)]; }

  bool is_zero() const {
    for (const auto& c : a)
      if (!c.is_zero()) return false;
    return true;
  }
  /// True when the matrix is a multiple of the identity.
  bool is_scalar() const {
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        if (r != c && !(*this)(r, c).is_zero()) return false;
        if (r == c && (*this)(r, c) != (*this)(0, 0)) return false;
      }
    return true;
  }

  Mat4& operator+=(const Mat4& o) {
    for (std::size_t k = 0; k < 16; ++k) a[k] += o.a[k];
    return *this;
  }
  Mat4& operator-=(const Mat4& o) {
    for (std::size_t k = 0; k < 16; ++k) a[k] -= o.a[k];
    return *this;
  }
  friend Mat4 operator+(Mat4 x, const Mat4& y) { return x += y; }
  friend Mat4 operator-(Mat4 x, const Mat4& y) { return x -= y; }
  friend Mat4 operator*(const Mat4& x, const Mat4& y) {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) {
        const Coeff& xik = x(i, k);
        if (xik.is_zero()) continue;
        for (int j = 0; j < 4; ++j)
          if (!y(k, j).is_zero()) r(i, j) += xik * y(k, j);
      }
    return r;
  }
  friend Mat4 operator*(const Coeff& s, const Mat4& m) {
    Mat4 r;
    for (std::size_t k = 0; k < 16; ++k) r.a[k] = s * m.a[k];
    return r;
  }
  friend bool operator==(const Mat4& x, const Mat4& y) { return x.a == y.a; }

  std::string str() const {
    if (is_scalar()) return (*this)(0, 0).str();
    std::string s = "[";
    for (int r = 0; r < 4; ++r) {
      if (r) s += "; ";
      for (int c = 0; c < 4; ++c) {
        if (c) s += ", ";
        s += (*this)(r, c).str();
      }
    }
    return s + "]";
  }
};

using MultiIndex = std::array<int, 5>;

/// Matrix-valued differential operator with polynomial coefficients on M5,
/// in the normal form sum A * xi^alpha * d^beta (xi to the left).
/// Coordinates are the upper-index xi^a and d_a = d/dxi^a.
class PolyDiffOp {
 public:
  using Key = std::pair<MultiIndex, MultiIndex>;

  PolyDiffOp() = default;
  explicit PolyDiffOp(const Coeff& c) { add({}, {}, Mat4::identity(c)); }

  static PolyDiffOp xi(int a) {
    MultiIndex m{};
    m[static_cast<std::size_t>(a)] = 1;
    PolyDiffOp r;
    r.add(m, {}, Mat4::identity());
    return r;
  }
  static PolyDiffOp d(int a) {
    MultiIndex m{};
    m[static_cast<std::size_t>(a)] = 1;
    PolyDiffOp r;
    r.add({}, m, Mat4::identity());
    return r;
  }
  static PolyDiffOp matrix(const Mat4& m) {
    PolyDiffOp r;
    r.add({}, {}, m);
    return r;
  }

  const std::map<Key, Mat4>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(const MultiIndex& alpha, const MultiIndex& beta, const Mat4& m) {
    if (m.is_zero()) return;
    auto it = terms_.find({alpha, beta});
    if (it == terms_.end()) {
      terms_.emplace(Key{alpha, beta}, m);
    } else {
      it->second += m;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  PolyDiffOp& operator+=(const PolyDiffOp& o) {
    for (const auto& [k, m] : o.terms_) add(k.first, k.second, m);
    return *this;
  }
  PolyDiffOp& operator-=(const PolyDiffOp& o) {
    for (const auto& [k, m] : o.terms_) add(k.first, k.second, Coeff(-1) * m);
    return *this;
  }
  friend PolyDiffOp operator+(PolyDiffOp a, const PolyDiffOp& b) { return a += b; }
  friend PolyDiffOp operator-(PolyDiffOp a, const PolyDiffOp& b) { return a -= b; }
  friend PolyDiffOp operator*(const Coeff& s, const PolyDiffOp& p) {
    PolyDiffOp r;
    for (const auto& [k, m] : p.terms_) r.add(k.first, k.second, s * m);
    return r;
  }
  friend bool operator==(const PolyDiffOp& a, const PolyDiffOp& b) { return a.terms_ == b.terms_; }

  /// Composition, normal-ordered with
  /// d^beta xi^gamma = sum_kappa C(beta,kappa) gamma!/(gamma-kappa)! xi^(gamma-kappa) d^(beta-kappa).
  friend PolyDiffOp operator*(const PolyDiffOp& p, const PolyDiffOp& q) {
    PolyDiffOp r;
    for (const auto& [kp, mp] : p.terms_)
      for (const auto& [kq, mq] : q.terms_) {
        Mat4 prod = mp * mq;
        if (prod.is_zero()) continue;
        const MultiIndex& alpha = kp.first;
        const MultiIndex& beta = kp.second;
        const MultiIndex& gamma = kq.first;
        const MultiIndex& delta = kq.second;
        MultiIndex kmax{};
        for (std::size_t a = 0; a < 5; ++a) kmax[a] = std::min(beta[a], gamma[a]);
        MultiIndex kappa{};
        while (true) {
          long long w = 1;
          MultiIndex xa{}, db{};
          for (std::size_t a = 0; a < 5; ++a) {
            w *= binom(beta[a], kappa[a]) * falling(gamma[a], kappa[a]);
            xa[a] = alpha[a] + gamma[a] - kappa[a];
            db[a] = beta[a] + delta[a] - kappa[a];
          }
          r.add(xa, db, Coeff(w) * prod);
          std::size_t a = 0;
          while (a < 5 && kappa[a] == kmax[a]) kappa[a++] = 0;
          if (a == 5) break;
          ++kappa[a];
        }
      }
    return r;
  }

  /// Deterministic text form, one term per line in key order.
  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, m] : terms_) {
      if (!first) os << "\n";
      first = false;
      os << m.str();
      for (std::size_t a = 0; a < 5; ++a)
        if (k.first[a]) os << " xi" << a << "^" << k.first[a];
      for (std::size_t a = 0; a < 5; ++a)
        if (k.second[a]) os << " d" << a << "^" << k.second[a];
    }
    return os.str();
  }

 private:
  static long long binom(int n, int k) {
    long long r = 1;
    for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
    return r;
  }
  static long long falling(int n, int k) {
    long long r = 1;
    for (int j = 0; j < k; ++j) r *= (n - j);
    return r;
  }

  std::map<Key, Mat4> terms_;
};

inline PolyDiffOp op_commutator(const PolyDiffOp& a, const PolyDiffOp& b) { return a * b - b * a; }

/// Lower-index coordinate xi_a = eta_aa xi^a with metric (1,-1,-1,-1,eps).
inline PolyDiffOp xi_lower(int a, int eps) {
  int s = a == 4 ? eps : gen::eta(a);
  return Coeff(s) * PolyDiffOp::xi(a);
}

/// Differential-operator image of a generator of the l-deformed algebra at 1/R = 0.
inline PolyDiffOp m5_rep(int g, int eps) {
  using namespace gen;
  Coeff I = Coeff::i();
  if (g < 0 || g >= kCount) throw std::invalid_argument("m5_rep: unknown generator");
  if (g < 6) {
    auto [mu, nu] = m_pair(g);
    return I * (xi_lower(mu, eps) * PolyDiffOp::d(nu) - xi_lower(nu, eps) * PolyDiffOp::d(mu));
  }
  if (g < kX0) return I * PolyDiffOp::d(g - kP0);
  if (g < kI) {
    int mu = g - kX0;
    PolyDiffOp inner = xi_lower(mu, eps) * PolyDiffOp::d(4) - Coeff(eps) * PolyDiffOp::xi(4) * PolyDiffOp::d(mu);
    return xi_lower(mu, eps) + (I * Coeff::ell()) * inner;
  }
  return PolyDiffOp(Coeff(1)) + (I * Coeff::ell()) * PolyDiffOp::d(4);
}

inline PolyDiffOp m5_rep(const std::string& label, int eps) { return m5_rep(gen::label_index(label), eps); }

inline PolyDiffOp m5_rep(const LinComb& v, int eps) {
  PolyDiffOp r;
  for (const auto& [g, c] : v) r += c * m5_rep(g, eps);
  return r;
}

struct RepReport {
  std::size_t pairs_checked = 0;
  std::vector<std::pair<std::string, std::string>> failures;  // (pair, residual)
  bool ok() const { return failures.empty(); }
};

/// Checks [rho(a), rho(b)] = rho([a, b]) for every pair, with 1/R = 0 in the table.
/// `images` overrides the generator images (for sensitivity tests).
inline RepReport verify_m5_rep(int eps, const std::vector<PolyDiffOp>& images = {}) {
  auto alg = contraction_limit_rinv(build_deformed(eps, 1));
  std::vector<PolyDiffOp> img = images;
  if (img.empty())
    for (int g = 0; g < gen::kCount; ++g) img.push_back(m5_rep(g, eps));
  RepReport rep;
  for (int a = 0; a < gen::kCount; ++a)
    for (int b = a; b < gen::kCount; ++b) {
      PolyDiffOp res = op_commutator(img[static_cast<std::size_t>(a)], img[static_cast<std::size_t>(b)]);
      for (const auto& [g, c] : alg.bracket(a, b)) res -= c * img[static_cast<std::size_t>(g)];
      ++rep.pairs_checked;
      if (!res.is_zero())
        rep.failures.emplace_back(alg.generators[static_cast<std::size_t>(a)] + "," +
                                      alg.generators[static_cast<std::size_t>(b)],
                                  res.str());
    }
  return rep;
}

/// Dirac-basis gamma matrices gamma^0..gamma^3 and gamma^4 = i gamma^5.
inline std::array<Mat4, 5> gamma_set() {
  std::array<Mat4, 5> g{};
  Coeff I = Coeff::i();
  g[0](0, 0) = Coeff(1);
  g[0](1, 1) = Coeff(1);
  g[0](2, 2) = Coeff(-1);
  g[0](3, 3) = Coeff(-1);
  // gamma^k = [[0, sigma_k], [-sigma_k, 0]]
  std::array<std::array<Coeff, 4>, 3> sigma{{
      {Coeff(0), Coeff(1), Coeff(1), Coeff(0)},
      {Coeff(0), -I, I, Coeff(0)},
      {Coeff(1), Coeff(0), Coeff(0), Coeff(-1)},
  }};
  for (int k = 0; k < 3; ++k)
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        const Coeff& s = sigma[static_cast<std::size_t>(k)][static_cast<std::size_t>(2 * r + c)];
        g[static_cast<std::size_t>(k + 1)](r, c + 2) = s;
        g[static_cast<std::size_t>(k + 1)](r + 2, c) = -s;
      }
  Mat4 g5 = I * (g[0] * g[1] * g[2] * g[3]);
  g[4] = I * g5;
  return g;
}

/// Number of pairs (a, b) violating {gamma^a, gamma^b} = 2 eta^ab with eta = (1,-1,-1,-1,-1).
inline int clifford_violations(const std::array<Mat4, 5>& g) {
  int bad = 0;
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) {
      Mat4 ac = g[static_cast<std::size_t>(a)] * g[static_cast<std::size_t>(b)] +
                g[static_cast<std::size_t>(b)] * g[static_cast<std::size_t>(a)];
      int e = a != b ? 0 : (a == 0 ? 2 : -2);
      if (!(ac == Mat4::identity(Coeff(e)))) ++bad;
    }
  return bad;
}

/// D = sum_a i gamma^a d/dxi^a.
inline PolyDiffOp dirac_operator(const std::array<Mat4, 5>& g) {
  PolyDiffOp D;
  for (int a = 0; a < 5; ++a)
    D += PolyDiffOp::matrix(Coeff::i() * g[static_cast<std::size_t>(a)]) * PolyDiffOp::d(a);
  return D;
}

/// [D, g] for every generator, using the eps = -1 representation.
inline std::vector<PolyDiffOp> dirac_commutators() {
  auto g = gamma_set();
  if (clifford_violations(g) != 0) throw std::logic_error("gamma matrices violate the Clifford relation");
  PolyDiffOp D = dirac_operator(g);
  std::vector<PolyDiffOp> out;
  for (int k = 0; k < gen::kCount; ++k) out.push_back(op_commutator(D, m5_rep(k, -1)));
  return out;
}

}  // namespace ncst

#endif
