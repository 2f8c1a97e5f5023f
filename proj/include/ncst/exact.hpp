#ifndef NCST_EXACT_HPP
#define NCST_EXACT_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace ncst {

using Rational = boost::multiprecision::cpp_rational;

/// Complex number with rational real and imaginary parts.
struct GaussRational {
  Rational re{0};
  Rational im{0};

  GaussRational() = default;
  GaussRational(long long r) : re(r) {}
  GaussRational(Rational r, Rational i = Rational(0)) : re(std::move(r)), im(std::move(i)) {}

  static GaussRational i() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return re == 0 && im == 0; }
  GaussRational conj() const { return {re, -im}; }

  GaussRational operator-() const { return {-re, -im}; }
  GaussRational& operator+=(const GaussRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussRational& operator-=(const GaussRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
  friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
  friend GaussRational operator*(const GaussRational& a, const GaussRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussRational operator/(const GaussRational& a, const GaussRational& b) {
    Rational n = b.re * b.re + b.im * b.im;
    if (n == 0) throw std::domain_error("GaussRational: division by zero");
    GaussRational num = a * b.conj();
    return {num.re / n, num.im / n};
  }
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussRational& a, const GaussRational& b) { return !(a == b); }

  std::complex<double> to_complex() const {
    return {static_cast<double>(re), static_cast<double>(im)};
  }

  std::string str() const {
    if (im == 0) return re.str();
    if (re == 0) {
      if (im == 1) return "i";
      if (im == -1) return "-i";
      return im.str() + "*i";
    }
    std::string s = "(" + re.str();
    if (im > 0) s += "+";
    if (im == 1) s += "i";
    else if (im == -1) s += "-i";
    else s += im.str() + "*i";
    return s + ")";
  }
};

/// Laurent polynomial in l (the length parameter) and polynomial in 1/R,
/// with Gaussian-rational coefficients.  Terms are keyed by (power of l,
/// power of 1/R); zero coefficients are never stored.
class Coeff {
 public:
  using Key = std::pair<int, int>;

  Coeff() = default;
  Coeff(long long c) { add_term({0, 0}, GaussRational(c)); }
  Coeff(const GaussRational& c) { add_term({0, 0}, c); }

  static Coeff monomial(const GaussRational& c, int ell_pow, int rinv_pow = 0) {
    Coeff r;
    r.add_term({ell_pow, rinv_pow}, c);
    return r;
  }
  static Coeff i() { return Coeff(GaussRational::i()); }
  static Coeff ell(int k = 1) { return monomial(GaussRational(1), k, 0); }
  static Coeff rinv(int k = 1) { return monomial(GaussRational(1), 0, k); }
  static Coeff rational(long long num, long long den) {
    return Coeff(GaussRational(Rational(num, den)));
  }

  const std::map<Key, GaussRational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(const Key& k, const GaussRational& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) {
      terms_.emplace(k, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  Coeff operator-() const {
    Coeff r;
    for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
    return r;
  }
  Coeff& operator+=(const Coeff& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
  }
  Coeff& operator-=(const Coeff& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
  }
  friend Coeff operator+(Coeff a, const Coeff& b) { return a += b; }
  friend Coeff operator-(Coeff a, const Coeff& b) { return a -= b; }
  friend Coeff operator*(const Coeff& a, const Coeff& b) {
    Coeff r;
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_)
        r.add_term({ka.first + kb.first, ka.second + kb.second}, ca * cb);
    return r;
  }
  Coeff& operator*=(const Coeff& o) { return *this = *this * o; }
  friend bool operator==(const Coeff& a, const Coeff& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Coeff& a, const Coeff& b) { return !(a == b); }

  /// Multiply every term by l^k.
  Coeff shift_ell(int k) const {
    Coeff r;
    for (const auto& [key, c] : terms_) r.terms_.emplace(Key{key.first + k, key.second}, c);
    return r;
  }

  Coeff conj() const {
    Coeff r;
    for (const auto& [k, c] : terms_) r.terms_.emplace(k, c.conj());
    return r;
  }

  /// Substitute l = 0.  Throws when negative powers of l are present.
  Coeff ell_to_zero() const {
    Coeff r;
    for (const auto& [k, c] : terms_) {
      if (k.first < 0) throw std::domain_error("Coeff: l -> 0 with negative power of l");
      if (k.first == 0) r.terms_.emplace(k, c);
    }
    return r;
  }

  Coeff rinv_to_zero() const {
    Coeff r;
    for (const auto& [k, c] : terms_)
      if (k.second == 0) r.terms_.emplace(k, c);
    return r;
  }

  /// Lowest power of l carried by a nonzero term.
  std::optional<int> ell_order() const {
    if (terms_.empty()) return std::nullopt;
    int m = terms_.begin()->first.first;
    for (const auto& [k, c] : terms_) m = std::min(m, k.first);
    return m;
  }

  std::complex<double> eval(double ell_value, double rinv_value = 0.0) const {
    std::complex<double> s{0.0, 0.0};
    for (const auto& [k, c] : terms_)
      s += c.to_complex() * std::pow(ell_value, k.first) * std::pow(rinv_value, k.second);
    return s;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << c.str();
      if (k.first != 0) os << "*l^" << k.first;
      if (k.second != 0) os << "*Rinv^" << k.second;
    }
    return os.str();
  }

 private:
  std::map<Key, GaussRational> terms_;
};

inline Coeff operator*(long long s, const Coeff& c) { return Coeff(s) * c; }

}  // namespace ncst

#endif
