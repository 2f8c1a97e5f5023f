#ifndef NCST_SPECFUN_HPP
#define NCST_SPECFUN_HPP

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ncst {

namespace detail {

inline int miller_start(int n, double x) {
  double top = std::max(static_cast<double>(n), std::abs(x));
  int m = static_cast<int>(top + 30.0 + std::sqrt(60.0 * (top + 1.0)));
  return m + (m & 1);
}

}  // namespace detail

/// Bessel function of the first kind J_n(x), integer order.
/// Downward Miller recurrence normalized with J_0 + 2 sum J_{2k} = 1.
inline double bessel_j(int n, double x) {
  if (n < 0) return (n % 2 == 0 ? 1.0 : -1.0) * bessel_j(-n, x);
  if (x < 0) return (n % 2 == 0 ? 1.0 : -1.0) * bessel_j(n, -x);
  if (n > 400) throw std::domain_error("bessel_j: order out of range");
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  const int m = detail::miller_start(n, x);
  const double big = 1e250;
  double jp1 = 0.0, j = 1e-300, result = 0.0, norm = 0.0;
  for (int k = m; k >= 1; --k) {
    double jm1 = 2.0 * k / x * j - jp1;
    jp1 = j;
    j = jm1;
    // j now holds the unnormalized J_{k-1}
    if (k - 1 == n) result = j;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * j;
    if (std::abs(j) > big) {
      j /= big;
      jp1 /= big;
      result /= big;
      norm /= big;
    }
  }
  norm += j;
  return result / norm;
}

/// Modified Bessel function I_n(x), integer order.
/// Normalized with I_0 + 2 sum I_k = e^x, done on the e^{-x} scaled values.
inline double bessel_i(int n, double x) {
  if (n < 0) n = -n;
  if (x < 0) return (n % 2 == 0 ? 1.0 : -1.0) * bessel_i(n, -x);
  if (n > 400) throw std::domain_error("bessel_i: order out of range");
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  const int m = detail::miller_start(n, x);
  const double big = 1e250;
  double ip1 = 0.0, i = 1e-300, result = 0.0, norm = 0.0;
  for (int k = m; k >= 1; --k) {
    double im1 = 2.0 * k / x * i + ip1;
    ip1 = i;
    i = im1;
    if (k - 1 == n) result = i;
    if (k - 1 > 0) norm += 2.0 * i;
    if (i > big) {
      i /= big;
      ip1 /= big;
      result /= big;
      norm /= big;
    }
  }
  norm += i;
  if (x > 700.0) throw std::overflow_error("bessel_i: argument too large");
  return result / norm * std::exp(x);
}

/// e^x K_0(x) for x > 0 from the trapezoid rule on int_0^inf e^{-x(cosh t - 1)} dt.
inline double bessel_k0_scaled(double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_k0: x must be positive");
  // the integrand narrows like exp(-x t^2 / 2) for large x
  const double h = std::min(0.05, 0.5 / std::sqrt(x));
  double sum = 0.5;
  for (int k = 1;; ++k) {
    double t = k * h;
    double v = std::exp(-x * (std::cosh(t) - 1.0));
    sum += v;
    if (v < 1e-18 * sum) break;
  }
  return sum * h;
}

inline double bessel_k0(double x) { return bessel_k0_scaled(x) * std::exp(-x); }

/// Chebyshev polynomial of the first kind by three-term recurrence.
inline double chebyshev_t(int n, double x) {
  if (n < 0) n = -n;
  if (n == 0) return 1.0;
  double t0 = 1.0, t1 = x;
  for (int k = 1; k < n; ++k) {
    double t2 = 2.0 * x * t1 - t0;
    t0 = t1;
    t1 = t2;
  }
  return t1;
}

/// Characteristic values of f'' = (-a + 2q cos 2theta) f.
/// a_r belongs to even solutions (r >= 0), b_r to odd solutions (r >= 1).
struct MathieuSpectrum {
  double q = 0.0;
  std::vector<double> even;  // even[r] = a_r
  std::vector<double> odd;   // odd[r - 1] = b_r
  int truncation = 0;

  double a(int r) const { return even.at(static_cast<std::size_t>(r)); }
  double b(int r) const {
    if (r < 1) throw std::out_of_range("b_r needs r >= 1");
    return odd.at(static_cast<std::size_t>(r - 1));
  }
  /// All values merged in increasing order.
  std::vector<double> sorted() const {
    std::vector<double> all = even;
    all.insert(all.end(), odd.begin(), odd.end());
    std::sort(all.begin(), all.end());
    return all;
  }
};

namespace detail {

enum class MathieuBlock { EvenEven, EvenOdd, OddOdd, OddEven };

// Lowest `count` eigenvalues of one symmetric tridiagonal Fourier block of size k.
inline std::vector<long double> mathieu_block(MathieuBlock blk, long double q, int k, int count) {
  using Vec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  Vec diag(k), sub(k - 1);
  for (int m = 0; m < k; ++m) {
    long double w = 0;
    switch (blk) {
      case MathieuBlock::EvenEven: w = 2.0L * m; break;
      case MathieuBlock::EvenOdd:
      case MathieuBlock::OddOdd: w = 2.0L * m + 1; break;
      case MathieuBlock::OddEven: w = 2.0L * m + 2; break;
    }
    diag(m) = w * w;
  }
  for (int m = 0; m + 1 < k; ++m) sub(m) = q;
  if (blk == MathieuBlock::EvenEven) sub(0) = std::sqrt(2.0L) * q;
  if (blk == MathieuBlock::EvenOdd) diag(0) += q;
  if (blk == MathieuBlock::OddOdd) diag(0) -= q;
  Eigen::SelfAdjointEigenSolver<Mat> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("mathieu: eigen solver failed");
  std::vector<long double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
  return out;
}

}  // namespace detail

/// a_0..a_{r_max} and b_1..b_{r_max}. The truncation doubles until the
/// requested values move by less than tol relative to max(1, |value|).
inline MathieuSpectrum mathieu_char(double q, int r_max, double tol = 1e-10) {
  if (r_max < 0 || r_max > 50) throw std::domain_error("mathieu_char: r_max out of range");
  if (!(std::abs(q) <= 1e7)) throw std::domain_error("mathieu_char: |q| out of range");
  using detail::MathieuBlock;
  const int n_even = r_max / 2 + 1;            // a_0, a_2, ...
  const int n_eodd = (r_max + 1) / 2;          // a_1, a_3, ...
  const int n_oodd = (r_max + 1) / 2;          // b_1, b_3, ...
  const int n_oeven = r_max / 2;               // b_2, b_4, ...
  int k = 32 + r_max + static_cast<int>(4.0 * std::pow(std::abs(q), 0.25));
  std::vector<long double> prev;
  for (int iter = 0; iter < 12; ++iter, k *= 2) {
    std::vector<long double> cur;
    auto push = [&](MathieuBlock blk, int count) {
      if (count == 0) return;
      auto v = detail::mathieu_block(blk, q, k, count);
      cur.insert(cur.end(), v.begin(), v.end());
    };
    push(MathieuBlock::EvenEven, n_even);
    push(MathieuBlock::EvenOdd, n_eodd);
    push(MathieuBlock::OddOdd, n_oodd);
    push(MathieuBlock::OddEven, n_oeven);
    bool converged = !prev.empty();
    for (std::size_t i = 0; converged && i < cur.size(); ++i) {
      long double scale = std::max<long double>(1.0L, std::abs(cur[i]));
      if (std::abs(cur[i] - prev[i]) > tol * scale) converged = false;
    }
    if (converged) {
      MathieuSpectrum s;
      s.q = q;
      s.truncation = k;
      s.even.resize(static_cast<std::size_t>(r_max + 1));
      s.odd.resize(static_cast<std::size_t>(r_max));
      std::size_t off = 0;
      for (int j = 0; j < n_even; ++j) s.even[static_cast<std::size_t>(2 * j)] = static_cast<double>(cur[off + j]);
      off += static_cast<std::size_t>(n_even);
      for (int j = 0; j < n_eodd; ++j) s.even[static_cast<std::size_t>(2 * j + 1)] = static_cast<double>(cur[off + j]);
      off += static_cast<std::size_t>(n_eodd);
      for (int j = 0; j < n_oodd; ++j) s.odd[static_cast<std::size_t>(2 * j)] = static_cast<double>(cur[off + j]);
      off += static_cast<std::size_t>(n_oodd);
      for (int j = 0; j < n_oeven; ++j) s.odd[static_cast<std::size_t>(2 * j + 1)] = static_cast<double>(cur[off + j]);
      return s;
    }
    prev = std::move(cur);
  }
  throw std::runtime_error("mathieu_char: truncation not converged");
}

/// Level-n shift a + 2|q| in long double. Level n is the (2n)-th value of the
/// merged spectrum, which is what the oscillator energy needs without losing
/// digits to the -2|q| cancellation.
inline long double mathieu_shifted_level(double q, int n, double tol = 1e-12) {
  using detail::MathieuBlock;
  int k = 32 + 2 * n + static_cast<int>(4.0 * std::pow(std::abs(q), 0.25));
  const int need = n + 1;
  long double prev = 0;
  for (int iter = 0; iter < 12; ++iter, k *= 2) {
    std::vector<long double> all;
    for (auto blk : {MathieuBlock::EvenEven, MathieuBlock::EvenOdd, MathieuBlock::OddOdd, MathieuBlock::OddEven}) {
      auto v = detail::mathieu_block(blk, q, k, need + 1);
      all.insert(all.end(), v.begin(), v.end());
    }
    std::sort(all.begin(), all.end());
    long double cur = all[static_cast<std::size_t>(2 * n)] + 2.0L * std::abs(static_cast<long double>(q));
    if (iter > 0 && std::abs(cur - prev) <= tol * std::max<long double>(1.0L, std::abs(cur))) return cur;
    prev = cur;
  }
  throw std::runtime_error("mathieu_shifted_level: truncation not converged");
}

/// P_n^0(x; pi/2), n = 0..n_max, from (n+1) P_{n+1} = 2x P_n - (n-1) P_{n-1}.
inline std::vector<double> pollaczek_meixner(int n_max, double x) {
  if (n_max < 0 || n_max > 500) throw std::domain_error("pollaczek_meixner: n_max out of range");
  std::vector<double> p(static_cast<std::size_t>(n_max + 1));
  p[0] = 1.0;
  if (n_max >= 1) p[1] = 2.0 * x;
  for (int n = 1; n < n_max; ++n)
    p[static_cast<std::size_t>(n + 1)] = (2.0 * x * p[static_cast<std::size_t>(n)] - (n - 1) * p[static_cast<std::size_t>(n - 1)]) / (n + 1);
  return p;
}

/// Same coefficients from the Taylor expansion of exp(2x arctan t), using
/// n P_n = sum_k k s_k P_{n-k} with s the coefficients of 2x arctan t.
inline std::vector<double> pollaczek_meixner_series(int n_max, double x) {
  if (n_max < 0 || n_max > 500) throw std::domain_error("pollaczek_meixner_series: n_max out of range");
  std::vector<double> s(static_cast<std::size_t>(n_max + 1), 0.0);
  for (int k = 1; k <= n_max; k += 2) s[static_cast<std::size_t>(k)] = 2.0 * x * (((k / 2) % 2 == 0) ? 1.0 : -1.0) / k;
  std::vector<double> p(static_cast<std::size_t>(n_max + 1), 0.0);
  p[0] = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    double acc = 0.0;
    for (int k = 1; k <= n; k += 2) acc += k * s[static_cast<std::size_t>(k)] * p[static_cast<std::size_t>(n - k)];
    p[static_cast<std::size_t>(n)] = acc / n;
  }
  return p;
}

}  // namespace ncst

#endif
