#ifndef NCST_EXPERIMENTS_HPP
#define NCST_EXPERIMENTS_HPP

#include "ncst/reps.hpp"
#include "ncst/specfun.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/sinh_sinh.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace ncst {

// ---------------------------------------------------------------- oscillator

/// Harmonic potential on the circle representation with r = 1.
struct OscillatorParams {
  double m = 1.0;
  double omega = 1.0;
  double ell = 0.05;
  int levels = 6;
};

/// Mathieu parameter of the oscillator: q = -1 / (4 m^2 omega^2 l^4).
inline double oscillator_q(const OscillatorParams& p) {
  double s = p.m * p.omega * p.ell * p.ell;
  return -1.0 / (4.0 * s * s);
}

/// E_n from the characteristic values: E = (m omega^2 l^2 / 2)(a - 2q).
/// Level n is the (2n)-th value of the merged spectrum (pairs are degenerate
/// up to tunnelling between the two wells of sin^2).
inline std::vector<double> oscillator_spectrum(const OscillatorParams& p) {
  if (!(p.m > 0 && p.omega > 0 && p.ell > 0) || p.levels < 1 || p.levels > 25)
    throw std::domain_error("oscillator_spectrum: invalid parameters");
  const double q = oscillator_q(p);
  const long double scale = static_cast<long double>(p.m) * p.omega * p.omega * p.ell * p.ell / 2;
  std::vector<double> e;
  for (int n = 0; n < p.levels; ++n) e.push_back(static_cast<double>(scale * mathieu_shifted_level(q, n)));
  return e;
}

/// Closed-form corrections through l^4.
inline double oscillator_asymptotic(int n, double m, double omega, double ell) {
  double w = 2 * n + 1;
  return (n + 0.5) * omega - (w * w + 1) * m * omega * omega * ell * ell / 16 -
         (w * w * w + 3 * w) * m * m * omega * omega * omega * std::pow(ell, 4) / 128;
}

struct OscillatorScaling {
  std::vector<double> residual_coarse;  // |E_n - asymptotic| at l
  std::vector<double> residual_fine;    // at l / 2
  std::vector<double> ratio;            // coarse / fine, l^6 scaling gives 64
};

inline OscillatorScaling oscillator_scaling(const OscillatorParams& p) {
  OscillatorParams half = p;
  half.ell = p.ell / 2;
  auto ec = oscillator_spectrum(p);
  auto ef = oscillator_spectrum(half);
  OscillatorScaling s;
  for (int n = 0; n < p.levels; ++n) {
    double rc = std::abs(ec[static_cast<std::size_t>(n)] - oscillator_asymptotic(n, p.m, p.omega, p.ell));
    double rf = std::abs(ef[static_cast<std::size_t>(n)] - oscillator_asymptotic(n, p.m, p.omega, half.ell));
    s.residual_coarse.push_back(rc);
    s.residual_fine.push_back(rf);
    s.ratio.push_back(rc / rf);
  }
  return s;
}

// ---------------------------------------------------------------- barrier

/// Reflection from a step of height V on the lattice.
struct BarrierSolution {
  double lambda = 0, V = 0;
  double z = 0, zp = 0;
  double gamma = 0, delta = 0;
  std::complex<double> a, b;
  int n_max = 0;
  std::vector<std::complex<double>> c;  // c[n + n_max], n in [-n_max, n_max]

  std::complex<double> at(int n) const {
    if (std::abs(n) > n_max) throw std::out_of_range("barrier coefficient index");
    return c[static_cast<std::size_t>(n + n_max)];
  }
};

inline BarrierSolution barrier_solve(double lambda, double V, int n_max = 21) {
  if (!(lambda > 0 && lambda < V)) throw std::domain_error("barrier_solve: need 0 < lambda < V");
  if (!(lambda < 1)) throw std::domain_error("barrier_solve: need lambda < 1 so that |z| < 2");
  if (n_max < 5) throw std::domain_error("barrier_solve: n_max too small");
  using C = std::complex<double>;
  BarrierSolution s;
  s.lambda = lambda;
  s.V = V;
  s.n_max = n_max;
  s.z = 2 - 4 * lambda;
  s.zp = 2 + 4 * V - 4 * lambda;
  s.gamma = 0.5 * std::acosh(s.zp / 2);
  s.delta = 0.5 * std::acos(s.z / 2);
  const double z = s.z, zp = s.zp, g = s.gamma, d = s.delta;
  const C i(0, 1);
  const double e2 = std::exp(-2 * g), e4 = std::exp(-4 * g);
  const double A = zp * e2 - e4;
  const double B = z * zp * e2 - z * e4 - e2;
  const C den = 2.0 * i * std::sin(2 * d);
  s.a = -1.0 / den * (A * std::exp(-3.0 * i * d) - B * std::exp(-i * d));
  s.b = 1.0 / den * (A * std::exp(3.0 * i * d) - B * std::exp(i * d));
  s.c.assign(static_cast<std::size_t>(2 * n_max + 1), C(0));
  for (int n = -n_max; n <= n_max; ++n) {
    if (n % 2 == 0) continue;
    C v = n >= 1 ? C(std::exp(-(n + 1) * g)) : s.a * std::exp(-i * double(n) * d) + s.b * std::exp(i * double(n) * d);
    s.c[static_cast<std::size_t>(n + n_max)] = v;
  }
  return s;
}

/// max |c_{n-2} + c_{n+2} - w c_n| over |n| >= 3, w = z for n < 0 and z' for n > 0.
inline double barrier_recurrence_residual(const BarrierSolution& s) {
  double worst = 0;
  for (int n = -s.n_max + 2; n <= s.n_max - 2; ++n) {
    if (std::abs(n) < 3) continue;
    double w = n < 0 ? s.z : s.zp;
    worst = std::max(worst, std::abs(s.at(n - 2) + s.at(n + 2) - w * s.at(n)));
  }
  return worst;
}

/// The recurrences at n = -1 and n = 1, which tie the two sides together.
inline double barrier_matching_residual(const BarrierSolution& s) {
  double r1 = std::abs(s.at(-3) - (s.z * s.at(-1) - s.at(1)));
  double r2 = std::abs(s.at(-1) - (s.zp * s.at(1) - s.at(3)));
  return std::max(r1, r2);
}

/// Least-squares fit of delta / sqrt(lambda) - 1 = c1 lambda + c2 lambda^2 on
/// small lambda; returns c1, the coefficient of l^2 p^2.
inline double barrier_delta_coefficient(double lambda_max = 1e-2, int samples = 40) {
  Eigen::MatrixXd M(samples, 2);
  Eigen::VectorXd y(samples);
  for (int k = 0; k < samples; ++k) {
    double lam = lambda_max * (k + 1) / samples;
    double delta = barrier_solve(lam, lam + 1.0).delta;
    M(k, 0) = lam;
    M(k, 1) = lam * lam;
    y(k) = delta / std::sqrt(lam) - 1;
  }
  Eigen::VectorXd c = M.colPivHouseholderQr().solve(y);
  return c(0);
}

// ---------------------------------------------------------------- diffraction

/// Slit projection from the geometric sum, normalized with 1/(2N).
inline double slit_projection_dirichlet(int N, double k) {
  if (!(std::abs(k) < 1)) throw std::domain_error("slit projection: |k| must be < 1");
  const double phi = std::asin(k);
  std::complex<double> s = 0;
  for (int n = -N; n <= N; ++n) s += std::exp(std::complex<double>(0, n * phi));
  return std::pow(1 - k * k, -0.25) * s.real() / (2.0 * N);
}

/// Same projection through 1 + 2 sum T_n(sqrt(1 - k^2)).
inline double slit_projection_chebyshev(int N, double k) {
  if (!(std::abs(k) < 1)) throw std::domain_error("slit projection: |k| must be < 1");
  const double x = std::sqrt(1 - k * k);
  double s = 1;
  for (int n = 1; n <= N; ++n) s += 2 * chebyshev_t(n, x);
  return std::pow(1 - k * k, -0.25) * s / (2.0 * N);
}

/// Large-N intensity (1 - k^2)^{-1/2} (sin(N asin k) / (N asin k))^2.
inline double slit_intensity_approx(int N, double k) {
  double u = N * std::asin(k);
  double sinc = u == 0 ? 1.0 : std::sin(u) / u;
  return sinc * sinc / std::sqrt(1 - k * k);
}

struct DiffractionRow {
  double k, dirichlet, chebyshev, intensity, intensity_approx;
};

inline std::vector<DiffractionRow> diffraction_profile(int N, const std::vector<double>& ks) {
  if (N < 4) throw std::domain_error("diffraction_profile: N >= 4");
  std::vector<DiffractionRow> out;
  for (double k : ks) {
    double d = slit_projection_dirichlet(N, k);
    out.push_back({k, d, slit_projection_chebyshev(N, k), d * d, slit_intensity_approx(N, k)});
  }
  return out;
}

struct RingFit {
  std::vector<double> zeros;  // k_m, m = 1..
  double alpha = 0;           // constant term of m pi / (N k_m)
  double c2 = 0;              // k^2 coefficient
  double ratio = 0;           // c2 / alpha
};

/// Locates the intensity zeros by bisection on sign changes of the projection
/// and fits m pi / (N k_m) = alpha + c2 k^2 + c4 k^4 + c6 k^6.
inline RingFit ring_compression_fit(int N, double k_max = 0.5) {
  RingFit f;
  const int grid = 40 * N;
  double prev_k = 0, prev_v = slit_projection_dirichlet(N, 0);
  for (int j = 1; j <= grid; ++j) {
    double k = k_max * j / grid;
    double v = slit_projection_dirichlet(N, k);
    if ((v < 0) != (prev_v < 0)) {
      double lo = prev_k, hi = k, vlo = prev_v;
      for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi), vm = slit_projection_dirichlet(N, mid);
        if ((vm < 0) == (vlo < 0)) {
          lo = mid;
          vlo = vm;
        } else {
          hi = mid;
        }
      }
      f.zeros.push_back(0.5 * (lo + hi));
    }
    prev_k = k;
    prev_v = v;
  }
  const int M = static_cast<int>(f.zeros.size());
  if (M < 6) throw std::runtime_error("ring_compression_fit: too few zeros");
  Eigen::MatrixXd A(M, 4);
  Eigen::VectorXd y(M);
  for (int m = 0; m < M; ++m) {
    double k = f.zeros[static_cast<std::size_t>(m)], k2 = k * k;
    A(m, 0) = 1;
    A(m, 1) = k2;
    A(m, 2) = k2 * k2;
    A(m, 3) = k2 * k2 * k2;
    y(m) = (m + 1) * std::numbers::pi / (N * k);
  }
  Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
  f.alpha = c(0);
  f.c2 = c(1);
  f.ratio = c(1) / c(0);
  return f;
}

/// (1/2N) sum_{k=-2N}^{2N} (2N - |k| + 1) J_k(s).
inline double slit_char_function(int N, double s) {
  double acc = 0;
  for (int k = -2 * N; k <= 2 * N; ++k) acc += (2 * N - std::abs(k) + 1) * bessel_j(k, s);
  return acc / (2.0 * N);
}

/// <psi_L, e^{isP} psi_L> on a truncated circle representation, psi_L = (1/sqrt(2N)) sum e^{in theta}.
inline std::vector<std::complex<double>> slit_char_matrix(int N, const std::vector<double>& s_values, int pad = 40) {
  const int M = N + pad;
  auto rep = iso2_circle(M, 1.0);
  CVec psi = CVec::Zero(rep.dimension);
  for (int n = -N; n <= N; ++n) psi(circle_index(-n, M)) = 1.0 / std::sqrt(2.0 * N);
  Eigen::SelfAdjointEigenSolver<CMat> es(CMat(rep.op("P")));
  CVec proj = es.eigenvectors().adjoint() * psi;
  std::vector<std::complex<double>> out;
  for (double s : s_values) {
    if (std::abs(bessel_j(pad, s)) > 1e-14) throw std::domain_error("slit_char_matrix: s too large for the padding");
    std::complex<double> acc = 0;
    for (int k = 0; k < rep.dimension; ++k) acc += std::norm(proj(k)) * std::exp(std::complex<double>(0, s * es.eigenvalues()(k)));
    out.push_back(acc);
  }
  return out;
}

/// <psi_L, P^2 psi_L> on the truncated circle.
inline double slit_second_moment(int N, int pad = 4) {
  const int M = N + pad;
  auto rep = iso2_circle(M, 1.0);
  CVec psi = CVec::Zero(rep.dimension);
  for (int n = -N; n <= N; ++n) psi(circle_index(-n, M)) = 1.0 / std::sqrt(2.0 * N);
  CVec pp = rep.op("P") * psi;
  return pp.squaredNorm();
}

// ---------------------------------------------------------------- walk

/// Amplitudes of the time-eigenstate (cot(theta/2))^{i t/l} in the position basis.
/// `amplitude[n]` is the projection on e^{-in theta}, that is position n l.
struct WalkState {
  double t_over_ell = 0;
  std::vector<double> pm;                            // P_n^0(t/l; pi/2)
  std::vector<std::complex<double>> amplitude;       // n = 0..n_max; zero for negative positions
  std::vector<double> coeff_as_printed;              // |c_n| = (1/2) e^{-pi t/2l} |P_n|, n >= 1; c_0 at n = 0
  std::vector<double> prob_as_printed;               // (1/4) e^{-pi t/l} P_n^2 at each of +-n l
  double partial_norm = 0;                           // sum |amplitude|^2 up to n_max
  double norm_closed_form = 0;                       // (1/2pi) int |f_t|^2 = (1 + e^{-2 pi t/l}) / 2
  double printed_total = 0;                          // c_0^2 + 2 sum prob_as_printed
};

inline WalkState time_process(double t_over_ell, int n_max = 200) {
  if (!(t_over_ell >= 0)) throw std::domain_error("time_process: t/l must be >= 0");
  const double tau = t_over_ell;
  WalkState w;
  w.t_over_ell = tau;
  w.pm = pollaczek_meixner(n_max, tau);
  const double c0 = std::exp(-std::numbers::pi * tau / 2);
  std::complex<double> ipow(1, 0);
  for (int n = 0; n <= n_max; ++n) {
    double pn = w.pm[static_cast<std::size_t>(n)];
    std::complex<double> amp = ipow * c0 * pn;
    w.amplitude.push_back(amp);
    w.partial_norm += std::norm(amp);
    if (n == 0) {
      w.coeff_as_printed.push_back(c0);
      w.prob_as_printed.push_back(c0 * c0);
      w.printed_total += c0 * c0;
    } else {
      double p = 0.25 * c0 * c0 * pn * pn;
      w.coeff_as_printed.push_back(0.5 * c0 * std::abs(pn));
      w.prob_as_printed.push_back(p);
      w.printed_total += 2 * p;
    }
    ipow *= std::complex<double>(0, 1);
  }
  w.norm_closed_form = 0.5 * (1 + std::exp(-2 * std::numbers::pi * tau));
  return w;
}

/// Residual of (n-1) c_{n-1} - (n+1) c_{n+1} + 2i(t/l) c_n = 0 on the two-sided
/// coefficient sequence c_m (coefficient of e^{i m theta}), |m| < n_max.
inline double walk_recurrence_residual(const WalkState& w) {
  const int n_max = static_cast<int>(w.amplitude.size()) - 1;
  auto c = [&](int m) -> std::complex<double> {
    if (m > 0 || -m > n_max) return 0;
    return w.amplitude[static_cast<std::size_t>(-m)];
  };
  double worst = 0;
  for (int m = -n_max + 1; m <= n_max - 1; ++m) {
    std::complex<double> r = double(m - 1) * c(m - 1) - double(m + 1) * c(m + 1) + std::complex<double>(0, 2 * w.t_over_ell) * c(m);
    double scale = std::max(1.0, std::abs(m) * std::abs(c(m)));
    worst = std::max(worst, std::abs(r) / scale);
  }
  return worst;
}

/// (1/2pi) int e^{in theta} (cot(theta/2))^{i t/l} d theta by sinh-sinh quadrature after
/// u = log|cot(theta/2)|. On (pi, 2pi) the principal branch contributes e^{-pi t/l}.
inline std::complex<double> walk_amplitude_quadrature(double t_over_ell, int n, double* error = nullptr) {
  const double tau = t_over_ell;
  const double pi = std::numbers::pi;
  boost::math::quadrature::sinh_sinh<double> integrator(12);
  auto part = [&](bool upper, bool imag) {
    auto f = [=](double u) {
      double th = 2 * std::atan(std::exp(-u));
      if (upper) th = 2 * pi - th;
      double ph = tau * u + n * th;
      double v = (imag ? std::sin(ph) : std::cos(ph)) / std::cosh(u);
      return std::isfinite(v) ? v : 0.0;
    };
    double err = 0;
    double val = integrator.integrate(f, 1e-13, &err);
    if (error) *error = std::max(*error, err);
    return val;
  };
  if (error) *error = 0;
  const double damp = std::exp(-pi * tau);
  double re = part(false, false) + damp * part(true, false);
  double im = part(false, true) + damp * part(true, true);
  return std::complex<double>(re, im) / (2 * pi);
}

/// (1/2pi) int |f_t|^2 d theta by quadrature of the modulus on the two half circles.
inline double walk_norm_quadrature(double t_over_ell) {
  const double pi = std::numbers::pi;
  boost::math::quadrature::sinh_sinh<double> integrator(12);
  double half = integrator.integrate([](double u) { return 1.0 / std::cosh(u); }, 1e-14);
  return (half + std::exp(-2 * pi * t_over_ell) * half) / (2 * pi);
}

}  // namespace ncst

#endif
