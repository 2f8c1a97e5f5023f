#ifndef NCST_QSC_HPP
#define NCST_QSC_HPP

#include "ncst/parallel.hpp"
#include "ncst/specfun.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

namespace ncst::qsc {

using cd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// ---------------------------------------------------------------- grids

/// Periodic uniform grid on [-L, L): x_j = -L + j h, h = 2L / n.
struct UniformGrid {
  double half_width = 6.0;
  int n = 512;
  double h = 0;
  std::vector<double> x;

  static UniformGrid symmetric(double half_width = 6.0, int n = 512) {
    if (n < 16 || n % 2 != 0 || !(half_width > 0)) throw std::domain_error("UniformGrid: need even n >= 16 and L > 0");
    UniformGrid g;
    g.half_width = half_width;
    g.n = n;
    g.h = 2 * half_width / n;
    g.x.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) g.x[static_cast<std::size_t>(j)] = -half_width + j * g.h;
    return g;
  }

  template <class F>
  CVec sample(F&& f) const {
    CVec v(n);
    for (int j = 0; j < n; ++j) v(j) = f(x[static_cast<std::size_t>(j)]);
    return v;
  }
};

/// Trapezoid (periodic) inner product h sum conj(a) b.
inline cd inner(const UniformGrid& g, const CVec& a, const CVec& b) { return g.h * a.dot(b); }

/// Fourth-order central first derivative; samples beyond the ends are taken as zero.
inline CVec derivative4(const UniformGrid& g, const CVec& v) {
  const int n = g.n;
  auto at = [&](int j) -> cd { return (j < 0 || j >= n) ? cd(0) : v(j); };
  CVec d(n);
  for (int j = 0; j < n; ++j) d(j) = (-at(j + 2) + 8.0 * at(j + 1) - 8.0 * at(j - 1) + at(j - 2)) / (12 * g.h);
  return d;
}

inline CVec multiply(const UniformGrid& g, const CVec& v, double (*f)(double)) {
  CVec out(g.n);
  for (int j = 0; j < g.n; ++j) out(j) = f(g.x[static_cast<std::size_t>(j)]) * v(j);
  return out;
}

// ---------------------------------------------------------------- ISO(1,1) vacuum

/// Norm constant of e^{-cosh w}: int e^{-2 cosh w} dw = 2 K_0(2).
inline double vacuum_norm_constant() { return 2 * bessel_k0(2.0); }

/// Samples in the omega representation, where X0 = -i d/dw, D- = -i sinh w, D+ = cosh w.
struct OmegaState {
  UniformGrid grid;
  CVec values;
  double norm() const { return std::sqrt(inner(grid, values, values).real()); }
};

inline double vacuum_value(double w) { return std::exp(-std::cosh(w)) / std::sqrt(vacuum_norm_constant()); }

/// Normalized vacuum. The tails must be negligible at double precision.
inline OmegaState vacuum_iso11(const UniformGrid& g) {
  if (std::exp(-std::cosh(g.half_width)) > 1e-30) throw std::domain_error("vacuum_iso11: grid too small for the vacuum tails");
  return {g, g.sample(vacuum_value)};
}

/// Trapezoid value of int e^{-2 cosh w} dw over the grid.
inline double vacuum_norm_quadrature(const UniformGrid& g) {
  double s = 0;
  for (double w : g.x) s += std::exp(-2 * std::cosh(w));
  return s * g.h;
}

inline double sinh_fn(double w) { return std::sinh(w); }
inline double cosh_fn(double w) { return std::cosh(w); }
inline double exp_plus(double w) { return std::exp(w); }
inline double exp_minus(double w) { return std::exp(-w); }

/// A = (X0 + D-)/sqrt2 = -i (d/dw + sinh w)/sqrt2.
inline CVec apply_A(const UniformGrid& g, const CVec& v) {
  return cd(0, -1) / std::sqrt(2.0) * (derivative4(g, v) + multiply(g, v, sinh_fn));
}

/// A^dagger = (X0 - D-)/sqrt2 = -i (d/dw - sinh w)/sqrt2.
inline CVec apply_Adag(const UniformGrid& g, const CVec& v) {
  return cd(0, -1) / std::sqrt(2.0) * (derivative4(g, v) - multiply(g, v, sinh_fn));
}

/// Gram matrix of {A^dagger^n phi : n = 0..n_max} on the grid.
inline CMat ladder_gram(const UniformGrid& g, int n_max) {
  if (n_max < 0 || n_max > 8) throw std::domain_error("ladder_gram: n_max must be in [0, 8]");
  std::vector<CVec> v{vacuum_iso11(g).values};
  for (int k = 0; k < n_max; ++k) v.push_back(apply_Adag(g, v.back()));
  CMat G(n_max + 1, n_max + 1);
  for (int i = 0; i <= n_max; ++i)
    for (int j = 0; j <= n_max; ++j) G(i, j) = inner(g, v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
  return G;
}

/// Largest |G_ij| / sqrt(G_ii G_jj) over i != j.
inline double gram_offdiag_ratio(const CMat& G) {
  double worst = 0;
  for (int i = 0; i < G.rows(); ++i)
    for (int j = 0; j < G.cols(); ++j)
      if (i != j) worst = std::max(worst, std::abs(G(i, j)) / std::sqrt(G(i, i).real() * G(j, j).real()));
  return worst;
}

/// (phi, e^{iyX0} phi) = K_0(2 cosh(y/2)) / K_0(2).
inline double char_function_x0(double y) {
  if (std::abs(y) > 10) throw std::domain_error("char_function_x0: |y| <= 10");
  return bessel_k0(2 * std::cosh(y / 2)) / bessel_k0(2.0);
}

/// Spectral evaluation of (phi, e^{iyX0} phi) on the periodic grid: X0 = -i d/dw is
/// diagonal in the discrete Fourier basis, so the exponential is exact there.
class GridCharFunction {
 public:
  explicit GridCharFunction(const UniformGrid& g) : h_(g.h), n_(g.n) {
    CVec phi = vacuum_iso11(g).values;
    power_.resize(static_cast<std::size_t>(n_));
    kappa_.resize(static_cast<std::size_t>(n_));
    for (int k = 0; k < n_; ++k) {
      cd acc = 0;
      for (int j = 0; j < n_; ++j) acc += phi(j) * std::polar(1.0, -2 * std::numbers::pi * double(j) * k / n_);
      power_[static_cast<std::size_t>(k)] = std::norm(acc);
      int kk = k < n_ / 2 ? k : k - n_;
      kappa_[static_cast<std::size_t>(k)] = 2 * std::numbers::pi * kk / (n_ * h_);
    }
  }

  cd operator()(double y) const {
    cd acc = 0;
    for (int k = 0; k < n_; ++k) acc += power_[static_cast<std::size_t>(k)] * std::polar(1.0, kappa_[static_cast<std::size_t>(k)] * y);
    return acc * h_ / double(n_);
  }

 private:
  double h_;
  int n_;
  std::vector<double> power_, kappa_;
};

// ---------------------------------------------------------------- Ito table

enum class Channel { X0 = 0, Hplus = 1, Hminus = 2 };
inline constexpr std::array<Channel, 3> all_channels{Channel::X0, Channel::Hplus, Channel::Hminus};

struct ItoEntry {
  cd coefficient = 0;
  Channel result = Channel::X0;
  bool nonzero() const { return coefficient != cd(0); }
};

/// dA . dB as a multiple of a single differential, zero otherwise.
inline ItoEntry ito_product(Channel a, Channel b) {
  const cd half_i(0, 0.5);
  if (a == Channel::X0 && b == Channel::Hplus) return {-half_i, Channel::Hplus};
  if (a == Channel::Hplus && b == Channel::X0) return {half_i, Channel::Hplus};
  if (a == Channel::X0 && b == Channel::Hminus) return {half_i, Channel::Hminus};
  if (a == Channel::Hminus && b == Channel::X0) return {-half_i, Channel::Hminus};
  return {};
}

/// X0 -> -i d/dmu, H+ -> e^mu, H- -> e^-mu.
inline CVec channel_op(const UniformGrid& g, Channel c, const CVec& v) {
  switch (c) {
    case Channel::X0:
      return cd(0, -1) * derivative4(g, v);
    case Channel::Hplus:
      return multiply(g, v, exp_plus);
    case Channel::Hminus:
      return multiply(g, v, exp_minus);
  }
  return v;
}

// ---------------------------------------------------------------- direct integral

/// Time partition 0 = s_0 < ... < s_M.
struct Partition {
  std::vector<double> s;

  explicit Partition(std::vector<double> pts) : s(std::move(pts)) {
    if (s.size() < 2 || s.front() != 0.0) throw std::domain_error("Partition: must start at 0 with at least one slot");
    for (std::size_t i = 1; i < s.size(); ++i)
      if (!(s[i] > s[i - 1])) throw std::domain_error("Partition: points must increase");
  }
  int slots() const { return static_cast<int>(s.size()) - 1; }
  double width(int k) const { return s[static_cast<std::size_t>(k) + 1] - s[static_cast<std::size_t>(k)]; }
  /// Slots lying inside [0, t]; t must be a partition point or beyond the end.
  int slots_before(double t) const {
    if (t >= s.back()) return slots();
    for (int k = 0; k <= slots(); ++k)
      if (s[static_cast<std::size_t>(k)] == t) return k;
    throw std::domain_error("Partition: t is not a partition point");
  }
  bool operator==(const Partition& o) const { return s == o.s; }
};

/// Complex step function, constant on each slot.
struct StepFunction {
  Partition partition;
  std::vector<cd> values;

  StepFunction(Partition p, std::vector<cd> v) : partition(std::move(p)), values(std::move(v)) {
    if (static_cast<int>(values.size()) != partition.slots()) throw std::domain_error("StepFunction: one value per slot");
  }
  static StepFunction indicator(const Partition& p, double a, double b) {
    std::vector<cd> v;
    for (int k = 0; k < p.slots(); ++k) {
      double lo = p.s[static_cast<std::size_t>(k)], hi = p.s[static_cast<std::size_t>(k) + 1];
      v.push_back(lo >= a && hi <= b ? 1.0 : 0.0);
    }
    return {p, v};
  }
};

/// (f, g)_h restricted to the slots [first, last).
inline cd h_inner(const StepFunction& f, const StepFunction& g, int first = 0, int last = -1) {
  if (!(f.partition == g.partition)) throw std::domain_error("h_inner: partitions differ");
  if (last < 0) last = f.partition.slots();
  cd acc = 0;
  for (int k = first; k < last; ++k)
    acc += f.partition.width(k) * std::conj(f.values[static_cast<std::size_t>(k)]) * g.values[static_cast<std::size_t>(k)];
  return acc;
}

/// Adapted step process with one value per slot in each of the three channels.
/// Values are fixed at construction; `with_value` returns a modified copy.
class StepProcess {
 public:
  StepProcess(Partition p, std::array<std::vector<cd>, 3> v) : partition_(std::move(p)), values_(std::move(v)) {
    for (const auto& c : values_)
      if (static_cast<int>(c.size()) != partition_.slots()) throw std::domain_error("StepProcess: one value per slot");
  }

  /// Constant `value` on the slots inside [s1, s2] in channel c, zero elsewhere.
  static StepProcess elementary(const Partition& p, Channel c, double s1, double s2, cd value = 1.0) {
    std::array<std::vector<cd>, 3> v;
    for (auto& ch : v) ch.assign(static_cast<std::size_t>(p.slots()), 0.0);
    auto ind = StepFunction::indicator(p, s1, s2);
    for (int k = 0; k < p.slots(); ++k) v[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)] = value * ind.values[static_cast<std::size_t>(k)];
    return {p, v};
  }

  static StepProcess zero(const Partition& p) {
    std::array<std::vector<cd>, 3> v;
    for (auto& ch : v) ch.assign(static_cast<std::size_t>(p.slots()), 0.0);
    return {p, v};
  }

  const Partition& partition() const { return partition_; }
  cd value(Channel c, int slot) const { return values_[static_cast<std::size_t>(c)][static_cast<std::size_t>(slot)]; }

  StepProcess with_value(Channel c, int slot, cd v) const {
    StepProcess out = *this;
    out.values_[static_cast<std::size_t>(c)].at(static_cast<std::size_t>(slot)) = v;
    return out;
  }

  StepProcess operator+(const StepProcess& o) const { return combine(o, 1.0, 1.0); }
  StepProcess scaled(cd a) const { return combine(*this, a, 0.0); }

 private:
  StepProcess combine(const StepProcess& o, cd a, cd b) const {
    if (!(partition_ == o.partition_)) throw std::domain_error("StepProcess: partitions differ");
    StepProcess out = *this;
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t k = 0; k < values_[c].size(); ++k) out.values_[c][k] = a * values_[c][k] + b * o.values_[c][k];
    return out;
  }

  Partition partition_;
  std::array<std::vector<cd>, 3> values_;
};

/// Discretized direct integral: one grid function per time slot.
struct DirectIntegralState {
  Partition partition;
  UniformGrid grid;
  std::vector<CVec> slots;

  /// The product state psi(f): slot k holds f_k psi.
  static DirectIntegralState product(const StepFunction& f, const UniformGrid& g, const CVec& psi) {
    DirectIntegralState s{f.partition, g, {}};
    for (cd v : f.values) s.slots.push_back(v * psi);
    return s;
  }
};

/// Scalar product sum_k dtau_k (a_k, b_k) over slots [first, last).
inline cd state_inner(const DirectIntegralState& a, const DirectIntegralState& b, int first = 0, int last = -1) {
  if (!(a.partition == b.partition)) throw std::domain_error("state_inner: partitions differ");
  if (last < 0) last = a.partition.slots();
  cd acc = 0;
  for (int k = first; k < last; ++k)
    acc += a.partition.width(k) * inner(a.grid, a.slots[static_cast<std::size_t>(k)], b.slots[static_cast<std::size_t>(k)]);
  return acc;
}

/// O(f) psi: slot k becomes f_k O psi_k.
inline DirectIntegralState indexed_action(Channel c, const StepFunction& f, const DirectIntegralState& psi) {
  if (!(f.partition == psi.partition)) throw std::domain_error("indexed_action: partitions differ");
  DirectIntegralState out = psi;
  parallel_for(psi.slots.size(), [&](std::size_t k) { out.slots[k] = f.values[k] * channel_op(psi.grid, c, psi.slots[k]); });
  return out;
}

/// N(t) psi for N(t) = int_0^t E0 dX0 + E+ dH+ + E- dH-.
inline DirectIntegralState stochastic_integral(const StepProcess& E, double t, const DirectIntegralState& psi) {
  if (!(E.partition() == psi.partition)) throw std::domain_error("stochastic_integral: partitions differ");
  const int active = psi.partition.slots_before(t);
  DirectIntegralState out = psi;
  parallel_for(psi.slots.size(), [&](std::size_t k) {
    CVec acc = CVec::Zero(psi.grid.n);
    if (static_cast<int>(k) < active)
      for (Channel c : all_channels) {
        cd e = E.value(c, static_cast<int>(k));
        if (e != cd(0)) acc += e * channel_op(psi.grid, c, psi.slots[k]);
      }
    out.slots[k] = acc;
  });
  return out;
}

struct FirstFundamental {
  cd direct;      // <phi(f), N(t) psi(g)>
  cd factorized;  // sum over channels of (phi, O psi)_mu (f, E chi g)_h
};

inline FirstFundamental first_fundamental_check(const StepProcess& E, const StepFunction& f, const CVec& phi, const StepFunction& g,
                                                const CVec& psi, const UniformGrid& grid, double t) {
  auto left = DirectIntegralState::product(f, grid, phi);
  auto right = DirectIntegralState::product(g, grid, psi);
  FirstFundamental r;
  r.direct = state_inner(left, stochastic_integral(E, t, right));
  const int active = f.partition.slots_before(t);
  for (Channel c : all_channels) {
    std::vector<cd> eg;
    for (int k = 0; k < g.partition.slots(); ++k) eg.push_back(k < active ? E.value(c, k) * g.values[static_cast<std::size_t>(k)] : cd(0));
    r.factorized += inner(grid, phi, channel_op(grid, c, psi)) * h_inner(f, StepFunction(g.partition, eg));
  }
  return r;
}

struct SecondFundamental {
  cd direct;     // <N1(t) phi(f), N2(t) psi(g)>
  cd by_parts;   // symmetrized part, the two integration-by-parts terms
  cd remainder;  // direct - by_parts
  cd ito;        // prediction from the multiplication table
};

/// The scalar product of two stochastic integrals is local in time on the direct
/// integral. Splitting each slot term (O1 phi, O2 psi) into its symmetrized part and
/// (1/2)(phi, [O1^dagger, O2] psi) isolates the diagonal correction, which is compared
/// with the table prediction sum_ab conj(E1_a) E2_b c_ab (phi, O_ab psi).
inline SecondFundamental second_fundamental_check(const StepProcess& E1, const StepProcess& E2, const StepFunction& f, const CVec& phi,
                                                  const StepFunction& g, const CVec& psi, const UniformGrid& grid, double t) {
  if (!(E1.partition() == E2.partition() && E1.partition() == f.partition && f.partition == g.partition))
    throw std::domain_error("second_fundamental_check: partitions differ");
  const int active = f.partition.slots_before(t);
  std::array<CVec, 3> Ophi, Opsi;
  for (Channel c : all_channels) {
    Ophi[static_cast<std::size_t>(c)] = channel_op(grid, c, phi);
    Opsi[static_cast<std::size_t>(c)] = channel_op(grid, c, psi);
  }
  SecondFundamental r;
  for (int k = 0; k < active; ++k) {
    const cd w = f.partition.width(k) * std::conj(f.values[static_cast<std::size_t>(k)]) * g.values[static_cast<std::size_t>(k)];
    if (w == cd(0)) continue;
    CVec o1phi = CVec::Zero(grid.n), o2psi = CVec::Zero(grid.n), o2dag_phi = CVec::Zero(grid.n), o1dag_psi = CVec::Zero(grid.n);
    for (Channel c : all_channels) {
      const auto i = static_cast<std::size_t>(c);
      o1phi += E1.value(c, k) * Ophi[i];
      o2psi += E2.value(c, k) * Opsi[i];
      o2dag_phi += std::conj(E2.value(c, k)) * Ophi[i];
      o1dag_psi += std::conj(E1.value(c, k)) * Opsi[i];
    }
    cd d = inner(grid, o1phi, o2psi);
    r.direct += w * d;
    r.by_parts += w * 0.5 * (d + inner(grid, o2dag_phi, o1dag_psi));
    for (Channel a : all_channels)
      for (Channel b : all_channels) {
        auto e = ito_product(a, b);
        if (!e.nonzero()) continue;
        cd kernel = inner(grid, phi, channel_op(grid, e.result, psi));
        r.ito += w * std::conj(E1.value(a, k)) * E2.value(b, k) * e.coefficient * kernel;
      }
  }
  r.remainder = r.direct - r.by_parts;
  return r;
}

/// max |remainder - table| over all nine channel pairs of elementary processes on a
/// fixed three-slot partition, with phi the vacuum and psi a shifted, twisted vacuum.
inline double ito_sweep_error(const UniformGrid& grid) {
  Partition P({0.0, 0.5, 1.0, 2.0});
  StepFunction f(P, {1.0, cd(0.2, 0.4), -1.0}), g(P, {0.5, 1.0, cd(0, 2)});
  CVec phi = vacuum_iso11(grid).values;
  CVec psi = grid.sample([](double m) { return std::exp(-std::cosh(m - 0.4)) * cd(1, 0.3 * m); });
  double worst = 0;
  for (Channel a : all_channels)
    for (Channel b : all_channels) {
      auto E1 = StepProcess::elementary(P, a, 0.0, 1.0);
      auto E2 = StepProcess::elementary(P, b, 0.5, 2.0, cd(0.7, 0.1));
      auto r = second_fundamental_check(E1, E2, f, phi, g, psi, grid, 2.0);
      worst = std::max(worst, std::abs(r.remainder - r.ito));
    }
  return worst;
}

/// exp{ sum_k dtau_k log C(f_k) } for a real step function f.
inline double vacuum_functional(const StepFunction& f) {
  double acc = 0;
  for (int k = 0; k < f.partition.slots(); ++k) {
    cd v = f.values[static_cast<std::size_t>(k)];
    if (v.imag() != 0) throw std::domain_error("vacuum_functional: f must be real");
    acc += f.partition.width(k) * std::log(char_function_x0(v.real()));
  }
  return std::exp(acc);
}

/// Slot-by-slot evaluation on the grid. Each slot of width dtau carries an independent
/// increment whose law is the dtau-th convolution power of the vacuum law, so the
/// expectation of e^{iX0(f)} is the product of the grid characteristic values raised to dtau.
inline cd vacuum_functional_grid(const StepFunction& f, const GridCharFunction& C) {
  cd acc = 1;
  for (int k = 0; k < f.partition.slots(); ++k) {
    cd v = f.values[static_cast<std::size_t>(k)];
    if (v.imag() != 0) throw std::domain_error("vacuum_functional_grid: f must be real");
    acc *= std::pow(C(v.real()), f.partition.width(k));
  }
  return acc;
}

/// Smallest eigenvalue of [C(y_i - y_j)]; nonnegative for a characteristic function.
template <class F>
double bochner_min_eigenvalue(F&& C, const std::vector<double>& y) {
  const int n = static_cast<int>(y.size());
  CMat M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = cd(C(y[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(j)]));
  M = 0.5 * (M + M.adjoint()).eval();
  return Eigen::SelfAdjointEigenSolver<CMat>(M, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

// ---------------------------------------------------------------- ISO(2)

/// Coefficients c_n = I_n(1)/sqrt(I_0(2)) of the normalized vacuum, n = -K..K.
inline std::vector<double> iso2_vacuum_coefficients(int K) {
  std::vector<double> c;
  const double norm = std::sqrt(bessel_i(0, 2.0));
  for (int n = -K; n <= K; ++n) c.push_back(bessel_i(n, 1.0) / norm);
  return c;
}

/// The same coefficients from the function e^{cos theta}/sqrt(2 pi I_0(2)) by
/// trapezoid quadrature against e_n = e^{in theta}/sqrt(2 pi).
inline std::vector<double> iso2_vacuum_fourier(int K, int samples = 128) {
  const double pi = std::numbers::pi;
  const double norm = std::sqrt(2 * pi * bessel_i(0, 2.0));
  std::vector<double> c;
  for (int n = -K; n <= K; ++n) {
    cd acc = 0;
    for (int j = 0; j < samples; ++j) {
      double th = 2 * pi * j / samples;
      acc += std::exp(std::cos(th)) * std::polar(1.0, -n * th);
    }
    c.push_back((acc * (2 * pi / samples) / std::sqrt(2 * pi) / norm).real());
  }
  return c;
}

/// max_n |(B c)_n| with B = (x + Delta-)/sqrt2 on l^2(Z), interior n only.
inline double iso2_annihilation_residual(const std::vector<double>& c) {
  const int K = (static_cast<int>(c.size()) - 1) / 2;
  double worst = 0;
  for (int n = -K + 1; n <= K - 1; ++n) {
    auto at = [&](int m) { return c[static_cast<std::size_t>(m + K)]; };
    worst = std::max(worst, std::abs(n * at(n) + 0.5 * (at(n + 1) - at(n - 1))) / std::sqrt(2.0));
  }
  return worst;
}

/// I_0(2 cos(s/2)) / I_0(2).
inline double iso2_char(double s) { return bessel_i(0, 2 * std::cos(s / 2)) / bessel_i(0, 2.0); }

/// sum_n |c_n|^2 e^{ins}.
inline cd iso2_char_series(double s, const std::vector<double>& c) {
  const int K = (static_cast<int>(c.size()) - 1) / 2;
  cd acc = 0;
  for (int n = -K; n <= K; ++n) acc += c[static_cast<std::size_t>(n + K)] * c[static_cast<std::size_t>(n + K)] * std::polar(1.0, n * s);
  return acc;
}

enum class Iso2Channel { X, Vplus, Vminus };

/// Lifted circle action on coefficient vectors (index n = -K..K of e^{in theta}):
/// X = i d/dtheta -> -n, V+ = e^{i theta} raises n, V- lowers n.
inline CVec iso2_op(Iso2Channel c, const CVec& v) {
  const int K = (static_cast<int>(v.size()) - 1) / 2;
  CVec out = CVec::Zero(v.size());
  for (int n = -K; n <= K; ++n) {
    const cd x = v(n + K);
    switch (c) {
      case Iso2Channel::X:
        out(n + K) = -double(n) * x;
        break;
      case Iso2Channel::Vplus:
        if (n < K) out(n + 1 + K) = x;
        break;
      case Iso2Channel::Vminus:
        if (n > -K) out(n - 1 + K) = x;
        break;
    }
  }
  return out;
}

/// O(f) on a direct sum of truncated circle spaces, one per slot.
inline std::vector<CVec> iso2_indexed_action(Iso2Channel c, const StepFunction& f, const std::vector<CVec>& slots) {
  if (static_cast<int>(slots.size()) != f.partition.slots()) throw std::domain_error("iso2_indexed_action: slot count");
  std::vector<CVec> out;
  for (std::size_t k = 0; k < slots.size(); ++k) out.push_back(f.values[k] * iso2_op(c, slots[k]));
  return out;
}

}  // namespace ncst::qsc

#endif
