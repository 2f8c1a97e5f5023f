#ifndef NCST_REPS_HPP
#define NCST_REPS_HPP

#include "ncst/liealg.hpp"
#include "ncst/parallel.hpp"
#include "ncst/specfun.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncst {

using cd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using SpMat = Eigen::SparseMatrix<cd, Eigen::RowMajor>;

/// Identifies a representation operator with a generator of the deformed
/// algebra: generator = sign * operator (index lowering).
struct RepGenerator {
  std::string name;
  int gen;
  int sign;
};

/// [a, b] = sum c * op.
struct Relation {
  std::string a, b;
  std::vector<std::pair<std::string, cd>> rhs;
};

struct TruncatedRep {
  std::string basis;
  int dimension = 0;
  int margin = 2;
  std::map<std::string, SpMat> ops;
  std::vector<RepGenerator> generators;
  /// Rows that take part in residual tests.
  std::vector<char> interior;
  /// Smooth test vectors for grid discretizations. Empty means residuals are
  /// taken entrywise on the interior block.
  std::vector<CVec> probes;

  const SpMat& op(const std::string& n) const {
    auto it = ops.find(n);
    if (it == ops.end()) throw std::out_of_range("no operator " + n);
    return it->second;
  }
};

/// Relations among the rep's operators from the structure constants at l = 1, 1/R = 0.
inline std::vector<Relation> algebra_relations(const TruncatedRep& rep, int eps = -1) {
  LieAlgebraSpec alg = build_deformed(eps, 1);
  std::map<int, const RepGenerator*> by_gen;
  for (const auto& g : rep.generators) by_gen[g.gen] = &g;
  std::vector<Relation> out;
  for (std::size_t i = 0; i < rep.generators.size(); ++i)
    for (std::size_t j = i + 1; j < rep.generators.size(); ++j) {
      const auto& ga = rep.generators[i];
      const auto& gb = rep.generators[j];
      Relation rel{ga.name, gb.name, {}};
      for (const auto& [t, c] : alg.bracket(ga.gen, gb.gen)) {
        cd v = c.eval(1.0, 0.0);
        if (v == cd(0)) continue;
        auto it = by_gen.find(t);
        if (it == by_gen.end()) throw std::logic_error("algebra_relations: rep does not close");
        rel.rhs.emplace_back(it->second->name, v * static_cast<double>(it->second->sign) /
                                                    static_cast<double>(ga.sign * gb.sign));
      }
      out.push_back(std::move(rel));
    }
  return out;
}

/// Interior residual of one relation: entrywise, or on the probe vectors.
inline double relation_residual(const TruncatedRep& rep, const Relation& rel) {
  const SpMat& A = rep.op(rel.a);
  const SpMat& B = rep.op(rel.b);
  double worst = 0.0;
  if (rep.probes.empty()) {
    CMat R = CMat(A * B) - CMat(B * A);
    for (const auto& [n, c] : rel.rhs) R -= c * CMat(rep.op(n));
    for (int i = 0; i < rep.dimension; ++i) {
      if (!rep.interior[static_cast<std::size_t>(i)]) continue;
      for (int j = 0; j < rep.dimension; ++j)
        if (rep.interior[static_cast<std::size_t>(j)]) worst = std::max(worst, std::abs(R(i, j)));
    }
    return worst;
  }
  for (const CVec& f : rep.probes) {
    CVec g = A * (B * f) - B * (A * f);
    for (const auto& [n, c] : rel.rhs) g -= c * (rep.op(n) * f);
    for (int i = 0; i < rep.dimension; ++i)
      if (rep.interior[static_cast<std::size_t>(i)]) worst = std::max(worst, std::abs(g(i)));
  }
  return worst;
}

struct ResidualEntry {
  std::string a, b;
  double residual;
};

/// Residual of every generator pair, computed in parallel, reported in pair order.
inline std::vector<ResidualEntry> residual_report(const TruncatedRep& rep, int eps = -1) {
  auto rels = algebra_relations(rep, eps);
  std::vector<ResidualEntry> out(rels.size());
  parallel_for(rels.size(), [&](std::size_t k) {
    out[k] = {rels[k].a, rels[k].b, relation_residual(rep, rels[k])};
  });
  return out;
}

inline double max_residual(const std::vector<ResidualEntry>& r) {
  double m = 0.0;
  for (const auto& e : r) m = std::max(m, e.residual);
  return m;
}

inline double hermiticity_defect(const TruncatedRep& rep, const std::string& n) {
  CMat A(rep.op(n));
  CMat D = A - A.adjoint();
  double worst = 0.0;
  for (int i = 0; i < rep.dimension; ++i)
    for (int j = 0; j < rep.dimension; ++j)
      if (rep.interior[static_cast<std::size_t>(i)] && rep.interior[static_cast<std::size_t>(j)])
        worst = std::max(worst, std::abs(D(i, j)));
  return worst;
}

// ---------------------------------------------------------------- circle

inline int circle_index(int n, int N) { return n + N; }

/// ISO(2) on the circle in the basis e_n = e^{-i n theta}, n in [-N, N]:
/// X = i d/dtheta, P = r sin(theta), I = r cos(theta).
inline TruncatedRep iso2_circle(int N, double r) {
  if (N < 3 || !(r > 0)) throw std::domain_error("iso2_circle: need N >= 3, r > 0");
  const int dim = 2 * N + 1;
  std::vector<Eigen::Triplet<cd>> tx, tp, ti, tvp, tvm;
  for (int n = -N; n <= N; ++n) {
    int c = circle_index(n, N);
    tx.emplace_back(c, c, cd(n));
    // sin(theta) e_n = (e_{n-1} - e_{n+1}) / 2i, cos(theta) e_n = (e_{n-1} + e_{n+1}) / 2
    if (n - 1 >= -N) {
      tp.emplace_back(circle_index(n - 1, N), c, r / cd(0, 2));
      ti.emplace_back(circle_index(n - 1, N), c, cd(r / 2));
      tvp.emplace_back(circle_index(n - 1, N), c, cd(r));
    }
    if (n + 1 <= N) {
      tp.emplace_back(circle_index(n + 1, N), c, -r / cd(0, 2));
      ti.emplace_back(circle_index(n + 1, N), c, cd(r / 2));
      tvm.emplace_back(circle_index(n + 1, N), c, cd(r));
    }
  }
  auto build = [dim](const std::vector<Eigen::Triplet<cd>>& t) {
    SpMat m(dim, dim);
    m.setFromTriplets(t.begin(), t.end());
    return m;
  };
  TruncatedRep rep;
  rep.basis = "fourier e^{-in theta}, n in [-" + std::to_string(N) + ", " + std::to_string(N) + "]";
  rep.dimension = dim;
  rep.margin = 2;
  rep.ops["X"] = build(tx);
  rep.ops["P"] = build(tp);
  rep.ops["I"] = build(ti);
  // V+ = iP + I lowers the index, V- = -iP + I raises it.
  rep.ops["V+"] = build(tvp);
  rep.ops["V-"] = build(tvm);
  rep.generators = {{"X", gen::x(1), -1}, {"P", gen::p(1), -1}, {"I", gen::kI, 1}};
  rep.interior.assign(static_cast<std::size_t>(dim), 0);
  for (int i = rep.margin; i < dim - rep.margin; ++i) rep.interior[static_cast<std::size_t>(i)] = 1;
  return rep;
}

struct MomentumStatistics {
  std::vector<double> s;
  std::vector<cd> characteristic;
  std::vector<double> eigenvalues;  // spectrum of the truncated P
  std::vector<double> weights;      // |<v_k, e_n>|^2
};

/// C(s) = <e_n, e^{isP} e_n> from the eigendecomposition of the truncated P.
inline MomentumStatistics momentum_statistics(const TruncatedRep& rep, int n, const std::vector<double>& s_values,
                                              double r = 1.0) {
  const int N = (rep.dimension - 1) / 2;
  if (std::abs(n) > N - rep.margin) throw std::domain_error("momentum_statistics: |n| too close to the edge");
  Eigen::SelfAdjointEigenSolver<CMat> es(CMat(rep.op("P")));
  const CMat& V = es.eigenvectors();
  const int c = circle_index(n, N);
  MomentumStatistics st;
  for (int k = 0; k < rep.dimension; ++k) {
    st.eigenvalues.push_back(es.eigenvalues()(k));
    st.weights.push_back(std::norm(V(c, k)));
  }
  const int reach = N - std::abs(n);
  for (double s : s_values) {
    // the couplings to the cut edge enter through J_reach(s r)
    if (std::abs(bessel_j(reach, s * r)) > 1e-13)
      throw std::domain_error("momentum_statistics: s too large for the truncation");
    cd acc = 0;
    for (int k = 0; k < rep.dimension; ++k) acc += st.weights[static_cast<std::size_t>(k)] * std::exp(cd(0, s * st.eigenvalues[static_cast<std::size_t>(k)]));
    st.s.push_back(s);
    st.characteristic.push_back(acc);
  }
  return st;
}

/// Arcsine density 1 / (pi sqrt(r^2 - P^2)) on |P| < r.
inline double arcsine_density(double p, double r) {
  if (std::abs(p) >= r) return 0.0;
  return 1.0 / (std::numbers::pi * std::sqrt(r * r - p * p));
}

/// L1 distance between binned spectral weights and the arcsine law.
inline double arcsine_l1(const MomentumStatistics& st, double r, int bins) {
  std::vector<double> emp(static_cast<std::size_t>(bins), 0.0);
  for (std::size_t k = 0; k < st.eigenvalues.size(); ++k) {
    int b = static_cast<int>((st.eigenvalues[k] + r) / (2 * r) * bins);
    b = std::clamp(b, 0, bins - 1);
    emp[static_cast<std::size_t>(b)] += st.weights[k];
  }
  double l1 = 0.0;
  for (int b = 0; b < bins; ++b) {
    double lo = -r + 2 * r * b / bins, hi = -r + 2 * r * (b + 1) / bins;
    double expect = (std::asin(std::clamp(hi / r, -1.0, 1.0)) - std::asin(std::clamp(lo / r, -1.0, 1.0))) / std::numbers::pi;
    l1 += std::abs(emp[static_cast<std::size_t>(b)] - expect);
  }
  return l1;
}

/// Max |sum |c|^2 - grid norm^2| over random vectors: the DFT on 2N+1 points is unitary.
inline double circle_parseval_defect(int N, const std::vector<CVec>& vectors) {
  const int M = 2 * N + 1;
  double worst = 0.0;
  for (const CVec& c : vectors) {
    CVec grid = CVec::Zero(M);
    for (int j = 0; j < M; ++j) {
      double th = 2 * std::numbers::pi * j / M;
      for (int n = -N; n <= N; ++n) grid(j) += c(circle_index(n, N)) * std::exp(cd(0, -n * th));
    }
    worst = std::max(worst, std::abs(grid.squaredNorm() / M - c.squaredNorm()));
  }
  return worst;
}

// ---------------------------------------------------------------- grids

/// One axis of a tensor grid: nodes, quadrature weights, derivative matrix.
struct GridAxis {
  std::vector<double> nodes;
  std::vector<double> weights;
  Eigen::SparseMatrix<double, Eigen::RowMajor> D;
  bool periodic = false;
};

/// Uniform grid on [a, b] with second-order central differences (one-sided at the ends).
inline GridAxis uniform_axis(double a, double b, int n) {
  GridAxis ax;
  const double h = (b - a) / (n - 1);
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < n; ++i) {
    ax.nodes.push_back(a + i * h);
    ax.weights.push_back((i == 0 || i == n - 1) ? h / 2 : h);
    if (i == 0) {
      t.emplace_back(0, 0, -1.5 / h);
      t.emplace_back(0, 1, 2.0 / h);
      t.emplace_back(0, 2, -0.5 / h);
    } else if (i == n - 1) {
      t.emplace_back(i, i, 1.5 / h);
      t.emplace_back(i, i - 1, -2.0 / h);
      t.emplace_back(i, i - 2, 0.5 / h);
    } else {
      t.emplace_back(i, i + 1, 0.5 / h);
      t.emplace_back(i, i - 1, -0.5 / h);
    }
  }
  ax.D.resize(n, n);
  ax.D.setFromTriplets(t.begin(), t.end());
  return ax;
}

/// Periodic Fourier collocation on [0, 2 pi), n even.
inline GridAxis fourier_axis(int n) {
  if (n < 2 || n % 2) throw std::domain_error("fourier_axis: n must be even");
  GridAxis ax;
  ax.periodic = true;
  const double h = 2 * std::numbers::pi / n;
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < n; ++i) {
    ax.nodes.push_back(i * h);
    ax.weights.push_back(h);
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      double sgn = ((i - j) % 2 == 0) ? 1.0 : -1.0;
      t.emplace_back(i, j, 0.5 * sgn / std::tan((i - j) * h / 2));
    }
  }
  ax.D.resize(n, n);
  ax.D.setFromTriplets(t.begin(), t.end());
  return ax;
}

/// Gauss-Legendre nodes on [a, b] (Golub-Welsch) with the barycentric
/// differentiation matrix of the interpolating polynomial.
inline GridAxis gauss_axis(double a, double b, int n) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n), sub(n - 1);
  for (int k = 1; k < n; ++k) sub(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  GridAxis ax;
  for (int i = 0; i < n; ++i) {
    double x = es.eigenvalues()(i);
    double w = 2.0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
    ax.nodes.push_back(a + (b - a) * (x + 1) / 2);
    ax.weights.push_back(w * (b - a) / 2);
  }
  std::vector<double> bw(static_cast<std::size_t>(n), 1.0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (k != j) bw[static_cast<std::size_t>(j)] /= (ax.nodes[static_cast<std::size_t>(j)] - ax.nodes[static_cast<std::size_t>(k)]);
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < n; ++i) {
    double dsum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      double v = (bw[static_cast<std::size_t>(j)] / bw[static_cast<std::size_t>(i)]) /
                 (ax.nodes[static_cast<std::size_t>(i)] - ax.nodes[static_cast<std::size_t>(j)]);
      t.emplace_back(i, j, v);
      dsum += v;
    }
    t.emplace_back(i, i, -dsum);
  }
  ax.D.resize(n, n);
  ax.D.setFromTriplets(t.begin(), t.end());
  return ax;
}

/// Tensor-product grid; point index is row-major over the axes.
struct TensorGrid {
  std::vector<GridAxis> axes;

  int size() const {
    int s = 1;
    for (const auto& a : axes) s *= static_cast<int>(a.nodes.size());
    return s;
  }
  int stride(std::size_t axis) const {
    int s = 1;
    for (std::size_t k = axis + 1; k < axes.size(); ++k) s *= static_cast<int>(axes[k].nodes.size());
    return s;
  }
  std::vector<double> point(int p) const {
    std::vector<double> x(axes.size());
    for (std::size_t k = axes.size(); k-- > 0;) {
      int n = static_cast<int>(axes[k].nodes.size());
      x[k] = axes[k].nodes[static_cast<std::size_t>(p % n)];
      p /= n;
    }
    return x;
  }
  int coord_index(int p, std::size_t axis) const {
    return (p / stride(axis)) % static_cast<int>(axes[axis].nodes.size());
  }
};

using PointFn = std::function<cd(const std::vector<double>&)>;

/// First-order operator mult(x) + sum_k coef_k(x) d/dx_k on the grid.
inline SpMat assemble(const TensorGrid& g, const PointFn& mult, const std::vector<std::pair<std::size_t, PointFn>>& terms) {
  const int n = g.size();
  std::vector<Eigen::Triplet<cd>> t;
  for (int p = 0; p < n; ++p) {
    auto x = g.point(p);
    if (mult) {
      cd m = mult(x);
      if (m != cd(0)) t.emplace_back(p, p, m);
    }
    for (const auto& [axis, coef] : terms) {
      cd c = coef(x);
      if (c == cd(0)) continue;
      const auto& D = g.axes[axis].D;
      int i = g.coord_index(p, axis), s = g.stride(axis);
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(D, i); it; ++it)
        t.emplace_back(p, p + (static_cast<int>(it.col()) - i) * s, c * it.value());
    }
  }
  SpMat m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

inline CVec sample(const TensorGrid& g, const PointFn& f) {
  CVec v(g.size());
  for (int p = 0; p < g.size(); ++p) v(p) = f(g.point(p));
  return v;
}

/// Interior mask: every coordinate of a non-periodic axis inside [lo_k, hi_k].
inline std::vector<char> box_mask(const TensorGrid& g, const std::vector<std::pair<double, double>>& box) {
  std::vector<char> m(static_cast<std::size_t>(g.size()), 1);
  for (int p = 0; p < g.size(); ++p) {
    auto x = g.point(p);
    for (std::size_t k = 0; k < g.axes.size(); ++k)
      if (!g.axes[k].periodic && (x[k] < box[k].first || x[k] > box[k].second)) m[static_cast<std::size_t>(p)] = 0;
  }
  return m;
}

// ---------------------------------------------------------------- hyperbola

/// ISO(1,1) on the hyperbola: P0 = r sinh(mu), I = r cosh(mu), X0 = -i d/dmu,
/// central differences on a uniform mu-grid over [-L, L].
inline TruncatedRep iso11_hyperbola(int n, double L, double r = 1.0) {
  TensorGrid g{{uniform_axis(-L, L, n)}};
  TruncatedRep rep;
  rep.basis = "uniform mu-grid, n = " + std::to_string(n) + ", L = " + std::to_string(L);
  rep.dimension = n;
  rep.margin = 2;
  rep.ops["P0"] = assemble(g, [r](const auto& x) { return cd(r * std::sinh(x[0])); }, {});
  rep.ops["I"] = assemble(g, [r](const auto& x) { return cd(r * std::cosh(x[0])); }, {});
  rep.ops["X0"] = assemble(g, nullptr, {{0, [](const auto&) { return cd(0, -1); }}});
  rep.generators = {{"X0", gen::x(0), 1}, {"P0", gen::p(0), 1}, {"I", gen::kI, 1}};
  rep.interior = box_mask(g, {{-L / 2, L / 2}});
  rep.probes = {sample(g, [](const auto& x) { return cd(std::exp(-x[0] * x[0])); }),
                sample(g, [](const auto& x) { return std::exp(cd(-0.5 * x[0] * x[0], 0.7 * x[0])); })};
  return rep;
}

/// Smallest gap between consecutive eigenvalues of the discretized X0.
inline double x0_min_spacing(const TruncatedRep& rep) {
  Eigen::SelfAdjointEigenSolver<CMat> es(CMat(rep.op("X0")), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  double m = 1e300;
  for (int k = 1; k < ev.size(); ++k) m = std::min(m, ev(k) - ev(k - 1));
  return m;
}

// ---------------------------------------------------------------- cones

struct ConeGrid {
  TensorGrid grid;
  std::vector<std::pair<double, double>> interior_box;
};

/// C^2: Gauss nodes in r on [r_min, r_max], Fourier in theta.
inline ConeGrid cone2_grid(int nr, int ntheta, double r_min = 0.5, double r_max = 1.5) {
  ConeGrid c;
  c.grid.axes = {gauss_axis(r_min, r_max, nr), fourier_axis(ntheta)};
  double m = 0.2 * (r_max - r_min);
  c.interior_box = {{r_min + m, r_max - m}, {0, 0}};
  return c;
}

/// Operators of ISO(2,1) on functions of (r, theta) on the cone, l = 1.
inline TruncatedRep cone2_rep(const ConeGrid& cg) {
  const TensorGrid& g = cg.grid;
  using V = std::vector<double>;
  const cd I(0, 1);
  TruncatedRep rep;
  rep.basis = "cone C2: gauss r x fourier theta";
  rep.dimension = g.size();
  rep.margin = 0;
  rep.ops["p0"] = assemble(g, [](const V& x) { return cd(x[0]); }, {});
  rep.ops["p1"] = assemble(g, [](const V& x) { return cd(x[0] * std::sin(x[1])); }, {});
  rep.ops["I"] = assemble(g, [](const V& x) { return cd(x[0] * std::cos(x[1])); }, {});
  rep.ops["x0"] = assemble(g, nullptr,
                           {{1, [I](const V& x) { return I * std::sin(x[1]); }},
                            {0, [I](const V& x) { return -I * x[0] * std::cos(x[1]); }}});
  rep.ops["x1"] = assemble(g, nullptr, {{1, [I](const V&) { return I; }}});
  rep.ops["M01"] = assemble(g, nullptr,
                            {{1, [I](const V& x) { return -I * std::cos(x[1]); }},
                             {0, [I](const V& x) { return -I * x[0] * std::sin(x[1]); }}});
  rep.generators = {{"p0", gen::p(0), 1},  {"p1", gen::p(1), -1}, {"I", gen::kI, 1},
                    {"x0", gen::x(0), 1},  {"x1", gen::x(1), -1}, {"M01", gen::m_index(0, 1), -1}};
  rep.interior = box_mask(g, cg.interior_box);
  rep.probes = {sample(g, [](const V& x) { return cd(std::exp(-(x[0] - 1) * (x[0] - 1) + std::cos(x[1]))); }),
                sample(g, [](const V& x) { return std::exp(cd(0.3 * x[0], std::sin(x[1]) - 0.4 * std::cos(2 * x[1]))); })};
  return rep;
}

/// C^4 patch: Gauss nodes in r, theta2, theta3 and Fourier in theta1. The
/// polar windows keep the cot and 1/sin coefficients analytic on the grid;
/// an even Gauss count never puts a node on cos(theta3) = 0.
inline ConeGrid cone4_grid(int nr, int n1, int n2, int n3, std::pair<double, double> theta2 = {0.6, std::numbers::pi - 0.6},
                           std::pair<double, double> theta3 = {0.6, std::numbers::pi - 0.6}, double r_min = 0.5,
                           double r_max = 1.5) {
  ConeGrid c;
  c.grid.axes = {gauss_axis(r_min, r_max, nr), fourier_axis(n1), gauss_axis(theta2.first, theta2.second, n2),
                 gauss_axis(theta3.first, theta3.second, n3)};
  auto shrink = [](std::pair<double, double> w) {
    double m = 0.2 * (w.second - w.first);
    return std::pair<double, double>{w.first + m, w.second - m};
  };
  c.interior_box = {shrink({r_min, r_max}), {0, 0}, shrink(theta2), shrink(theta3)};
  return c;
}

/// Quadrature weights for d nu = r^2 sin^2(theta3) sin(theta2) dr dtheta1 dtheta2 dtheta3.
inline Eigen::VectorXd cone4_measure_weights(const ConeGrid& cg) {
  const TensorGrid& g = cg.grid;
  Eigen::VectorXd w(g.size());
  for (int p = 0; p < g.size(); ++p) {
    auto x = g.point(p);
    double v = x[0] * x[0] * std::sin(x[3]) * std::sin(x[3]) * std::sin(x[2]);
    for (std::size_t k = 0; k < 4; ++k) v *= g.axes[k].weights[static_cast<std::size_t>(g.coord_index(p, k))];
    w(p) = v;
  }
  return w;
}

/// The fifteen operators on functions of (r, theta1, theta2, theta3), l = 1.
inline TruncatedRep cone4_rep(const ConeGrid& cg) {
  const TensorGrid& g = cg.grid;
  using V = std::vector<double>;
  const cd I(0, 1);
  using std::cos;
  using std::sin;
  auto cot = [](double t) { return std::cos(t) / std::sin(t); };
  enum { R = 0, T1 = 1, T2 = 2, T3 = 3 };
  TruncatedRep rep;
  rep.basis = "cone C4: gauss r, fourier theta1, gauss theta2, gauss theta3";
  rep.dimension = g.size();
  rep.margin = 0;
  auto mul = [&](PointFn f) { return assemble(g, f, {}); };
  rep.ops["p0"] = mul([](const V& x) { return cd(x[0]); });
  rep.ops["I"] = mul([](const V& x) { return cd(x[0] * cos(x[3])); });
  rep.ops["p1"] = mul([](const V& x) { return cd(x[0] * sin(x[3]) * cos(x[2])); });
  rep.ops["p2"] = mul([](const V& x) { return cd(x[0] * sin(x[3]) * sin(x[2]) * cos(x[1])); });
  rep.ops["p3"] = mul([](const V& x) { return cd(x[0] * sin(x[3]) * sin(x[2]) * sin(x[1])); });
  rep.ops["M23"] = assemble(g, nullptr, {{T1, [I](const V&) { return -I; }}});
  rep.ops["M12"] = assemble(g, nullptr,
                            {{T2, [I](const V& x) { return -I * cos(x[1]); }},
                             {T1, [I, cot](const V& x) { return I * sin(x[1]) * cot(x[2]); }}});
  rep.ops["M31"] = assemble(g, nullptr,
                            {{T2, [I](const V& x) { return I * sin(x[1]); }},
                             {T1, [I, cot](const V& x) { return I * cos(x[1]) * cot(x[2]); }}});
  rep.ops["x0"] = assemble(g, nullptr,
                           {{T3, [I](const V& x) { return I * sin(x[3]); }},
                            {R, [I](const V& x) { return -I * x[0] * cos(x[3]); }}});
  rep.ops["x1"] = assemble(g, nullptr,
                           {{T3, [I](const V& x) { return I * cos(x[2]); }},
                            {T2, [I, cot](const V& x) { return -I * sin(x[2]) * cot(x[3]); }}});
  rep.ops["x2"] = assemble(g, nullptr,
                           {{T3, [I](const V& x) { return I * cos(x[1]) * sin(x[2]); }},
                            {T2, [I, cot](const V& x) { return I * cos(x[1]) * cos(x[2]) * cot(x[3]); }},
                            {T1, [I, cot](const V& x) { return -I * sin(x[1]) / sin(x[2]) * cot(x[3]); }}});
  rep.ops["x3"] = assemble(g, nullptr,
                           {{T3, [I](const V& x) { return I * sin(x[1]) * sin(x[2]); }},
                            {T2, [I, cot](const V& x) { return I * sin(x[1]) * cos(x[2]) * cot(x[3]); }},
                            {T1, [I, cot](const V& x) { return I * cos(x[1]) / sin(x[2]) * cot(x[3]); }}});
  rep.ops["M01"] = assemble(g, nullptr,
                            {{T2, [I](const V& x) { return I * sin(x[2]) / sin(x[3]); }},
                             {T3, [I](const V& x) { return -I * cos(x[2]) * cos(x[3]); }},
                             {R, [I](const V& x) { return -I * x[0] * cos(x[2]) * sin(x[3]); }}});
  rep.ops["M02"] = assemble(g, nullptr,
                            {{T2, [I](const V& x) { return -I * cos(x[1]) * cos(x[2]) / sin(x[3]); }},
                             {T1, [I](const V& x) { return I * sin(x[1]) / (sin(x[2]) * sin(x[3])); }},
                             {T3, [I](const V& x) { return -I * cos(x[1]) * sin(x[2]) * cos(x[3]); }},
                             {R, [I](const V& x) { return -I * x[0] * cos(x[1]) * sin(x[2]) * sin(x[3]); }}});
  rep.ops["M03"] = assemble(g, nullptr,
                            {{T2, [I](const V& x) { return -I * sin(x[1]) * cos(x[2]) / sin(x[3]); }},
                             {T1, [I](const V& x) { return -I * cos(x[1]) / (sin(x[2]) * sin(x[3])); }},
                             {T3, [I](const V& x) { return -I * sin(x[1]) * sin(x[2]) * cos(x[3]); }},
                             {R, [I](const V& x) { return -I * x[0] * sin(x[1]) * sin(x[2]) * sin(x[3]); }}});
  rep.generators = {{"M01", gen::m_index(0, 1), -1}, {"M02", gen::m_index(0, 2), -1}, {"M03", gen::m_index(0, 3), -1},
                    {"M12", gen::m_index(1, 2), 1},  {"M31", gen::m_index(1, 3), -1}, {"M23", gen::m_index(2, 3), 1},
                    {"p0", gen::p(0), 1},            {"p1", gen::p(1), -1},           {"p2", gen::p(2), -1},
                    {"p3", gen::p(3), -1},           {"x0", gen::x(0), 1},            {"x1", gen::x(1), -1},
                    {"x2", gen::x(2), -1},           {"x3", gen::x(3), -1},           {"I", gen::kI, 1}};
  rep.interior = box_mask(g, cg.interior_box);
  // degree 2 in r and 1 in theta1, so those axes resolve every product exactly
  rep.probes = {
      sample(g, [](const V& x) {
        return cd((1 + 0.3 * x[0] - 0.2 * x[0] * x[0]) * (1 + 0.5 * cos(x[1]) + 0.3 * sin(x[1])) *
                  std::exp(0.3 * sin(x[2]) * cos(x[3])));
      }),
      sample(g, [](const V& x) {
        return cd(0.5 + x[0], 0.2 * x[0] * x[0]) * cd(cos(x[1]), -0.2 * sin(x[1])) *
               std::exp(cd(0.2 * cos(x[2]), sin(x[3]) - 0.3 * cos(x[2] - x[3])));
      })};
  return rep;
}

struct DualCheck {
  /// max over mu, nu of the interior residual of [p^mu, y^nu] - i eta^{mu nu}
  double residual = 0.0;
  std::vector<std::vector<double>> entries;
};

/// y^mu = (1/2){x^mu, I^{-1}} and the check [p^mu, y^nu] = i eta^{mu nu}.
inline DualCheck heisenberg_dual_check(const TruncatedRep& rep) {
  const SpMat& Iop = rep.op("I");
  Eigen::VectorXcd inv(rep.dimension);
  for (int k = 0; k < rep.dimension; ++k) {
    cd d = Iop.coeff(k, k);
    if (std::abs(d) < 1e-12) throw std::domain_error("heisenberg_dual_check: I numerically singular");
    inv(k) = 1.0 / d;
  }
  DualCheck out;
  out.entries.assign(4, std::vector<double>(4, 0.0));
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      const SpMat& P = rep.op("p" + std::to_string(mu));
      const SpMat& X = rep.op("x" + std::to_string(nu));
      cd expect = (mu == nu) ? cd(0, gen::eta(mu)) : cd(0);
      double worst = 0.0;
      for (const CVec& f : rep.probes) {
        auto y = [&](const CVec& v) -> CVec {
          CVec a = X * CVec(inv.cwiseProduct(v));
          CVec b = inv.cwiseProduct(CVec(X * v));
          return 0.5 * (a + b);
        };
        CVec g = P * y(f) - y(P * f) - expect * f;
        for (int i = 0; i < rep.dimension; ++i)
          if (rep.interior[static_cast<std::size_t>(i)]) worst = std::max(worst, std::abs(g(i)));
      }
      out.entries[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)] = worst;
      out.residual = std::max(out.residual, worst);
    }
  return out;
}

// ---------------------------------------------------------------- trace

/// gamma_N = (1 / log N) sum_{n < N} mu_n.
inline double dixmier_sequence(const std::vector<double>& mu, std::size_t N) {
  if (N < 2 || N > mu.size()) throw std::domain_error("dixmier_sequence: need 2 <= N <= size");
  double s = 0.0, comp = 0.0;
  for (std::size_t n = 0; n < N; ++n) {
    double y = mu[n] - comp;
    double t = s + y;
    comp = (t - s) - y;
    s = t;
  }
  return s / std::log(static_cast<double>(N));
}

/// sum_{n=1}^N 1/n - log N, summed from the small end.
inline double harmonic_minus_log(std::size_t N) {
  double s = 0.0;
  for (std::size_t n = N; n >= 1; --n) s += 1.0 / static_cast<double>(n);
  return s - std::log(static_cast<double>(N));
}

/// Trace of an operator built in an orthonormal basis truncated at `cutoff`.
inline cd trace_integral(const std::function<CMat(int)>& builder, int cutoff) { return builder(cutoff).trace(); }

/// Integral of F(x) over the one-dimensional lattice spectrum n*l as the trace of F(X) on the circle.
inline double circle_trace(const std::function<double(double)>& F, int N, double ell = 1.0) {
  return trace_integral(
             [&](int cut) {
               CMat m = CMat::Zero(2 * cut + 1, 2 * cut + 1);
               for (int n = -cut; n <= cut; ++n) m(n + cut, n + cut) = F(n * ell);
               return m;
             },
             N)
      .real();
}

}  // namespace ncst

#endif
