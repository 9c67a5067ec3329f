#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "eigenflow/defaults.hpp"
#include "eigenflow/errors.hpp"
#include "eigenflow/grid.hpp"
#include "eigenflow/matrix.hpp"
#include "eigenflow/unordered.hpp"

namespace eigenflow {

inline constexpr double kInfExponent = std::numeric_limits<double>::infinity();

namespace detail {

inline double value_norm(double v) { return std::abs(v); }

inline double value_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double t : v) s += t * t;
  return std::sqrt(s);
}

inline double value_norm(const ComplexMatrix& A) { return frobenius_norm(A); }

inline double value_dist(double a, double b) { return std::abs(a - b); }

inline double value_dist(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error(Errc::SizeMismatch, "vector sizes differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return std::sqrt(s);
}

inline double value_dist(const ComplexMatrix& A, const ComplexMatrix& B) {
  return frobenius_norm(A - B);
}

inline double value_scaled_diff(double a, double b, double s) { return (a - b) * s; }

inline std::vector<double> value_scaled_diff(const std::vector<double>& a,
                                             const std::vector<double>& b, double s) {
  if (a.size() != b.size()) throw Error(Errc::SizeMismatch, "vector sizes differ");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = (a[i] - b[i]) * s;
  return out;
}

inline ComplexMatrix value_scaled_diff(const ComplexMatrix& A, const ComplexMatrix& B,
                                       double s) {
  return s * (A - B);
}

inline void require_exponent(double q) {
  if (q == kInfExponent) return;
  if (!(q >= 1.0)) throw Error(Errc::BadExponent, "exponent must satisfy q >= 1");
}

// Riemann integrator behind every L^q norm in this module. Axes flagged
// in cellAxes carry cell data: every sample on such an axis represents one
// full cell of width = spacing (forward differences live there). Node
// axes integrate over their cells with the value at the lower corner.
// q = infinity ignores the distinction and takes the max over all samples.
template <class V>
double lq_riemann(const SampledFamily<V>& f, double q, const std::vector<char>& cellAxes) {
  require_exponent(q);
  const Grid& g = f.grid;
  const std::size_t m = g.dim();
  if (q == kInfExponent) {
    double best = 0.0;
    for (const V& v : f.samples) best = std::max(best, value_norm(v));
    return best;
  }
  std::vector<std::size_t> range(m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t c = g.counts()[j];
    const bool cellAxis = j < cellAxes.size() && cellAxes[j];
    range[j] = cellAxis ? c : (c > 1 ? c - 1 : 1);
  }
  const double vol = g.cell_volume();
  std::vector<std::size_t> idx(m, 0);
  double sum = 0.0;
  while (true) {
    sum += std::pow(value_norm(f.at(g.flatten(idx))), q) * vol;
    std::size_t j = m;
    bool done = true;
    while (j-- > 0) {
      if (++idx[j] < range[j]) { done = false; break; }
      idx[j] = 0;
    }
    if (done) break;
  }
  return std::pow(sum, 1.0 / q);
}

}  // namespace detail

/// Forward differences (f(x + h e_j) - f(x)) / h along axis j; the output
/// grid is one node shorter on that axis and its samples are cell data
/// there (each represents the cell to its right).
template <class V>
SampledFamily<V> fd_derivative(const SampledFamily<V>& f, std::size_t axis) {
  const Grid& g = f.grid;
  if (axis >= g.dim()) throw Error(Errc::AxisOutOfRange, "derivative axis out of range");
  if (g.counts()[axis] < 2)
    throw Error(Errc::AxisOutOfRange, "axis has no cell to difference over");
  std::vector<std::size_t> counts = g.counts();
  counts[axis] -= 1;
  Grid gOut = Grid::with_spacing(g.lower(), g.spacing(), counts);
  const double invh = 1.0 / g.spacing()[axis];
  const std::size_t step = g.stride(axis);
  std::vector<V> out;
  out.reserve(gOut.node_count());
  for (std::size_t k = 0; k < gOut.node_count(); ++k) {
    const std::size_t src = g.flatten(gOut.unflatten(k));
    out.push_back(detail::value_scaled_diff(f.at(src + step), f.at(src), invh));
  }
  return SampledFamily<V>(gOut, std::move(out));
}

/// L^q norm of a sampled family: Riemann sum over the cells of its own
/// grid (value at the cell's lower corner), q = infinity takes the max of
/// the pointwise norms over all nodes.
template <class V>
double lq_norm(const SampledFamily<V>& f, double q) {
  return detail::lq_riemann(f, q, {});
}

struct SobolevReport {
  double lq = 0.0;
  std::vector<double> derivative_lq;  // one entry per axis
  double w1q = 0.0;                   // lq + sum of derivative_lq, exactly
  double qExponent = 2.0;
};

/// W^{1,q} norm: ||f||_q plus the L^q norms of all forward-difference
/// derivatives, each integrated over its parent cells.
template <class V>
SobolevReport w1q_norm(const SampledFamily<V>& f, double q) {
  detail::require_exponent(q);
  SobolevReport rep;
  rep.qExponent = q;
  rep.lq = lq_norm(f, q);
  rep.w1q = rep.lq;
  const std::size_t m = f.grid.dim();
  rep.derivative_lq.resize(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    const SampledFamily<V> dj = fd_derivative(f, j);
    std::vector<char> cellAxes(m, 0);
    cellAxes[j] = 1;
    rep.derivative_lq[j] = detail::lq_riemann(dj, q, cellAxes);
    rep.w1q += rep.derivative_lq[j];
  }
  return rep;
}

namespace detail {

inline void require_pair_budget(std::size_t n) {
  const std::size_t pairs = n * (n - 1) / 2;
  if (pairs > defaults::kPairBudget)
    throw Error(Errc::PairBudgetExceeded,
                std::to_string(pairs) + " pairs exceed the budget of " +
                    std::to_string(defaults::kPairBudget));
}

inline double coord_dist(const std::vector<double>& coords, std::size_t m,
                         std::size_t a, std::size_t b) {
  double s = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double t = coords[a * m + j] - coords[b * m + j];
    s += t * t;
  }
  return std::sqrt(s);
}

inline std::vector<double> flat_coords(const Grid& g) {
  const std::size_t m = g.dim();
  std::vector<double> coords(g.node_count() * m);
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    const std::vector<double> x = g.coordinate(k);
    for (std::size_t j = 0; j < m; ++j) coords[k * m + j] = x[j];
  }
  return coords;
}

inline double alpha_power(double dist, double alpha) {
  if (alpha == 1.0) return dist;
  if (alpha == 0.5) return std::sqrt(dist);
  return std::pow(dist, alpha);
}

}  // namespace detail

/// Discrete C^{0,alpha} seminorm: max over node pairs of
/// ||f(x)-f(y)|| / ||x-y||^alpha. For alpha = 1 on a 1-D grid only
/// adjacent pairs are scanned (exact: difference quotients on a line are
/// maximized on adjacent cells by averaging). All-pairs scans refuse to
/// exceed the pair budget.
template <class V>
double holder_seminorm(const SampledFamily<V>& f, double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw Error(Errc::BadParam, "Holder exponent must lie in (0, 1]");
  const Grid& g = f.grid;
  const std::size_t n = g.node_count();
  if (n < 2) return 0.0;
  if (alpha == 1.0 && g.dim() == 1) {
    const double invh = 1.0 / g.spacing()[0];
    double best = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k)
      best = std::max(best, detail::value_dist(f.at(k + 1), f.at(k)) * invh);
    return best;
  }
  detail::require_pair_budget(n);
  const std::size_t m = g.dim();
  const std::vector<double> coords = detail::flat_coords(g);
  double best = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const double base = detail::alpha_power(detail::coord_dist(coords, m, a, b), alpha);
      best = std::max(best, detail::value_dist(f.at(a), f.at(b)) / base);
    }
  return best;
}

/// Sup over distinct node pairs of the slope-function deviation
/// | s_f(x,y) - s_g(x,y) | with s(x,y) = ||f(x)-f(y)|| / ||x-y||.
template <class V>
double slope_deviation(const SampledFamily<V>& f, const SampledFamily<V>& g) {
  if (!f.grid.same_layout(g.grid))
    throw Error(Errc::GridMismatch, "families live on different grids");
  const std::size_t n = f.grid.node_count();
  if (n < 2) return 0.0;
  detail::require_pair_budget(n);
  const std::size_t m = f.grid.dim();
  const std::vector<double> coords = detail::flat_coords(f.grid);
  double best = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const double base = detail::coord_dist(coords, m, a, b);
      const double sf = detail::value_dist(f.at(a), f.at(b)) / base;
      const double sg = detail::value_dist(g.at(a), g.at(b)) / base;
      best = std::max(best, std::abs(sf - sg));
    }
  return best;
}

/// Metric speed of a sampled curve in A_d(C): per cell,
/// d2(L(x_{k+1}), L(x_k)) / h. The output lives on the cell grid (one
/// sample per parent cell).
inline SampledFamily<double> metric_speed(const SampledFamily<UnorderedSpectrum>& L) {
  if (L.grid.dim() != 1) throw Error(Errc::NotCurve, "metric speed needs a 1-D grid");
  const std::size_t n = L.grid.counts()[0];
  const double invh = 1.0 / L.grid.spacing()[0];
  Grid gOut = Grid::with_spacing(L.grid.lower(), L.grid.spacing(), {n - 1});
  std::vector<double> speed(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) speed[k] = d2(L.at(k + 1), L.at(k)) * invh;
  return SampledFamily<double>(gOut, std::move(speed));
}

/// q-energy of a sampled curve: Riemann sum of speed^q over all cells
/// (no q-th root; this is the energy, not a norm).
inline double q_energy(const SampledFamily<UnorderedSpectrum>& L, double q) {
  if (q == kInfExponent) throw Error(Errc::BadExponent, "energy needs a finite exponent");
  detail::require_exponent(q);
  const SampledFamily<double> speed = metric_speed(L);
  const double h = L.grid.spacing()[0];
  double e = 0.0;
  for (double s : speed.samples) e += std::pow(s, q) * h;
  return e;
}

struct D1qReport {
  double s0_sup = 0.0;  // sup over admitted nodes of d2(f, g)
  double s1_lq = 0.0;   // L^q over admitted cells of the worst-ordering
                        // derivative mismatch
};

/// Discrete d^{1,q} semimetric between two sampled spectral curves.
/// s0(x_k) = d2(f(x_k), g(x_k)). s1 on cell k takes every permutation that
/// minimizes the node-k matching (ties at tieTol) and maximizes the l2
/// mismatch of the cellwise finite differences over them; derivatives use
/// the stored coordinate selections of each curve. The optional node mask
/// E admits s0 at masked nodes and s1 on cells whose both endpoints are
/// masked (empty mask = everything). Tuple sizes are capped by the
/// permutation enumerator (TooLarge beyond kBruteForceMax).
inline D1qReport d1q_semimetric(const SampledFamily<UnorderedSpectrum>& f,
                                const SampledFamily<UnorderedSpectrum>& g, double q,
                                const std::vector<char>& mask = {},
                                double tieTol = defaults::kTieTol) {
  if (f.grid.dim() != 1) throw Error(Errc::NotCurve, "d1q needs 1-D grids");
  if (!f.grid.same_layout(g.grid))
    throw Error(Errc::GridMismatch, "families live on different grids");
  detail::require_exponent(q);
  const std::size_t n = f.grid.counts()[0];
  if (!mask.empty() && mask.size() != n)
    throw Error(Errc::BadParam, "mask size must equal the node count");
  const auto admitted = [&](std::size_t k) { return mask.empty() || mask[k] != 0; };

  D1qReport rep;
  for (std::size_t k = 0; k < n; ++k)
    if (admitted(k)) rep.s0_sup = std::max(rep.s0_sup, d2(f.at(k), g.at(k)));

  const double h = f.grid.spacing()[0];
  const double invh = 1.0 / h;
  double sum = 0.0;
  double supS1 = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (!(admitted(k) && admitted(k + 1))) continue;
    const UnorderedSpectrum& fk = f.at(k);
    const UnorderedSpectrum& gk = g.at(k);
    if (fk.size() != gk.size()) throw Error(Errc::SizeMismatch, "tuple sizes differ");
    const std::size_t d = fk.size();
    const auto perms = minimizing_permutations(fk, gk, tieTol);
    double worst = 0.0;
    for (const auto& tau : perms) {
      double s = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const cplx df = (f.at(k + 1).z[i] - fk.z[i]) * invh;
        const cplx dg = (g.at(k + 1).z[tau[i]] - gk.z[tau[i]]) * invh;
        s += std::norm(df - dg);
      }
      worst = std::max(worst, s);
    }
    const double s1 = std::sqrt(worst);
    supS1 = std::max(supS1, s1);
    sum += std::pow(s1, q == kInfExponent ? 1.0 : q) * h;
  }
  rep.s1_lq = (q == kInfExponent) ? supS1 : std::pow(sum, 1.0 / q);
  return rep;
}

}  // namespace eigenflow
