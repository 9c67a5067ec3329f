#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "eigenflow/errors.hpp"

namespace eigenflow {

/// Uniform rectangular grid on a box in R^m, both endpoints included.
/// Node order is row-major: the last axis varies fastest. Grids built by
/// the public constructor have at least two nodes per axis; derivative
/// grids (one node shorter on one axis) keep their spacing explicitly and
/// may degenerate to a single node on an axis.
class Grid {
 public:
  Grid() = default;

  Grid(std::vector<double> lower, const std::vector<double>& upper,
       std::vector<std::size_t> counts)
      : lower_(std::move(lower)), counts_(std::move(counts)) {
    const std::size_t m = lower_.size();
    if (m == 0 || upper.size() != m || counts_.size() != m)
      throw Error(Errc::BadParam, "grid vectors must share a positive dimension");
    spacing_.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
      if (counts_[j] < 2) throw Error(Errc::BadParam, "each axis needs at least 2 nodes");
      if (!(lower_[j] < upper[j]))
        throw Error(Errc::BadParam, "grid needs lower < upper per axis");
      spacing_[j] = (upper[j] - lower_[j]) / static_cast<double>(counts_[j] - 1);
    }
  }

  /// Internal form used by derivative grids: spacing given directly,
  /// single-node axes allowed.
  static Grid with_spacing(std::vector<double> lower, std::vector<double> spacing,
                           std::vector<std::size_t> counts) {
    Grid g;
    const std::size_t m = lower.size();
    if (m == 0 || spacing.size() != m || counts.size() != m)
      throw Error(Errc::BadParam, "grid vectors must share a positive dimension");
    for (std::size_t j = 0; j < m; ++j) {
      if (counts[j] < 1) throw Error(Errc::BadParam, "each axis needs at least 1 node");
      if (!(spacing[j] > 0.0)) throw Error(Errc::BadParam, "spacing must be positive");
    }
    g.lower_ = std::move(lower);
    g.spacing_ = std::move(spacing);
    g.counts_ = std::move(counts);
    return g;
  }

  std::size_t dim() const noexcept { return lower_.size(); }
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& spacing() const noexcept { return spacing_; }
  const std::vector<std::size_t>& counts() const noexcept { return counts_; }

  double upper(std::size_t j) const {
    return lower_[j] + spacing_[j] * static_cast<double>(counts_[j] - 1);
  }

  std::size_t node_count() const noexcept {
    std::size_t n = 1;
    for (std::size_t c : counts_) n *= c;
    return n;
  }

  /// Number of cells: per axis one fewer than nodes, except single-node
  /// axes which stand for one cell of width = spacing.
  std::size_t cell_count() const noexcept {
    std::size_t n = 1;
    for (std::size_t c : counts_) n *= (c > 1 ? c - 1 : 1);
    return n;
  }

  double cell_volume() const noexcept {
    double v = 1.0;
    for (double h : spacing_) v *= h;
    return v;
  }

  std::vector<std::size_t> unflatten(std::size_t flat) const {
    std::vector<std::size_t> idx(dim());
    for (std::size_t j = dim(); j-- > 0;) {
      idx[j] = flat % counts_[j];
      flat /= counts_[j];
    }
    return idx;
  }

  std::size_t flatten(const std::vector<std::size_t>& idx) const {
    std::size_t flat = 0;
    for (std::size_t j = 0; j < dim(); ++j) flat = flat * counts_[j] + idx[j];
    return flat;
  }

  /// Row-major stride of one step along axis j.
  std::size_t stride(std::size_t j) const {
    std::size_t s = 1;
    for (std::size_t k = j + 1; k < dim(); ++k) s *= counts_[k];
    return s;
  }

  std::vector<double> coordinate(std::size_t flat) const {
    const std::vector<std::size_t> idx = unflatten(flat);
    std::vector<double> x(dim());
    for (std::size_t j = 0; j < dim(); ++j)
      x[j] = lower_[j] + spacing_[j] * static_cast<double>(idx[j]);
    return x;
  }

  bool same_layout(const Grid& o) const noexcept {
    return lower_ == o.lower_ && spacing_ == o.spacing_ && counts_ == o.counts_;
  }

 private:
  std::vector<double> lower_;
  std::vector<double> spacing_;
  std::vector<std::size_t> counts_;
};

/// One value per grid node, row-major. V is one of: double, real vector,
/// ComplexMatrix, UnorderedSpectrum.
template <class V>
struct SampledFamily {
  Grid grid;
  std::vector<V> samples;

  SampledFamily() = default;
  SampledFamily(Grid g, std::vector<V> s) : grid(std::move(g)), samples(std::move(s)) {
    if (samples.size() != grid.node_count())
      throw Error(Errc::GridMismatch, "sample count must equal the node count");
  }

  const V& at(std::size_t flat) const { return samples[flat]; }
};

/// Evaluate f at every node. f receives the coordinate vector.
template <class V, class F>
SampledFamily<V> sample(const Grid& g, F&& f) {
  std::vector<V> s;
  s.reserve(g.node_count());
  for (std::size_t k = 0; k < g.node_count(); ++k) s.push_back(f(g.coordinate(k)));
  return SampledFamily<V>(g, std::move(s));
}

/// Convenience for 1-D grids: f receives the scalar coordinate.
template <class V, class F>
SampledFamily<V> sample_interval(const Grid& g, F&& f) {
  if (g.dim() != 1) throw Error(Errc::NotCurve, "expected a 1-D grid");
  std::vector<V> s;
  s.reserve(g.node_count());
  for (std::size_t k = 0; k < g.node_count(); ++k) s.push_back(f(g.coordinate(k)[0]));
  return SampledFamily<V>(g, std::move(s));
}

}  // namespace eigenflow
