#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "eigenflow/almgren.hpp"
#include "eigenflow/eigen.hpp"
#include "eigenflow/grid.hpp"
#include "eigenflow/parallel.hpp"
#include "eigenflow/sobolev.hpp"
#include "eigenflow/unordered.hpp"

namespace eigenflow {

/// Node-wise ordered eigenvalue family of a Hermitian matrix family.
struct OrderedFlow {
  SampledFamily<std::vector<double>> values;  // ascending per node
  double solverResidualMax = 0.0;
};

/// Node-wise unordered spectrum family of a normal matrix family.
struct UnorderedFlow {
  SampledFamily<UnorderedSpectrum> values;
  double solverResidualMax = 0.0;
};

/// Ordered characteristic map: eigenvalues sorted ascending at every node.
/// Nodes are independent (no branch tracking); the offending node index
/// rides on the NotHermitian error.
inline OrderedFlow char_map_hermitian(const SampledFamily<ComplexMatrix>& A,
                                      const EigenOptions& opt = {}) {
  const std::size_t n = A.grid.node_count();
  std::vector<std::vector<double>> vals(n);
  std::vector<double> residuals(n, 0.0);
  parallel_for(n, [&](std::size_t k) {
    if (!is_hermitian(A.at(k), opt.classTol))
      throw Error(Errc::NotHermitian, "family sample fails the Hermitian gate",
                  static_cast<long>(k));
    const EigenDecomposition dec = eig_hermitian(A.at(k), opt);
    std::vector<double> lam(dec.spectrum.size());
    for (std::size_t i = 0; i < lam.size(); ++i) lam[i] = dec.spectrum[i].real();
    vals[k] = std::move(lam);
    residuals[k] = dec.residual;
  });
  OrderedFlow F;
  F.values = SampledFamily<std::vector<double>>(A.grid, std::move(vals));
  for (double r : residuals) F.solverResidualMax = std::max(F.solverResidualMax, r);
  return F;
}

/// Unordered characteristic map: the spectrum as a point of A_d(C) at
/// every node.
inline UnorderedFlow char_map_normal(const SampledFamily<ComplexMatrix>& A,
                                     const EigenOptions& opt = {}) {
  const std::size_t n = A.grid.node_count();
  std::vector<UnorderedSpectrum> vals(n);
  std::vector<double> residuals(n, 0.0);
  parallel_for(n, [&](std::size_t k) {
    if (!is_normal_matrix(A.at(k), opt.classTol))
      throw Error(Errc::NotNormal, "family sample fails the normality gate",
                  static_cast<long>(k));
    EigenDecomposition dec = eig_normal(A.at(k), opt);
    vals[k] = UnorderedSpectrum{std::move(dec.spectrum)};
    residuals[k] = dec.residual;
  });
  UnorderedFlow F;
  F.values = SampledFamily<UnorderedSpectrum>(A.grid, std::move(vals));
  for (double r : residuals) F.solverResidualMax = std::max(F.solverResidualMax, r);
  return F;
}

/// Node-wise Almgren embedding of an unordered flow; differences of two
/// embedded flows measured in w1q_norm realize the embedded Sobolev
/// distance between the flows.
inline SampledFamily<std::vector<double>> embedded_flow(const UnorderedFlow& F,
                                                        const AlmgrenEmbedding& E) {
  const std::size_t n = F.values.grid.node_count();
  std::vector<std::vector<double>> out(n);
  parallel_for(n, [&](std::size_t k) { out[k] = embed(E, F.values.at(k)); });
  return SampledFamily<std::vector<double>>(F.values.grid, std::move(out));
}

struct ConditionNumberFlow {
  SampledFamily<double> kappa;
  double minSigma = 0.0;  // smallest singular value seen over all nodes
};

/// Node-wise condition number sigma_1/sigma_d. The guard scale is the max
/// Frobenius norm over the family: any node with sigma_d below
/// sigmaFloorRel times that scale raises SingularNode (lowest such node).
inline ConditionNumberFlow condition_number_flow(const SampledFamily<ComplexMatrix>& A,
                                                 double sigmaFloorRel = defaults::kSigmaFloor,
                                                 const EigenOptions& opt = {}) {
  const std::size_t n = A.grid.node_count();
  std::vector<double> sTop(n), sBot(n);
  parallel_for(n, [&](std::size_t k) {
    const std::vector<double> sv = singular_values(A.at(k), opt);
    if (sv.empty()) throw Error(Errc::BadParam, "empty matrix in family");
    sTop[k] = sv.front();
    sBot[k] = sv.back();
  });
  double scale = 0.0;
  for (std::size_t k = 0; k < n; ++k) scale = std::max(scale, frobenius_norm(A.at(k)));
  const double floor = sigmaFloorRel * scale;
  ConditionNumberFlow out;
  out.minSigma = std::numeric_limits<double>::infinity();
  std::vector<double> kappa(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.minSigma = std::min(out.minSigma, sBot[k]);
    if (sBot[k] < floor)
      throw Error(Errc::SingularNode, "smallest singular value under the floor",
                  static_cast<long>(k), sBot[k]);
    kappa[k] = sTop[k] / sBot[k];
  }
  out.kappa = SampledFamily<double>(A.grid, std::move(kappa));
  return out;
}

/// Area of the graph of a scalar family: Riemann sum over complete cells
/// of sqrt(1 + sum_j (d_j f)^2), forward differences taken at each cell's
/// lower corner.
inline double graph_surface_area(const SampledFamily<double>& f) {
  const Grid& g = f.grid;
  const std::size_t m = g.dim();
  std::vector<SampledFamily<double>> deriv;
  deriv.reserve(m);
  for (std::size_t j = 0; j < m; ++j) deriv.push_back(fd_derivative(f, j));
  std::vector<std::size_t> range(m);
  for (std::size_t j = 0; j < m; ++j) {
    if (g.counts()[j] < 2) throw Error(Errc::BadParam, "surface area needs cells");
    range[j] = g.counts()[j] - 1;
  }
  const double vol = g.cell_volume();
  std::vector<std::size_t> idx(m, 0);
  double area = 0.0;
  while (true) {
    double s = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double dj = deriv[j].at(deriv[j].grid.flatten(idx));
      s += dj * dj;
    }
    area += std::sqrt(s) * vol;
    std::size_t j = m;
    bool done = true;
    while (j-- > 0) {
      if (++idx[j] < range[j]) { done = false; break; }
      idx[j] = 0;
    }
    if (done) break;
  }
  return area;
}

}  // namespace eigenflow
