#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "eigenflow/eigen.hpp"
#include "eigenflow/grid.hpp"
#include "eigenflow/report.hpp"
#include "eigenflow/sobolev.hpp"

namespace eigenflow {

/// Two-cluster split of a spectrum. Index sets refer to the deterministic
/// eigenvalue order returned by this library's normal eigendecomposition
/// of the matrix being split. With the Hermitian strategy, clusterA is the
/// lower cluster.
struct SpectralPartition {
  std::vector<std::size_t> clusterA;
  std::vector<std::size_t> clusterB;
  double gap = 0.0;  // min |mu - nu| over cross-cluster pairs
};

enum class PartitionStrategy { Hermitian, Normal };

/// Split a spectrum into two clusters. Hermitian strategy: cut at the
/// largest gap of the sorted real parts. Normal strategy: exhaustive
/// two-cluster search (d <= 12) maximizing the inter-cluster distance.
/// The tolerance is relative to max |lambda_i|.
inline SpectralPartition partition_by_gap(const std::vector<cplx>& spectrum,
                                          PartitionStrategy strategy,
                                          double gapTol = defaults::kGapTol) {
  const std::size_t d = spectrum.size();
  if (d < 2) throw Error(Errc::BadParam, "need at least two eigenvalues to split");
  double scale = 0.0;
  for (const cplx& z : spectrum) scale = std::max(scale, std::abs(z));
  const double tolAbs = gapTol * scale;

  SpectralPartition P;
  if (strategy == PartitionStrategy::Hermitian) {
    std::vector<std::size_t> idx(d);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return spectrum[a].real() < spectrum[b].real();
    });
    std::size_t cut = 0;
    double best = -1.0;
    for (std::size_t i = 0; i + 1 < d; ++i) {
      const double g = spectrum[idx[i + 1]].real() - spectrum[idx[i]].real();
      if (g > best) { best = g; cut = i + 1; }
    }
    if (!(best >= tolAbs) || best <= 0.0)
      throw Error(Errc::AllEqual, "no spectral gap above the tolerance");
    P.clusterA.assign(idx.begin(), idx.begin() + static_cast<long>(cut));
    P.clusterB.assign(idx.begin() + static_cast<long>(cut), idx.end());
  } else {
    if (d > 12) throw Error(Errc::TooLarge, "exhaustive bipartition capped at size 12");
    // Element 0 stays in clusterA; mask bits place elements 1..d-1.
    const std::size_t masks = (std::size_t{1} << (d - 1));
    double best = -1.0;
    std::size_t bestMask = 0;
    for (std::size_t mask = 1; mask < masks; ++mask) {
      double g = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < d; ++i) {
        const bool iInB = i > 0 && ((mask >> (i - 1)) & 1U);
        if (iInB) continue;
        for (std::size_t j = 1; j < d; ++j) {
          if (!((mask >> (j - 1)) & 1U)) continue;
          g = std::min(g, std::abs(spectrum[i] - spectrum[j]));
        }
      }
      if (g > best) { best = g; bestMask = mask; }
    }
    if (!(best >= tolAbs) || best <= 0.0)
      throw Error(Errc::AllEqual, "no spectral gap above the tolerance");
    for (std::size_t i = 0; i < d; ++i) {
      const bool iInB = i > 0 && ((bestMask >> (i - 1)) & 1U);
      (iInB ? P.clusterB : P.clusterA).push_back(i);
    }
  }
  std::sort(P.clusterA.begin(), P.clusterA.end());
  std::sort(P.clusterB.begin(), P.clusterB.end());
  P.gap = std::numeric_limits<double>::infinity();
  for (std::size_t i : P.clusterA)
    for (std::size_t j : P.clusterB)
      P.gap = std::min(P.gap, std::abs(spectrum[i] - spectrum[j]));
  return P;
}

struct BlockDiagonalization {
  ComplexMatrix U;       // unitary, cluster-A columns first
  ComplexMatrix blockB;  // |clusterA| x |clusterA|
  ComplexMatrix blockC;  // |clusterB| x |clusterB|
  double offDiagResidual = 0.0;  // Frobenius mass of U*AU outside the blocks
};

namespace detail {

inline void require_valid_partition(const SpectralPartition& P, std::size_t d) {
  std::vector<char> seen(d, 0);
  if (P.clusterA.empty() || P.clusterB.empty())
    throw Error(Errc::BadParam, "both clusters must be nonempty");
  for (std::size_t i : P.clusterA) {
    if (i >= d || seen[i]) throw Error(Errc::BadParam, "invalid cluster index");
    seen[i] = 1;
  }
  for (std::size_t i : P.clusterB) {
    if (i >= d || seen[i]) throw Error(Errc::BadParam, "invalid cluster index");
    seen[i] = 1;
  }
  for (std::size_t i = 0; i < d; ++i)
    if (!seen[i]) throw Error(Errc::BadParam, "clusters must cover every index");
}

}  // namespace detail

/// Unitary block-diagonalization along a spectral partition: U gathers the
/// eigenvector columns of the two clusters; U*AU is exactly block
/// diagonal up to the solver residual, which is recorded.
inline BlockDiagonalization block_diagonalize(const ComplexMatrix& A,
                                              const SpectralPartition& P,
                                              double gapTol = defaults::kGapTol,
                                              const EigenOptions& opt = {}) {
  const EigenDecomposition dec = eig_normal(A, opt);  // throws NotNormal
  const std::size_t d = A.rows();
  detail::require_valid_partition(P, d);
  const double scale = frobenius_norm(A);
  if (!(P.gap >= gapTol * scale))
    throw Error(Errc::GapTooSmall, "cluster gap below gapTol * ||A||");

  const std::size_t d1 = P.clusterA.size();
  ComplexMatrix U(d, d);
  std::size_t col = 0;
  for (std::size_t i : P.clusterA) {
    for (std::size_t r = 0; r < d; ++r) U(r, col) = dec.basis(r, i);
    ++col;
  }
  for (std::size_t i : P.clusterB) {
    for (std::size_t r = 0; r < d; ++r) U(r, col) = dec.basis(r, i);
    ++col;
  }
  const ComplexMatrix M = U.adjoint() * (A * U);
  BlockDiagonalization out;
  out.U = U;
  out.blockB = ComplexMatrix(d1, d1);
  out.blockC = ComplexMatrix(d - d1, d - d1);
  for (std::size_t i = 0; i < d1; ++i)
    for (std::size_t j = 0; j < d1; ++j) out.blockB(i, j) = M(i, j);
  for (std::size_t i = d1; i < d; ++i)
    for (std::size_t j = d1; j < d; ++j) out.blockC(i - d1, j - d1) = M(i, j);
  double off = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const bool inB = i < d1 && j < d1;
      const bool inC = i >= d1 && j >= d1;
      if (!inB && !inC) off += std::norm(M(i, j));
    }
  out.offDiagResidual = std::sqrt(off);
  return out;
}

/// Empirical separation constant of eq-sep form: min over mu in the A-side
/// lower cluster and nu in the B-side upper cluster of
/// | ||B|| mu - ||A|| nu | / (||A|| ||B||), Frobenius norms.
inline double separation_margin(const ComplexMatrix& A, const ComplexMatrix& B,
                                const SpectralPartition& PA, const SpectralPartition& PB,
                                const EigenOptions& opt = {}) {
  const double na = frobenius_norm(A);
  const double nb = frobenius_norm(B);
  if (na == 0.0 || nb == 0.0)
    throw Error(Errc::ZeroMatrix, "separation margin needs nonvanishing matrices");
  const std::vector<cplx> specA = eig_normal(A, opt).spectrum;
  const std::vector<cplx> specB = eig_normal(B, opt).spectrum;
  detail::require_valid_partition(PA, specA.size());
  detail::require_valid_partition(PB, specB.size());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i : PA.clusterA)
    for (std::size_t j : PB.clusterB)
      best = std::min(best, std::abs(nb * specA[i] - na * specB[j]));
  return best / (na * nb);
}

/// Node-wise and cell-wise difference bounds for block-diagonalized
/// families on an interval: ratios of ||M1 - M2|| to ||A1 - A2|| per node
/// (M_i = U_i* A_i U_i), and of the derivative difference to the bound
/// expression with either family in the denominator role, per cell. The
/// max ratios and the minimal constant covering all three are reported.
/// ClusterFlip fires if the gap partition changes size along the grid.
inline ExperimentReport bdiag_difference_bounds(const SampledFamily<ComplexMatrix>& A1,
                                                const SampledFamily<ComplexMatrix>& A2,
                                                PartitionStrategy strategy,
                                                double gapTol = defaults::kGapTol,
                                                const EigenOptions& opt = {}) {
  if (A1.grid.dim() != 1) throw Error(Errc::NotCurve, "families must live on an interval");
  if (!A1.grid.same_layout(A2.grid))
    throw Error(Errc::GridMismatch, "families live on different grids");
  const std::size_t n = A1.grid.node_count();
  const double h = A1.grid.spacing()[0];

  std::vector<ComplexMatrix> M1(n), M2(n);
  std::size_t sizeA1 = 0, sizeA2 = 0;
  for (std::size_t k = 0; k < n; ++k) {
    for (int side = 0; side < 2; ++side) {
      const ComplexMatrix& A = side == 0 ? A1.at(k) : A2.at(k);
      const SpectralPartition P =
          partition_by_gap(eig_normal(A, opt).spectrum, strategy, gapTol);
      std::size_t& ref = side == 0 ? sizeA1 : sizeA2;
      if (k == 0) ref = P.clusterA.size();
      else if (P.clusterA.size() != ref)
        throw Error(Errc::ClusterFlip, "gap partition changed along the grid",
                    static_cast<long>(k));
      const BlockDiagonalization bd = block_diagonalize(A, P, gapTol, opt);
      (side == 0 ? M1 : M2)[k] = bd.U.adjoint() * (A * bd.U);
    }
  }

  const double tiny = 1e-300;
  std::vector<double> nodeRatio;
  nodeRatio.reserve(n);
  double maxNode = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double den = frobenius_norm(A1.at(k) - A2.at(k));
    const double num = frobenius_norm(M1[k] - M2[k]);
    const double r = den > tiny ? num / den : 0.0;
    nodeRatio.push_back(r);
    maxNode = std::max(maxNode, r);
  }

  std::vector<double> cellRatio1, cellRatio2;
  double maxCell1 = 0.0, maxCell2 = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const ComplexMatrix dM1 = (1.0 / h) * (M1[k + 1] - M1[k]);
    const ComplexMatrix dM2 = (1.0 / h) * (M2[k + 1] - M2[k]);
    const double lhs = frobenius_norm(dM1 - dM2);
    const ComplexMatrix dA1 = (1.0 / h) * (A1.at(k + 1) - A1.at(k));
    const ComplexMatrix dA2 = (1.0 / h) * (A2.at(k + 1) - A2.at(k));
    const double derivDiff = frobenius_norm(dA1 - dA2);
    const double derivSum = frobenius_norm(dA1) + frobenius_norm(dA2);
    const double dist = frobenius_norm(A1.at(k) - A2.at(k));
    for (int j = 0; j < 2; ++j) {
      const double nj = frobenius_norm(j == 0 ? A1.at(k) : A2.at(k));
      const double bound = derivDiff + (nj > tiny ? derivSum * dist / nj : 0.0);
      const double r = bound > tiny ? lhs / bound : 0.0;
      if (j == 0) { cellRatio1.push_back(r); maxCell1 = std::max(maxCell1, r); }
      else { cellRatio2.push_back(r); maxCell2 = std::max(maxCell2, r); }
    }
  }

  ExperimentReport rep;
  rep.name = "bdiag_difference_bounds";
  rep.note("strategy", strategy == PartitionStrategy::Hermitian ? "hermitian" : "normal");
  rep.note("nodes", std::to_string(n));
  rep.scalar("max_node_ratio", maxNode);
  rep.scalar("max_cell_ratio_den1", maxCell1);
  rep.scalar("max_cell_ratio_den2", maxCell2);
  rep.scalar("empirical_C", std::max(maxNode, std::max(maxCell1, maxCell2)));
  rep.add_series("node_ratio", std::move(nodeRatio));
  rep.add_series("cell_ratio_den1", std::move(cellRatio1));
  rep.add_series("cell_ratio_den2", std::move(cellRatio2));
  return rep;
}

}  // namespace eigenflow
