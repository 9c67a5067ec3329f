#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "eigenflow/defaults.hpp"
#include "eigenflow/errors.hpp"
#include "eigenflow/matrix.hpp"

namespace eigenflow {

struct EigenOptions {
  double eigTol = defaults::kEigTol;      // off-diagonal mass target, relative to ||A||_F
  int maxSweeps = defaults::kMaxSweeps;   // cyclic sweeps before NoConvergence
  double classTol = defaults::kClassTol;  // structure gate tolerance
  double clusterTol = defaults::kClusterTol;  // normal solver cluster width, relative
};

struct EigenDecomposition {
  std::vector<cplx> spectrum;  // column j of basis pairs with spectrum[j]
  ComplexMatrix basis;         // unitary up to solver tolerance
  double residual = 0.0;       // ||A - V diag(spectrum) V*||_F
  int sweeps = 0;              // Jacobi sweeps spent (max over stages)
};

namespace detail {

inline double off_diagonal_norm(const ComplexMatrix& A) {
  double s = 0.0;
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j)
      if (i != j) s += std::norm(A(i, j));
  return std::sqrt(s);
}

// Cyclic complex Jacobi on a Hermitian matrix, in place. Each pivot (p,q)
// applies A <- U* A U with the 2x2 block U = [[c, s], [-conj(s), c]],
// s = t*c*phase, chosen to zero A(p,q) exactly; rotations accumulate into
// *V (A = V W V* throughout). Stops when the off-diagonal Frobenius mass
// falls below eigTol * ||A||_F. Returns sweeps used.
inline int jacobi_hermitian(ComplexMatrix& A, ComplexMatrix* V, double eigTol,
                            int maxSweeps) {
  const std::size_t d = A.rows();
  const double scale = frobenius_norm(A);
  if (d < 2 || scale == 0.0) return 0;
  const double stop = eigTol * scale;
  // Pivots below `skip` are left alone: d^2/2 such entries hold at most
  // stop/2 of off-diagonal mass, so skipping them cannot stall the loop.
  const double skip = stop / (2.0 * static_cast<double>(d) * static_cast<double>(d));

  for (int sweep = 1; sweep <= maxSweeps; ++sweep) {
    if (off_diagonal_norm(A) <= stop) return sweep - 1;
    for (std::size_t p = 0; p + 1 < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const cplx apq = A(p, q);
        const double absb = std::abs(apq);
        if (absb <= skip) continue;
        const double app = A(p, p).real();
        const double aqq = A(q, q).real();
        const cplx phase = apq / absb;
        const double theta = (aqq - app) / (2.0 * absb);
        // Smaller root of t^2 + 2 theta t - 1 = 0: the minimal rotation.
        const double t =
            (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const cplx s = (t * c) * phase;
        const cplx sc = std::conj(s);
        for (std::size_t k = 0; k < d; ++k) {  // A <- A U
          const cplx akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - sc * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < d; ++k) {  // A <- U* A
          const cplx apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = sc * apk + c * aqk;
        }
        // Closed-form pivot results; immune to cancellation above.
        A(p, p) = app - t * absb;
        A(q, q) = aqq + t * absb;
        A(p, q) = 0.0;
        A(q, p) = 0.0;
        if (V) {
          for (std::size_t k = 0; k < d; ++k) {
            const cplx vkp = (*V)(k, p), vkq = (*V)(k, q);
            (*V)(k, p) = c * vkp - sc * vkq;
            (*V)(k, q) = s * vkp + c * vkq;
          }
        }
      }
    }
  }
  if (off_diagonal_norm(A) <= stop) return maxSweeps;
  throw Error(Errc::NoConvergence, "Jacobi sweep budget exhausted");
}

// Exact Hermitian average; also forces a real diagonal.
inline ComplexMatrix hermitian_part(const ComplexMatrix& A) {
  ComplexMatrix H(A.rows(), A.rows());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j)
      H(i, j) = 0.5 * (A(i, j) + std::conj(A(j, i)));
  for (std::size_t i = 0; i < A.rows(); ++i) H(i, i) = cplx(H(i, i).real(), 0.0);
  return H;
}

// K = (A - A*) / (2i); Hermitian, and A = H + iK.
inline ComplexMatrix skew_part_over_i(const ComplexMatrix& A) {
  ComplexMatrix K(A.rows(), A.rows());
  const cplx half_over_i(0.0, -0.5);
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j)
      K(i, j) = half_over_i * (A(i, j) - std::conj(A(j, i)));
  for (std::size_t i = 0; i < A.rows(); ++i) K(i, i) = cplx(K(i, i).real(), 0.0);
  return K;
}

// Deterministic gauge: the largest-modulus entry of each column is made
// real positive (first such entry on ties).
inline void fix_column_phases(ComplexMatrix& V) {
  for (std::size_t j = 0; j < V.cols(); ++j) {
    std::size_t imax = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < V.rows(); ++i) {
      const double m = std::abs(V(i, j));
      if (m > best) { best = m; imax = i; }
    }
    if (best <= 0.0) continue;
    const cplx alpha = std::conj(V(imax, j)) / best;
    for (std::size_t i = 0; i < V.rows(); ++i) V(i, j) *= alpha;
  }
}

inline ComplexMatrix reconstruct(const ComplexMatrix& V, const std::vector<cplx>& lam) {
  ComplexMatrix VD = V;
  for (std::size_t j = 0; j < V.cols(); ++j)
    for (std::size_t i = 0; i < V.rows(); ++i) VD(i, j) *= lam[j];
  return VD * V.adjoint();
}

// Eigenvalues only (ascending); identical rotation path to the full solver.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& A,
                                                 const EigenOptions& opt = {}) {
  ComplexMatrix W = hermitian_part(A);
  jacobi_hermitian(W, nullptr, opt.eigTol, opt.maxSweeps);
  std::vector<double> lam(A.rows());
  for (std::size_t i = 0; i < A.rows(); ++i) lam[i] = W(i, i).real();
  std::sort(lam.begin(), lam.end());
  return lam;
}

}  // namespace detail

/// Full eigendecomposition of a Hermitian matrix (gate at opt.classTol).
/// Spectrum is real, sorted ascending; basis columns are phase-gauged so
/// the result is deterministic for a given input.
inline EigenDecomposition eig_hermitian(const ComplexMatrix& A,
                                        const EigenOptions& opt = {}) {
  if (!A.is_square()) throw Error(Errc::NonSquare, "eigendecomposition needs a square matrix");
  if (!is_hermitian(A, opt.classTol))
    throw Error(Errc::NotHermitian, "matrix fails the Hermitian gate");
  const std::size_t d = A.rows();
  EigenDecomposition out;
  out.basis = ComplexMatrix::identity(d);
  out.spectrum.assign(d, cplx(0.0, 0.0));
  if (d == 0) return out;

  ComplexMatrix W = detail::hermitian_part(A);
  ComplexMatrix V = ComplexMatrix::identity(d);
  out.sweeps = detail::jacobi_hermitian(W, &V, opt.eigTol, opt.maxSweeps);

  std::vector<std::size_t> idx(d);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return W(a, a).real() < W(b, b).real();
  });
  ComplexMatrix Vs(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    out.spectrum[j] = cplx(W(idx[j], idx[j]).real(), 0.0);
    for (std::size_t i = 0; i < d; ++i) Vs(i, j) = V(i, idx[j]);
  }
  detail::fix_column_phases(Vs);
  out.basis = std::move(Vs);
  out.residual = frobenius_norm(A - detail::reconstruct(out.basis, out.spectrum));
  return out;
}

/// Sorted (ascending) real spectrum of a Hermitian matrix.
inline std::vector<double> ordered_spectrum(const ComplexMatrix& A,
                                            const EigenOptions& opt = {}) {
  if (!A.is_square()) throw Error(Errc::NonSquare, "spectrum needs a square matrix");
  if (!is_hermitian(A, opt.classTol))
    throw Error(Errc::NotHermitian, "matrix fails the Hermitian gate");
  return detail::hermitian_eigenvalues(A, opt);
}

/// Eigendecomposition of a normal matrix via its commuting Hermitian parts:
/// A = H + iK is split, H is diagonalized, and K is re-diagonalized inside
/// each near-degenerate cluster of H (width opt.clusterTol * ||A||_F).
/// spectrum[j] = (v_j* H v_j) + i (v_j* K v_j); ordering is (Re-cluster
/// ascending, Im ascending inside each cluster).
inline EigenDecomposition eig_normal(const ComplexMatrix& A,
                                     const EigenOptions& opt = {}) {
  if (!A.is_square()) throw Error(Errc::NonSquare, "eigendecomposition needs a square matrix");
  if (!is_normal_matrix(A, opt.classTol))
    throw Error(Errc::NotNormal, "matrix fails the normality gate");
  const std::size_t d = A.rows();
  EigenDecomposition out;
  out.basis = ComplexMatrix::identity(d);
  out.spectrum.assign(d, cplx(0.0, 0.0));
  if (d == 0) return out;
  const double scale = frobenius_norm(A);
  if (scale == 0.0) return out;

  const ComplexMatrix H = detail::hermitian_part(A);
  const ComplexMatrix K = detail::skew_part_over_i(A);

  ComplexMatrix WH = H;
  ComplexMatrix V = ComplexMatrix::identity(d);
  out.sweeps = detail::jacobi_hermitian(WH, &V, opt.eigTol, opt.maxSweeps);

  // Sort the H-eigenpairs ascending before clustering.
  std::vector<std::size_t> idx(d);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return WH(a, a).real() < WH(b, b).real();
  });
  ComplexMatrix Vs(d, d);
  std::vector<double> h(d);
  for (std::size_t j = 0; j < d; ++j) {
    h[j] = WH(idx[j], idx[j]).real();
    for (std::size_t i = 0; i < d; ++i) Vs(i, j) = V(i, idx[j]);
  }

  // K restricted to an exact H-eigenspace commutes with H, so rotating
  // inside a cluster preserves H-diagonality up to the cluster width.
  const double width = opt.clusterTol * scale;
  std::size_t lo = 0;
  while (lo < d) {
    std::size_t hi = lo + 1;
    while (hi < d && h[hi] - h[hi - 1] <= width) ++hi;
    const std::size_t g = hi - lo;
    if (g > 1) {
      // Compress K onto the cluster columns: Kc = Vc* K Vc (g x g).
      ComplexMatrix Vc(d, g);
      for (std::size_t j = 0; j < g; ++j)
        for (std::size_t i = 0; i < d; ++i) Vc(i, j) = Vs(i, lo + j);
      ComplexMatrix Kc = Vc.adjoint() * (K * Vc);
      Kc = detail::hermitian_part(Kc);
      ComplexMatrix Wc = ComplexMatrix::identity(g);
      const int sw = detail::jacobi_hermitian(Kc, &Wc, opt.eigTol, opt.maxSweeps);
      out.sweeps = std::max(out.sweeps, sw);
      ComplexMatrix Vrot = Vc * Wc;
      // Order the cluster by the imaginary part.
      std::vector<std::size_t> kidx(g);
      std::iota(kidx.begin(), kidx.end(), std::size_t{0});
      std::sort(kidx.begin(), kidx.end(), [&](std::size_t a, std::size_t b) {
        return Kc(a, a).real() < Kc(b, b).real();
      });
      for (std::size_t j = 0; j < g; ++j)
        for (std::size_t i = 0; i < d; ++i) Vs(i, lo + j) = Vrot(i, kidx[j]);
    }
    lo = hi;
  }

  detail::fix_column_phases(Vs);

  // Rayleigh quotients give the reported eigenvalues; both quadratic forms
  // are real because H and K are Hermitian.
  const ComplexMatrix HV = H * Vs;
  const ComplexMatrix KV = K * Vs;
  for (std::size_t j = 0; j < d; ++j) {
    cplx hq = 0.0, kq = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      hq += std::conj(Vs(i, j)) * HV(i, j);
      kq += std::conj(Vs(i, j)) * KV(i, j);
    }
    out.spectrum[j] = cplx(hq.real(), kq.real());
  }
  out.basis = std::move(Vs);
  out.residual = frobenius_norm(A - detail::reconstruct(out.basis, out.spectrum));
  return out;
}

/// Unordered complex spectrum of a normal matrix (deterministic order:
/// Re-cluster ascending, Im ascending inside clusters).
inline std::vector<cplx> normal_spectrum(const ComplexMatrix& A,
                                         const EigenOptions& opt = {}) {
  return eig_normal(A, opt).spectrum;
}

/// Singular values of a rows >= cols matrix, sorted decreasing, clamped to
/// be nonnegative. Computed from the Gram matrix A*A.
inline std::vector<double> singular_values(const ComplexMatrix& A,
                                           const EigenOptions& opt = {}) {
  if (A.rows() < A.cols())
    throw Error(Errc::ShapeError, "singular values need rows >= cols");
  const std::size_t d = A.cols();
  if (d == 0) return {};
  ComplexMatrix G = A.adjoint() * A;
  std::vector<double> ev = detail::hermitian_eigenvalues(G, opt);
  std::vector<double> sv(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double v = ev[d - 1 - i];
    sv[i] = v > 0.0 ? std::sqrt(v) : 0.0;
  }
  return sv;
}

/// Largest singular value; any shape (empty matrices have norm 0).
inline double operator_norm(const ComplexMatrix& A, const EigenOptions& opt = {}) {
  if (A.rows() == 0 || A.cols() == 0) return 0.0;
  const ComplexMatrix& B = A;
  ComplexMatrix G = (A.rows() >= A.cols()) ? B.adjoint() * B : B * B.adjoint();
  std::vector<double> ev = detail::hermitian_eigenvalues(G, opt);
  const double top = ev.empty() ? 0.0 : ev.back();
  return top > 0.0 ? std::sqrt(top) : 0.0;
}

// ---------------------------------------------------------------------------
// Spectral statistics
// ---------------------------------------------------------------------------

enum class SpectralStatistic {
  SchattenPower,      // sum sigma_i^p (raw power sum), p >= 1
  KyFan,              // sum of the k largest singular values
  VonNeumannEntropy,  // -sum lambda log lambda, density matrices only
  RenyiEntropy,       // log(sum lambda^alpha) / (1 - alpha), alpha > 1
  SpectralGap,        // lambda_{i+1} - lambda_i of the ascending spectrum
};

struct StatisticParams {
  double p = 2.0;      // SchattenPower exponent
  std::size_t k = 1;   // KyFan order
  double alpha = 2.0;  // RenyiEntropy order
  std::size_t i = 1;   // SpectralGap index (1-based)
};

namespace detail {

inline std::vector<double> sv_any_shape(const ComplexMatrix& A, const EigenOptions& opt) {
  return (A.rows() >= A.cols()) ? singular_values(A, opt) : singular_values(A.adjoint(), opt);
}

// Density gate: Hermitian, spectrum >= -tol, trace within tol of 1.
// Returns the ascending eigenvalues clamped to [0, inf).
inline std::vector<double> density_spectrum(const ComplexMatrix& A, const EigenOptions& opt) {
  if (!A.is_square() || !is_hermitian(A, opt.classTol))
    throw Error(Errc::NotDensityMatrix, "entropy needs a Hermitian density matrix");
  std::vector<double> lam = detail::hermitian_eigenvalues(A, opt);
  const double tol = defaults::kDensityTol;
  double tr = 0.0;
  for (double v : lam) {
    if (v < -tol) throw Error(Errc::NotDensityMatrix, "negative eigenvalue in density matrix");
    tr += v;
  }
  if (std::abs(tr - 1.0) > tol)
    throw Error(Errc::NotDensityMatrix, "density matrix trace differs from 1");
  for (double& v : lam) v = std::max(v, 0.0);
  return lam;
}

}  // namespace detail

inline double schatten_power(const ComplexMatrix& A, double p, const EigenOptions& opt = {}) {
  if (!(p >= 1.0)) throw Error(Errc::BadParam, "Schatten exponent must satisfy p >= 1");
  double s = 0.0;
  for (double sv : detail::sv_any_shape(A, opt)) s += std::pow(sv, p);
  return s;
}

inline double ky_fan(const ComplexMatrix& A, std::size_t k, const EigenOptions& opt = {}) {
  const std::size_t dmin = std::min(A.rows(), A.cols());
  if (k < 1 || k > dmin) throw Error(Errc::BadParam, "Ky Fan order out of range");
  const std::vector<double> sv = detail::sv_any_shape(A, opt);
  return std::accumulate(sv.begin(), sv.begin() + static_cast<long>(k), 0.0);
}

inline double von_neumann_entropy(const ComplexMatrix& A, const EigenOptions& opt = {}) {
  double s = 0.0;
  for (double v : detail::density_spectrum(A, opt))
    if (v > 0.0) s -= v * std::log(v);
  return s;
}

inline double renyi_entropy(const ComplexMatrix& A, double alpha, const EigenOptions& opt = {}) {
  if (!(alpha > 1.0)) throw Error(Errc::BadParam, "Renyi order must satisfy alpha > 1");
  double s = 0.0;
  for (double v : detail::density_spectrum(A, opt)) s += std::pow(v, alpha);
  return std::log(s) / (1.0 - alpha);
}

inline double spectral_gap(const ComplexMatrix& A, std::size_t i, const EigenOptions& opt = {}) {
  const std::vector<double> lam = ordered_spectrum(A, opt);
  if (i < 1 || i + 1 > lam.size()) throw Error(Errc::BadParam, "gap index out of range");
  return lam[i] - lam[i - 1];
}

/// Dispatcher used by the CLI and report plumbing.
inline double spectral_statistic(const ComplexMatrix& A, SpectralStatistic stat,
                                 const StatisticParams& par = {},
                                 const EigenOptions& opt = {}) {
  switch (stat) {
    case SpectralStatistic::SchattenPower: return schatten_power(A, par.p, opt);
    case SpectralStatistic::KyFan: return ky_fan(A, par.k, opt);
    case SpectralStatistic::VonNeumannEntropy: return von_neumann_entropy(A, opt);
    case SpectralStatistic::RenyiEntropy: return renyi_entropy(A, par.alpha, opt);
    case SpectralStatistic::SpectralGap: return spectral_gap(A, par.i, opt);
  }
  throw Error(Errc::BadParam, "unknown statistic");
}

}  // namespace eigenflow
