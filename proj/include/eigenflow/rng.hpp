#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "eigenflow/matrix.hpp"

namespace eigenflow::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent deterministic stream for trial `index` under a master
/// seed. Streams never depend on scheduling, so parallel sweeps reproduce
/// serial runs exactly.
inline std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1))));
}

/// Standard normal sampler with the engine and distribution kept together
/// (the distribution caches its Box-Muller state).
struct Gaussian {
  std::mt19937_64 gen;
  std::normal_distribution<double> normal{0.0, 1.0};
  explicit Gaussian(std::mt19937_64 g) : gen(g) {}
  double operator()() { return normal(gen); }
  cplx complex_unit_variance() {
    const double re = (*this)();
    const double im = (*this)();
    return cplx(re, im) * (1.0 / std::sqrt(2.0));
  }
};

/// Complex Ginibre matrix: i.i.d. unit-variance complex Gaussian entries.
inline ComplexMatrix ginibre(Gaussian& g, std::size_t rows, std::size_t cols) {
  ComplexMatrix A(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) A(i, j) = g.complex_unit_variance();
  return A;
}

/// GUE-flavored Hermitian matrix: real N(0,1) diagonal, unit-variance
/// complex Gaussian strictly-upper entries mirrored by conjugation.
inline ComplexMatrix gaussian_hermitian(Gaussian& g, std::size_t d) {
  ComplexMatrix A(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    A(i, i) = cplx(g(), 0.0);
    for (std::size_t j = i + 1; j < d; ++j) {
      const cplx v = g.complex_unit_variance();
      A(i, j) = v;
      A(j, i) = std::conj(v);
    }
  }
  return A;
}

/// Haar-distributed unitary: modified Gram-Schmidt QR of a Ginibre matrix
/// with the positive-diagonal-R convention (which makes Q Haar).
inline ComplexMatrix haar_unitary(Gaussian& g, std::size_t d) {
  ComplexMatrix A = ginibre(g, d, d);
  ComplexMatrix Q(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<cplx> v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = A(i, j);
    for (int pass = 0; pass < 2; ++pass) {  // re-orthogonalize once
      for (std::size_t c = 0; c < j; ++c) {
        cplx r = 0.0;
        for (std::size_t i = 0; i < d; ++i) r += std::conj(Q(i, c)) * v[i];
        for (std::size_t i = 0; i < d; ++i) v[i] -= r * Q(i, c);
      }
    }
    double nrm = 0.0;
    for (const cplx& t : v) nrm += std::norm(t);
    nrm = std::sqrt(nrm);
    // A Ginibre column is almost surely outside the span of the previous
    // ones; guard anyway.
    if (nrm < 1e-300) {
      v.assign(d, cplx(0.0, 0.0));
      v[j] = 1.0;
      nrm = 1.0;
    }
    for (std::size_t i = 0; i < d; ++i) Q(i, j) = v[i] / nrm;
  }
  return Q;
}

/// Random normal matrix U diag(z) U* with complex Gaussian eigenvalues
/// and Haar basis.
inline ComplexMatrix random_normal(Gaussian& g, std::size_t d) {
  std::vector<cplx> z(d);
  for (cplx& v : z) v = g.complex_unit_variance() * std::sqrt(2.0);
  const ComplexMatrix U = haar_unitary(g, d);
  return U * ComplexMatrix::diagonal(z) * U.adjoint();
}

}  // namespace eigenflow::rng
