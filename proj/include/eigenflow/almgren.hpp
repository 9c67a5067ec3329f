#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "eigenflow/defaults.hpp"
#include "eigenflow/errors.hpp"
#include "eigenflow/unordered.hpp"

namespace eigenflow {

/// Bi-Lipschitz embedding of A_d(C) into R^(d*h): one sorted projection
/// per unit-modulus direction theta_l, scaled by 1/sqrt(h). The default
/// uses the h = 2d^2 + 1 roots of unity, for which the upper Lipschitz
/// constant is 1 and the lower distortion bound is positive.
struct AlmgrenEmbedding {
  std::size_t d = 0;
  std::vector<cplx> thetas;

  std::size_t directions() const noexcept { return thetas.size(); }
  std::size_t ambient_dim() const noexcept { return d * thetas.size(); }
  double scale() const noexcept {
    return thetas.empty() ? 0.0 : 1.0 / std::sqrt(static_cast<double>(thetas.size()));
  }
};

/// Default embedding for tuple size d: h = 2d^2+1 directions at the h-th
/// roots of unity (h = 0 picks that default; custom h >= 1 allowed).
inline AlmgrenEmbedding make_embedding(std::size_t d, std::size_t h = 0) {
  if (d < 1) throw Error(Errc::BadParam, "tuple size must be at least 1");
  if (h == 0) h = defaults::almgren_directions(d);
  AlmgrenEmbedding E;
  E.d = d;
  E.thetas.resize(h);
  const double twoPi = 8.0 * std::atan(1.0);
  for (std::size_t l = 0; l < h; ++l) {
    const double phi = twoPi * static_cast<double>(l) / static_cast<double>(h);
    E.thetas[l] = cplx(std::cos(phi), std::sin(phi));
  }
  return E;
}

/// Embedding with caller-chosen directions; each must have unit modulus.
inline AlmgrenEmbedding make_embedding(std::size_t d, std::vector<cplx> thetas) {
  if (d < 1) throw Error(Errc::BadParam, "tuple size must be at least 1");
  if (thetas.empty()) throw Error(Errc::BadParam, "need at least one direction");
  for (std::size_t l = 0; l < thetas.size(); ++l)
    if (std::abs(std::abs(thetas[l]) - 1.0) > 1e-12)
      throw Error(Errc::NotUnitModulus, "direction " + std::to_string(l));
  AlmgrenEmbedding E;
  E.d = d;
  E.thetas = std::move(thetas);
  return E;
}

/// Sorted real parts of the rotated tuple: (Re(theta z_i))^up. Each such
/// map is 1-Lipschitz from (A_d(C), d2) by the rearrangement inequality.
inline std::vector<double> almgren_map(const cplx& theta, const UnorderedSpectrum& x) {
  if (std::abs(std::abs(theta) - 1.0) > 1e-12)
    throw Error(Errc::NotUnitModulus, "direction must have unit modulus");
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = (theta * x.z[i]).real();
  std::sort(r.begin(), r.end());
  return r;
}

/// Concatenation of the scaled Almgren maps over all directions; a point
/// of R^(d*h). Permutation-invariant by construction (each block sorts).
inline std::vector<double> embed(const AlmgrenEmbedding& E, const UnorderedSpectrum& x) {
  if (x.size() != E.d)
    throw Error(Errc::SizeMismatch, "tuple size does not match the embedding");
  std::vector<double> out;
  out.reserve(E.ambient_dim());
  const double s = E.scale();
  for (const cplx& theta : E.thetas) {
    const std::vector<double> block = almgren_map(theta, x);
    for (double v : block) out.push_back(s * v);
  }
  return out;
}

struct DistortionReport {
  double maxRatio = 0.0;  // sup ||Dx - Dy|| / d2(x, y); <= 1 for the default
  double minRatio = 0.0;  // inf of the same ratio; > 0 certifies bi-Lipschitz
};

/// Empirical distortion of the embedding over a sample of tuple pairs.
/// Pairs at d2 distance zero carry no ratio information and are rejected.
inline DistortionReport embedding_distortion(
    const AlmgrenEmbedding& E,
    const std::vector<std::pair<UnorderedSpectrum, UnorderedSpectrum>>& sample) {
  DistortionReport rep;
  rep.minRatio = std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t k = 0; k < sample.size(); ++k) {
    const auto& [x, y] = sample[k];
    const double base = d2(x, y);
    if (base == 0.0)
      throw Error(Errc::DegeneratePair, "sample pair at d2 distance zero",
                  static_cast<long>(k));
    const std::vector<double> ex = embed(E, x);
    const std::vector<double> ey = embed(E, y);
    double s = 0.0;
    for (std::size_t i = 0; i < ex.size(); ++i) {
      const double t = ex[i] - ey[i];
      s += t * t;
    }
    const double ratio = std::sqrt(s) / base;
    rep.maxRatio = std::max(rep.maxRatio, ratio);
    rep.minRatio = std::min(rep.minRatio, ratio);
    any = true;
  }
  if (!any) rep.minRatio = 0.0;
  return rep;
}

}  // namespace eigenflow
