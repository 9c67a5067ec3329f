#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "eigenflow/defaults.hpp"
#include "eigenflow/errors.hpp"
#include "eigenflow/matrix.hpp"

namespace eigenflow {

/// A point of A_d(C): a complex d-tuple considered up to coordinate
/// permutation. The stored vector is one representative; canonical() gives
/// the (Re, Im)-lexicographic sort used for serialization and hashing.
struct UnorderedSpectrum {
  std::vector<cplx> z;

  std::size_t size() const noexcept { return z.size(); }

  std::vector<cplx> canonical() const {
    std::vector<cplx> c = z;
    std::sort(c.begin(), c.end(), [](const cplx& a, const cplx& b) {
      if (a.real() != b.real()) return a.real() < b.real();
      return a.imag() < b.imag();
    });
    return c;
  }
};

namespace detail {

inline void require_same_size(const UnorderedSpectrum& x, const UnorderedSpectrum& y) {
  if (x.size() != y.size())
    throw Error(Errc::SizeMismatch, "tuples have different sizes");
}

// Flat d x d table of squared moduli c[i*d+j] = |x_i - y_j|^2.
inline std::vector<double> squared_cost_table(const UnorderedSpectrum& x,
                                              const UnorderedSpectrum& y) {
  const std::size_t d = x.size();
  std::vector<double> c(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) c[i * d + j] = std::norm(x.z[i] - y.z[j]);
  return c;
}

// Minimum over all permutations of sum_i c[i, perm(i)], by enumeration.
inline double brute_min_sum(const std::vector<double>& c, std::size_t d) {
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      s += c[i * d + perm[i]];
      if (s >= best) break;
    }
    if (s < best) best = s;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Minimum over all permutations of max_i c[i, perm(i)], by enumeration.
inline double brute_min_max(const std::vector<double>& c, std::size_t d) {
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double m = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      m = std::max(m, c[i * d + perm[i]]);
      if (m >= best) break;
    }
    if (m < best) best = m;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// O(d^3) minimum-cost assignment via potentials (Hungarian, JV flavor).
// Returns row -> column. Exact for the comparison-based recursion; cost
// arithmetic is plain double sums.
inline std::vector<std::size_t> hungarian(const std::vector<double>& cost, std::size_t d) {
  const std::size_t n = d;
  const double INF = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, INF);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      std::size_t j1 = 0;
      double delta = INF;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) { minv[j] = cur; way[j] = j0; }
        if (minv[j] < delta) { delta = minv[j]; j1 = j; }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) { u[p[j]] += delta; v[j] -= delta; }
        else minv[j] -= delta;
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> rowToCol(n, 0);
  for (std::size_t j = 1; j <= n; ++j)
    if (p[j] >= 1) rowToCol[p[j] - 1] = j - 1;
  return rowToCol;
}

inline double assignment_min_sum(const std::vector<double>& c, std::size_t d) {
  const std::vector<std::size_t> perm = hungarian(c, d);
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) s += c[i * d + perm[i]];
  return s;
}

// Kuhn augmenting-path matching on the graph {(i,j) : c[i,j] <= thr}.
inline bool kuhn_try(std::size_t i, double thr, const std::vector<double>& c,
                     std::size_t d, std::vector<char>& seen,
                     std::vector<long>& matchOfCol) {
  for (std::size_t j = 0; j < d; ++j) {
    if (seen[j] || c[i * d + j] > thr) continue;
    seen[j] = 1;
    if (matchOfCol[j] < 0 ||
        kuhn_try(static_cast<std::size_t>(matchOfCol[j]), thr, c, d, seen, matchOfCol)) {
      matchOfCol[j] = static_cast<long>(i);
      return true;
    }
  }
  return false;
}

inline bool perfect_matching_under(const std::vector<double>& c, std::size_t d, double thr) {
  std::vector<long> matchOfCol(d, -1);
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<char> seen(d, 0);
    if (!kuhn_try(i, thr, c, d, seen, matchOfCol)) return false;
  }
  return true;
}

// Smallest threshold from the cost table admitting a perfect matching.
// Thresholds are actual table entries, so the search is exact.
inline double bottleneck_min_max(const std::vector<double>& c, std::size_t d) {
  std::vector<double> levels = c;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::size_t lo = 0, hi = levels.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (perfect_matching_under(c, d, levels[mid])) hi = mid;
    else lo = mid + 1;
  }
  return levels[lo];
}

}  // namespace detail

/// d2 metric on A_d(C): min over permutations of the Euclidean distance
/// between representatives. Exhaustive search up to `bruteMax`, O(d^3)
/// assignment beyond (minimizing the sum of squared moduli minimizes the
/// norm). Pass bruteMax = 0 to force the assignment path.
inline double d2(const UnorderedSpectrum& x, const UnorderedSpectrum& y,
                 std::size_t bruteMax = defaults::kBruteForceMax) {
  detail::require_same_size(x, y);
  const std::size_t d = x.size();
  if (d == 0) return 0.0;
  const std::vector<double> c = detail::squared_cost_table(x, y);
  const double s = (d <= bruteMax) ? detail::brute_min_sum(c, d)
                                   : detail::assignment_min_sum(c, d);
  return std::sqrt(std::max(s, 0.0));
}

/// Bottleneck metric on A_d(C): min over permutations of the max modulus
/// of coordinate differences. Exhaustive up to `bruteMax`, binary-search
/// bottleneck matching beyond.
inline double d_inf(const UnorderedSpectrum& x, const UnorderedSpectrum& y,
                    std::size_t bruteMax = defaults::kBruteForceMax) {
  detail::require_same_size(x, y);
  const std::size_t d = x.size();
  if (d == 0) return 0.0;
  const std::vector<double> c = detail::squared_cost_table(x, y);
  const double m = (d <= bruteMax) ? detail::brute_min_max(c, d)
                                   : detail::bottleneck_min_max(c, d);
  return std::sqrt(std::max(m, 0.0));
}

/// All permutations tau with ||x - y∘tau||_2 within tieTol*(1 + d2) of the
/// minimum, in lexicographic order of the image sequence (the first entry
/// is the canonical tie-broken minimizer). Exhaustive only: sizes above
/// kBruteForceMax raise TooLarge.
inline std::vector<std::vector<std::size_t>> minimizing_permutations(
    const UnorderedSpectrum& x, const UnorderedSpectrum& y,
    double tieTol = defaults::kTieTol) {
  detail::require_same_size(x, y);
  const std::size_t d = x.size();
  if (d > defaults::kBruteForceMax)
    throw Error(Errc::TooLarge, "permutation enumeration capped at size " +
                                    std::to_string(defaults::kBruteForceMax));
  std::vector<std::vector<std::size_t>> out;
  if (d == 0) { out.push_back({}); return out; }
  const std::vector<double> c = detail::squared_cost_table(x, y);
  const double dist = std::sqrt(std::max(detail::brute_min_sum(c, d), 0.0));
  const double admit = dist + tieTol * (1.0 + dist);
  const double admit2 = admit * admit;
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) s += c[i * d + perm[i]];
    if (s <= admit2) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

/// The ascending-sort chart of A_d(R): requires |Im z_i| <= realTol, then
/// returns the real parts sorted increasingly. On real tuples
/// ||up(x) - up(y)||_2 realizes d2 exactly.
inline std::vector<double> up_map(const UnorderedSpectrum& x,
                                  double realTol = defaults::kRealTol) {
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x.z[i].imag()) > realTol)
      throw Error(Errc::NotRealTuple,
                  "entry " + std::to_string(i) + " has imaginary part " +
                      std::to_string(x.z[i].imag()));
    r[i] = x.z[i].real();
  }
  std::sort(r.begin(), r.end());
  return r;
}

}  // namespace eigenflow
