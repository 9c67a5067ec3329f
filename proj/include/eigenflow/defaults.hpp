#pragma once

#include <cstddef>

namespace eigenflow::defaults {

// Tolerances are relative to the natural scale of their operand unless
// stated otherwise; the scale is named next to each constant.

/// Matrix classification: relative Frobenius tolerance for the defect
/// norms ||A - A*||, ||A*A - AA*||, ||A*A - I|| against scale ||A||_2
/// (||A*A - AA*|| against ||A||_2^2, ||A*A - I|| against max(1, ||A||_2^2)).
inline constexpr double kClassTol = 1e-10;

/// Eigensolver convergence: off-diagonal Frobenius mass must fall below
/// kEigTol * ||A||_2.
inline constexpr double kEigTol = 1e-12;

/// Hard cap on cyclic sweeps before NoConvergence.
inline constexpr int kMaxSweeps = 64;

/// Normal solver: eigenvalues of the Hermitian part closer than
/// kClusterTol * ||A||_2 are treated as one cluster.
inline constexpr double kClusterTol = 1e-8;

/// Unordered metrics: exhaustive permutation search up to this tuple size,
/// polynomial assignment solvers beyond.
inline constexpr std::size_t kBruteForceMax = 8;

/// Minimizing-permutation collection: a permutation ties the optimum when
/// its cost is within kTieTol * (1 + d2) of the minimum.
inline constexpr double kTieTol = 1e-9;

/// Almgren embedding: number of unit-modulus directions for tuple size d.
inline constexpr std::size_t almgren_directions(std::size_t d) { return 2 * d * d + 1; }

/// All-pairs scans (Holder seminorm, slope deviation, distortion) refuse
/// to run past this many pairs.
inline constexpr std::size_t kPairBudget = 4000000;

/// Condition-number flow: sigma_min below kSigmaFloor * max_node ||A||_2
/// raises SingularNode.
inline constexpr double kSigmaFloor = 1e-12;

/// Spectral partition: cluster gap below kGapTol * ||A||_2 raises
/// GapTooSmall (and AllEqual when the whole spectrum collapses).
inline constexpr double kGapTol = 1e-6;

/// Block-diagonalization self-check: off-block Frobenius mass of U*AU must
/// fall below kBdTol * ||A||_2.
inline constexpr double kBdTol = 1e-9;

/// up-map: |Im z| above this absolute tolerance raises NotRealTuple.
/// No relative scale is imposed; callers with wildly scaled data pass
/// their own.
inline constexpr double kRealTol = 1e-9;

/// Density-matrix gate for entropy statistics: trace-1 and positivity
/// slack.
inline constexpr double kDensityTol = 1e-8;

}  // namespace eigenflow::defaults
