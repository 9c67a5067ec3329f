#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "eigenflow/blockdiag.hpp"
#include "eigenflow/rng.hpp"

using namespace eigenflow;

TEST_CASE("the Hermitian strategy cuts at the largest real gap", "[blockdiag]") {
  const std::vector<cplx> spec = {cplx(5, 0), cplx(0.1, 0), cplx(0, 0), cplx(5.1, 0)};
  const SpectralPartition P = partition_by_gap(spec, PartitionStrategy::Hermitian);
  CHECK(P.clusterA == std::vector<std::size_t>{1, 2});
  CHECK(P.clusterB == std::vector<std::size_t>{0, 3});
  CHECK(std::abs(P.gap - 4.9) < 1e-14);
}

TEST_CASE("the normal strategy maximizes the inter cluster distance", "[blockdiag]") {
  const std::vector<cplx> spec = {cplx(0, 0), cplx(0, 1), cplx(10, 0), cplx(10, 1)};
  const SpectralPartition P = partition_by_gap(spec, PartitionStrategy::Normal);
  CHECK(P.clusterA == std::vector<std::size_t>{0, 1});
  CHECK(P.clusterB == std::vector<std::size_t>{2, 3});
  CHECK(std::abs(P.gap - 10.0) < 1e-14);

  std::vector<cplx> big(13, cplx(0, 0));
  CHECK_THROWS_MATCHES(partition_by_gap(big, PartitionStrategy::Normal), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::TooLarge; }));
}

TEST_CASE("an unsplittable spectrum is rejected", "[blockdiag]") {
  const std::vector<cplx> flat = {cplx(1, 0), cplx(1, 0), cplx(1, 0)};
  for (auto strategy : {PartitionStrategy::Hermitian, PartitionStrategy::Normal})
    CHECK_THROWS_MATCHES(partition_by_gap(flat, strategy), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == Errc::AllEqual; }));
  CHECK_THROWS_AS(partition_by_gap({cplx(1, 0)}, PartitionStrategy::Hermitian), Error);
}

TEST_CASE("a planted two cluster matrix block diagonalizes cleanly", "[blockdiag]") {
  rng::Gaussian g{rng::stream(51, 0)};
  const ComplexMatrix U = rng::haar_unitary(g, 4);
  const std::vector<cplx> lam = {cplx(0, 0), cplx(0.3, 0), cplx(5, 0), cplx(5.3, 0)};
  const ComplexMatrix A = U * ComplexMatrix::diagonal(lam) * U.adjoint();
  const std::vector<cplx> spec = eig_normal(A).spectrum;
  const SpectralPartition P = partition_by_gap(spec, PartitionStrategy::Hermitian);
  REQUIRE(P.clusterA.size() == 2);

  const BlockDiagonalization bd = block_diagonalize(A, P);
  const double scale = frobenius_norm(A);
  CHECK(bd.offDiagResidual <= 1e-10 * scale);
  CHECK(frobenius_norm(bd.U.adjoint() * bd.U - ComplexMatrix::identity(4)) <= 1e-12);

  // The blocks carry the cluster spectra.
  const UnorderedSpectrum lower{eig_normal(bd.blockB).spectrum};
  const UnorderedSpectrum upper{eig_normal(bd.blockC).spectrum};
  CHECK(d2(lower, UnorderedSpectrum{{lam[0], lam[1]}}) <= 1e-9);
  CHECK(d2(upper, UnorderedSpectrum{{lam[2], lam[3]}}) <= 1e-9);

  // A tight tolerance turns the same partition into a failure.
  CHECK_THROWS_MATCHES(block_diagonalize(A, P, 10.0), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::GapTooSmall; }));

  SpectralPartition bad = P;
  bad.clusterB = bad.clusterA;
  CHECK_THROWS_AS(block_diagonalize(A, bad), Error);
}

TEST_CASE("the separation margin of equal reflections is the norm ratio", "[blockdiag]") {
  // For A = B = diag(1, -1), both norms are sqrt(2) and the margin reduces
  // to |(-1) - 1| / sqrt(2) = sqrt(2).
  const ComplexMatrix A = ComplexMatrix::diagonal({cplx(1, 0), cplx(-1, 0)});
  const SpectralPartition P = partition_by_gap(eig_normal(A).spectrum, PartitionStrategy::Hermitian);
  CHECK(P.clusterA == std::vector<std::size_t>{0});  // the eigenvalue -1
  const double margin = separation_margin(A, A, P, P);
  CHECK(std::abs(margin - std::sqrt(2.0)) < 1e-13);
  CHECK_THROWS_AS(separation_margin(ComplexMatrix(2, 2), A, P, P), Error);
}

TEST_CASE("difference bounds hold exactly for commuting diagonal families", "[blockdiag]") {
  const Grid g({0.0}, {1.0}, {9});
  const auto A1 = sample_interval<ComplexMatrix>(
      g, [](double x) { return ComplexMatrix::diagonal({cplx(x, 0), cplx(5 + x, 0)}); });
  const auto A2 = sample_interval<ComplexMatrix>(
      g, [](double x) { return ComplexMatrix::diagonal({cplx(1.1 * x, 0), cplx(5 + 0.9 * x, 0)}); });
  const ExperimentReport rep = bdiag_difference_bounds(A1, A2, PartitionStrategy::Hermitian);
  // The eigenbasis is the identity at every node, so the node ratio is
  // exactly 1 wherever the families differ and the cell bound dominates.
  CHECK(std::abs(rep.get_scalar("max_node_ratio") - 1.0) < 1e-12);
  CHECK(rep.get_scalar("empirical_C") <= 1.0 + 1e-12);
  CHECK(rep.get_series("node_ratio").size() == 9);
  CHECK(rep.get_series("cell_ratio_den1").size() == 8);
}

TEST_CASE("a partition size change along the grid raises a flip error", "[blockdiag]") {
  // diag(0, 1+8x, 10): the largest gap moves across the middle eigenvalue
  // as x crosses 1/2, changing the lower cluster size from 2 to 1.
  const Grid g({0.0}, {1.0}, {5});
  const auto fam = sample_interval<ComplexMatrix>(g, [](double x) {
    return ComplexMatrix::diagonal({cplx(0, 0), cplx(1 + 8 * x, 0), cplx(10, 0)});
  });
  try {
    bdiag_difference_bounds(fam, fam, PartitionStrategy::Hermitian);
    FAIL("expected a ClusterFlip error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ClusterFlip);
    CHECK(e.node() == 2);
  }
}
