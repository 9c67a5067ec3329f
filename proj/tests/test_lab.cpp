#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "eigenflow/lab.hpp"

using namespace eigenflow;

TEST_CASE("the kink family matches its closed forms at simple nodes", "[lab]") {
  const Grid g({-1.0}, {1.0}, {33});  // spacing 1/16, exactly representable
  const CounterexampleFamily fam = make_family(FamilyId::ExA, 5, g);
  CHECK(fam.solverMismatch <= 1e-10);

  // At x = 0 the matrix is diag(1/5, -1/5) with spectrum {-0.2, 0.2}.
  const std::size_t mid = 16;
  CHECK(g.coordinate(mid)[0] == 0.0);
  CHECK(fam.matrices.at(mid)(0, 0) == cplx(0.2, 0));
  CHECK(fam.matrices.at(mid)(1, 1) == cplx(-0.2, 0));
  CHECK(fam.spectra.at(mid) == std::vector<double>{-0.2, 0.2});

  // The partner is the kink limit diag branch |x|.
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    const double x = g.coordinate(k)[0];
    CHECK(std::abs(fam.partnerSpectra.at(k)[1] - std::abs(x)) < 1e-15);
    CHECK(std::abs(fam.spectra.at(k)[1] - std::hypot(x, 0.2)) < 1e-15);
  }

  CHECK_THROWS_AS(make_family(FamilyId::ExA, 0, g), Error);
  const Grid sq({0.0, 0.0}, {1.0, 1.0}, {3, 3});
  CHECK_THROWS_AS(make_family(FamilyId::ExA, 5, sq), Error);
}

TEST_CASE("the sawtooth rises to its half period peak", "[lab]") {
  // phi_n climbs with slope 1 to 1/n at x = 1/n and returns to 0 at 2/n.
  CHECK(closed::sawtooth(4, 0.0) == 0.0);
  CHECK(std::abs(closed::sawtooth(4, 0.125) - 0.125) < 1e-15);  // x = 1/(2n)
  CHECK(std::abs(closed::sawtooth(4, 0.25) - 0.25) < 1e-15);    // the peak
  CHECK(std::abs(closed::sawtooth(4, 0.5)) < 1e-15);            // back at 0
  CHECK(closed::sawtooth_slope(4, 0.1) == 1.0);
  CHECK(closed::sawtooth_slope(4, 0.3) == -1.0);
  for (double x : {0.01, 0.2, 0.55, 0.83, 0.99}) {
    const double v = closed::sawtooth(4, x);
    CHECK(v >= 0.0);
    CHECK(v <= 0.25 + 1e-15);
  }

  const Grid g({0.0}, {1.0}, {65});
  const CounterexampleFamily fam = make_family(FamilyId::ExUcq, 4, g);
  CHECK(fam.solverMismatch <= 1e-10);
  const Grid off({-0.5}, {0.5}, {9});
  CHECK_THROWS_AS(make_family(FamilyId::ExUcq, 4, off), Error);
}

TEST_CASE("the steep family at alpha one half uses exponent one", "[lab]") {
  const Grid g({-1.0}, {1.0}, {65});
  const CounterexampleFamily fam = make_family(FamilyId::ExAuc, 4, g, 0.5);
  // r = alpha/(1-alpha) = 1: A_n(x) = [[1/n, nx], [nx, -1/n]].
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    const double x = g.coordinate(k)[0];
    CHECK(fam.matrices.at(k)(0, 0) == cplx(0.25, 0));
    CHECK(std::abs(fam.matrices.at(k)(0, 1).real() - 4 * x) < 1e-15);
    CHECK(fam.partner.at(k)(0, 0) == cplx(0.125, 0));
  }
  CHECK_THROWS_AS(make_family(FamilyId::ExAuc, 4, g, 1.0), Error);
  CHECK_THROWS_AS(make_family(FamilyId::ExAuc, 4, g, 0.0), Error);
}

TEST_CASE("trend helpers smooth, compare, and fit as documented", "[lab]") {
  CHECK(window3_smoothed({1, 2, 3, 4}) == std::vector<double>{2.0, 3.0});
  CHECK_THROWS_AS(window3_smoothed({1, 2}), Error);

  CHECK(strictly_decreasing({3.0, 2.0, 1.0}));
  CHECK_FALSE(strictly_decreasing({3.0, 3.0, 1.0}));

  const std::vector<double> xs = {1, 2, 4, 8};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(5.0 / (x * x));
  CHECK(std::abs(loglog_slope(xs, ys) + 2.0) < 1e-12);
  CHECK_THROWS_AS(loglog_slope({1.0}, {1.0}), Error);
  CHECK_THROWS_AS(loglog_slope({1.0, -1.0}, {1.0, 1.0}), Error);
}

TEST_CASE("the kink experiment reproduces its closed form witnesses", "[lab]") {
  // n = 80 on an 801-node grid makes x = 1/n a grid node, so the witness
  // derivative gap is exactly 1 - 1/sqrt(2).
  const Grid g({-1.0}, {1.0}, {801});
  const ExperimentReport rep = run_exA(80, g);
  CHECK(rep.get_scalar("c01_seminorm") >= rep.get_scalar("c01_bound") - 1e-3);
  CHECK(std::abs(rep.get_scalar("deriv_gap_witness") - rep.get_scalar("deriv_gap_expected")) <=
        1e-9);
  CHECK(rep.get_scalar("solver_mismatch") <= 1e-10);
  const auto& w12 = rep.get_series("w12_gap");
  CHECK(w12.size() == 7);  // n = 4, 8, ..., 256
  CHECK(strictly_decreasing(w12));
  CHECK(rep.get_series("sup_deriv_gap").back() >= 0.25);
}

TEST_CASE("the sawtooth experiment keeps its derivative gap at every exponent", "[lab]") {
  for (std::size_t n : {16u, 64u, 256u}) {
    const Grid g({0.0}, {1.0}, {8 * n + 1});
    for (double q : {1.0, 2.0, 4.0}) {
      const ExperimentReport rep = run_exUcq(n, q, g);
      CHECK(rep.get_scalar("lq_deriv_gap") >= rep.get_scalar("lq_bound") - 1e-3);
      CHECK(std::abs(rep.get_scalar("matrix_c01_distance") -
                     rep.get_scalar("matrix_c01_expected")) <= 1e-9);
    }
  }
  const Grid coarse({0.0}, {1.0}, {65});
  CHECK_THROWS_AS(run_exUcq(64, 2.0, coarse), Error);
}

TEST_CASE("the steep experiment pins the Holder quotient at its witness", "[lab]") {
  // Grid chosen so that both 0 and x* = n^(-2) = 1/64 are nodes.
  const Grid g({-1.0}, {1.0}, {513});
  const ExperimentReport rep = run_exAuc(8, 0.5, g);
  CHECK(rep.has_scalar("witness_quotient"));
  CHECK(std::abs(rep.get_scalar("witness_quotient") - rep.get_scalar("holder_bound")) <= 1e-12);
  CHECK(rep.get_scalar("holder_seminorm") >= rep.get_scalar("holder_bound") - 1e-12);
}

TEST_CASE("the dyadic experiment sees a constant matrix difference", "[lab]") {
  const Grid g({0.0}, {1.0}, {1025});
  const ExperimentReport rep = run_exA2(64, 2.0, g);
  CHECK(rep.get_scalar("matrix_deriv_gap") == 0.0);
  CHECK(std::abs(rep.get_scalar("sup_matrix_distance") - std::sqrt(2.0) / 128.0) <= 1e-15);
  CHECK(rep.get_scalar("lq_deriv_gap") >= rep.get_scalar("lq_bound") - 1e-4);
  CHECK(rep.get_series("sweep_n") == std::vector<double>{8, 16, 32, 64});
  CHECK(std::abs(rep.get_scalar("loglog_slope") - (-0.5)) <= 0.1);
}

TEST_CASE("fuzzing the perturbation inequalities finds no violations", "[lab]") {
  for (InequalityKind kind :
       {InequalityKind::Weyl, InequalityKind::Loewner, InequalityKind::HoffmanWielandt,
        InequalityKind::SingularValue}) {
    const ExperimentReport rep = fuzz_inequalities(401, 200, 3, kind);
    CHECK(rep.get_scalar("worst_slack") >= -1e-8);
  }
  FuzzWitness w;
  const ExperimentReport bdm = fuzz_inequalities(402, 200, 3, InequalityKind::BDM, &w);
  CHECK(bdm.get_scalar("max_ratio") <= 3.0);
  REQUIRE(w.valid);
  CHECK(w.A.rows() == 3);
  // The witness pair regenerates deterministically from its trial stream.
  const UnorderedSpectrum sa{normal_spectrum(w.A)};
  const UnorderedSpectrum sb{normal_spectrum(w.B)};
  const double ratio = d_inf(sa, sb, 0) / operator_norm(w.A - w.B);
  CHECK(std::abs((3.0 - ratio) - w.slack) <= 1e-12);

  CHECK_THROWS_AS(fuzz_inequalities(1, 0, 3, InequalityKind::Weyl), Error);
  CHECK_THROWS_AS(fuzz_inequalities(1, 10, 17, InequalityKind::Weyl), Error);
}

TEST_CASE("an aligned spectral shift saturates the Frobenius inequality", "[lab]") {
  // diag(1,0) against diag(0,0): the sorted eigenvalue l2 gap equals the
  // Frobenius distance exactly, so the slack vanishes.
  const ComplexMatrix A = ComplexMatrix::diagonal({cplx(1, 0), cplx(0, 0)});
  const ComplexMatrix B(2, 2);
  const std::vector<double> la = ordered_spectrum(A);
  const std::vector<double> lb = {0.0, 0.0};
  double l2 = 0.0;
  for (std::size_t i = 0; i < 2; ++i) l2 += (la[i] - lb[i]) * (la[i] - lb[i]);
  CHECK(std::abs(frobenius_norm(A - B) - std::sqrt(l2)) <= 1e-14);
}

TEST_CASE("small convergence studies already trend downward", "[lab]") {
  ConvergenceParams p;
  p.nMax = 32;
  p.gridNodes = 257;

  const ExperimentReport frac = run_convergence(ConvergenceStudy::PointwiseFraction, p);
  CHECK(strictly_decreasing(window3_smoothed(frac.get_series("fraction"))));
  CHECK(frac.get_series("sup_gap").back() >= 0.25);

  const ExperimentReport ord = run_convergence(ConvergenceStudy::OrderedW12, p);
  const auto& primary = ord.get_series("w1q_top_branch");
  CHECK(strictly_decreasing(window3_smoothed(primary)));
  CHECK(ord.get_scalar("final_value") == primary.back());

  ConvergenceParams pk;
  pk.nMax = 16;
  pk.gridNodes = 65;
  pk.d = 3;
  const ExperimentReport kappa = run_convergence(ConvergenceStudy::ConditionNumber, pk);
  CHECK(kappa.get_scalar("min_sigma") >= 0.5);
  CHECK(kappa.get_series("w1q_gap").size() == 3);
  CHECK(strictly_decreasing(kappa.get_series("w1q_gap")));
}

TEST_CASE("graph areas of the kink approximants stay under the limit", "[lab]") {
  const ExperimentReport rep = surface_area_trend(801, 32);
  const auto& area = rep.get_series("area");
  const double limit = rep.get_scalar("limit");
  CHECK(std::abs(limit - 2.0 * std::sqrt(2.0)) < 1e-15);
  for (double a : area) CHECK(a < limit);
  CHECK(strictly_decreasing(rep.get_series("deviation")));
}
