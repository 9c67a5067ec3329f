// Acceptance gate: twelve end-to-end checks, each printing one PASS/FAIL
// line. Exit status is the number of failed checks. Run a single check
// with --only <k>.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "eigenflow/almgren.hpp"
#include "eigenflow/blockdiag.hpp"
#include "eigenflow/cli.hpp"
#include "eigenflow/eigen.hpp"
#include "eigenflow/io.hpp"
#include "eigenflow/lab.hpp"
#include "eigenflow/rng.hpp"
#include "eigenflow/unordered.hpp"

using namespace eigenflow;

namespace {

// Failure collector: empty string means the criterion passed.
struct Checker {
  std::string failures;
  std::string detail;

  void require(bool ok, const std::string& msg) {
    if (ok) return;
    if (!failures.empty()) failures += "; ";
    failures += msg;
  }
  void note(const std::string& msg) { detail = msg; }
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

UnorderedSpectrum random_tuple(rng::Gaussian& g, std::size_t d, bool realOnly = false) {
  UnorderedSpectrum x;
  x.z.resize(d);
  for (auto& z : x.z) z = realOnly ? cplx(g(), 0.0) : cplx(g(), g());
  return x;
}

double snap(double v, double delta) { return std::round(v / delta) * delta; }

// ---------------------------------------------------------------- 1
void criterion1(Checker& c) {
  const Grid g({-1.0}, {1.0}, {4001});
  const ExperimentReport rep = run_exA(100, g);
  const double semi = rep.get_scalar("c01_seminorm");
  const double bound = rep.get_scalar("c01_bound");
  c.require(semi >= bound - 1e-3,
            "C^{0,1} seminorm " + num(semi) + " below bound " + num(bound));
  const double witness = rep.get_scalar("deriv_gap_witness");
  const double expected = rep.get_scalar("deriv_gap_expected");
  c.require(std::abs(witness - expected) <= 1e-6,
            "derivative gap witness " + num(witness) + " vs " + num(expected));
  c.note("seminorm " + num(semi) + " >= " + num(bound) + ", witness gap " + num(witness));
}

// ---------------------------------------------------------------- 2
void criterion2(Checker& c) {
  const Grid g({0.0}, {1.0}, {513});
  double worstMargin = 1e300;
  for (double q : {1.0, 2.0, 4.0}) {
    const ExperimentReport rep = run_exUcq(64, q, g);
    const double gap = rep.get_scalar("lq_deriv_gap");
    const double bound = rep.get_scalar("lq_bound");
    worstMargin = std::min(worstMargin, gap - bound);
    c.require(gap >= bound - 1e-3,
              "q=" + num(q) + " derivative gap " + num(gap) + " below " + num(bound));
    const double dist = rep.get_scalar("matrix_c01_distance");
    const double exp = rep.get_scalar("matrix_c01_expected");
    c.require(std::abs(dist - exp) <= 1e-9,
              "q=" + num(q) + " matrix distance " + num(dist) + " vs " + num(exp));
  }
  c.note("worst gap margin " + num(worstMargin) + " over q in {1,2,4}");
}

// ---------------------------------------------------------------- 3
void criterion3(Checker& c) {
  const Grid g({-1.0}, {1.0}, {2049});
  const ExperimentReport rep = run_exAuc(32, 0.5, g);
  const double semi = rep.get_scalar("holder_seminorm");
  const double bound = rep.get_scalar("holder_bound");
  c.require(semi >= bound - 1e-3,
            "Holder seminorm " + num(semi) + " below bound " + num(bound));
  c.note("Holder seminorm " + num(semi) + " >= " + num(bound));
}

// ---------------------------------------------------------------- 4
void criterion4(Checker& c) {
  const Grid g({0.0}, {1.0}, {1025});
  const ExperimentReport rep = run_exA2(64, 2.0, g);
  const std::vector<double>& sweep = rep.get_series("sweep_n");
  const std::vector<double>& gaps = rep.get_series("lq_gap");
  c.require(sweep.size() == 4 && sweep.front() == 8.0 && sweep.back() == 64.0,
            "unexpected doubling sweep");
  for (std::size_t i = 0; i < sweep.size() && i < gaps.size(); ++i) {
    const double bound = 1.0 / (6.0 * std::sqrt(3.0) * std::sqrt(sweep[i]));
    c.require(gaps[i] >= bound - 1e-4,
              "n=" + num(sweep[i]) + " gap " + num(gaps[i]) + " below " + num(bound));
  }
  const double slope = rep.get_scalar("loglog_slope");
  c.require(std::abs(slope + 0.5) <= 0.1, "log-log slope " + num(slope) + " not near -1/2");
  c.note("slope " + num(slope) + ", gaps hold for n in {8,16,32,64}");
}

// ---------------------------------------------------------------- 5
void criterion5(Checker& c) {
  const InequalityKind kinds[] = {InequalityKind::Weyl, InequalityKind::Loewner,
                                  InequalityKind::HoffmanWielandt,
                                  InequalityKind::SingularValue};
  double worstSlack = 1e300;
  for (std::size_t ki = 0; ki < 4; ++ki) {
    for (std::size_t d : {2u, 4u, 8u}) {
      const std::uint64_t seed = 500 + 10 * ki + d;
      const ExperimentReport rep = fuzz_inequalities(seed, 10000, d, kinds[ki]);
      const double slack = rep.get_scalar("worst_slack");
      worstSlack = std::min(worstSlack, slack);
      c.require(slack >= -1e-8, std::string(inequality_name(kinds[ki])) + " d=" +
                                    num(static_cast<double>(d)) + " slack " + num(slack));
    }
  }
  const ExperimentReport bdm = fuzz_inequalities(911, 10000, 4, InequalityKind::BDM);
  const double ratio = bdm.get_scalar("max_ratio");
  c.require(ratio <= 3.0, "BDM ratio " + num(ratio) + " exceeds 3");
  c.note("worst slack " + num(worstSlack) + ", BDM max ratio " + num(ratio));
}

// ---------------------------------------------------------------- 6
void criterion6(Checker& c) {
  double worst = 0.0;
  for (std::size_t d = 2; d <= 6; ++d) {
    rng::Gaussian g(rng::stream(600, d));
    for (std::size_t t = 0; t < 1000; ++t) {
      const UnorderedSpectrum x = random_tuple(g, d);
      const UnorderedSpectrum y = random_tuple(g, d);
      const double e2 = std::abs(d2(x, y, 8) - d2(x, y, 0));
      const double ei = std::abs(d_inf(x, y, 8) - d_inf(x, y, 0));
      worst = std::max({worst, e2, ei});
    }
  }
  c.require(worst <= 1e-12, "assignment vs brute force deviates by " + num(worst));
  c.note("max assignment/brute deviation " + num(worst));
}

// ---------------------------------------------------------------- 7
void criterion7(Checker& c) {
  const std::size_t dims[] = {2, 3, 4, 5, 6, 8, 10, 12, 16, 20, 24, 28, 32};
  const std::size_t nDims = sizeof(dims) / sizeof(dims[0]);
  const double delta = 2e-3;  // lattice pitch: distinct values are >= delta apart
  double worstResidual = 0.0, worstRecovery = 0.0;

  for (int hermitian = 1; hermitian >= 0; --hermitian) {
    for (std::size_t t = 0; t < 1000; ++t) {
      const std::size_t d = dims[t % nDims];
      rng::Gaussian g(rng::stream(hermitian ? 700 : 701, t));
      std::vector<cplx> planted(d);
      for (auto& z : planted)
        z = hermitian ? cplx(snap(2.0 * g(), delta), 0.0)
                      : cplx(snap(2.0 * g(), delta), snap(2.0 * g(), delta));
      const ComplexMatrix U = rng::haar_unitary(g, d);
      const ComplexMatrix A = U * ComplexMatrix::diagonal(planted) * U.adjoint();
      const EigenDecomposition dec = hermitian ? eig_hermitian(A) : eig_normal(A);
      const double rel = dec.residual / frobenius_norm(A);
      worstResidual = std::max(worstResidual, rel);
      const double rec = d2(UnorderedSpectrum{planted}, UnorderedSpectrum{dec.spectrum}, 0);
      worstRecovery = std::max(worstRecovery, rec);
      if (rel > 1e-10 || rec > 1e-9) {
        c.require(false, std::string(hermitian ? "hermitian" : "normal") + " trial " +
                             num(static_cast<double>(t)) + " d=" +
                             num(static_cast<double>(d)) + " residual " + num(rel) +
                             " recovery " + num(rec));
        return;
      }
    }
  }
  c.note("worst relative residual " + num(worstResidual) + ", worst recovery d2 " +
         num(worstRecovery));
}

// ---------------------------------------------------------------- 8
void criterion8(Checker& c) {
  const AlmgrenEmbedding E = make_embedding(3);
  c.require(E.directions() == 19, "default direction count is not 2d^2+1");
  rng::Gaussian g(rng::stream(800, 0));

  double worstLip = 0.0;
  for (std::size_t t = 0; t < 10000; ++t) {
    const UnorderedSpectrum x = random_tuple(g, 3);
    const UnorderedSpectrum y = random_tuple(g, 3);
    const double dist = d2(x, y, 8);
    if (dist < 1e-12) continue;
    const std::vector<double> ex = embed(E, x);
    const std::vector<double> ey = embed(E, y);
    double s = 0.0;
    for (std::size_t i = 0; i < ex.size(); ++i) s += (ex[i] - ey[i]) * (ex[i] - ey[i]);
    worstLip = std::max(worstLip, std::sqrt(s) / dist);
  }
  c.require(worstLip <= 1.0 + 1e-9, "Lipschitz ratio " + num(worstLip) + " above 1");

  bool permOk = true;
  for (std::size_t t = 0; t < 100 && permOk; ++t) {
    UnorderedSpectrum x = random_tuple(g, 3);
    const std::vector<double> base = embed(E, x);
    for (int r = 0; r < 2; ++r) {
      std::rotate(x.z.begin(), x.z.begin() + 1, x.z.end());
      if (embed(E, x) != base) permOk = false;
    }
  }
  c.require(permOk, "embedding is not exactly permutation invariant");

  double worstReal = 0.0;
  for (std::size_t t = 0; t < 10000; ++t) {
    const UnorderedSpectrum x = random_tuple(g, 3, true);
    const UnorderedSpectrum y = random_tuple(g, 3, true);
    const std::vector<double> ux = up_map(x);
    const std::vector<double> uy = up_map(y);
    double s = 0.0;
    for (std::size_t i = 0; i < 3; ++i) s += (ux[i] - uy[i]) * (ux[i] - uy[i]);
    worstReal = std::max(worstReal, std::abs(std::sqrt(s) - d2(x, y, 8)));
  }
  c.require(worstReal <= 1e-12, "real tuples: up map deviates from d2 by " + num(worstReal));
  c.note("Lipschitz " + num(worstLip) + ", real-tuple deviation " + num(worstReal));
}

// ---------------------------------------------------------------- 9
void criterion9(Checker& c) {
  double worstOff = 0.0, worstSpec = 0.0, worstMargin = 1e300;
  for (int hermitian = 1; hermitian >= 0; --hermitian) {
    const std::size_t dMax = hermitian ? 16 : 12;
    for (std::size_t t = 0; t < 500; ++t) {
      const std::size_t d = 4 + (t % (dMax - 3));
      rng::Gaussian g(rng::stream(hermitian ? 900 : 901, t));
      const std::size_t d1 = 2, d2n = d - d1;
      const double scale = 0.5 + std::abs(g());
      // Balanced lever arms: the small cluster sits far, the large one
      // near, so gap / ||A||_F = sqrt(d / (d1 d2n)) >= sqrt(16/28) > 0.75.
      const double a = static_cast<double>(d2n) * scale;  // d1 entries here
      const double b = static_cast<double>(d1) * scale;   // d2n entries here
      cplx phase(1.0, 0.0);
      if (!hermitian) {
        const cplx w(g(), g());
        phase = w / std::abs(w);
      }
      // Two collinear clusters through the origin; jitter stays below one
      // percent of the gap.
      std::vector<cplx> planted(d);
      for (std::size_t i = 0; i < d; ++i) {
        const double center = i < d1 ? a : -b;
        const double jitter = 0.002 * scale * g();
        planted[i] = (center + jitter) * phase;
      }
      const ComplexMatrix U = rng::haar_unitary(g, d);
      const ComplexMatrix A = U * ComplexMatrix::diagonal(planted) * U.adjoint();
      const double nf = frobenius_norm(A);

      const EigenDecomposition dec = hermitian ? eig_hermitian(A) : eig_normal(A);
      const SpectralPartition P = partition_by_gap(
          dec.spectrum,
          hermitian ? PartitionStrategy::Hermitian : PartitionStrategy::Normal);
      worstMargin = std::min(worstMargin, P.gap / nf);
      if (P.gap < 0.5 * nf) {
        c.require(false, "planted gap " + num(P.gap / nf) + " below half the norm");
        return;
      }
      const BlockDiagonalization bd = block_diagonalize(A, P);
      worstOff = std::max(worstOff, bd.offDiagResidual / nf);
      if (bd.offDiagResidual > 1e-9 * nf) {
        c.require(false, "off-diagonal residual " + num(bd.offDiagResidual / nf));
        return;
      }

      const std::vector<cplx> specB = normal_spectrum(bd.blockB);
      const std::vector<cplx> specC = normal_spectrum(bd.blockC);
      if (hermitian) {
        double maxB = -1e300, minC = 1e300;
        for (const cplx& z : specB) maxB = std::max(maxB, z.real());
        for (const cplx& z : specC) minC = std::min(minC, z.real());
        c.require(maxB < minC, "lower cluster does not sit strictly below the upper");
      }
      std::vector<cplx> unioned = specB;
      unioned.insert(unioned.end(), specC.begin(), specC.end());
      const double rec =
          d2(UnorderedSpectrum{unioned}, UnorderedSpectrum{planted}, 0);
      worstSpec = std::max(worstSpec, rec / static_cast<double>(d));
      if (rec > 1e-9 * static_cast<double>(d)) {
        c.require(false, "block spectra miss the planted spectrum by " + num(rec));
        return;
      }
    }
  }
  c.note("worst off-diag " + num(worstOff) + "||A||, worst spectrum gap " + num(worstSpec) +
         "d, min cluster margin " + num(worstMargin));
}

// ---------------------------------------------------------------- 10
void criterion10(Checker& c) {
  const struct {
    ConvergenceStudy study;
    const char* key;
  } table[] = {{ConvergenceStudy::OrderedW12, "w1q_top_branch"},
               {ConvergenceStudy::UnorderedRho, "rho_full_flow"},
               {ConvergenceStudy::MetricSpeed, "speed_gap_top_branch"},
               {ConvergenceStudy::QEnergy, "energy_gap_full_flow"}};
  double worstFinal = 0.0;
  for (const auto& row : table) {
    const ExperimentReport rep = run_convergence(row.study);
    const std::vector<double>& prim = rep.get_series(row.key);
    c.require(strictly_decreasing(window3_smoothed(prim)),
              std::string(study_name(row.study)) + " smoothed trend is not decreasing");
    worstFinal = std::max(worstFinal, prim.back());
    c.require(prim.back() <= 0.05, std::string(study_name(row.study)) + " final value " +
                                       num(prim.back()) + " above 0.05");
  }
  const ExperimentReport rep = run_convergence(ConvergenceStudy::PointwiseFraction);
  const std::vector<double>& frac = rep.get_series("fraction");
  const std::vector<double>& sup = rep.get_series("sup_gap");
  c.require(strictly_decreasing(window3_smoothed(frac)),
            "pointwise fraction smoothed trend is not decreasing");
  c.require(frac.back() < 0.02, "final fraction " + num(frac.back()) + " not below 2%");
  c.require(sup.back() >= 0.25, "final sup gap " + num(sup.back()) + " collapsed");
  c.note("worst gap final " + num(worstFinal) + ", fraction " + num(frac.back()) +
         ", sup gap " + num(sup.back()));
}

// ---------------------------------------------------------------- 11
void criterion11(Checker& c) {
  const ExperimentReport rep = run_convergence(ConvergenceStudy::ConditionNumber);
  const std::vector<double>& gaps = rep.get_series("w1q_gap");
  c.require(strictly_decreasing(window3_smoothed(gaps)),
            "condition number trend is not decreasing");
  c.require(gaps.back() <= 1e-2, "final gap " + num(gaps.back()) + " above 1e-2");

  // The singular guard: a family crossing a zero singular value must be
  // rejected with the mathematical-failure exit code.
  const std::filesystem::path tmp =
      std::filesystem::temp_directory_path() / "eigenflow_acceptance_11";
  std::filesystem::remove_all(tmp);
  const Grid g({0.0}, {1.0}, {9});
  io::write_family(tmp / "singular", sample_interval<ComplexMatrix>(g, [](double x) {
                     return ComplexMatrix::diagonal({cplx(x - 0.5, 0), cplx(1, 0)});
                   }));
  cli::FlowConfig cfg;
  cfg.input = (tmp / "singular").string();
  cfg.map = "kappa";
  cfg.outDir = (tmp / "out").string();
  std::ostringstream log;
  const int rc = cli::cmd_flow(cfg, log);
  c.require(rc == cli::kExitBound,
            "singular family exited with " + num(static_cast<double>(rc)) + " instead of 1");
  std::filesystem::remove_all(tmp);
  c.note("final gap " + num(gaps.back()) + ", singular guard exits 1");
}

// ---------------------------------------------------------------- 12
void criterion12(Checker& c) {
  const ExperimentReport rep = surface_area_trend(4001, 256);
  const std::vector<double>& dev = rep.get_series("deviation");
  c.require(strictly_decreasing(dev), "area deviation is not strictly decreasing");
  c.require(dev.back() <= 5e-3, "final deviation " + num(dev.back()) + " above 5e-3");
  c.note("final area " + num(rep.get_scalar("final_area")) + ", deviation " +
         num(dev.back()));
}

struct Criterion {
  int id;
  const char* summary;
  double budgetSeconds;  // 0 = no runtime budget
  void (*run)(Checker&);
};

const Criterion kCriteria[] = {
    {1, "kink family C01 bound and derivative witness", 2.0, criterion1},
    {2, "sawtooth family Lq gaps and matrix distance", 2.0, criterion2},
    {3, "Holder family seminorm bound", 5.0, criterion3},
    {4, "self-distance decay rate", 2.0, criterion4},
    {5, "perturbation inequality fuzzing", 60.0, criterion5},
    {6, "assignment metrics match brute force", 10.0, criterion6},
    {7, "spectrum recovery on planted ensembles", 60.0, criterion7},
    {8, "embedding contraction and invariance", 0.0, criterion8},
    {9, "two-cluster block diagonalization", 0.0, criterion9},
    {10, "five convergence trends", 0.0, criterion10},
    {11, "condition number flow and singular guard", 0.0, criterion11},
    {12, "limit surface area", 0.0, criterion12},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
  }

  int failures = 0;
  for (const Criterion& cr : kCriteria) {
    if (only != 0 && cr.id != only) continue;
    Checker c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (cr.budgetSeconds > 0.0 && secs >= cr.budgetSeconds)
      c.require(false, "runtime " + num(secs) + "s exceeds " + num(cr.budgetSeconds) + "s");
    const bool pass = c.failures.empty();
    failures += pass ? 0 : 1;
    std::printf("CRITERION %2d %s (%.2fs) %s\n", cr.id, pass ? "PASS" : "FAIL", secs,
                pass ? (c.detail.empty() ? cr.summary : c.detail.c_str())
                     : c.failures.c_str());
    std::fflush(stdout);
  }
  return failures;
}
