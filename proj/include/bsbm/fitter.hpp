#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bsbm/em.hpp"
#include "bsbm/maxcut.hpp"
#include "bsbm/signed_graph.hpp"
#include "bsbm/spectral.hpp"

namespace bsbm {

struct FitConfig {
  int K = 2;
  std::uint64_t seed = 0;
  int restarts = 3;
  double inner_tol = 1e-6;  // relative change of the log-pseudo-likelihood
  int inner_max = 100;
  double outer_tol = 1e-6;
  int outer_max = 50;
  double tau_reg = kDefaultTauReg;
  MaxcutMode maxcut_mode = MaxcutMode::kAuto;
  int maxcut_rounds = 50;
  bool sign_model = true;  // false: Q frozen at 1/2, the binary-SBM reduction

  void validate() const;
};

struct FitWarnings {
  long long clamped_cells = 0;   // P/Q cells clamped across all log-table builds
  long long fallback_rows = 0;   // E-step rows reset to pi
  std::vector<int> empty_classes;
};

struct FitResult {
  LabelVector labels_hat;        // argmax of the final posterior
  LabelVector column_labels;     // final e
  Posterior tau;
  BsbmParams params;
  std::vector<double> lpl_trace; // L_PL(Omega^(s), e^(s)), s = 0, 1, ...
  std::vector<int> inner_iters;  // EM iterations per outer step
  bool converged = false;
  int restart = 0;               // index of the winning restart
  FitWarnings warnings;
};

/// Profile-pseudo-likelihood fit. Restart r (seed + r) runs from spectral
/// clustering with perturbation on |A| and, for the signed model, also from
/// spectral clustering of the signed adjacency. The run with the largest
/// final L_PL wins; ties go to the earliest run.
FitResult fit(const SignedGraph& g, const FitConfig& config, const PairMask* mask = nullptr);

/// A single run from given column labels, skipping spectral initialization.
FitResult fit_from_labels(const SignedGraph& g, const LabelVector& e0, const FitConfig& config,
                          const PairMask* mask = nullptr);

/// Signal statistics for the planted K-block BSBM with within/between edge
/// intensities a, b (times 1/m) and sign strengths c, d.
struct ConsistencyDiagnostics {
  double a = 0, b = 0, c = 0, d = 0;
  int n = 0;
  double logn = 0;
  double S1 = 0, S2 = 0, S3 = 0, S4 = 0;
  double S5 = 0;          // ac - bd, the K-community condition
  double S5_two = 0;      // ac + bd, the two-community condition
  double ratio[4] = {0, 0, 0, 0};  // S1..S4 / log n
  double ratio5 = 0;
  double ratio5_two = 0;
};

ConsistencyDiagnostics consistency_diagnostics(double a, double b, double c, double d, int n);

}  // namespace bsbm
