#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "bsbm/suff_stats.hpp"

namespace bsbm {

/// Symmetric K x K matrix M of the meta-group problem max_nu nu^T M nu.
struct QuadraticForm {
  Eigen::MatrixXd M;

  int K() const { return static_cast<int>(M.rows()); }
  double objective(const std::vector<int>& nu) const;
};

/// M = sign(T - S) o U with U = T log(2T/(T+S)) + S log(2S/(T+S)),
/// symmetrized by averaging.
QuadraticForm build_quadratic(const SuffStats& stats);

inline constexpr int kDefaultExactK = 20;

/// Exhaustive search over the 2^(K-1) vectors with nu_0 = +1. Ties go to
/// the lexicographically smallest nu (-1 < +1).
std::vector<int> solve_exact(const QuadraticForm& q, int max_k = kDefaultExactK);

struct RelaxedOptions {
  int rank = 0;  // 0 selects min(K, ceil(sqrt(2K)) + 1)
  int rounds = 50;
  int max_iterations = 2000;
  double gradient_tolerance = 1e-7;
};

/// Low-rank (Burer-Monteiro) relaxation solved by projected gradient ascent,
/// then random-hyperplane rounding. The sign pattern of M's leading
/// eigenvector is an extra candidate. Returns the best candidate with nu_0 = +1.
std::vector<int> solve_relaxed(const QuadraticForm& q, std::uint64_t seed,
                               const RelaxedOptions& opts = {});

enum class MaxcutMode { kAuto, kExact, kRelaxed };

struct MaxcutOptions {
  MaxcutMode mode = MaxcutMode::kAuto;
  int exact_max_k = kDefaultExactK;
  int rounds = 50;
  std::uint64_t seed = 0;
};

/// Dispatches on mode; kAuto is exact when K <= exact_max_k.
std::vector<int> solve_maxcut(const QuadraticForm& q, const MaxcutOptions& opts);

}  // namespace bsbm
