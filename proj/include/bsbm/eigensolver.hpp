#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>

#include <Eigen/Dense>

namespace bsbm {

/// y = A x for a symmetric operator A of dimension n.
using SymmetricOperator = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& y)>;

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

struct LanczosOptions {
  int max_iterations = 500;
  double tolerance = 1e-8;  // on ||A v - theta v|| relative to max(1, |theta_max|)
};

struct EigenPairs {
  Eigen::VectorXd values;   // ordered by |value| descending
  Eigen::MatrixXd vectors;  // n x k, orthonormal columns
  double max_residual = 0.0;
  int iterations = 0;
};

/// Leading k eigenpairs (largest magnitude) of a symmetric operator via
/// Lanczos with full reorthogonalization. An invariant subspace found before
/// convergence is extended with a fresh random direction, so repeated
/// eigenvalues are recovered. Start vectors come from `seed`.
///
/// Throws ConvergenceError if the residual tolerance is not met within
/// `max_iterations` Lanczos steps.
EigenPairs lanczos_top_k(const SymmetricOperator& op, int n, int k, std::uint64_t seed,
                         const LanczosOptions& opts = {});

}  // namespace bsbm
