#include "bsbm/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace bsbm {

namespace {

// Two passes of classical Gram-Schmidt against the first m basis columns.
void orthogonalize(const Eigen::MatrixXd& basis, int m, Eigen::VectorXd& w) {
  if (m == 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    const Eigen::VectorXd coef = basis.leftCols(m).transpose() * w;
    w.noalias() -= basis.leftCols(m) * coef;
  }
}

Eigen::VectorXd random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = g(rng);
  return v / v.norm();
}

std::vector<int> order_by_magnitude(const Eigen::VectorXd& theta) {
  std::vector<int> idx(static_cast<std::size_t>(theta.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    const double ma = std::abs(theta(a));
    const double mb = std::abs(theta(b));
    if (ma != mb) return ma > mb;
    return theta(a) > theta(b);
  });
  return idx;
}

}  // namespace

EigenPairs lanczos_top_k(const SymmetricOperator& op, int n, int k, std::uint64_t seed,
                         const LanczosOptions& opts) {
  if (k < 1 || k > n) {
    throw std::invalid_argument("lanczos_top_k: need 1 <= k <= n (k=" + std::to_string(k) +
                                ", n=" + std::to_string(n) + ")");
  }
  const int max_basis = std::min(n, std::max(opts.max_iterations, k));
  std::mt19937_64 rng(seed);

  Eigen::MatrixXd basis(n, max_basis);
  std::vector<double> alpha;
  std::vector<double> beta;  // beta[j] couples basis j and j+1
  alpha.reserve(static_cast<std::size_t>(max_basis));
  beta.reserve(static_cast<std::size_t>(max_basis));

  basis.col(0) = random_unit(n, rng);
  Eigen::VectorXd w(n);
  double op_scale = 0.0;

  EigenPairs out;
  int m = 0;
  int blocks = 0;  // completed Krylov blocks
  while (true) {
    const Eigen::VectorXd v = basis.col(m);
    op(v, w);
    const double a = v.dot(w);
    alpha.push_back(a);
    w -= a * v;
    if (m > 0) w -= beta.back() * basis.col(m - 1);
    orthogonalize(basis, m + 1, w);
    double b = w.norm();
    op_scale = std::max(op_scale, std::abs(a) + b);
    ++m;

    const bool full = (m == n);
    const bool breakdown = b <= 1e-12 * std::max(1.0, op_scale);
    if (full || breakdown) b = 0.0;

    if (m >= k || full) {
      Eigen::VectorXd diag(m);
      Eigen::VectorXd sub(std::max(m - 1, 0));
      for (int j = 0; j < m; ++j) {
        diag(j) = alpha[static_cast<std::size_t>(j)];
        if (j + 1 < m) sub(j) = beta[static_cast<std::size_t>(j)];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
      es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      const Eigen::VectorXd& theta = es.eigenvalues();
      const auto idx = order_by_magnitude(theta);
      const double scale = std::max(1.0, std::abs(theta(idx[0])));
      double worst = 0.0;
      for (int r = 0; r < k; ++r) {
        worst = std::max(worst, std::abs(b * es.eigenvectors()(m - 1, idx[static_cast<std::size_t>(r)])));
      }
      // Each Krylov block holds one copy of a repeated eigenvalue, so a
      // breakdown only terminates after k blocks.
      const bool done =
          full || (worst <= opts.tolerance * scale && (!breakdown || blocks + 1 >= k));
      if (done || m == max_basis) {
        out.values.resize(k);
        out.vectors.resize(n, k);
        for (int r = 0; r < k; ++r) {
          const int c = idx[static_cast<std::size_t>(r)];
          out.values(r) = theta(c);
          Eigen::VectorXd x = basis.leftCols(m) * es.eigenvectors().col(c);
          x /= x.norm();
          // Fix the sign so the largest-magnitude entry is positive.
          Eigen::Index arg = 0;
          x.cwiseAbs().maxCoeff(&arg);
          if (x(arg) < 0) x = -x;
          out.vectors.col(r) = x;
        }
        out.max_residual = worst / scale;
        out.iterations = m;
        if (!done) {
          throw ConvergenceError("lanczos_top_k: no convergence after " + std::to_string(m) +
                                     " iterations (relative residual " +
                                     std::to_string(out.max_residual) + ")",
                                 out.max_residual);
        }
        return out;
      }
    } else if (m == max_basis) {
      throw ConvergenceError("lanczos_top_k: basis exhausted", 1.0);
    }

    beta.push_back(b);
    if (b > 0.0) {
      basis.col(m) = w / b;
    } else {
      // Invariant subspace: restart in the orthogonal complement.
      Eigen::VectorXd fresh = random_unit(n, rng);
      orthogonalize(basis, m, fresh);
      const double fn = fresh.norm();
      if (fn <= 1e-10) {
        throw ConvergenceError("lanczos_top_k: could not extend Krylov basis", 1.0);
      }
      basis.col(m) = fresh / fn;
      ++blocks;
    }
  }
}

}  // namespace bsbm
