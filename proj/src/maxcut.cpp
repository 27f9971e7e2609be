#include "bsbm/maxcut.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace bsbm {

namespace {

// x log(2x / total) with 0 log 0 = 0.
double xlog2x(double x, double total) {
  if (x <= 0.0) return 0.0;
  return x * std::log(2.0 * x / total);
}

double sign_of(double x) { return static_cast<double>((x > 0.0) - (x < 0.0)); }

void normalize_first(std::vector<int>& nu) {
  if (!nu.empty() && nu[0] < 0) {
    for (int& v : nu) v = -v;
  }
}

// Keeps `cand` if it beats `best` strictly, or ties and is lexicographically smaller.
void consider(const QuadraticForm& q, std::vector<int> cand, std::vector<int>& best,
              double& best_obj) {
  normalize_first(cand);
  const double obj = q.objective(cand);
  if (best.empty() || obj > best_obj ||
      (obj == best_obj && std::lexicographical_compare(cand.begin(), cand.end(), best.begin(), best.end()))) {
    best = std::move(cand);
    best_obj = obj;
  }
}

void normalize_rows(Eigen::MatrixXd& v) {
  for (Eigen::Index a = 0; a < v.rows(); ++a) {
    const double nrm = v.row(a).norm();
    if (nrm > 0.0) {
      v.row(a) /= nrm;
    } else {
      v.row(a).setZero();
      v(a, 0) = 1.0;
    }
  }
}

}  // namespace

double QuadraticForm::objective(const std::vector<int>& nu) const {
  const int k = K();
  double total = 0.0;
  for (int a = 0; a < k; ++a) {
    double row = 0.0;
    for (int b = 0; b < k; ++b) row += M(a, b) * nu[static_cast<std::size_t>(b)];
    total += nu[static_cast<std::size_t>(a)] * row;
  }
  return total;
}

QuadraticForm build_quadratic(const SuffStats& stats) {
  const int k = stats.K();
  Eigen::MatrixXd m(k, k);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      const double t = stats.T(a, b);
      const double s = stats.S(a, b);
      const double total = t + s;
      const double u = total > 0.0 ? std::max(0.0, xlog2x(t, total) + xlog2x(s, total)) : 0.0;
      m(a, b) = sign_of(t - s) * u;
    }
  }
  return {0.5 * (m + m.transpose())};
}

std::vector<int> solve_exact(const QuadraticForm& q, int max_k) {
  const int k = q.K();
  if (k < 1) throw std::invalid_argument("solve_exact: empty quadratic form");
  if (k > max_k) {
    throw std::invalid_argument("solve_exact: K=" + std::to_string(k) + " exceeds exact limit " +
                                std::to_string(max_k));
  }
  if (k > 30) throw std::invalid_argument("solve_exact: K too large for enumeration");
  // Counting mask upward with nu_1 as the most significant bit visits the
  // candidates in lexicographic order, so a strict '>' keeps the smallest tie.
  const std::uint64_t count = std::uint64_t{1} << (k - 1);
  std::vector<int> nu(static_cast<std::size_t>(k), 1);
  std::vector<int> best;
  double best_obj = 0.0;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    for (int a = 1; a < k; ++a) {
      const bool bit = (mask >> (k - 1 - a)) & 1U;
      nu[static_cast<std::size_t>(a)] = bit ? 1 : -1;
    }
    const double obj = q.objective(nu);
    if (best.empty() || obj > best_obj) {
      best = nu;
      best_obj = obj;
    }
  }
  return best;
}

std::vector<int> solve_relaxed(const QuadraticForm& q, std::uint64_t seed,
                               const RelaxedOptions& opts) {
  const int k = q.K();
  if (k < 1) throw std::invalid_argument("solve_relaxed: empty quadratic form");
  if (!q.M.allFinite()) throw std::invalid_argument("solve_relaxed: non-finite matrix");
  if (opts.rounds < 1) throw std::invalid_argument("solve_relaxed: rounds must be >= 1");
  if (k == 1) return {1};
  const int rank = opts.rank > 0
                       ? opts.rank
                       : std::min(k, static_cast<int>(std::ceil(std::sqrt(2.0 * k))) + 1);
  if (rank < 2) throw std::invalid_argument("solve_relaxed: rank must be >= 2");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd v(k, rank);
  for (int a = 0; a < k; ++a) {
    for (int c = 0; c < rank; ++c) v(a, c) = gauss(rng);
  }
  normalize_rows(v);

  const double mnorm = std::max(q.M.norm(), 1e-300);
  auto value = [&q](const Eigen::MatrixXd& x) { return (x.transpose() * q.M * x).trace(); };
  double f = value(v);
  double step = 1.0 / mnorm;
  for (int it = 0; it < opts.max_iterations; ++it) {
    const Eigen::MatrixXd g = 2.0 * q.M * v;
    Eigen::MatrixXd rg = g;
    for (int a = 0; a < k; ++a) rg.row(a) -= g.row(a).dot(v.row(a)) * v.row(a);
    if (rg.norm() <= opts.gradient_tolerance * mnorm) break;
    bool accepted = false;
    for (int h = 0; h < 60; ++h) {
      Eigen::MatrixXd cand = v + step * rg;
      normalize_rows(cand);
      const double fc = value(cand);
      if (fc >= f) {
        v = std::move(cand);
        f = fc;
        accepted = true;
        step *= 1.5;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }

  std::vector<int> best;
  double best_obj = 0.0;
  for (int r = 0; r < opts.rounds; ++r) {
    std::mt19937_64 rr(seed + 1 + static_cast<std::uint64_t>(r));
    Eigen::VectorXd h(rank);
    for (int c = 0; c < rank; ++c) h(c) = gauss(rr);
    std::vector<int> cand(static_cast<std::size_t>(k));
    for (int a = 0; a < k; ++a) cand[static_cast<std::size_t>(a)] = v.row(a).dot(h) >= 0.0 ? 1 : -1;
    consider(q, std::move(cand), best, best_obj);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q.M);
  const Eigen::VectorXd lead = es.eigenvectors().col(k - 1);
  std::vector<int> cand(static_cast<std::size_t>(k));
  for (int a = 0; a < k; ++a) cand[static_cast<std::size_t>(a)] = lead(a) >= 0.0 ? 1 : -1;
  consider(q, std::move(cand), best, best_obj);
  return best;
}

std::vector<int> solve_maxcut(const QuadraticForm& q, const MaxcutOptions& opts) {
  const bool exact = opts.mode == MaxcutMode::kExact ||
                     (opts.mode == MaxcutMode::kAuto && q.K() <= opts.exact_max_k);
  if (exact) return solve_exact(q, std::max(opts.exact_max_k, q.K()));
  RelaxedOptions ro;
  ro.rounds = opts.rounds;
  return solve_relaxed(q, opts.seed, ro);
}

}  // namespace bsbm
