#include "bsbm/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "bsbm/em.hpp"

namespace bsbm {

namespace {

struct Fold {
  PairMask mask;
  std::vector<std::pair<int, int>> pairs;  // i < j
  SignedGraph train;
};

std::vector<Fold> make_folds(const SignedGraph& g, int folds, std::uint64_t seed) {
  const int n = g.num_nodes();
  std::vector<Fold> out(static_cast<std::size_t>(folds));
  for (auto& f : out) f.mask = PairMask(n);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, folds - 1);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Fold& f = out[static_cast<std::size_t>(pick(rng))];
      f.mask.add(i, j);
      f.pairs.emplace_back(i, j);
    }
  }
  for (int v = 0; v < folds; ++v) {
    Fold& f = out[static_cast<std::size_t>(v)];
    if (f.pairs.empty()) throw std::invalid_argument("select_k: fold " + std::to_string(v) + " holds no pairs");
    f.mask.finalize();
    std::vector<SignedEdge> kept;
    for (const auto& e : g.edges()) {
      if (!f.mask.contains(e.u, e.v)) kept.push_back(e);
    }
    f.train = SignedGraph(n, kept);
  }
  return out;
}

double clamp01(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }

}  // namespace

SelectKResult select_k(const SignedGraph& g, const std::vector<int>& k_grid, int folds,
                       std::uint64_t seed, FitConfig base) {
  if (folds < 2) throw std::invalid_argument("select_k: folds must be >= 2");
  if (k_grid.empty()) throw std::invalid_argument("select_k: empty K grid");
  SelectKResult res;
  res.ks = k_grid;
  std::sort(res.ks.begin(), res.ks.end());
  res.ks.erase(std::unique(res.ks.begin(), res.ks.end()), res.ks.end());
  if (res.ks.size() == 1) {
    res.chosen = res.ks.front();
    res.scores.assign(1, 0.0);
    return res;
  }
  const std::vector<Fold> fold_data = make_folds(g, folds, seed);

  for (int k : res.ks) {
    double total = 0.0;
    std::size_t count = 0;
    for (const auto& f : fold_data) {
      FitConfig cfg = base;
      cfg.K = k;
      cfg.seed = seed;
      const FitResult fr = fit(f.train, cfg, &f.mask);
      const Eigen::MatrixXd q = fr.params.Q();
      for (const auto& [i, j] : f.pairs) {
        const int a = fr.labels_hat[i];
        const int b = fr.labels_hat[j];
        const double p = fr.params.P(a, b);
        const int s = g.sign(i, j);
        double prob = 0.0;
        if (s == 0) {
          prob = 1.0 - p;
        } else if (s > 0) {
          prob = p * q(a, b);
        } else {
          prob = p * (1.0 - q(a, b));
        }
        total += std::log(clamp01(prob));
        ++count;
      }
    }
    res.scores.push_back(total / static_cast<double>(count));
  }
  std::size_t best = 0;
  for (std::size_t v = 1; v < res.scores.size(); ++v) {
    if (res.scores[v] > res.scores[best]) best = v;
  }
  res.chosen = res.ks[best];
  return res;
}

}  // namespace bsbm
