#include "bsbm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bsbm {

namespace {

double entropy(const std::map<int, double>& counts, double n) {
  double h = 0.0;
  for (const auto& [label, c] : counts) {
    const double p = c / n;
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

// Canonical form of a partition: labels renumbered by first appearance.
std::vector<int> canonical(std::span<const int> x) {
  std::map<int, int> seen;
  std::vector<int> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto [it, inserted] = seen.try_emplace(x[i], static_cast<int>(seen.size()));
    out[i] = it->second;
  }
  return out;
}

}  // namespace

double nmi(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw std::invalid_argument("nmi: label vectors differ in length");
  if (a.empty()) throw std::invalid_argument("nmi: empty label vectors");
  const double n = static_cast<double>(a.size());
  std::map<int, double> ca, cb;
  std::map<std::pair<int, int>, double> joint;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ca[a[i]] += 1.0;
    cb[b[i]] += 1.0;
    joint[{a[i], b[i]}] += 1.0;
  }
  const double ha = entropy(ca, n);
  const double hb = entropy(cb, n);
  if (ha <= 0.0 || hb <= 0.0) return canonical(a) == canonical(b) ? 1.0 : 0.0;
  double mi = 0.0;
  for (const auto& [key, c] : joint) {
    const double pij = c / n;
    mi += pij * std::log(pij / ((ca[key.first] / n) * (cb[key.second] / n)));
  }
  return std::clamp(mi / std::sqrt(ha * hb), 0.0, 1.0);
}

int agreement(const LabelVector& a, const LabelVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("agreement: length mismatch");
  int same = 0;
  for (int i = 0; i < a.size(); ++i) same += (a[i] == b[i]) ? 1 : 0;
  return same;
}

LabelVector align_labels(const LabelVector& est, const LabelVector& truth) {
  if (est.size() != truth.size()) throw std::invalid_argument("align_labels: length mismatch");
  const int k = std::max(est.K, truth.K);
  std::vector<std::vector<int>> conf(static_cast<std::size_t>(k), std::vector<int>(static_cast<std::size_t>(k), 0));
  for (int i = 0; i < est.size(); ++i) ++conf[static_cast<std::size_t>(est[i])][static_cast<std::size_t>(truth[i])];

  std::vector<int> map(static_cast<std::size_t>(k));
  std::iota(map.begin(), map.end(), 0);
  if (k <= 10) {
    std::vector<int> perm = map;
    long best = -1;
    do {
      long score = 0;
      for (int a = 0; a < k; ++a) score += conf[static_cast<std::size_t>(a)][static_cast<std::size_t>(perm[static_cast<std::size_t>(a)])];
      if (score > best) {
        best = score;
        map = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    std::vector<bool> used_est(static_cast<std::size_t>(k), false), used_truth(static_cast<std::size_t>(k), false);
    for (int step = 0; step < k; ++step) {
      int ba = -1, bt = -1, bc = -1;
      for (int a = 0; a < k; ++a) {
        if (used_est[static_cast<std::size_t>(a)]) continue;
        for (int t = 0; t < k; ++t) {
          if (used_truth[static_cast<std::size_t>(t)]) continue;
          if (conf[static_cast<std::size_t>(a)][static_cast<std::size_t>(t)] > bc) {
            bc = conf[static_cast<std::size_t>(a)][static_cast<std::size_t>(t)];
            ba = a;
            bt = t;
          }
        }
      }
      map[static_cast<std::size_t>(ba)] = bt;
      used_est[static_cast<std::size_t>(ba)] = true;
      used_truth[static_cast<std::size_t>(bt)] = true;
    }
  }
  std::vector<int> out(static_cast<std::size_t>(est.size()));
  for (int i = 0; i < est.size(); ++i) out[static_cast<std::size_t>(i)] = map[static_cast<std::size_t>(est[i])];
  return LabelVector(k, std::move(out));
}

}  // namespace bsbm
