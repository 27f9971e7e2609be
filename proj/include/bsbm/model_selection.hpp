#pragma once

#include <cstdint>
#include <vector>

#include "bsbm/fitter.hpp"
#include "bsbm/signed_graph.hpp"

namespace bsbm {

struct SelectKResult {
  int chosen = 0;
  std::vector<int> ks;
  std::vector<double> scores;  // mean held-out log-probability per K
};

/// V-fold holdout over node pairs. Each fold's pairs are hidden from the
/// fit; the score is the mean log-probability of the held-out outcomes
/// {+1, -1, 0} under the fitted (P, Q) and hard labels. Ties go to the
/// smaller K. `base` supplies every fit setting except K.
SelectKResult select_k(const SignedGraph& g, const std::vector<int>& k_grid, int folds,
                       std::uint64_t seed, FitConfig base = [] {
                         FitConfig c;
                         c.restarts = 1;
                         return c;
                       }());

}  // namespace bsbm
