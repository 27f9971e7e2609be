#pragma once

#include <cstdint>

#include "bsbm/fitter.hpp"
#include "bsbm/signed_graph.hpp"
#include "bsbm/spectral.hpp"

namespace bsbm {

/// Low-rank matrix completion baseline. Zeros of A are missing entries; the
/// completion alternates a rank-K eigen-truncation with re-imposing the
/// observed signs (soft-impute with hard refill). The final scaled factors
/// U |Lambda| are clustered with k-means.
Embedding mc_embedding(const SignedGraph& g, int K, int iters, std::uint64_t seed);
LabelVector fit_mc(const SignedGraph& g, int K, int iters = 30, std::uint64_t seed = 0);

/// Binary profile-pseudo-likelihood fit on |A| (merge = false) or on A with
/// negative edges merged into non-edges (merge = true). Runs the BSBM fitter
/// with Q frozen at 1/2.
FitResult fit_ppl_binary_full(const SignedGraph& g, const FitConfig& config, bool merge);
LabelVector fit_ppl_binary(const SignedGraph& g, const FitConfig& config, bool merge);

}  // namespace bsbm
