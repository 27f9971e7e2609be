#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "bsbm/eigensolver.hpp"
#include "bsbm/signed_graph.hpp"

namespace bsbm {

inline constexpr double kDefaultTauReg = 0.25;

/// Spectral coordinates: row i holds node i's embedding.
struct Embedding {
  Eigen::MatrixXd points;
  Eigen::VectorXd eigenvalues;  // empty for embeddings not produced by an eigensolver
};

/// Leading-magnitude eigenvectors of |A| + (tau_reg * dbar / n) J, applied
/// matrix-free. For an edgeless graph dbar is taken as 1 so the perturbation
/// stays nonzero.
Embedding regularized_spectral_embedding(const SignedGraph& g, int K, double tau_reg,
                                         std::uint64_t seed, const LanczosOptions& opts = {});

struct KMeansResult {
  LabelVector labels;
  double objective = 0.0;              // within-cluster sum of squares
  std::vector<double> trace;           // objective after each assignment step, best restart
};

/// Lloyd's algorithm with k-means++ seeding, best of `restarts` runs.
/// Ties in the best objective go to the lowest restart index.
KMeansResult kmeans(const Eigen::MatrixXd& points, int K, std::uint64_t seed, int restarts = 10);

/// Spectral clustering with perturbation on the connectivity graph |A|.
LabelVector scp_init(const SignedGraph& g, int K, double tau_reg, std::uint64_t seed);

/// K-means on the leading-magnitude eigenvectors of the signed adjacency A.
/// Picks up meta-group structure when connectivity carries no signal.
LabelVector signed_spectral_init(const SignedGraph& g, int K, std::uint64_t seed);

}  // namespace bsbm
