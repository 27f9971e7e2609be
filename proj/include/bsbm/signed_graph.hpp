#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace bsbm {

/// Thrown for malformed input data (edge lists, label files, parameter files).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Neighbor {
  int node;
  int sign;  // -1 or +1
};

struct SignedEdge {
  int u;
  int v;
  int sign;
  friend bool operator==(const SignedEdge&, const SignedEdge&) = default;
};

/// Undirected signed graph with entries in {-1, 0, +1}.
///
/// Immutable once built. Each node keeps its neighbors sorted by id, so a
/// pair lookup is a binary search and a row scan is O(deg). Self-loops are
/// never stored and read as 0.
class SignedGraph {
 public:
  SignedGraph() = default;

  /// Builds from an edge list. Pairs may appear in either orientation;
  /// exact duplicates collapse, conflicting signs throw DataError.
  SignedGraph(int n, std::span<const SignedEdge> edges);

  int num_nodes() const { return static_cast<int>(adj_.size()); }
  std::size_t num_edges() const { return edges_.size(); }

  /// Sign of pair (i, j): -1, 0 or +1.
  int sign(int i, int j) const;

  std::span<const Neighbor> neighbors(int i) const { return adj_[static_cast<std::size_t>(i)]; }
  int degree(int i) const { return static_cast<int>(adj_[static_cast<std::size_t>(i)].size()); }

  /// Canonical edge list: u < v, sorted by (u, v).
  const std::vector<SignedEdge>& edges() const { return edges_; }

  double average_degree() const;

 private:
  std::vector<std::vector<Neighbor>> adj_;
  std::vector<SignedEdge> edges_;
};

/// Hard community labels, 0-based values in [0, K).
struct LabelVector {
  int K = 0;
  std::vector<int> z;

  LabelVector() = default;
  LabelVector(int k, std::vector<int> labels);

  int size() const { return static_cast<int>(z.size()); }
  int operator[](int i) const { return z[static_cast<std::size_t>(i)]; }

  /// Nodes per label.
  std::vector<int> counts() const;
};

/// BSBM parameters (pi, P, eta, nu). The sign matrix Q is always derived.
struct BsbmParams {
  Eigen::VectorXd pi;
  Eigen::MatrixXd P;
  Eigen::MatrixXd eta;
  std::vector<int> nu;

  int K() const { return static_cast<int>(pi.size()); }

  /// Q = (1 + eta o nu nu^T) / 2.
  Eigen::MatrixXd Q() const;

  /// Throws std::invalid_argument describing the first violated invariant.
  void validate() const;
};

/// Parameters with a two-level block structure: P_in on the diagonal,
/// P_bt elsewhere; constant eta.
BsbmParams planted_params(std::span<const double> pi, double p_in, double p_bt, double eta_in,
                          double eta_bt, std::vector<int> nu);

/// Meta-group vector nu_l = (-1)^l for 0-based l, i.e. (+1, -1, +1, ...).
std::vector<int> alternating_nu(int K);

// ---- edge list I/O ----

/// Reads "u v s" lines. '#' lines are comments; an optional "n=<int>" header
/// fixes the node count, otherwise n = 1 + max id.
SignedGraph load_edge_list(std::istream& in);
SignedGraph load_edge_list_file(const std::string& path);

/// Writes the "n=<int>" header followed by the canonical edge list.
void save_edge_list(std::ostream& out, const SignedGraph& g);
void save_edge_list_file(const std::string& path, const SignedGraph& g);

/// One 0-based integer per line. K is 1 + max label unless given.
LabelVector load_labels(std::istream& in, int K = 0);
LabelVector load_labels_file(const std::string& path, int K = 0);
void save_labels(std::ostream& out, const LabelVector& labels);
void save_labels_file(const std::string& path, const LabelVector& labels);

// ---- sampling and balance ----

struct SampledNetwork {
  SignedGraph graph;
  LabelVector labels;
};

/// Draws z_i ~ Cat(pi) then every pair independently. Deterministic in seed.
SampledNetwork sample_bsbm(const BsbmParams& params, int n, std::uint64_t seed);

/// E(A_ij A_jk A_ki | all three edges present), by exact enumeration of the
/// K^3 label triples. Requires K <= 64.
double population_balance(const BsbmParams& params);

struct TriangleCounts {
  std::int64_t balanced = 0;
  std::int64_t unbalanced = 0;
};

/// Classifies every closed triangle by the sign of its edge product.
TriangleCounts empirical_balance(const SignedGraph& g);

enum class BinarizeMode { kConnectivity, kMerge };

/// kConnectivity: |A|. kMerge: negative edges dropped, positives kept.
SignedGraph binarize(const SignedGraph& g, BinarizeMode mode);

/// Returns the graph with node i renamed to perm[i].
SignedGraph permute_nodes(const SignedGraph& g, std::span<const int> perm);

}  // namespace bsbm
