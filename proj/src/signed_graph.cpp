#include "bsbm/signed_graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace bsbm {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_int(const std::string& tok, long long& out) {
  const char* b = tok.data();
  const char* e = b + tok.size();
  if (b != e && *b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && p == e;
}

}  // namespace

SignedGraph::SignedGraph(int n, std::span<const SignedEdge> edges) {
  if (n < 0) throw std::invalid_argument("node count must be non-negative");
  adj_.resize(static_cast<std::size_t>(n));
  std::vector<SignedEdge> canon;
  canon.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
      throw DataError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                      ") out of range for n=" + std::to_string(n));
    }
    if (e.u == e.v) throw DataError("self-loop at node " + std::to_string(e.u));
    if (e.sign != 1 && e.sign != -1) {
      throw DataError("edge sign must be -1 or 1, got " + std::to_string(e.sign));
    }
    canon.push_back({std::min(e.u, e.v), std::max(e.u, e.v), e.sign});
  }
  std::sort(canon.begin(), canon.end(), [](const SignedEdge& a, const SignedEdge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  edges_.reserve(canon.size());
  for (const auto& e : canon) {
    if (!edges_.empty() && edges_.back().u == e.u && edges_.back().v == e.v) {
      if (edges_.back().sign != e.sign) {
        throw DataError("conflicting duplicate edge (" + std::to_string(e.u) + "," +
                        std::to_string(e.v) + ")");
      }
      continue;
    }
    edges_.push_back(e);
  }
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  for (const auto& e : edges_) {
    ++deg[static_cast<std::size_t>(e.u)];
    ++deg[static_cast<std::size_t>(e.v)];
  }
  for (int i = 0; i < n; ++i) adj_[static_cast<std::size_t>(i)].reserve(static_cast<std::size_t>(deg[static_cast<std::size_t>(i)]));
  for (const auto& e : edges_) {
    adj_[static_cast<std::size_t>(e.u)].push_back({e.v, e.sign});
    adj_[static_cast<std::size_t>(e.v)].push_back({e.u, e.sign});
  }
  for (auto& row : adj_) {
    std::sort(row.begin(), row.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
  }
}

int SignedGraph::sign(int i, int j) const {
  if (i == j) return 0;
  const auto& row = adj_.at(static_cast<std::size_t>(i));
  auto it = std::lower_bound(row.begin(), row.end(), j,
                             [](const Neighbor& a, int node) { return a.node < node; });
  return (it != row.end() && it->node == j) ? it->sign : 0;
}

double SignedGraph::average_degree() const {
  if (adj_.empty()) return 0.0;
  return 2.0 * static_cast<double>(edges_.size()) / static_cast<double>(adj_.size());
}

LabelVector::LabelVector(int k, std::vector<int> labels) : K(k), z(std::move(labels)) {
  if (K < 1) throw std::invalid_argument("label count K must be >= 1");
  for (int v : z) {
    if (v < 0 || v >= K) {
      throw std::invalid_argument("label " + std::to_string(v) + " outside [0," +
                                  std::to_string(K) + ")");
    }
  }
}

std::vector<int> LabelVector::counts() const {
  std::vector<int> c(static_cast<std::size_t>(K), 0);
  for (int v : z) ++c[static_cast<std::size_t>(v)];
  return c;
}

Eigen::MatrixXd BsbmParams::Q() const {
  const int k = K();
  Eigen::MatrixXd q(k, k);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      q(a, b) = 0.5 * (1.0 + eta(a, b) * nu[static_cast<std::size_t>(a)] * nu[static_cast<std::size_t>(b)]);
    }
  }
  return q;
}

void BsbmParams::validate() const {
  const int k = K();
  if (k < 1) throw std::invalid_argument("params: K must be >= 1");
  if (P.rows() != k || P.cols() != k) throw std::invalid_argument("params: P must be KxK");
  if (eta.rows() != k || eta.cols() != k) throw std::invalid_argument("params: eta must be KxK");
  if (static_cast<int>(nu.size()) != k) throw std::invalid_argument("params: nu must have length K");
  double total = 0.0;
  for (int a = 0; a < k; ++a) {
    if (!(pi(a) >= 0.0) || !std::isfinite(pi(a))) throw std::invalid_argument("params: pi entries must be >= 0");
    total += pi(a);
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("params: pi must sum to 1");
  for (int a = 0; a < k; ++a) {
    if (nu[static_cast<std::size_t>(a)] != 1 && nu[static_cast<std::size_t>(a)] != -1) {
      throw std::invalid_argument("params: nu entries must be -1 or +1");
    }
    for (int b = 0; b < k; ++b) {
      if (!(P(a, b) >= 0.0 && P(a, b) <= 1.0)) throw std::invalid_argument("params: P entries must lie in [0,1]");
      if (!(eta(a, b) >= 0.0 && eta(a, b) <= 1.0)) throw std::invalid_argument("params: eta entries must lie in [0,1]");
      if (P(a, b) != P(b, a)) throw std::invalid_argument("params: P must be symmetric");
      if (eta(a, b) != eta(b, a)) throw std::invalid_argument("params: eta must be symmetric");
    }
  }
}

BsbmParams planted_params(std::span<const double> pi, double p_in, double p_bt, double eta_in,
                          double eta_bt, std::vector<int> nu) {
  const int k = static_cast<int>(pi.size());
  BsbmParams p;
  p.pi = Eigen::Map<const Eigen::VectorXd>(pi.data(), k);
  p.P = Eigen::MatrixXd::Constant(k, k, p_bt);
  p.P.diagonal().setConstant(p_in);
  p.eta = Eigen::MatrixXd::Constant(k, k, eta_bt);
  p.eta.diagonal().setConstant(eta_in);
  p.nu = std::move(nu);
  return p;
}

std::vector<int> alternating_nu(int K) {
  std::vector<int> nu(static_cast<std::size_t>(K));
  for (int l = 0; l < K; ++l) nu[static_cast<std::size_t>(l)] = (l % 2 == 0) ? 1 : -1;
  return nu;
}

SignedGraph load_edge_list(std::istream& in) {
  std::vector<SignedEdge> edges;
  long long declared_n = -1;
  long long max_id = -1;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.rfind("n=", 0) == 0) {
      if (!edges.empty() || declared_n >= 0) {
        throw DataError("line " + std::to_string(lineno) + ": header n=<int> must precede edges");
      }
      long long v = 0;
      if (!parse_int(trim(t.substr(2)), v) || v < 0) {
        throw DataError("line " + std::to_string(lineno) + ": bad header '" + t + "'");
      }
      declared_n = v;
      continue;
    }
    std::istringstream ls(t);
    std::string a, b, s, extra;
    long long u = 0, v = 0, sg = 0;
    if (!(ls >> a >> b >> s) || (ls >> extra) || !parse_int(a, u) || !parse_int(b, v) ||
        !parse_int(s, sg)) {
      throw DataError("line " + std::to_string(lineno) + ": expected 'u v s', got '" + t + "'");
    }
    if (u < 0 || v < 0 || u > 2147483646 || v > 2147483646) {
      throw DataError("line " + std::to_string(lineno) + ": node id out of range");
    }
    if (sg != 1 && sg != -1) {
      throw DataError("line " + std::to_string(lineno) + ": sign must be -1 or 1");
    }
    if (u == v) throw DataError("line " + std::to_string(lineno) + ": self-loop");
    max_id = std::max({max_id, u, v});
    edges.push_back({static_cast<int>(u), static_cast<int>(v), static_cast<int>(sg)});
  }
  long long n = declared_n >= 0 ? declared_n : max_id + 1;
  if (max_id >= n) throw DataError("node id " + std::to_string(max_id) + " exceeds header n");
  return SignedGraph(static_cast<int>(n), edges);
}

SignedGraph load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return load_edge_list(in);
}

void save_edge_list(std::ostream& out, const SignedGraph& g) {
  out << "n=" << g.num_nodes() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << ' ' << e.sign << '\n';
}

void save_edge_list_file(const std::string& path, const SignedGraph& g) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  save_edge_list(out, g);
}

LabelVector load_labels(std::istream& in, int K) {
  std::vector<int> z;
  std::string line;
  int lineno = 0;
  int max_label = -1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    long long v = 0;
    if (!parse_int(t, v) || v < 0 || v > 1'000'000) {
      throw DataError("labels line " + std::to_string(lineno) + ": expected a non-negative integer");
    }
    z.push_back(static_cast<int>(v));
    max_label = std::max(max_label, static_cast<int>(v));
  }
  if (z.empty()) throw DataError("label file is empty");
  if (K == 0) K = max_label + 1;
  if (max_label >= K) throw DataError("label " + std::to_string(max_label) + " exceeds K");
  return LabelVector(K, std::move(z));
}

LabelVector load_labels_file(const std::string& path, int K) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return load_labels(in, K);
}

void save_labels(std::ostream& out, const LabelVector& labels) {
  for (int v : labels.z) out << v << '\n';
}

void save_labels_file(const std::string& path, const LabelVector& labels) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  save_labels(out, labels);
}

SampledNetwork sample_bsbm(const BsbmParams& params, int n, std::uint64_t seed) {
  params.validate();
  if (n < 2) throw std::invalid_argument("sample_bsbm: n must be >= 2");
  const int k = params.K();
  std::mt19937_64 rng(seed);
  std::discrete_distribution<int> cat(params.pi.data(), params.pi.data() + k);
  std::vector<int> z(static_cast<std::size_t>(n));
  for (auto& v : z) v = cat(rng);

  const Eigen::MatrixXd q = params.Q();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<SignedEdge> edges;
  for (int i = 0; i < n; ++i) {
    const int zi = z[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) {
      const int zj = z[static_cast<std::size_t>(j)];
      // Both draws are always taken so the stream layout is independent of P and Q.
      const double u_edge = unif(rng);
      const double u_sign = unif(rng);
      if (u_edge < params.P(zi, zj)) {
        edges.push_back({i, j, u_sign < q(zi, zj) ? 1 : -1});
      }
    }
  }
  return {SignedGraph(n, edges), LabelVector(k, std::move(z))};
}

double population_balance(const BsbmParams& params) {
  params.validate();
  const int k = params.K();
  if (k > 64) throw std::invalid_argument("population_balance: K must be <= 64");
  // Given labels (a,b,c), E[A_ab A_bc A_ca | edges] = prod (2Q - 1) over the three pairs.
  const Eigen::MatrixXd s = 2.0 * params.Q().array() - 1.0;
  double num = 0.0;
  double den = 0.0;
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      const double wab = params.pi(a) * params.pi(b) * params.P(a, b);
      if (wab == 0.0) continue;
      for (int c = 0; c < k; ++c) {
        const double w = wab * params.pi(c) * params.P(b, c) * params.P(c, a);
        den += w;
        num += w * s(a, b) * s(b, c) * s(c, a);
      }
    }
  }
  if (den <= 0.0) {
    throw std::domain_error("population_balance: triangles have probability zero");
  }
  return num / den;
}

TriangleCounts empirical_balance(const SignedGraph& g) {
  TriangleCounts out;
  // Each triangle u<v<w is found once from its lowest edge (u,v).
  for (const auto& e : g.edges()) {
    const auto nu = g.neighbors(e.u);
    const auto nv = g.neighbors(e.v);
    auto a = std::upper_bound(nu.begin(), nu.end(), e.v,
                              [](int node, const Neighbor& x) { return node < x.node; });
    auto b = std::upper_bound(nv.begin(), nv.end(), e.v,
                              [](int node, const Neighbor& x) { return node < x.node; });
    while (a != nu.end() && b != nv.end()) {
      if (a->node < b->node) {
        ++a;
      } else if (b->node < a->node) {
        ++b;
      } else {
        if (e.sign * a->sign * b->sign > 0) {
          ++out.balanced;
        } else {
          ++out.unbalanced;
        }
        ++a;
        ++b;
      }
    }
  }
  return out;
}

SignedGraph binarize(const SignedGraph& g, BinarizeMode mode) {
  std::vector<SignedEdge> out;
  out.reserve(g.num_edges());
  for (const auto& e : g.edges()) {
    if (mode == BinarizeMode::kConnectivity) {
      out.push_back({e.u, e.v, 1});
    } else if (e.sign > 0) {
      out.push_back(e);
    }
  }
  return SignedGraph(g.num_nodes(), out);
}

SignedGraph permute_nodes(const SignedGraph& g, std::span<const int> perm) {
  if (static_cast<int>(perm.size()) != g.num_nodes()) {
    throw std::invalid_argument("permute_nodes: permutation length mismatch");
  }
  std::vector<SignedEdge> out;
  out.reserve(g.num_edges());
  for (const auto& e : g.edges()) {
    out.push_back({perm[static_cast<std::size_t>(e.u)], perm[static_cast<std::size_t>(e.v)], e.sign});
  }
  return SignedGraph(g.num_nodes(), out);
}

}  // namespace bsbm
