#pragma once

#include <vector>

#include <Eigen/Dense>

namespace nashseek {

// Information flows from `from` to `to`: node `to` receives `from`'s messages,
// so the edge sets a_{to,from} = weight. Undirected edges set both entries.
// Node indices are 0-based.
struct Edge {
  int from = 0;
  int to = 0;
  double weight = 1.0;
};

class CommGraph {
 public:
  // Throws ConfigError on self-loops, negative or non-finite weights, and
  // asymmetric adjacency for undirected graphs.
  CommGraph(Eigen::MatrixXd adjacency, bool directed);

  static CommGraph undirected(int n, const std::vector<Edge>& edges);
  static CommGraph directed(int n, const std::vector<Edge>& edges);
  static CommGraph cycle(int n, double weight = 1.0);

  int size() const { return static_cast<int>(adjacency_.rows()); }
  bool is_directed() const { return directed_; }
  const Eigen::MatrixXd& adjacency() const { return adjacency_; }
  double weight(int i, int j) const { return adjacency_(i, j); }

 private:
  Eigen::MatrixXd adjacency_;
  bool directed_;
};

// L = D - A with D_ii = sum_j a_ij.
Eigen::MatrixXd laplacian(const CommGraph& g);

// Undirected: one connected component. Directed: strongly connected.
bool is_connected(const CommGraph& g);

struct CouplingMatrix {
  Eigen::MatrixXd M;
  // Smallest eigenvalue (smallest real part for directed graphs).
  double lambda_min = 0.0;
};

// M = L (x) I_D + A0 for stacked estimates ordered (player i, target j,
// component c), D = sum of action dims, A0 = diag(a_ij) repeated over the
// components of target j. Throws ConfigError for disconnected graphs.
CouplingMatrix coupling_matrix(const CommGraph& g, const std::vector<int>& action_dims);

}  // namespace nashseek
