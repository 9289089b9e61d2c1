#include "nashseek/network.hpp"

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "nashseek/errors.hpp"

namespace nashseek {

namespace {

std::string edge_name(int from, int to) {
  return "(" + std::to_string(from + 1) + ", " + std::to_string(to + 1) + ")";
}

Eigen::MatrixXd build_adjacency(int n, const std::vector<Edge>& edges, bool directed) {
  if (n < 1) throw ConfigError("graph.nodes", "graph needs at least one node");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : edges) {
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n) {
      throw ConfigError("graph.edges", "edge " + edge_name(e.from, e.to) + " references a missing node");
    }
    if (e.from == e.to) {
      throw ConfigError("graph.edges", "edge " + edge_name(e.from, e.to) + " is a self-loop");
    }
    if (!std::isfinite(e.weight) || e.weight < 0.0) {
      throw ConfigError("graph.edges", "edge " + edge_name(e.from, e.to) + " has invalid weight");
    }
    a(e.to, e.from) = e.weight;
    if (!directed) a(e.from, e.to) = e.weight;
  }
  return a;
}

// Nodes reachable from `start` following information flow along `adj`
// (adj(i, j) > 0 means j -> i).
std::vector<bool> reachable(const Eigen::MatrixXd& adj, int start, bool forward) {
  const int n = static_cast<int>(adj.rows());
  std::vector<bool> seen(n, false);
  std::vector<int> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int w = 0; w < n; ++w) {
      const double a = forward ? adj(w, u) : adj(u, w);
      if (a > 0.0 && !seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

bool all_of(const std::vector<bool>& v) {
  for (bool b : v) {
    if (!b) return false;
  }
  return true;
}

}  // namespace

CommGraph::CommGraph(Eigen::MatrixXd adjacency, bool directed)
    : adjacency_(std::move(adjacency)), directed_(directed) {
  if (adjacency_.rows() != adjacency_.cols() || adjacency_.rows() == 0) {
    throw ConfigError("graph", "adjacency must be a non-empty square matrix");
  }
  const int n = size();
  for (int i = 0; i < n; ++i) {
    if (adjacency_(i, i) != 0.0) {
      throw ConfigError("graph.edges", "edge " + edge_name(i, i) + " is a self-loop");
    }
    for (int j = 0; j < n; ++j) {
      const double a = adjacency_(i, j);
      if (!std::isfinite(a) || a < 0.0) {
        throw ConfigError("graph.edges", "edge " + edge_name(j, i) + " has invalid weight");
      }
      if (!directed_ && a != adjacency_(j, i)) {
        throw ConfigError("graph.edges", "undirected graph has asymmetric weight on " + edge_name(i, j));
      }
    }
  }
}

CommGraph CommGraph::undirected(int n, const std::vector<Edge>& edges) {
  return CommGraph(build_adjacency(n, edges, false), false);
}

CommGraph CommGraph::directed(int n, const std::vector<Edge>& edges) {
  return CommGraph(build_adjacency(n, edges, true), true);
}

CommGraph CommGraph::cycle(int n, double weight) {
  std::vector<Edge> edges;
  if (n == 2) {
    edges.push_back({0, 1, weight});
  } else if (n > 2) {
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, weight});
  }
  return undirected(n, edges);
}

Eigen::MatrixXd laplacian(const CommGraph& g) {
  const Eigen::MatrixXd& a = g.adjacency();
  Eigen::MatrixXd l = -a;
  for (int i = 0; i < g.size(); ++i) l(i, i) = a.row(i).sum();
  return l;
}

bool is_connected(const CommGraph& g) {
  if (g.size() == 1) return true;
  if (!all_of(reachable(g.adjacency(), 0, true))) return false;
  if (!g.is_directed()) return true;
  return all_of(reachable(g.adjacency(), 0, false));
}

CouplingMatrix coupling_matrix(const CommGraph& g, const std::vector<int>& action_dims) {
  const int n = g.size();
  if (static_cast<int>(action_dims.size()) != n) {
    throw DimensionError("need one action dimension per graph node");
  }
  if (!is_connected(g)) throw ConfigError("graph", "coupling matrix requires a connected graph");

  std::vector<int> offsets(n + 1, 0);
  for (int j = 0; j < n; ++j) offsets[j + 1] = offsets[j] + action_dims[j];
  const int total = offsets[n];

  const Eigen::MatrixXd l = laplacian(g);
  CouplingMatrix out;
  out.M = Eigen::MatrixXd::Zero(n * total, n * total);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (l(i, k) == 0.0) continue;
      out.M.block(i * total, k * total, total, total).diagonal().setConstant(l(i, k));
    }
    for (int j = 0; j < n; ++j) {
      for (int c = 0; c < action_dims[j]; ++c) {
        const int idx = i * total + offsets[j] + c;
        out.M(idx, idx) += g.weight(i, j);
      }
    }
  }

  if (g.is_directed()) {
    out.lambda_min = Eigen::EigenSolver<Eigen::MatrixXd>(out.M, false).eigenvalues().real().minCoeff();
  } else {
    out.lambda_min = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(out.M, Eigen::EigenvaluesOnly)
                         .eigenvalues()
                         .minCoeff();
  }
  return out;
}

}  // namespace nashseek
