#pragma once

// Shared helpers for tests: seeded random graphs and exact comparisons.
// Deliberately independent of the library's generators in src/datagen.

#include <algorithm>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "ehg/graph.hpp"
#include "ehg/tensor.hpp"

namespace ehg::testsupport {

inline Tensor random_tensor(std::size_t rows, std::size_t cols,
                            std::mt19937_64& rng, double lo = -1.0,
                            double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(rows * cols);
  for (auto& x : v) x = dist(rng);
  return Tensor::from_values(rows, cols, v);
}

/// Random simple undirected graph with random feature dims (1..4).
inline Graph random_graph(std::mt19937_64& rng, std::size_t max_n = 20,
                          std::size_t max_m = 60) {
  std::uniform_int_distribution<std::size_t> ndist(1, max_n);
  const std::size_t n = ndist(rng);
  const std::size_t cap = n * (n - 1) / 2;
  std::uniform_int_distribution<std::size_t> mdist(0, std::min(max_m, cap));
  const std::size_t m = mdist(rng);

  std::set<std::pair<std::size_t, std::size_t>> chosen;
  std::uniform_int_distribution<std::size_t> vdist(0, n - 1);
  std::vector<Edge> edges;
  while (edges.size() < m) {
    std::size_t u = vdist(rng), v = vdist(rng);
    if (u == v) continue;
    auto key = std::minmax(u, v);
    if (!chosen.insert(key).second) continue;
    // keep the sampled orientation to exercise both (u,v) and (v,u) storage
    edges.push_back({u, v});
  }

  std::uniform_int_distribution<std::size_t> ddist(1, 4);
  Graph g;
  g.num_nodes = n;
  g.edges = std::move(edges);
  g.node_features = random_tensor(n, ddist(rng), rng);
  g.edge_features = random_tensor(g.edges.size(), ddist(rng), rng);
  return g;
}

inline bool tensors_equal_bitexact(const Tensor& a, const Tensor& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) {
    if (av[i] != bv[i]) return false;
  }
  return true;
}

inline bool graphs_equal_bitexact(const Graph& a, const Graph& b) {
  if (a.num_nodes != b.num_nodes) return false;
  if (a.edges.size() != b.edges.size()) return false;
  for (std::size_t i = 0; i < a.edges.size(); ++i) {
    if (!(a.edges[i] == b.edges[i])) return false;
  }
  return tensors_equal_bitexact(a.node_features, b.node_features) &&
         tensors_equal_bitexact(a.edge_features, b.edge_features);
}

}  // namespace ehg::testsupport
