#include "ehg/pooling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ehg/error.hpp"

namespace ehg {

AssignmentGenerator::AssignmentGenerator(std::size_t d_in, std::size_t m_pool,
                                         std::mt19937_64& rng, double gain)
    : logit_gain(gain) {
  if (m_pool < 1) throw ValueError("assignment: m_pool must be >= 1");
  weight = glorot_param(d_in, m_pool, rng);
}

ClusterAssignment make_assignment(const AssignmentGenerator& gen,
                                  const Tensor& e_repr) {
  if (e_repr.rows() < 1) throw ValueError("make_assignment: no edges to assign");
  ClusterAssignment out;
  out.c = row_softmax(scale(matmul(e_repr, gen.weight), gen.logit_gain));
  out.overcomplete = gen.m_pool() > e_repr.rows();
  return out;
}

ClusterPooledGraph hypercluster(const Graph& g, const Tensor& e_repr,
                                const ClusterAssignment& assign) {
  const std::size_t m = g.num_edges();
  if (e_repr.rows() != m || assign.c.rows() != m) {
    throw ShapeError("hypercluster: edge representation is " +
                     std::to_string(e_repr.rows()) + " rows, assignment " +
                     std::to_string(assign.c.rows()) + ", graph has " +
                     std::to_string(m) + " edges");
  }
  ClusterPooledGraph out;
  out.num_nodes = g.num_nodes;
  out.node_features = g.node_features;
  out.pooled_edge_features = matmul(transpose(assign.c), e_repr);

  // soft incidence M C via the sparse pair list: row v sums C rows of its
  // incident edges
  std::vector<std::size_t> dual(2 * m), hyper(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    dual[2 * i] = i;
    dual[2 * i + 1] = i;
    hyper[2 * i] = g.edges[i].u;
    hyper[2 * i + 1] = g.edges[i].v;
  }
  out.soft_incidence = scatter_aggregate(gather_rows(assign.c, dual), hyper,
                                         g.num_nodes, Aggregate::Sum);
  return out;
}

Tensor hypercluster_unpool(const ClusterAssignment& assign,
                           const Tensor& pooled_edge_features) {
  if (assign.c.cols() != pooled_edge_features.rows()) {
    throw ShapeError("hypercluster_unpool: assignment has " +
                     std::to_string(assign.c.cols()) + " clusters, pooled " +
                     "features have " + std::to_string(pooled_edge_features.rows()) +
                     " rows");
  }
  return matmul(assign.c, pooled_edge_features);
}

Tensor hyperdrop_score(const ScoreLayer& layer, const Graph& g,
                       const Tensor& e_repr) {
  return tanh(ehgnn_forward(layer.inner, g, e_repr));
}

std::vector<std::size_t> topk_select(const Tensor& scores, double keep_ratio) {
  if (!(keep_ratio > 0.0) || keep_ratio > 1.0) {
    throw ValueError("topk_select: keep_ratio " + std::to_string(keep_ratio) +
                     " outside (0, 1]");
  }
  const std::size_t m = scores.rows();
  if (m < 1) throw ValueError("topk_select: no scores");
  if (scores.cols() != 1) {
    throw ShapeError("topk_select: scores must be " + std::to_string(m) +
                     "x1, got " + std::to_string(m) + "x" +
                     std::to_string(scores.cols()));
  }
  const std::size_t k = std::max<std::size_t>(
      1, static_cast<std::size_t>(
             std::ceil(keep_ratio * static_cast<double>(m))));

  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  auto val = scores.values();
  // stable sort by descending score keeps ties ordered by original index
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return val[a] > val[b]; });
  idx.resize(std::min(k, m));
  std::sort(idx.begin(), idx.end());
  return idx;
}

DropPooledGraph hyperdrop(const Graph& g, const Tensor& e_repr,
                          const Tensor& scores, double keep_ratio) {
  const std::size_t m = g.num_edges();
  if (e_repr.rows() != m || scores.rows() != m) {
    throw ShapeError("hyperdrop: features/scores rows (" +
                     std::to_string(e_repr.rows()) + "/" +
                     std::to_string(scores.rows()) + ") != edge count " +
                     std::to_string(m));
  }
  DropPooledGraph out;
  out.kept_indices = topk_select(scores, keep_ratio);
  out.kept_scores = gather_rows(scores, out.kept_indices);

  out.base.num_nodes = g.num_nodes;
  out.base.node_features = g.node_features;  // nodes pass through untouched
  out.base.edges.reserve(out.kept_indices.size());
  for (std::size_t i : out.kept_indices) out.base.edges.push_back(g.edges[i]);
  out.base.edge_features =
      mul_rowwise(gather_rows(e_repr, out.kept_indices), out.kept_scores);
  out.base.label = g.label;
  return out;
}

Tensor gcn_with_edge_weights(const GcnLayer& layer, const DropPooledGraph& pooled,
                             const Tensor& x) {
  return gcn_forward(layer, pooled.base, x, pooled.kept_scores);
}

}  // namespace ehg
