#pragma once

#include <cstddef>
#include <random>
#include <variant>
#include <vector>

#include "ehg/graph.hpp"
#include "ehg/tensor.hpp"

// Message-passing layers. Node-level GCN with self-loop-augmented symmetric
// normalization; the edge-level layer runs node message passing on the dual
// hypergraph (two-stage node->hyperedge->node mean with a self term); plus
// the four edge-aware baselines that consume edge features as read-only
// auxiliaries while updating node features.
//
// Layers take the input features explicitly so they can be stacked; the
// Graph argument supplies the structure. Layers assume a valid graph (run
// validate() at ingest boundaries).

namespace ehg {

/// Uniform init in +-sqrt(6 / (fan_in + fan_out)).
Tensor glorot_param(std::size_t fan_in, std::size_t fan_out, std::mt19937_64& rng);
Tensor zeros_param(std::size_t rows, std::size_t cols);

struct GcnLayer {
  Tensor weight;  // d_in x d_out
  Tensor bias;    // 1 x d_out

  GcnLayer() = default;
  GcnLayer(std::size_t d_in, std::size_t d_out, std::mt19937_64& rng);
  std::vector<Tensor> params() const { return {weight, bias}; }
};

struct EhgnnLayer {
  Tensor weight;  // d'_in x d'_out
  Tensor bias;    // 1 x d'_out

  EhgnnLayer() = default;
  EhgnnLayer(std::size_t d_in, std::size_t d_out, std::mt19937_64& rng);
  std::vector<Tensor> params() const { return {weight, bias}; }
};

/// X'_v = (sum_{u in N(v) ∪ {v}} n_uv * w_e * X_u) W + bias with
/// n_uv = 1/sqrt((deg_u+1)(deg_v+1)), n_vv = 1/(deg_v+1). The optional
/// edge_weights (m x 1) scale each neighbor contribution (self terms are
/// never scaled); they stay on the gradient path.
Tensor gcn_forward(const GcnLayer& layer, const Graph& g, const Tensor& x,
                   const Tensor& edge_weights = {});
Tensor gcn_forward(const GcnLayer& layer, const Graph& g);

/// Edge message passing on the dual hypergraph: hyperedge j (a node of g)
/// averages its incident dual-node features, then dual node i (an edge of g)
/// updates from its own features plus the mean of its two hyperedges. O(m)
/// over the positional pair list.
Tensor ehgnn_forward(const EhgnnLayer& layer, const Graph& g, const Tensor& e);
Tensor ehgnn_forward(const EhgnnLayer& layer, const Graph& g);

// --- edge-aware baselines ----------------------------------------------------

/// X'_v = (sum n_uv (X_u + E_uv)) W. When the edge dim differs from d_in the
/// edge features pass through a learned projection first.
struct EgcnLayer {
  Tensor weight;     // d_in x d_out
  Tensor edge_proj;  // d' x d_in, defined only when d' != d_in

  EgcnLayer() = default;
  EgcnLayer(std::size_t d_in, std::size_t d_out, std::size_t edge_dim,
            std::mt19937_64& rng);
  std::vector<Tensor> params() const;
};
Tensor egcn_forward(const EgcnLayer& layer, const Graph& g, const Tensor& x);

/// X'_v = X_v W + sum_u g_uv X_u with scalar gate g_uv = tanh(E_uv w + b).
/// The ungated formula forces d_out = d_in.
struct MpnnLayer {
  Tensor weight;  // d x d
  Tensor mlp_w;   // d' x 1
  Tensor mlp_b;   // 1 x 1

  MpnnLayer() = default;
  MpnnLayer(std::size_t d, std::size_t edge_dim, std::mt19937_64& rng);
  std::vector<Tensor> params() const { return {weight, mlp_w, mlp_b}; }
};
Tensor mpnn_forward(const MpnnLayer& layer, const Graph& g, const Tensor& x);

/// X'_v = X_v W_self + sum_r sum_{u in N_r(v)} (1/|N_r(v)|) X_u W_r with the
/// relation of each edge read off its one-hot feature row.
struct RgcnLayer {
  Tensor w_self;               // d_in x d_out
  std::vector<Tensor> w_rel;   // one d_in x d_out block per relation

  RgcnLayer() = default;
  RgcnLayer(std::size_t d_in, std::size_t d_out, std::size_t num_relations,
            std::mt19937_64& rng);
  std::size_t num_relations() const { return w_rel.size(); }
  std::vector<Tensor> params() const;
};
Tensor rgcn_forward(const RgcnLayer& layer, const Graph& g, const Tensor& x);

/// X'_v = (sum_{u in N(v) ∪ {v}} s_uv X_u) W where the neighbor gates s_uv
/// come from a scalar edge-level pass on the dual hypergraph and the self
/// gate is 1.
struct EgnnLayer {
  Tensor weight;      // d_in x d_out
  EhgnnLayer scorer;  // d' -> 1

  EgnnLayer() = default;
  EgnnLayer(std::size_t d_in, std::size_t d_out, std::size_t edge_dim,
            std::mt19937_64& rng);
  std::vector<Tensor> params() const;
};
Tensor egnn_forward(const EgnnLayer& layer, const Graph& g, const Tensor& x);

struct BaselineLayer {
  std::variant<EgcnLayer, MpnnLayer, RgcnLayer, EgnnLayer> layer;
  std::vector<Tensor> params() const;
};
Tensor baseline_forward(const BaselineLayer& layer, const Graph& g,
                        const Tensor& x);
Tensor baseline_forward(const BaselineLayer& layer, const Graph& g);

}  // namespace ehg
