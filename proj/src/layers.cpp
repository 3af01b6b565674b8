#include "ehg/layers.hpp"

#include <cmath>
#include <string>

#include "ehg/error.hpp"

namespace ehg {

Tensor glorot_param(std::size_t fan_in, std::size_t fan_out, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  std::vector<double> v(fan_in * fan_out);
  for (auto& x : v) x = dist(rng);
  return Tensor::param(fan_in, fan_out, std::move(v));
}

Tensor zeros_param(std::size_t rows, std::size_t cols) {
  return Tensor::param(rows, cols, std::vector<double>(rows * cols, 0.0));
}

namespace {

// Directed view of the undirected edge list: entries 2i (u->v) and 2i+1
// (v->u) for edge i. src is the message source, dst the receiver.
struct DirectedEntries {
  std::vector<std::size_t> src;
  std::vector<std::size_t> dst;
  std::vector<std::size_t> edge_id;
};

DirectedEntries directed_entries(const Graph& g) {
  DirectedEntries d;
  const std::size_t m = g.edges.size();
  d.src.resize(2 * m);
  d.dst.resize(2 * m);
  d.edge_id.resize(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    d.src[2 * i] = g.edges[i].u;
    d.dst[2 * i] = g.edges[i].v;
    d.src[2 * i + 1] = g.edges[i].v;
    d.dst[2 * i + 1] = g.edges[i].u;
    d.edge_id[2 * i] = i;
    d.edge_id[2 * i + 1] = i;
  }
  return d;
}

std::vector<std::size_t> degrees_of(const Graph& g) {
  std::vector<std::size_t> deg(g.num_nodes, 0);
  for (const Edge& e : g.edges) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg;
}

void check_input(const Tensor& x, std::size_t rows, std::size_t d_in,
                 const char* op) {
  if (x.rows() != rows || x.cols() != d_in) {
    throw ShapeError(std::string(op) + ": input is " + std::to_string(x.rows()) +
                     "x" + std::to_string(x.cols()) + ", expected " +
                     std::to_string(rows) + "x" + std::to_string(d_in));
  }
}

// Positional (dual node, hyperedge) index arrays of the dual hypergraph,
// i.e. the structural half of the dual transformation.
struct DualIndex {
  std::vector<std::size_t> dual;   // 2m: i, i, ...
  std::vector<std::size_t> hyper;  // 2m: u_i, v_i, ...
};

DualIndex dual_index(const Graph& g) {
  DualIndex d;
  const std::size_t m = g.edges.size();
  d.dual.resize(2 * m);
  d.hyper.resize(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    d.dual[2 * i] = i;
    d.dual[2 * i + 1] = i;
    d.hyper[2 * i] = g.edges[i].u;
    d.hyper[2 * i + 1] = g.edges[i].v;
  }
  return d;
}

}  // namespace

GcnLayer::GcnLayer(std::size_t d_in, std::size_t d_out, std::mt19937_64& rng)
    : weight(glorot_param(d_in, d_out, rng)), bias(zeros_param(1, d_out)) {}

EhgnnLayer::EhgnnLayer(std::size_t d_in, std::size_t d_out, std::mt19937_64& rng)
    : weight(glorot_param(d_in, d_out, rng)), bias(zeros_param(1, d_out)) {}

Tensor gcn_forward(const GcnLayer& layer, const Graph& g, const Tensor& x,
                   const Tensor& edge_weights) {
  const std::size_t n = g.num_nodes;
  const std::size_t m = g.edges.size();
  check_input(x, n, layer.weight.rows(), "gcn_forward");
  if (edge_weights.defined() &&
      (edge_weights.rows() != m || edge_weights.cols() != 1)) {
    throw ShapeError("gcn_forward: edge_weights is " +
                     std::to_string(edge_weights.rows()) + "x" +
                     std::to_string(edge_weights.cols()) + ", expected " +
                     std::to_string(m) + "x1");
  }

  const auto deg = degrees_of(g);
  std::vector<double> self_coef(n);
  for (std::size_t v = 0; v < n; ++v) {
    self_coef[v] = 1.0 / static_cast<double>(deg[v] + 1);
  }
  Tensor agg = mul_rowwise(x, Tensor::from_values(n, 1, std::move(self_coef)));

  if (m > 0) {
    const auto ent = directed_entries(g);
    std::vector<double> norm(2 * m);
    for (std::size_t k = 0; k < 2 * m; ++k) {
      norm[k] = 1.0 / std::sqrt(static_cast<double>((deg[ent.src[k]] + 1) *
                                                    (deg[ent.dst[k]] + 1)));
    }
    Tensor msgs = mul_rowwise(gather_rows(x, ent.src),
                              Tensor::from_values(2 * m, 1, std::move(norm)));
    if (edge_weights.defined()) {
      msgs = mul_rowwise(msgs, gather_rows(edge_weights, ent.edge_id));
    }
    agg = add(agg, scatter_aggregate(msgs, ent.dst, n, Aggregate::Sum));
  }
  return add_bias(matmul(agg, layer.weight), layer.bias);
}

Tensor gcn_forward(const GcnLayer& layer, const Graph& g) {
  return gcn_forward(layer, g, g.node_features);
}

Tensor ehgnn_forward(const EhgnnLayer& layer, const Graph& g, const Tensor& e) {
  const std::size_t n = g.num_nodes;
  const std::size_t m = g.edges.size();
  check_input(e, m, layer.weight.rows(), "ehgnn_forward");

  const auto idx = dual_index(g);
  // stage 1: each hyperedge averages the features of its incident dual nodes
  Tensor hyper = scatter_aggregate(gather_rows(e, idx.dual), idx.hyper, n,
                                   Aggregate::Mean);
  // stage 2: each dual node adds the mean of its two hyperedges to itself
  Tensor neigh = scatter_aggregate(gather_rows(hyper, idx.hyper), idx.dual, m,
                                   Aggregate::Mean);
  return add_bias(matmul(add(e, neigh), layer.weight), layer.bias);
}

Tensor ehgnn_forward(const EhgnnLayer& layer, const Graph& g) {
  return ehgnn_forward(layer, g, g.edge_features);
}

// --- EGCN ---------------------------------------------------------------

EgcnLayer::EgcnLayer(std::size_t d_in, std::size_t d_out, std::size_t edge_dim,
                     std::mt19937_64& rng)
    : weight(glorot_param(d_in, d_out, rng)) {
  if (edge_dim != d_in) edge_proj = glorot_param(edge_dim, d_in, rng);
}

std::vector<Tensor> EgcnLayer::params() const {
  std::vector<Tensor> p{weight};
  if (edge_proj.defined()) p.push_back(edge_proj);
  return p;
}

Tensor egcn_forward(const EgcnLayer& layer, const Graph& g, const Tensor& x) {
  const std::size_t n = g.num_nodes;
  const std::size_t m = g.edges.size();
  check_input(x, n, layer.weight.rows(), "egcn_forward");
  const Tensor e_eff = layer.edge_proj.defined()
                           ? matmul(g.edge_features, layer.edge_proj)
                           : g.edge_features;
  if (e_eff.cols() != x.cols()) {
    throw ShapeError("egcn_forward: edge feature dim " +
                     std::to_string(e_eff.cols()) + " != node feature dim " +
                     std::to_string(x.cols()));
  }

  const auto deg = degrees_of(g);
  std::vector<double> self_coef(n);
  for (std::size_t v = 0; v < n; ++v) {
    self_coef[v] = 1.0 / static_cast<double>(deg[v] + 1);
  }
  Tensor agg = mul_rowwise(x, Tensor::from_values(n, 1, std::move(self_coef)));

  if (m > 0) {
    const auto ent = directed_entries(g);
    std::vector<double> norm(2 * m);
    for (std::size_t k = 0; k < 2 * m; ++k) {
      norm[k] = 1.0 / std::sqrt(static_cast<double>((deg[ent.src[k]] + 1) *
                                                    (deg[ent.dst[k]] + 1)));
    }
    Tensor msgs = add(gather_rows(x, ent.src), gather_rows(e_eff, ent.edge_id));
    msgs = mul_rowwise(msgs, Tensor::from_values(2 * m, 1, std::move(norm)));
    agg = add(agg, scatter_aggregate(msgs, ent.dst, n, Aggregate::Sum));
  }
  return matmul(agg, layer.weight);
}

// --- MPNN ---------------------------------------------------------------

MpnnLayer::MpnnLayer(std::size_t d, std::size_t edge_dim, std::mt19937_64& rng)
    : weight(glorot_param(d, d, rng)),
      mlp_w(glorot_param(edge_dim, 1, rng)),
      mlp_b(zeros_param(1, 1)) {}

Tensor mpnn_forward(const MpnnLayer& layer, const Graph& g, const Tensor& x) {
  const std::size_t n = g.num_nodes;
  const std::size_t m = g.edges.size();
  check_input(x, n, layer.weight.rows(), "mpnn_forward");

  Tensor out = matmul(x, layer.weight);
  if (m > 0) {
    const Tensor gate =
        tanh(add_bias(matmul(g.edge_features, layer.mlp_w), layer.mlp_b));
    const auto ent = directed_entries(g);
    Tensor msgs =
        mul_rowwise(gather_rows(x, ent.src), gather_rows(gate, ent.edge_id));
    out = add(out, scatter_aggregate(msgs, ent.dst, n, Aggregate::Sum));
  }
  return out;
}

// --- R-GCN --------------------------------------------------------------

RgcnLayer::RgcnLayer(std::size_t d_in, std::size_t d_out,
                     std::size_t num_relations, std::mt19937_64& rng)
    : w_self(glorot_param(d_in, d_out, rng)) {
  w_rel.reserve(num_relations);
  for (std::size_t r = 0; r < num_relations; ++r) {
    w_rel.push_back(glorot_param(d_in, d_out, rng));
  }
}

std::vector<Tensor> RgcnLayer::params() const {
  std::vector<Tensor> p{w_self};
  p.insert(p.end(), w_rel.begin(), w_rel.end());
  return p;
}

Tensor rgcn_forward(const RgcnLayer& layer, const Graph& g, const Tensor& x) {
  const std::size_t n = g.num_nodes;
  const std::size_t m = g.edges.size();
  const std::size_t nrel = layer.num_relations();
  check_input(x, n, layer.w_self.rows(), "rgcn_forward");
  if (g.edge_features.cols() != nrel) {
    throw ValueError("rgcn_forward: edge features have " +
                     std::to_string(g.edge_features.cols()) +
                     " columns for " + std::to_string(nrel) + " relations");
  }

  // relation of each edge from its one-hot row
  std::vector<std::size_t> rel(m);
  auto ev = g.edge_features.values();
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t ones = 0, r = 0;
    for (std::size_t j = 0; j < nrel; ++j) {
      const double v = ev[i * nrel + j];
      if (v == 1.0) {
        r = j;
        ++ones;
      } else if (v != 0.0) {
        ones = 2;  // not a one-hot entry
        break;
      }
    }
    if (ones != 1) {
      throw ValueError("rgcn_forward: edge " + std::to_string(i) +
                       " feature row is not one-hot");
    }
    rel[i] = r;
  }

  Tensor out = matmul(x, layer.w_self);
  // |N_r(v)| per (node, relation)
  std::vector<std::size_t> count(n * nrel, 0);
  for (std::size_t i = 0; i < m; ++i) {
    ++count[g.edges[i].u * nrel + rel[i]];
    ++count[g.edges[i].v * nrel + rel[i]];
  }
  for (std::size_t r = 0; r < nrel; ++r) {
    std::vector<std::size_t> src, dst;
    std::vector<double> coef;
    for (std::size_t i = 0; i < m; ++i) {
      if (rel[i] != r) continue;
      const auto& e = g.edges[i];
      src.push_back(e.u);
      dst.push_back(e.v);
      coef.push_back(1.0 / static_cast<double>(count[e.v * nrel + r]));
      src.push_back(e.v);
      dst.push_back(e.u);
      coef.push_back(1.0 / static_cast<double>(count[e.u * nrel + r]));
    }
    if (src.empty()) continue;
    const std::size_t entries = coef.size();
    Tensor msgs = mul_rowwise(gather_rows(x, src),
                              Tensor::from_values(entries, 1, std::move(coef)));
    Tensor agg = scatter_aggregate(msgs, dst, n, Aggregate::Sum);
    out = add(out, matmul(agg, layer.w_rel[r]));
  }
  return out;
}

// --- EGNN ---------------------------------------------------------------

EgnnLayer::EgnnLayer(std::size_t d_in, std::size_t d_out, std::size_t edge_dim,
                     std::mt19937_64& rng)
    : weight(glorot_param(d_in, d_out, rng)), scorer(edge_dim, 1, rng) {}

std::vector<Tensor> EgnnLayer::params() const {
  std::vector<Tensor> p{weight};
  auto sp = scorer.params();
  p.insert(p.end(), sp.begin(), sp.end());
  return p;
}

Tensor egnn_forward(const EgnnLayer& layer, const Graph& g, const Tensor& x) {
  const std::size_t n = g.num_nodes;
  const std::size_t m = g.edges.size();
  check_input(x, n, layer.weight.rows(), "egnn_forward");

  Tensor agg = x;  // self term with gate 1
  if (m > 0) {
    const Tensor gates = ehgnn_forward(layer.scorer, g, g.edge_features);
    const auto ent = directed_entries(g);
    Tensor msgs =
        mul_rowwise(gather_rows(x, ent.src), gather_rows(gates, ent.edge_id));
    agg = add(agg, scatter_aggregate(msgs, ent.dst, n, Aggregate::Sum));
  }
  return matmul(agg, layer.weight);
}

// --- variant dispatch -----------------------------------------------------

std::vector<Tensor> BaselineLayer::params() const {
  return std::visit([](const auto& l) { return l.params(); }, layer);
}

Tensor baseline_forward(const BaselineLayer& layer, const Graph& g,
                        const Tensor& x) {
  return std::visit(
      [&](const auto& l) -> Tensor {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, EgcnLayer>) return egcn_forward(l, g, x);
        if constexpr (std::is_same_v<L, MpnnLayer>) return mpnn_forward(l, g, x);
        if constexpr (std::is_same_v<L, RgcnLayer>) return rgcn_forward(l, g, x);
        if constexpr (std::is_same_v<L, EgnnLayer>) return egnn_forward(l, g, x);
      },
      layer.layer);
}

Tensor baseline_forward(const BaselineLayer& layer, const Graph& g) {
  return baseline_forward(layer, g, g.node_features);
}

}  // namespace ehg
