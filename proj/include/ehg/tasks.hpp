#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ehg/adam.hpp"
#include "ehg/graph.hpp"
#include "ehg/layers.hpp"
#include "ehg/pooling.hpp"

// End-to-end pipelines: reconstruction autoencoders over node and edge
// features, graph classification with edge drop after every edge-level
// layer, the shared training loop, metrics, and the compression report.

namespace ehg {

struct Metrics {
  std::optional<double> accuracy;     // categorical node/edge feature accuracy
  std::optional<double> exact_match;  // graphs with every prediction correct
  std::optional<double> mse;          // continuous features
};

struct EpochStats {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  std::optional<double> accuracy;
  std::optional<double> exact_match;
};

/// CSV with columns epoch, train_loss, val_loss, accuracy, exact_match.
void write_history_csv(const std::string& path,
                       const std::vector<EpochStats>& history);

// --- reconstruction ----------------------------------------------------------

struct ReconstructionConfig {
  std::size_t hidden = 16;
  double node_ratio = 0.15;
  double edge_ratio = 0.25;
  bool with_node_ae = false;
  bool with_edge_ae = true;
  bool baseline_edges = false;  // edge-aware-GNN route instead of the dual route
  bool categorical_nodes = false;
  bool categorical_edges = false;
  std::size_t max_epochs = 500;
  std::size_t patience = 200;
  double lr_node = 5e-3;
  double lr_edge = 1e-3;
  std::size_t batch_size = 128;
  std::uint64_t seed = 0;
};

/// enc = 2 gcn layers + cluster pool; dec = unpool + 3 gcn layers.
struct NodeAutoencoder {
  GcnLayer enc1, enc2;
  AssignmentGenerator assign;
  GcnLayer dec1, dec2, dec3;
  std::vector<Tensor> params() const;
  Tensor reconstruct(const Graph& g) const;
};

/// enc = 2 edge-level layers + hypercluster; dec = unpool + 3 edge-level
/// layers. The whole path lives on the dual hypergraph.
struct EdgeAutoencoder {
  EhgnnLayer enc1, enc2;
  AssignmentGenerator assign;
  EhgnnLayer dec1, dec2, dec3;
  std::vector<Tensor> params() const;
  Tensor reconstruct(const Graph& g) const;
};

/// Edge-aware baseline. Encoder: two edge-aware node layers, edge
/// representations read off as endpoint means, cluster-pooled at the edge
/// ratio. Decoder: the unpooled edge codes re-enter three more node layers
/// as edge auxiliaries, and the prediction is again the endpoint mean. Edge
/// information only ever flows through node updates.
struct BaselineEdgeAutoencoder {
  EgcnLayer enc1, enc2;
  AssignmentGenerator assign;
  EgcnLayer dec1, dec2, dec3;
  std::vector<Tensor> params() const;
  Tensor reconstruct(const Graph& g) const;
};

struct ReconstructionModel {
  std::optional<NodeAutoencoder> node_ae;
  std::variant<std::monostate, EdgeAutoencoder, BaselineEdgeAutoencoder> edge_ae;
  bool categorical_nodes = false;
  bool categorical_edges = false;

  bool has_edge_ae() const { return edge_ae.index() != 0; }
  Tensor reconstruct_edges(const Graph& g) const;
  std::vector<Tensor> node_params() const;
  std::vector<Tensor> edge_params() const;
};

ReconstructionModel make_reconstruction_model(const std::vector<Graph>& dataset,
                                              const ReconstructionConfig& cfg);

struct ReconstructionResult {
  std::vector<EpochStats> history;
  double initial_loss = 0.0;
  double final_loss = 0.0;
  std::size_t best_epoch = 0;
};

/// Deterministic given cfg.seed. Throws on an empty dataset, on feature-dim
/// mismatches across the dataset, and on a NaN loss.
ReconstructionResult train_reconstruction(ReconstructionModel& model,
                                          const std::vector<Graph>& train,
                                          const ReconstructionConfig& cfg);

Metrics evaluate(const ReconstructionModel& model, const std::vector<Graph>& dataset);

struct CompressionReport {
  double relative_size = 0.0;
  double edge_accuracy = 0.0;
};

/// Sizes are counted in stored numbers: pooled node floats + pooled edge
/// floats + one cluster id per original element, over the original feature
/// floats. Accuracy comes from evaluate() on the same graph.
CompressionReport compression_report(const ReconstructionModel& model,
                                     const Graph& g, double node_ratio,
                                     double edge_ratio);

/// Node-only reference point: node floats at the given ratio, edge floats
/// untouched, one id per node.
double node_only_relative_size(const Graph& g, double node_ratio);

// --- classification ----------------------------------------------------------

struct ClassificationConfig {
  std::size_t hidden = 32;
  std::size_t num_classes = 2;
  double keep_ratio = 0.5;
  std::size_t max_epochs = 150;
  std::size_t patience = 50;
  double lr = 5e-3;
  std::size_t batch_size = 128;
  std::uint64_t seed = 0;
};

/// Three blocks of (edge-level layer -> score -> drop -> weighted node
/// layer); readout concatenates mean node and mean edge features per block
/// and sums the blocks; a final linear map produces the class logits.
struct ClassificationModel {
  std::array<EhgnnLayer, 3> edge_layers;
  std::array<ScoreLayer, 3> scores;
  std::array<GcnLayer, 3> node_layers;
  Tensor head_w, head_b;
  double keep_ratio = 0.5;

  Tensor logits(const Graph& g) const;
  std::vector<Tensor> params() const;
};

ClassificationModel make_classification_model(std::size_t node_dim,
                                              std::size_t edge_dim,
                                              const ClassificationConfig& cfg);

struct ClassificationResult {
  std::vector<EpochStats> history;
  double test_accuracy = 0.0;
  std::size_t best_epoch = 0;
  double initial_loss = 0.0;  // training CE before the first update
  double final_loss = 0.0;    // training CE of the restored best model
};

/// Deterministic given cfg.seed; restores the best-validation parameters
/// before scoring the test set. Throws when the training labels are all
/// identical.
ClassificationResult train_classification(ClassificationModel& model,
                                          const std::vector<Graph>& train,
                                          const std::vector<Graph>& val,
                                          const std::vector<Graph>& test,
                                          const ClassificationConfig& cfg);

double classification_accuracy(const ClassificationModel& model,
                               const std::vector<Graph>& dataset);

/// Seeded per-label split into train/val/test fractions.
std::array<std::vector<Graph>, 3> stratified_split(const std::vector<Graph>& data,
                                                   double train_frac,
                                                   double val_frac,
                                                   std::uint64_t seed);

}  // namespace ehg
