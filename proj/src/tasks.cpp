#include "ehg/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <string>

#include "ehg/error.hpp"

namespace ehg {
namespace {

std::size_t pool_size(double ratio, std::size_t count) {
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(count))));
}

void check_dataset(const std::vector<Graph>& dataset, const char* op) {
  if (dataset.empty()) throw ValueError(std::string(op) + ": empty dataset");
  const std::size_t d = dataset.front().node_dim();
  const std::size_t dp = dataset.front().edge_dim();
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (dataset[i].node_dim() != d || dataset[i].edge_dim() != dp) {
      throw ShapeError(std::string(op) + ": graph " + std::to_string(i) +
                       " has feature dims " +
                       std::to_string(dataset[i].node_dim()) + "/" +
                       std::to_string(dataset[i].edge_dim()) +
                       ", expected " + std::to_string(d) + "/" +
                       std::to_string(dp));
    }
  }
}

std::vector<std::vector<double>> snapshot_params(const std::vector<Tensor>& params) {
  std::vector<std::vector<double>> out;
  out.reserve(params.size());
  for (const auto& p : params) out.emplace_back(p.values().begin(), p.values().end());
  return out;
}

void restore_params(std::vector<Tensor>& params,
                    const std::vector<std::vector<double>>& snap) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto r = params[i].raw();
    std::copy(snap[i].begin(), snap[i].end(), r.begin());
  }
}

std::size_t argmax_row(const Tensor& t, std::size_t row) {
  std::size_t best = 0;
  double bv = t.at(row, 0);
  for (std::size_t j = 1; j < t.cols(); ++j) {
    if (t.at(row, j) > bv) {
      bv = t.at(row, j);
      best = j;
    }
  }
  return best;
}

}  // namespace

void write_history_csv(const std::string& path,
                       const std::vector<EpochStats>& history) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  out << "epoch,train_loss,val_loss,accuracy,exact_match\n";
  char buf[64];
  for (const auto& row : history) {
    out << row.epoch << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", row.train_loss);
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", row.val_loss);
    out << buf << ',';
    if (row.accuracy) {
      std::snprintf(buf, sizeof(buf), "%.17g", *row.accuracy);
      out << buf;
    }
    out << ',';
    if (row.exact_match) {
      std::snprintf(buf, sizeof(buf), "%.17g", *row.exact_match);
      out << buf;
    }
    out << '\n';
  }
}

// --- model construction -----------------------------------------------------

std::vector<Tensor> NodeAutoencoder::params() const {
  std::vector<Tensor> p;
  for (const auto* l : {&enc1, &enc2, &dec1, &dec2, &dec3}) {
    auto lp = l->params();
    p.insert(p.end(), lp.begin(), lp.end());
  }
  auto ap = assign.params();
  p.insert(p.end(), ap.begin(), ap.end());
  return p;
}

Tensor NodeAutoencoder::reconstruct(const Graph& g) const {
  Tensor x1 = relu(gcn_forward(enc1, g, g.node_features));
  Tensor x2 = gcn_forward(enc2, g, x1);
  auto a = make_assignment(assign, x2);
  Tensor pooled = matmul(transpose(a.c), x2);
  Tensor back = matmul(a.c, pooled);
  Tensor d1 = relu(gcn_forward(dec1, g, back));
  Tensor d2 = relu(gcn_forward(dec2, g, d1));
  return gcn_forward(dec3, g, d2);
}

std::vector<Tensor> EdgeAutoencoder::params() const {
  std::vector<Tensor> p;
  for (const auto* l : {&enc1, &enc2, &dec1, &dec2, &dec3}) {
    auto lp = l->params();
    p.insert(p.end(), lp.begin(), lp.end());
  }
  auto ap = assign.params();
  p.insert(p.end(), ap.begin(), ap.end());
  return p;
}

Tensor EdgeAutoencoder::reconstruct(const Graph& g) const {
  Tensor e1 = relu(ehgnn_forward(enc1, g, g.edge_features));
  Tensor e2 = ehgnn_forward(enc2, g, e1);
  auto a = make_assignment(assign, e2);
  auto pooled = hypercluster(g, e2, a);
  Tensor back = hypercluster_unpool(a, pooled.pooled_edge_features);
  Tensor d1 = relu(ehgnn_forward(dec1, g, back));
  Tensor d2 = relu(ehgnn_forward(dec2, g, d1));
  return ehgnn_forward(dec3, g, d2);
}

std::vector<Tensor> BaselineEdgeAutoencoder::params() const {
  std::vector<Tensor> p;
  for (const auto* l : {&enc1, &enc2, &dec1, &dec2, &dec3}) {
    auto lp = l->params();
    p.insert(p.end(), lp.begin(), lp.end());
  }
  auto ap = assign.params();
  p.insert(p.end(), ap.begin(), ap.end());
  return p;
}

Tensor BaselineEdgeAutoencoder::reconstruct(const Graph& g) const {
  std::vector<std::size_t> us(g.num_edges()), vs(g.num_edges());
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    us[i] = g.edges[i].u;
    vs[i] = g.edges[i].v;
  }
  auto endpoint_mean = [&](const Tensor& x) {
    return scale(add(gather_rows(x, us), gather_rows(x, vs)), 0.5);
  };

  Tensor x1 = relu(egcn_forward(enc1, g, g.node_features));
  Tensor x2 = egcn_forward(enc2, g, x1);
  Tensor e_repr = endpoint_mean(x2);
  auto a = make_assignment(assign, e_repr);
  Tensor pooled = matmul(transpose(a.c), e_repr);
  Tensor back = hypercluster_unpool(a, pooled);

  // decode from the original node features with the unpooled edge codes as
  // the per-layer edge auxiliaries
  Graph gd = g;
  gd.edge_features = back;
  Tensor d1 = relu(egcn_forward(dec1, gd, g.node_features));
  Tensor d2 = relu(egcn_forward(dec2, gd, d1));
  Tensor d3 = egcn_forward(dec3, gd, d2);
  return endpoint_mean(d3);
}

Tensor ReconstructionModel::reconstruct_edges(const Graph& g) const {
  if (const auto* ours = std::get_if<EdgeAutoencoder>(&edge_ae)) {
    return ours->reconstruct(g);
  }
  if (const auto* base = std::get_if<BaselineEdgeAutoencoder>(&edge_ae)) {
    return base->reconstruct(g);
  }
  throw ValueError("reconstruct_edges: model has no edge autoencoder");
}

std::vector<Tensor> ReconstructionModel::node_params() const {
  return node_ae ? node_ae->params() : std::vector<Tensor>{};
}

std::vector<Tensor> ReconstructionModel::edge_params() const {
  if (const auto* ours = std::get_if<EdgeAutoencoder>(&edge_ae)) return ours->params();
  if (const auto* base = std::get_if<BaselineEdgeAutoencoder>(&edge_ae)) {
    return base->params();
  }
  return {};
}

ReconstructionModel make_reconstruction_model(const std::vector<Graph>& dataset,
                                              const ReconstructionConfig& cfg) {
  check_dataset(dataset, "make_reconstruction_model");
  const std::size_t d = dataset.front().node_dim();
  const std::size_t dp = dataset.front().edge_dim();
  std::size_t max_n = 0, max_m = 0;
  for (const auto& g : dataset) {
    max_n = std::max(max_n, g.num_nodes);
    max_m = std::max(max_m, g.num_edges());
  }
  const std::size_t h = cfg.hidden;
  std::mt19937_64 rng(cfg.seed);

  ReconstructionModel model;
  model.categorical_nodes = cfg.categorical_nodes;
  model.categorical_edges = cfg.categorical_edges;

  if (cfg.with_node_ae) {
    NodeAutoencoder ae;
    ae.enc1 = GcnLayer(d, h, rng);
    ae.enc2 = GcnLayer(h, h, rng);
    ae.assign = AssignmentGenerator(h, pool_size(cfg.node_ratio, max_n), rng);
    ae.dec1 = GcnLayer(h, h, rng);
    ae.dec2 = GcnLayer(h, h, rng);
    ae.dec3 = GcnLayer(h, d, rng);
    model.node_ae = std::move(ae);
  }
  if (cfg.with_edge_ae) {
    if (cfg.baseline_edges) {
      BaselineEdgeAutoencoder ae;
      ae.enc1 = EgcnLayer(d, h, dp, rng);
      ae.enc2 = EgcnLayer(h, h, dp, rng);
      ae.assign = AssignmentGenerator(h, pool_size(cfg.edge_ratio, max_m), rng);
      ae.dec1 = EgcnLayer(d, h, h, rng);
      ae.dec2 = EgcnLayer(h, h, h, rng);
      ae.dec3 = EgcnLayer(h, dp, h, rng);
      model.edge_ae = std::move(ae);
    } else {
      EdgeAutoencoder ae;
      ae.enc1 = EhgnnLayer(dp, h, rng);
      ae.enc2 = EhgnnLayer(h, h, rng);
      ae.assign = AssignmentGenerator(h, pool_size(cfg.edge_ratio, max_m), rng);
      ae.dec1 = EhgnnLayer(h, h, rng);
      ae.dec2 = EhgnnLayer(h, h, rng);
      ae.dec3 = EhgnnLayer(h, dp, rng);
      model.edge_ae = std::move(ae);
    }
  }
  return model;
}

// --- training ---------------------------------------------------------------

namespace {

Tensor reconstruction_loss(const ReconstructionModel& model, const Graph& g) {
  Tensor total;
  if (model.node_ae) {
    Tensor pred = model.node_ae->reconstruct(g);
    Tensor l = model.categorical_nodes ? cross_entropy_loss(pred, g.node_features)
                                       : mse_loss(pred, g.node_features);
    total = l;
  }
  if (model.has_edge_ae() && g.num_edges() > 0) {
    Tensor pred = model.reconstruct_edges(g);
    Tensor l = model.categorical_edges ? cross_entropy_loss(pred, g.edge_features)
                                       : mse_loss(pred, g.edge_features);
    total = total.defined() ? add(total, l) : l;
  }
  if (!total.defined()) {
    throw ValueError("reconstruction: nothing to reconstruct for this graph");
  }
  return total;
}

double dataset_loss(const ReconstructionModel& model,
                    const std::vector<Graph>& data) {
  double acc = 0.0;
  for (const auto& g : data) acc += reconstruction_loss(model, g).item();
  return acc / static_cast<double>(data.size());
}

}  // namespace

ReconstructionResult train_reconstruction(ReconstructionModel& model,
                                          const std::vector<Graph>& train,
                                          const ReconstructionConfig& cfg) {
  check_dataset(train, "train_reconstruction");

  auto node_params = model.node_params();
  auto edge_params = model.edge_params();
  std::optional<Adam> node_opt, edge_opt;
  if (!node_params.empty())
    node_opt.emplace(node_params, AdamConfig{.learning_rate = cfg.lr_node});
  if (!edge_params.empty())
    edge_opt.emplace(edge_params, AdamConfig{.learning_rate = cfg.lr_edge});
  if (!node_opt && !edge_opt) {
    throw ValueError("train_reconstruction: model has no parameters");
  }

  ReconstructionResult res;
  res.initial_loss = dataset_loss(model, train);

  auto all_params = node_params;
  all_params.insert(all_params.end(), edge_params.begin(), edge_params.end());
  auto best = snapshot_params(all_params);
  double best_val = res.initial_loss;
  res.best_epoch = 0;

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    double train_loss = 0.0;
    std::size_t pos = 0;
    while (pos < train.size()) {
      const std::size_t batch =
          std::min(cfg.batch_size, train.size() - pos);
      const double inv = 1.0 / static_cast<double>(batch);
      for (std::size_t b = 0; b < batch; ++b) {
        Tensor loss = reconstruction_loss(model, train[pos + b]);
        train_loss += loss.item();
        backward(scale(loss, inv));
      }
      if (node_opt) node_opt->step();
      if (edge_opt) edge_opt->step();
      pos += batch;
    }
    train_loss /= static_cast<double>(train.size());
    if (std::isnan(train_loss)) {
      throw Error("train_reconstruction: loss became NaN at epoch " +
                  std::to_string(epoch) + " (diverged)");
    }

    const double val_loss = dataset_loss(model, train);
    Metrics m = evaluate(model, train);
    res.history.push_back({epoch, train_loss, val_loss, m.accuracy, m.exact_match});

    if (val_loss < best_val) {
      best_val = val_loss;
      best = snapshot_params(all_params);
      res.best_epoch = epoch;
    } else if (epoch - res.best_epoch > cfg.patience) {
      break;
    }
  }
  restore_params(all_params, best);
  res.final_loss = best_val;
  return res;
}

Metrics evaluate(const ReconstructionModel& model,
                 const std::vector<Graph>& dataset) {
  check_dataset(dataset, "evaluate");
  std::size_t cat_total = 0, cat_correct = 0;
  double se = 0.0;
  std::size_t se_count = 0;
  std::size_t exact_graphs = 0;
  bool any_cat = false, any_cont = false;

  for (const auto& g : dataset) {
    bool all_ok = true;
    if (model.node_ae) {
      Tensor pred = model.node_ae->reconstruct(g);
      if (model.categorical_nodes) {
        any_cat = true;
        for (std::size_t v = 0; v < g.num_nodes; ++v) {
          const bool ok = argmax_row(pred, v) == argmax_row(g.node_features, v);
          cat_correct += ok;
          ++cat_total;
          all_ok = all_ok && ok;
        }
      } else {
        any_cont = true;
        for (std::size_t i = 0; i < pred.size(); ++i) {
          const double d = pred.values()[i] - g.node_features.values()[i];
          se += d * d;
        }
        se_count += pred.size();
      }
    }
    if (model.has_edge_ae() && g.num_edges() > 0) {
      Tensor pred = model.reconstruct_edges(g);
      if (model.categorical_edges) {
        any_cat = true;
        for (std::size_t i = 0; i < g.num_edges(); ++i) {
          const bool ok = argmax_row(pred, i) == argmax_row(g.edge_features, i);
          cat_correct += ok;
          ++cat_total;
          all_ok = all_ok && ok;
        }
      } else {
        any_cont = true;
        for (std::size_t i = 0; i < pred.size(); ++i) {
          const double d = pred.values()[i] - g.edge_features.values()[i];
          se += d * d;
        }
        se_count += pred.size();
      }
    }
    if (all_ok) ++exact_graphs;
  }

  Metrics out;
  if (any_cat && cat_total > 0) {
    out.accuracy = static_cast<double>(cat_correct) / static_cast<double>(cat_total);
  }
  if (any_cat && !any_cont) {
    out.exact_match =
        static_cast<double>(exact_graphs) / static_cast<double>(dataset.size());
  }
  if (any_cont && se_count > 0) {
    out.mse = se / static_cast<double>(se_count);
  }
  return out;
}

CompressionReport compression_report(const ReconstructionModel& model,
                                     const Graph& g, double node_ratio,
                                     double edge_ratio) {
  const auto* ae = std::get_if<EdgeAutoencoder>(&model.edge_ae);
  if (ae == nullptr) {
    throw ValueError(
        "compression_report: requires the cluster-based edge autoencoder");
  }
  if (!model.categorical_edges) {
    throw ValueError("compression_report: edge accuracy needs categorical edges");
  }
  const std::size_t n = g.num_nodes, m = g.num_edges();
  const std::size_t d = g.node_dim(), dp = g.edge_dim();
  const double orig = static_cast<double>(n * d + m * dp);
  const std::size_t m_pool = ae->assign.m_pool();
  if (pool_size(edge_ratio, m) != m_pool) {
    throw ValueError("compression_report: edge_ratio " +
                     std::to_string(edge_ratio) + " does not match the " +
                     "model's pooled edge count " + std::to_string(m_pool));
  }
  const double stored =
      static_cast<double>(pool_size(node_ratio, n) * d)  // pooled node floats
      + static_cast<double>(m_pool * dp)                 // pooled edge floats
      + static_cast<double>(n + m);                      // cluster ids

  Metrics metrics = evaluate(model, {g});

  CompressionReport rep;
  rep.relative_size = stored / orig;
  rep.edge_accuracy = metrics.accuracy.value_or(1.0);
  return rep;
}

double node_only_relative_size(const Graph& g, double node_ratio) {
  const std::size_t n = g.num_nodes, m = g.num_edges();
  const std::size_t d = g.node_dim(), dp = g.edge_dim();
  const double orig = static_cast<double>(n * d + m * dp);
  const double stored = static_cast<double>(pool_size(node_ratio, n) * d) +
                        static_cast<double>(m * dp) + static_cast<double>(n);
  return stored / orig;
}

// --- classification ----------------------------------------------------------

ClassificationModel make_classification_model(std::size_t node_dim,
                                              std::size_t edge_dim,
                                              const ClassificationConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  const std::size_t h = cfg.hidden;
  ClassificationModel m;
  m.keep_ratio = cfg.keep_ratio;
  m.edge_layers = {EhgnnLayer(edge_dim, h, rng), EhgnnLayer(h, h, rng),
                   EhgnnLayer(h, h, rng)};
  m.scores = {ScoreLayer(h, rng), ScoreLayer(h, rng), ScoreLayer(h, rng)};
  m.node_layers = {GcnLayer(node_dim, h, rng), GcnLayer(h, h, rng),
                   GcnLayer(h, h, rng)};
  m.head_w = glorot_param(2 * h, cfg.num_classes, rng);
  m.head_b = zeros_param(1, cfg.num_classes);
  return m;
}

Tensor ClassificationModel::logits(const Graph& g) const {
  const std::size_t h = node_layers[0].weight.cols();
  Graph s = g;
  Tensor x = g.node_features;
  Tensor e = g.edge_features;
  Tensor readout;
  for (std::size_t l = 0; l < 3; ++l) {
    Tensor ep = relu(ehgnn_forward(edge_layers[l], s, e));
    Tensor edge_mean;
    if (s.num_edges() > 0) {
      Tensor z = hyperdrop_score(scores[l], s, ep);
      auto pooled = hyperdrop(s, ep, z, keep_ratio);
      x = relu(gcn_with_edge_weights(node_layers[l], pooled, x));
      s = pooled.base;
      e = pooled.base.edge_features;
      edge_mean = mean_rows(e);
    } else {
      x = relu(gcn_forward(node_layers[l], s, x));
      e = ep;
      edge_mean = Tensor::zeros(1, h);
    }
    Tensor r = concat_cols(mean_rows(x), edge_mean);
    readout = readout.defined() ? add(readout, r) : r;
  }
  return add_bias(matmul(readout, head_w), head_b);
}

std::vector<Tensor> ClassificationModel::params() const {
  std::vector<Tensor> p;
  for (const auto& l : edge_layers) {
    auto lp = l.params();
    p.insert(p.end(), lp.begin(), lp.end());
  }
  for (const auto& s : scores) {
    auto sp = s.params();
    p.insert(p.end(), sp.begin(), sp.end());
  }
  for (const auto& l : node_layers) {
    auto lp = l.params();
    p.insert(p.end(), lp.begin(), lp.end());
  }
  p.push_back(head_w);
  p.push_back(head_b);
  return p;
}

namespace {

Tensor onehot_label(const Graph& g, std::size_t num_classes) {
  if (!g.label) throw ValueError("classification: graph without a label");
  const int lab = *g.label;
  if (lab < 0 || static_cast<std::size_t>(lab) >= num_classes) {
    throw ValueError("classification: label " + std::to_string(lab) +
                     " outside 0.." + std::to_string(num_classes - 1));
  }
  std::vector<double> v(num_classes, 0.0);
  v[static_cast<std::size_t>(lab)] = 1.0;
  return Tensor::from_values(1, num_classes, std::move(v));
}

double dataset_ce(const ClassificationModel& model,
                  const std::vector<Graph>& data, std::size_t num_classes) {
  double acc = 0.0;
  for (const auto& g : data) {
    acc += cross_entropy_loss(model.logits(g), onehot_label(g, num_classes)).item();
  }
  return acc / static_cast<double>(data.size());
}

}  // namespace

double classification_accuracy(const ClassificationModel& model,
                               const std::vector<Graph>& dataset) {
  if (dataset.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& g : dataset) {
    if (!g.label) throw ValueError("classification: graph without a label");
    Tensor lg = model.logits(g);
    correct += argmax_row(lg, 0) == static_cast<std::size_t>(*g.label);
  }
  return static_cast<double>(correct) / static_cast<double>(dataset.size());
}

ClassificationResult train_classification(ClassificationModel& model,
                                          const std::vector<Graph>& train,
                                          const std::vector<Graph>& val,
                                          const std::vector<Graph>& test,
                                          const ClassificationConfig& cfg) {
  check_dataset(train, "train_classification");
  std::map<int, std::size_t> label_counts;
  for (const auto& g : train) {
    if (!g.label) throw ValueError("train_classification: unlabeled graph");
    ++label_counts[*g.label];
  }
  if (label_counts.size() < 2) {
    throw ValueError("train_classification: all training labels are identical");
  }

  const std::vector<Graph>& val_set = val.empty() ? train : val;
  auto params = model.params();
  Adam opt(params, AdamConfig{.learning_rate = cfg.lr});

  ClassificationResult res;
  res.initial_loss = dataset_ce(model, train, model.head_b.cols());
  auto best = snapshot_params(params);
  double best_acc = -1.0, best_loss = 0.0;
  res.best_epoch = 0;

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    double train_loss = 0.0;
    std::size_t pos = 0;
    while (pos < train.size()) {
      const std::size_t batch = std::min(cfg.batch_size, train.size() - pos);
      const double inv = 1.0 / static_cast<double>(batch);
      for (std::size_t b = 0; b < batch; ++b) {
        Tensor loss = cross_entropy_loss(model.logits(train[pos + b]),
                                         onehot_label(train[pos + b],
                                                      model.head_b.cols()));
        train_loss += loss.item();
        backward(scale(loss, inv));
      }
      opt.step();
      pos += batch;
    }
    train_loss /= static_cast<double>(train.size());
    if (std::isnan(train_loss)) {
      throw Error("train_classification: loss became NaN at epoch " +
                  std::to_string(epoch) + " (diverged)");
    }

    const double val_loss = dataset_ce(model, val_set, model.head_b.cols());
    const double val_acc = classification_accuracy(model, val_set);
    res.history.push_back({epoch, train_loss, val_loss, val_acc, std::nullopt});

    if (val_acc > best_acc || (val_acc == best_acc && val_loss < best_loss)) {
      best_acc = val_acc;
      best_loss = val_loss;
      best = snapshot_params(params);
      res.best_epoch = epoch;
    } else if (epoch - res.best_epoch > cfg.patience) {
      break;
    }
  }
  restore_params(params, best);
  res.final_loss = dataset_ce(model, train, model.head_b.cols());
  res.test_accuracy = classification_accuracy(model, test.empty() ? val_set : test);
  return res;
}

std::array<std::vector<Graph>, 3> stratified_split(const std::vector<Graph>& data,
                                                   double train_frac,
                                                   double val_frac,
                                                   std::uint64_t seed) {
  if (train_frac <= 0.0 || val_frac < 0.0 || train_frac + val_frac >= 1.0) {
    throw ValueError("stratified_split: fractions must satisfy 0 < train, "
                     "0 <= val, train + val < 1");
  }
  std::map<int, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!data[i].label) throw ValueError("stratified_split: unlabeled graph");
    buckets[*data[i].label].push_back(i);
  }
  std::mt19937_64 rng(seed);
  std::array<std::vector<Graph>, 3> out;
  for (auto& [label, idx] : buckets) {
    std::shuffle(idx.begin(), idx.end(), rng);
    const std::size_t nt = static_cast<std::size_t>(
        std::round(train_frac * static_cast<double>(idx.size())));
    const std::size_t nv = static_cast<std::size_t>(
        std::round(val_frac * static_cast<double>(idx.size())));
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const std::size_t part = i < nt ? 0 : (i < nt + nv ? 1 : 2);
      out[part].push_back(data[idx[i]]);
    }
  }
  return out;
}

}  // namespace ehg
