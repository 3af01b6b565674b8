// Command-line entry point: graph generation, the dual transformation on
// JSON files, training pipelines, and the complexity benchmarks. Every run
// that produces files also writes a manifest (the fully resolved flat
// key=value config) next to them; re-running a subcommand on its manifest
// reproduces the metrics exactly.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "ehg/bench.hpp"
#include "ehg/datagen.hpp"
#include "ehg/dht.hpp"
#include "ehg/error.hpp"
#include "ehg/kernels/kernels.hpp"
#include "ehg/tasks.hpp"

namespace fs = std::filesystem;
using namespace ehg;

namespace {

constexpr const char* kVersion = "ehgnn 0.1.0";

// --- flat key=value config ---------------------------------------------------

class Config {
 public:
  static Config load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file " + path);
    Config cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const auto eq = line.find('=');
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      if (eq == std::string::npos) {
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": expected key = value");
      }
      cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
  }

  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  std::string get_str(const std::string& key, const std::string& def) {
    used_.insert(key);
    auto it = kv_.find(key);
    return it == kv_.end() ? def : it->second;
  }

  double get_real(const std::string& key, double def) {
    used_.insert(key);
    auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    try {
      return std::stod(it->second);
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "' is not a number: " + it->second);
    }
  }

  std::size_t get_count(const std::string& key, std::size_t def) {
    used_.insert(key);
    auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    try {
      return static_cast<std::size_t>(std::stoull(it->second));
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "' is not a count: " + it->second);
    }
  }

  bool get_flag(const std::string& key, bool def) {
    return get_count(key, def ? 1 : 0) != 0;
  }

  /// After all handlers have pulled their keys, anything left is a typo.
  void reject_unknown() const {
    for (const auto& [k, v] : kv_) {
      if (!used_.count(k)) throw ConfigError("unknown config key '" + k + "'");
    }
  }

 private:
  static std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
  }

  std::map<std::string, std::string> kv_;
  std::set<std::string> used_;
};

// Resolved settings accumulated during a run; becomes the manifest.
class Manifest {
 public:
  void put(const std::string& key, const std::string& v) { kv_[key] = v; }
  void put(const std::string& key, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    kv_[key] = buf;
  }
  void put(const std::string& key, std::size_t v) { kv_[key] = std::to_string(v); }

  void write(const fs::path& path) const {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write manifest " + path.string());
    for (const auto& [k, v] : kv_) out << k << " = " << v << "\n";
  }

 private:
  std::map<std::string, std::string> kv_;  // sorted, diffable
};

fs::path ensure_out_dir(const std::string& dir) {
  fs::path p(dir);
  fs::create_directories(p);
  return p;
}

std::uint64_t resolve_seed(Config& cfg, const std::optional<std::uint64_t>& flag) {
  const std::size_t from_cfg = cfg.get_count("seed", 0);
  return flag ? *flag : from_cfg;
}

void consume_informational(Config& cfg, const char* task) {
  // manifests carry these; accept and check the task tag
  const std::string t = cfg.get_str("task", task);
  if (t != task) {
    throw ConfigError("config is for task '" + t + "', not '" + task + "'");
  }
  cfg.get_str("version", kVersion);
  cfg.get_str("backend", kern::active().name);
}

// --- dataset construction from config -----------------------------------------

std::vector<Graph> load_reconstruction_dataset(Config& cfg, Manifest& man,
                                               bool& categorical) {
  const std::string dataset = cfg.get_str("dataset", "");
  man.put("dataset", dataset);
  if (dataset == "clustered") {
    const std::size_t points = cfg.get_count("points", 200);
    const std::size_t knn = cfg.get_count("knn", 4);
    const std::size_t colors = cfg.get_count("colors", 3);
    const std::size_t gseed = cfg.get_count("graph_seed", 42);
    man.put("points", points);
    man.put("knn", knn);
    man.put("colors", colors);
    man.put("graph_seed", gseed);
    categorical = false;
    return {gen_clustered_edge_colors(points, knn, colors, gseed)};
  }
  if (dataset == "er_paired") {
    const std::size_t count = cfg.get_count("graphs", 1);
    const std::size_t nodes = cfg.get_count("nodes", 50);
    const std::size_t edges = cfg.get_count("edges", 150);
    const std::size_t gseed = cfg.get_count("graph_seed", 100);
    man.put("graphs", count);
    man.put("nodes", nodes);
    man.put("edges", edges);
    man.put("graph_seed", gseed);
    categorical = true;
    std::vector<Graph> out;
    for (std::size_t i = 0; i < count; ++i) {
      out.push_back(gen_erdos_renyi_paired(nodes, edges, gseed + i));
    }
    return out;
  }
  throw ConfigError("dataset must be 'clustered' or 'er_paired', got '" +
                    dataset + "'");
}

// --- subcommand implementations -----------------------------------------------

int run_dht(const std::string& in, const std::string& out) {
  if (probe_graph_json(in) == GraphFileKind::Graph) {
    write_dual_json(dht(read_graph_json(in)), out);
  } else {
    write_graph_json(dht_inverse(read_dual_json(in)), out);
  }
  std::cout << "wrote " << out << "\n";
  return 0;
}

int run_reconstruct(const std::string& config_path,
                    const std::optional<std::uint64_t>& seed_flag,
                    const std::string& out_flag) {
  Config cfg = Config::load(config_path);
  consume_informational(cfg, "reconstruct");
  Manifest man;
  man.put("task", "reconstruct");
  man.put("version", kVersion);
  man.put("backend", kern::active().name);

  bool categorical = false;
  auto data = load_reconstruction_dataset(cfg, man, categorical);

  ReconstructionConfig rc;
  rc.hidden = cfg.get_count("hidden", 16);
  rc.node_ratio = cfg.get_real("node_ratio", 0.15);
  rc.edge_ratio = cfg.get_real("edge_ratio", 0.25);
  rc.with_node_ae = cfg.get_flag("with_node_ae", false);
  rc.baseline_edges = cfg.get_flag("baseline", false);
  rc.categorical_edges = categorical;
  rc.categorical_nodes = categorical;
  rc.max_epochs = cfg.get_count("epochs", 500);
  rc.patience = cfg.get_count("patience", 200);
  rc.lr_node = cfg.get_real("lr_node", 5e-3);
  rc.lr_edge = cfg.get_real("lr_edge", 1e-3);
  rc.batch_size = cfg.get_count("batch", 128);
  rc.seed = resolve_seed(cfg, seed_flag);
  const std::string out_cfg = cfg.get_str("out", "out");
  const std::string out_dir = out_flag.empty() ? out_cfg : out_flag;
  cfg.reject_unknown();

  man.put("hidden", rc.hidden);
  man.put("node_ratio", rc.node_ratio);
  man.put("edge_ratio", rc.edge_ratio);
  man.put("with_node_ae", std::size_t(rc.with_node_ae));
  man.put("baseline", std::size_t(rc.baseline_edges));
  man.put("epochs", rc.max_epochs);
  man.put("patience", rc.patience);
  man.put("lr_node", rc.lr_node);
  man.put("lr_edge", rc.lr_edge);
  man.put("batch", rc.batch_size);
  man.put("seed", std::size_t(rc.seed));
  man.put("out", out_dir);

  auto model = make_reconstruction_model(data, rc);
  auto res = train_reconstruction(model, data, rc);
  Metrics m = evaluate(model, data);

  const fs::path dir = ensure_out_dir(out_dir);
  write_history_csv((dir / "history.csv").string(), res.history);
  man.write(dir / "manifest.txt");

  std::printf("epochs run: %zu (best %zu)\n", res.history.size(), res.best_epoch);
  std::printf("loss: initial %.6g final %.6g\n", res.initial_loss, res.final_loss);
  if (m.mse) std::printf("mse: %.6g\n", *m.mse);
  if (m.accuracy) std::printf("accuracy: %.6g\n", *m.accuracy);
  if (m.exact_match) std::printf("exact_match: %.6g\n", *m.exact_match);
  std::printf("outputs in %s\n", dir.string().c_str());
  return 0;
}

int run_classify(const std::string& config_path,
                 const std::optional<std::uint64_t>& seed_flag,
                 const std::string& out_flag) {
  Config cfg = Config::load(config_path);
  consume_informational(cfg, "classify");
  Manifest man;
  man.put("task", "classify");
  man.put("version", kVersion);
  man.put("backend", kern::active().name);

  const std::string dataset = cfg.get_str("dataset", "cycle_path");
  if (dataset != "cycle_path") {
    throw ConfigError("classify supports dataset = cycle_path, got '" + dataset + "'");
  }
  const std::size_t count = cfg.get_count("graphs", 200);
  const std::size_t min_nodes = cfg.get_count("min_nodes", 6);
  const std::size_t max_nodes = cfg.get_count("max_nodes", 12);
  const std::size_t gseed = cfg.get_count("graph_seed", 7);
  if (min_nodes < 3 || max_nodes < min_nodes) {
    throw ConfigError("need 3 <= min_nodes <= max_nodes");
  }
  man.put("dataset", dataset);
  man.put("graphs", count);
  man.put("min_nodes", min_nodes);
  man.put("max_nodes", max_nodes);
  man.put("graph_seed", gseed);

  std::mt19937_64 grng(gseed);
  std::vector<Graph> data;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n = min_nodes + grng() % (max_nodes - min_nodes + 1);
    data.push_back(gen_cycle_or_path(n, i % 2 == 0));
  }

  ClassificationConfig cc;
  cc.hidden = cfg.get_count("hidden", 32);
  cc.num_classes = cfg.get_count("classes", 2);
  cc.keep_ratio = cfg.get_real("keep_ratio", 0.5);
  cc.max_epochs = cfg.get_count("epochs", 150);
  cc.patience = cfg.get_count("patience", 50);
  cc.lr = cfg.get_real("lr", 5e-3);
  cc.batch_size = cfg.get_count("batch", 128);
  cc.seed = resolve_seed(cfg, seed_flag);
  const double train_frac = cfg.get_real("train_frac", 0.6);
  const double val_frac = cfg.get_real("val_frac", 0.2);
  const std::string out_cfg = cfg.get_str("out", "out");
  const std::string out_dir = out_flag.empty() ? out_cfg : out_flag;
  cfg.reject_unknown();

  man.put("hidden", cc.hidden);
  man.put("classes", cc.num_classes);
  man.put("keep_ratio", cc.keep_ratio);
  man.put("epochs", cc.max_epochs);
  man.put("patience", cc.patience);
  man.put("lr", cc.lr);
  man.put("batch", cc.batch_size);
  man.put("seed", std::size_t(cc.seed));
  man.put("train_frac", train_frac);
  man.put("val_frac", val_frac);
  man.put("out", out_dir);

  auto [train, val, test] = stratified_split(data, train_frac, val_frac, cc.seed);
  auto model = make_classification_model(data[0].node_dim(), data[0].edge_dim(), cc);
  auto res = train_classification(model, train, val, test, cc);

  const fs::path dir = ensure_out_dir(out_dir);
  write_history_csv((dir / "history.csv").string(), res.history);
  man.write(dir / "manifest.txt");

  std::printf("epochs run: %zu (best %zu)\n", res.history.size(), res.best_epoch);
  std::printf("test_accuracy: %.6g\n", res.test_accuracy);
  std::printf("outputs in %s\n", dir.string().c_str());
  return 0;
}

int run_compress(const std::string& config_path,
                 const std::optional<std::uint64_t>& seed_flag,
                 const std::string& out_flag) {
  Config cfg = Config::load(config_path);
  consume_informational(cfg, "compress");
  Manifest man;
  man.put("task", "compress");
  man.put("version", kVersion);
  man.put("backend", kern::active().name);

  const std::size_t nodes = cfg.get_count("nodes", 200);
  const std::size_t edges = cfg.get_count("edges", 2000);
  const std::size_t gseed = cfg.get_count("graph_seed", 5);
  man.put("nodes", nodes);
  man.put("edges", edges);
  man.put("graph_seed", gseed);
  Graph g = gen_erdos_renyi_paired(nodes, edges, gseed);
  std::vector<Graph> data{g};

  ReconstructionConfig rc;
  rc.hidden = cfg.get_count("hidden", 16);
  rc.node_ratio = cfg.get_real("node_ratio", 0.15);
  rc.edge_ratio = cfg.get_real("edge_ratio", 0.02);
  rc.categorical_edges = true;
  rc.max_epochs = cfg.get_count("epochs", 300);
  rc.patience = cfg.get_count("patience", 300);
  rc.lr_edge = cfg.get_real("lr_edge", 1e-2);
  rc.batch_size = cfg.get_count("batch", 128);
  rc.seed = resolve_seed(cfg, seed_flag);
  const std::string out_cfg = cfg.get_str("out", "out");
  const std::string out_dir = out_flag.empty() ? out_cfg : out_flag;
  cfg.reject_unknown();

  man.put("hidden", rc.hidden);
  man.put("node_ratio", rc.node_ratio);
  man.put("edge_ratio", rc.edge_ratio);
  man.put("epochs", rc.max_epochs);
  man.put("patience", rc.patience);
  man.put("lr_edge", rc.lr_edge);
  man.put("batch", rc.batch_size);
  man.put("seed", std::size_t(rc.seed));
  man.put("out", out_dir);

  auto model = make_reconstruction_model(data, rc);
  auto res = train_reconstruction(model, data, rc);
  auto rep = compression_report(model, g, rc.node_ratio, rc.edge_ratio);
  const double node_only = node_only_relative_size(g, rc.node_ratio);

  const fs::path dir = ensure_out_dir(out_dir);
  write_history_csv((dir / "history.csv").string(), res.history);
  {
    std::ofstream rout(dir / "report.csv");
    rout << "relative_size,edge_accuracy,node_only_relative_size\n";
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", rep.relative_size,
                  rep.edge_accuracy, node_only);
    rout << buf;
  }
  man.write(dir / "manifest.txt");

  std::printf("relative_size: %.6g\n", rep.relative_size);
  std::printf("edge_accuracy: %.6g\n", rep.edge_accuracy);
  std::printf("node_only_relative_size: %.6g\n", node_only);
  std::printf("outputs in %s\n", dir.string().c_str());
  return 0;
}

int run_bench_transform(const std::vector<std::size_t>& sizes, std::size_t repeats,
                        std::size_t nodes, std::uint64_t seed,
                        const std::string& out_dir, bool csv) {
  auto rows = bench_transform(sizes, repeats, nodes, seed);
  std::cout << format_transform_table(rows);
  std::vector<double> ms, dhts, lgs;
  for (const auto& r : rows) {
    ms.push_back(double(r.m));
    dhts.push_back(r.dht_seconds);
    lgs.push_back(double(r.linegraph_edges));
  }
  if (rows.size() >= 2) {
    std::printf("dht time log-log slope: %.3f\n", loglog_slope(ms, dhts));
    std::printf("linegraph edge-count log-log slope: %.3f\n", loglog_slope(ms, lgs));
  }
  if (csv) {
    const fs::path dir = ensure_out_dir(out_dir);
    write_transform_csv((dir / "bench_transform.csv").string(), rows);
    Manifest man;
    man.put("task", "bench_transform");
    man.put("version", kVersion);
    man.put("backend", kern::active().name);
    std::string joined;
    for (std::size_t s : sizes) joined += (joined.empty() ? "" : ",") + std::to_string(s);
    man.put("sizes", joined);
    man.put("repeats", repeats);
    man.put("nodes", nodes);
    man.put("seed", std::size_t(seed));
    man.write(dir / "bench_transform_manifest.txt");
    std::printf("csv in %s\n", (dir / "bench_transform.csv").string().c_str());
  }
  return 0;
}

int run_bench_mp(std::size_t nodes, std::size_t edges, std::size_t repeats,
                 std::size_t hidden, std::uint64_t seed,
                 const std::string& out_dir, bool csv, bool parallel) {
  std::vector<Graph> graphs{gen_erdos_renyi_paired(nodes, edges, seed),
                            gen_scale_free(nodes, seed)};
  std::vector<std::string> names{"erdos-renyi", "scale-free"};
  auto rows = bench_message_passing(graphs, names, repeats, hidden, seed, parallel);
  std::cout << format_mp_table(rows);
  if (csv) {
    const fs::path dir = ensure_out_dir(out_dir);
    write_mp_csv((dir / "bench_mp.csv").string(), rows);
    Manifest man;
    man.put("task", "bench_mp");
    man.put("version", kVersion);
    man.put("backend", kern::active().name);
    man.put("nodes", nodes);
    man.put("edges", edges);
    man.put("repeats", repeats);
    man.put("hidden", hidden);
    man.put("parallel", std::size_t(parallel));
    man.put("seed", std::size_t(seed));
    man.write(dir / "bench_mp_manifest.txt");
    std::printf("csv in %s\n", (dir / "bench_mp.csv").string().c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse graph + dual-hypergraph learning toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string backend = "auto";
  app.add_option("--backend", backend, "kernel backend: auto|scalar|avx2|neon")
      ->check(CLI::IsMember({"auto", "scalar", "avx2", "neon"}));

  std::optional<std::uint64_t> seed_flag;
  app.add_option("--seed", seed_flag, "seed override for the subcommand");
  std::string out_flag;
  app.add_option("--out", out_flag, "output directory override");
  bool csv = false;
  app.add_flag("--csv", csv, "write benchmark CSV files");

  // dht
  auto* cmd_dht = app.add_subcommand("dht", "apply the dual transformation to a JSON file");
  std::string dht_in, dht_out;
  cmd_dht->add_option("input", dht_in, "graph or dual json")->required();
  cmd_dht->add_option("output", dht_out, "output json")->required();

  // gen
  auto* cmd_gen = app.add_subcommand("gen", "generate a synthetic graph");
  std::string family;
  cmd_gen->add_option("family", family, "clustered|er|star|scalefree|cycle|path")
      ->required()
      ->check(CLI::IsMember({"clustered", "er", "star", "scalefree", "cycle", "path"}));
  std::string gen_out;
  cmd_gen->add_option("-o,--output", gen_out, "output json path")->required();
  std::size_t g_points = 200, g_knn = 4, g_colors = 3;
  std::size_t g_nodes = 100, g_edges = 300, g_leaves = 4;
  cmd_gen->add_option("--points", g_points, "points (clustered)");
  cmd_gen->add_option("--knn", g_knn, "neighbors per point (clustered)");
  cmd_gen->add_option("--colors", g_colors, "color clusters (clustered)");
  cmd_gen->add_option("--nodes", g_nodes, "nodes (er|scalefree|cycle|path)");
  cmd_gen->add_option("--edges", g_edges, "edges (er)");
  cmd_gen->add_option("--leaves", g_leaves, "leaves (star)");

  // training tasks
  std::string cfg_path;
  auto* cmd_rec = app.add_subcommand("reconstruct", "train a reconstruction autoencoder");
  cmd_rec->add_option("config", cfg_path, "flat key=value config file")->required();
  auto* cmd_cls = app.add_subcommand("classify", "train the edge-drop classifier");
  cmd_cls->add_option("config", cfg_path, "flat key=value config file")->required();
  auto* cmd_cmp = app.add_subcommand("compress", "graph compression report");
  cmd_cmp->add_option("config", cfg_path, "flat key=value config file")->required();

  // bench
  auto* cmd_bench = app.add_subcommand("bench", "complexity benchmarks");
  cmd_bench->require_subcommand(1);
  auto* cmd_bt = cmd_bench->add_subcommand("transform", "dual transformation vs line graph");
  std::vector<std::size_t> bt_sizes{2000, 4000, 8000, 16000};
  std::size_t bt_repeats = 9, bt_nodes = 1000;
  cmd_bt->add_option("--sizes", bt_sizes, "edge counts (ascending)")->delimiter(',');
  cmd_bt->add_option("--repeats", bt_repeats, "timing repeats");
  cmd_bt->add_option("--nodes", bt_nodes, "node count");
  auto* cmd_bm = cmd_bench->add_subcommand("mp", "node vs edge message passing");
  std::size_t bm_nodes = 3000, bm_edges = 12000, bm_repeats = 20, bm_hidden = 32;
  bool bm_parallel = false;
  cmd_bm->add_option("--nodes", bm_nodes, "node count");
  cmd_bm->add_option("--edges", bm_edges, "edge count (ER)");
  cmd_bm->add_option("--repeats", bm_repeats, "timing repeats");
  cmd_bm->add_option("--hidden", bm_hidden, "feature width");
  cmd_bm->add_flag("--parallel", bm_parallel,
                   "measure independent graphs on separate threads");

  auto* cmd_backends = app.add_subcommand("backends", "list kernel backends");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage problems exit 1, --help exits 0
  }

  try {
    if (backend != "auto") {
      kern::Backend b = backend == "scalar" ? kern::Backend::Scalar
                        : backend == "avx2" ? kern::Backend::Avx2
                                            : kern::Backend::Neon;
      if (!kern::set_backend(b)) {
        throw ValueError("backend '" + backend + "' is unavailable on this machine");
      }
    }

    if (*cmd_dht) return run_dht(dht_in, dht_out);
    if (*cmd_gen) {
      const std::uint64_t seed = seed_flag.value_or(0);
      Graph g;
      if (family == "clustered") {
        g = gen_clustered_edge_colors(g_points, g_knn, g_colors, seed);
      } else if (family == "er") {
        g = gen_erdos_renyi_paired(g_nodes, g_edges, seed);
      } else if (family == "star") {
        g = gen_star(g_leaves);
      } else if (family == "scalefree") {
        g = gen_scale_free(g_nodes, seed);
      } else if (family == "cycle") {
        g = gen_cycle_or_path(g_nodes, true);
      } else {
        g = gen_cycle_or_path(g_nodes, false);
      }
      write_graph_json(g, gen_out);
      std::printf("wrote %s (%zu nodes, %zu edges)\n", gen_out.c_str(),
                  g.num_nodes, g.num_edges());
      return 0;
    }
    if (*cmd_rec) return run_reconstruct(cfg_path, seed_flag, out_flag);
    if (*cmd_cls) return run_classify(cfg_path, seed_flag, out_flag);
    if (*cmd_cmp) return run_compress(cfg_path, seed_flag, out_flag);
    if (*cmd_bt) {
      return run_bench_transform(bt_sizes, bt_repeats, bt_nodes,
                                 seed_flag.value_or(0),
                                 out_flag.empty() ? "out" : out_flag, csv);
    }
    if (*cmd_bm) {
      return run_bench_mp(bm_nodes, bm_edges, bm_repeats, bm_hidden,
                          seed_flag.value_or(0),
                          out_flag.empty() ? "out" : out_flag, csv, bm_parallel);
    }
    if (*cmd_backends) {
      for (auto b : kern::available_backends()) {
        std::printf("%s%s\n", kern::backend_name(b),
                    b == kern::active_backend() ? " (active)" : "");
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
