#include "ehg/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "ehg/error.hpp"

namespace ehg {
namespace {

using nlohmann::json;

Tensor degree_onehot_features(const Graph& g) {
  // one-hot degree capped at 4 -> 5 columns
  std::vector<std::size_t> deg(g.num_nodes, 0);
  for (const auto& e : g.edges) {
    ++deg[e.u];
    ++deg[e.v];
  }
  std::vector<double> x(g.num_nodes * 5, 0.0);
  for (std::size_t v = 0; v < g.num_nodes; ++v) {
    x[v * 5 + std::min<std::size_t>(deg[v], 4)] = 1.0;
  }
  return Tensor::from_values(g.num_nodes, 5, std::move(x));
}

Tensor constant_edge_features(std::size_t m) {
  return Tensor::full(m, 1, 1.0);
}

}  // namespace

Graph gen_clustered_edge_colors(std::size_t n_points, std::size_t k_neighbors,
                                std::size_t n_color_clusters,
                                std::uint64_t seed) {
  if (n_points < 4 || k_neighbors < 1 || k_neighbors >= n_points ||
      n_color_clusters < 1) {
    throw ValueError("gen_clustered_edge_colors: degenerate parameters");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.02, 0.02);

  // two interleaved arcs
  const std::size_t half = n_points / 2;
  std::vector<double> px(n_points), py(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    const bool upper = i < half;
    const std::size_t arc_len = upper ? half : n_points - half;
    const std::size_t j = upper ? i : i - half;
    const double t = std::numbers::pi * static_cast<double>(j) /
                     static_cast<double>(arc_len > 1 ? arc_len - 1 : 1);
    if (upper) {
      px[i] = std::cos(t) + jitter(rng);
      py[i] = std::sin(t) + jitter(rng);
    } else {
      px[i] = 1.0 - std::cos(t) + jitter(rng);
      py[i] = 0.5 - std::sin(t) + jitter(rng);
    }
  }

  Graph g;
  g.num_nodes = n_points;
  std::vector<double> coords(n_points * 2);
  for (std::size_t i = 0; i < n_points; ++i) {
    coords[2 * i] = px[i];
    coords[2 * i + 1] = py[i];
  }
  g.node_features = Tensor::from_values(n_points, 2, std::move(coords));

  // undirected kNN, deduplicated
  std::set<std::pair<std::size_t, std::size_t>> chosen;
  for (std::size_t i = 0; i < n_points; ++i) {
    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(n_points - 1);
    for (std::size_t j = 0; j < n_points; ++j) {
      if (j == i) continue;
      const double dx = px[i] - px[j], dy = py[i] - py[j];
      dist.emplace_back(dx * dx + dy * dy, j);
    }
    std::partial_sort(dist.begin(), dist.begin() + k_neighbors, dist.end());
    for (std::size_t kk = 0; kk < k_neighbors; ++kk) {
      chosen.insert(std::minmax(i, dist[kk].second));
    }
  }
  for (const auto& [u, v] : chosen) g.edges.push_back({u, v});

  // midpoints sorted along x, equal-count buckets, color from the bucket
  // centroid (blue channel separates buckets even when centroids collide)
  const std::size_t m = g.edges.size();
  std::vector<double> mx(m), my(m);
  for (std::size_t i = 0; i < m; ++i) {
    mx[i] = 0.5 * (px[g.edges[i].u] + px[g.edges[i].v]);
    my[i] = 0.5 * (py[g.edges[i].u] + py[g.edges[i].v]);
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (mx[a] != mx[b]) return mx[a] < mx[b];
    if (my[a] != my[b]) return my[a] < my[b];
    return a < b;
  });
  const std::size_t clusters = std::min(n_color_clusters, m);
  std::vector<std::size_t> bucket(m);
  for (std::size_t r = 0; r < m; ++r) {
    bucket[order[r]] = std::min(clusters - 1, r * clusters / m);
  }
  std::vector<double> cx(clusters, 0.0), cy(clusters, 0.0);
  std::vector<std::size_t> cnt(clusters, 0);
  for (std::size_t i = 0; i < m; ++i) {
    cx[bucket[i]] += mx[i];
    cy[bucket[i]] += my[i];
    ++cnt[bucket[i]];
  }
  const auto [xmin_it, xmax_it] = std::minmax_element(mx.begin(), mx.end());
  const auto [ymin_it, ymax_it] = std::minmax_element(my.begin(), my.end());
  const double xspan = std::max(1e-12, *xmax_it - *xmin_it);
  const double yspan = std::max(1e-12, *ymax_it - *ymin_it);
  std::vector<double> colors(m * 3);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t b = bucket[i];
    const double ccx = cx[b] / static_cast<double>(cnt[b]);
    const double ccy = cy[b] / static_cast<double>(cnt[b]);
    colors[3 * i] = std::clamp((ccx - *xmin_it) / xspan, 0.0, 1.0);
    colors[3 * i + 1] = std::clamp((ccy - *ymin_it) / yspan, 0.0, 1.0);
    colors[3 * i + 2] =
        (static_cast<double>(b) + 0.5) / static_cast<double>(clusters);
  }
  g.edge_features = Tensor::from_values(m, 3, std::move(colors));
  validate(g);
  return g;
}

std::size_t value_pair_category(std::size_t a, std::size_t b) {
  const auto [lo, hi] = std::minmax(a, b);
  // (0,0) (0,1) (0,2) (1,1) (1,2) (2,2)
  static constexpr std::size_t table[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
  return table[lo][hi];
}

Graph gen_erdos_renyi_paired(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n < 2) throw ValueError("gen_erdos_renyi_paired: need at least 2 nodes");
  const std::size_t cap = n * (n - 1) / 2;
  if (m > cap) {
    throw ValueError("gen_erdos_renyi_paired: m = " + std::to_string(m) +
                     " exceeds the simple-graph bound " + std::to_string(cap));
  }
  std::mt19937_64 rng(seed);

  std::vector<std::size_t> value(n);
  std::uniform_int_distribution<std::size_t> vdist(0, 2);
  for (auto& v : value) v = vdist(rng);

  Graph g;
  g.num_nodes = n;
  std::vector<double> x(n * 3, 0.0);
  for (std::size_t v = 0; v < n; ++v) x[v * 3 + value[v]] = 1.0;
  g.node_features = Tensor::from_values(n, 3, std::move(x));

  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(m * 2);
  std::uniform_int_distribution<std::size_t> ndist(0, n - 1);
  while (g.edges.size() < m) {
    const std::size_t u = ndist(rng), v = ndist(rng);
    if (u == v) continue;
    const auto [lo, hi] = std::minmax(u, v);
    const std::uint64_t key =
        (static_cast<std::uint64_t>(lo) << 32) | static_cast<std::uint64_t>(hi);
    if (!chosen.insert(key).second) continue;
    g.edges.push_back({u, v});
  }

  std::vector<double> e(m * 6, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    e[i * 6 + value_pair_category(value[g.edges[i].u], value[g.edges[i].v])] = 1.0;
  }
  g.edge_features = Tensor::from_values(m, 6, std::move(e));
  validate(g);
  return g;
}

Graph gen_star(std::size_t n_leaves) {
  if (n_leaves < 2) throw ValueError("gen_star: need at least 2 leaves");
  Graph g;
  g.num_nodes = n_leaves + 1;
  for (std::size_t l = 1; l <= n_leaves; ++l) g.edges.push_back({0, l});
  g.node_features = degree_onehot_features(g);
  g.edge_features = constant_edge_features(n_leaves);
  validate(g);
  return g;
}

Graph gen_scale_free(std::size_t n, std::uint64_t seed) {
  constexpr std::size_t kAttach = 4;
  if (n < kAttach + 1) throw ValueError("gen_scale_free: need at least 5 nodes");
  std::mt19937_64 rng(seed);

  Graph g;
  g.num_nodes = n;
  // small seed clique, then preferential attachment via the endpoint pool
  std::vector<std::size_t> pool;
  for (std::size_t u = 0; u < kAttach; ++u) {
    for (std::size_t v = u + 1; v < kAttach; ++v) {
      g.edges.push_back({u, v});
      pool.push_back(u);
      pool.push_back(v);
    }
  }
  for (std::size_t v = kAttach; v < n; ++v) {
    std::set<std::size_t> targets;
    while (targets.size() < kAttach) {
      std::uniform_int_distribution<std::size_t> pdist(0, pool.size() - 1);
      targets.insert(pool[pdist(rng)]);
    }
    for (std::size_t t : targets) {
      g.edges.push_back({t, v});
      pool.push_back(t);
      pool.push_back(v);
    }
  }
  g.node_features = degree_onehot_features(g);
  g.edge_features = constant_edge_features(g.edges.size());
  validate(g);
  return g;
}

Graph gen_cycle_or_path(std::size_t n, bool is_cycle) {
  if (n < 2 || (is_cycle && n < 3)) {
    throw ValueError("gen_cycle_or_path: size too small");
  }
  Graph g;
  g.num_nodes = n;
  for (std::size_t v = 0; v + 1 < n; ++v) g.edges.push_back({v, v + 1});
  if (is_cycle) g.edges.push_back({n - 1, 0});
  g.node_features = degree_onehot_features(g);
  g.edge_features = constant_edge_features(g.edges.size());
  g.label = is_cycle ? 1 : 0;
  validate(g);
  return g;
}

// --- JSON ---------------------------------------------------------------

namespace {

// %.17g keeps doubles bit-exact through a write/read cycle
void append_number(std::string& out, double v) {
  if (!std::isfinite(v)) {
    throw ValueError("graph json: non-finite feature value");
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

void append_matrix(std::string& out, const Tensor& t) {
  out += '[';
  for (std::size_t i = 0; i < t.rows(); ++i) {
    if (i) out += ", ";
    out += '[';
    for (std::size_t j = 0; j < t.cols(); ++j) {
      if (j) out += ", ";
      append_number(out, t.at(i, j));
    }
    out += ']';
  }
  out += ']';
}

Tensor parse_matrix(const json& arr, std::size_t expect_rows, const char* what) {
  if (!arr.is_array()) {
    throw ParseError(std::string("graph json: ") + what + " must be an array");
  }
  if (arr.size() != expect_rows) {
    throw ParseError(std::string("graph json: ") + what + " has " +
                     std::to_string(arr.size()) + " rows, expected " +
                     std::to_string(expect_rows));
  }
  std::size_t cols = 0;
  std::vector<double> vals;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& row = arr[i];
    if (!row.is_array()) {
      throw ParseError(std::string("graph json: ") + what + " row " +
                       std::to_string(i) + " is not an array");
    }
    if (i == 0) {
      cols = row.size();
      vals.reserve(expect_rows * cols);
    } else if (row.size() != cols) {
      throw ParseError(std::string("graph json: ") + what + " row " +
                       std::to_string(i) + " has ragged length");
    }
    for (const auto& x : row) {
      if (!x.is_number()) {
        throw ParseError(std::string("graph json: ") + what +
                         " contains a non-number");
      }
      vals.push_back(x.get<double>());
    }
  }
  return Tensor::from_values(expect_rows, cols, std::move(vals));
}

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void store_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw ParseError("write failed: " + path);
}

std::vector<std::pair<std::size_t, std::size_t>> parse_pairs(const json& arr,
                                                             const char* what) {
  if (!arr.is_array()) {
    throw ParseError(std::string("graph json: ") + what + " must be an array");
  }
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& p = arr[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() ||
        !p[1].is_number_integer() || p[0].get<long long>() < 0 ||
        p[1].get<long long>() < 0) {
      throw ParseError(std::string("graph json: ") + what + " entry " +
                       std::to_string(i) + " is not a pair of indices");
    }
    out.emplace_back(p[0].get<std::size_t>(), p[1].get<std::size_t>());
  }
  return out;
}

}  // namespace

Graph read_graph_json(const std::string& path) {
  const json j = load_file(path);
  if (!j.is_object() || !j.contains("num_nodes") ||
      !j["num_nodes"].is_number_integer()) {
    throw ParseError(path + ": missing integer num_nodes");
  }
  Graph g;
  g.num_nodes = j["num_nodes"].get<std::size_t>();
  const auto pairs = parse_pairs(j.value("edges", json::array()), "edges");
  for (const auto& [u, v] : pairs) g.edges.push_back({u, v});

  if (j.contains("node_features")) {
    g.node_features = parse_matrix(j["node_features"], g.num_nodes, "node_features");
  } else {
    g.node_features = Tensor::zeros(g.num_nodes, 0);
  }
  if (j.contains("edge_features")) {
    g.edge_features = parse_matrix(j["edge_features"], g.edges.size(), "edge_features");
  } else {
    g.edge_features = Tensor::zeros(g.edges.size(), 0);
  }
  if (j.contains("label")) {
    if (!j["label"].is_number_integer()) {
      throw ParseError(path + ": label must be an integer");
    }
    g.label = j["label"].get<int>();
  }
  validate(g);
  return g;
}

void write_graph_json(const Graph& g, const std::string& path) {
  validate(g);
  std::string out;
  out += "{\n  \"num_nodes\": " + std::to_string(g.num_nodes) + ",\n";
  out += "  \"node_features\": ";
  append_matrix(out, g.node_features);
  out += ",\n  \"edges\": [";
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    if (i) out += ", ";
    out += "[" + std::to_string(g.edges[i].u) + ", " +
           std::to_string(g.edges[i].v) + "]";
  }
  out += "],\n  \"edge_features\": ";
  append_matrix(out, g.edge_features);
  if (g.label) {
    out += ",\n  \"label\": " + std::to_string(*g.label);
  }
  out += "\n}\n";
  store_file(path, out);
}

DualHypergraph read_dual_json(const std::string& path) {
  const json j = load_file(path);
  for (const char* key : {"num_dual_nodes", "num_hyperedges"}) {
    if (!j.contains(key) || !j[key].is_number_integer()) {
      throw ParseError(path + ": missing integer " + std::string(key));
    }
  }
  DualHypergraph h;
  h.num_dual_nodes = j["num_dual_nodes"].get<std::size_t>();
  h.num_hyperedges = j["num_hyperedges"].get<std::size_t>();
  const auto pairs = parse_pairs(j.value("incidence", json::array()), "incidence");
  for (const auto& [d, e] : pairs) h.incidence.push_back({d, e});
  h.dual_node_features = j.contains("dual_node_features")
                             ? parse_matrix(j["dual_node_features"],
                                            h.num_dual_nodes, "dual_node_features")
                             : Tensor::zeros(h.num_dual_nodes, 0);
  h.hyperedge_features = j.contains("hyperedge_features")
                             ? parse_matrix(j["hyperedge_features"],
                                            h.num_hyperedges, "hyperedge_features")
                             : Tensor::zeros(h.num_hyperedges, 0);
  return h;
}

void write_dual_json(const DualHypergraph& h, const std::string& path) {
  std::string out;
  out += "{\n  \"num_dual_nodes\": " + std::to_string(h.num_dual_nodes) + ",\n";
  out += "  \"dual_node_features\": ";
  append_matrix(out, h.dual_node_features);
  out += ",\n  \"incidence\": [";
  for (std::size_t i = 0; i < h.incidence.size(); ++i) {
    if (i) out += ", ";
    out += "[" + std::to_string(h.incidence[i].dual_node) + ", " +
           std::to_string(h.incidence[i].hyperedge) + "]";
  }
  out += "],\n  \"num_hyperedges\": " + std::to_string(h.num_hyperedges) + ",\n";
  out += "  \"hyperedge_features\": ";
  append_matrix(out, h.hyperedge_features);
  out += "\n}\n";
  store_file(path, out);
}

GraphFileKind probe_graph_json(const std::string& path) {
  const json j = load_file(path);
  if (j.is_object() && j.contains("num_dual_nodes")) return GraphFileKind::Dual;
  if (j.is_object() && j.contains("num_nodes")) return GraphFileKind::Graph;
  throw ParseError(path + ": neither a graph nor a dual-hypergraph file");
}

}  // namespace ehg
