#include "ehg/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <random>
#include <sstream>

#include "ehg/datagen.hpp"
#include "ehg/dht.hpp"
#include "ehg/error.hpp"
#include "ehg/layers.hpp"

namespace ehg {
namespace {

using clock_type = std::chrono::steady_clock;

volatile std::size_t g_sink = 0;  // defeats dead-code elimination

struct TimingStats {
  double median = 0.0;
  double spread = 0.0;  // max - min
};

// Median of `repeats` samples; each sample batches the operation until it
// spans ~1 ms so the clock granularity stays negligible. One warm-up call
// is discarded first.
template <typename F>
TimingStats time_op(F&& op, std::size_t repeats) {
  op();  // warm-up

  // calibrate the batch size
  std::size_t batch = 1;
  for (;;) {
    const auto t0 = clock_type::now();
    for (std::size_t i = 0; i < batch; ++i) op();
    const double s = std::chrono::duration<double>(clock_type::now() - t0).count();
    if (s >= 1e-3 || batch >= 1u << 20) break;
    batch *= 4;
  }

  std::vector<double> samples(repeats);
  for (auto& s : samples) {
    const auto t0 = clock_type::now();
    for (std::size_t i = 0; i < batch; ++i) op();
    s = std::chrono::duration<double>(clock_type::now() - t0).count() /
        static_cast<double>(batch);
  }
  std::sort(samples.begin(), samples.end());
  TimingStats st;
  st.median = samples[samples.size() / 2];
  st.spread = samples.back() - samples.front();
  return st;
}

}  // namespace

std::size_t line_graph_edge_count(const Graph& g) {
  std::vector<std::size_t> deg(g.num_nodes, 0);
  for (const auto& e : g.edges) {
    ++deg[e.u];
    ++deg[e.v];
  }
  std::size_t total = 0;
  for (std::size_t d : deg) total += d * (d - 1) / 2;
  return total;
}

std::vector<TransformBenchRow> bench_transform(const std::vector<std::size_t>& sizes,
                                               std::size_t repeats,
                                               std::size_t num_nodes,
                                               std::uint64_t seed) {
  if (!std::is_sorted(sizes.begin(), sizes.end())) {
    throw ValueError("bench_transform: sizes must be ascending");
  }
  std::vector<TransformBenchRow> rows;
  for (std::size_t m : sizes) {
    Graph g = gen_erdos_renyi_paired(num_nodes, m, seed);
    TransformBenchRow row;
    row.m = m;
    row.dht_pairs = 2 * m;
    row.linegraph_edges = line_graph_edge_count(g);

    row.dht_seconds = time_op(
        [&]() {
          auto h = dht(g);
          g_sink = g_sink + h.incidence.size();
        },
        repeats).median;
    row.linegraph_seconds = time_op(
        [&]() {
          auto lg = line_graph(g);
          g_sink = g_sink + lg.edges.size();
        },
        repeats).median;
    rows.push_back(row);
  }
  return rows;
}

std::vector<MessagePassingBenchRow> bench_message_passing(
    const std::vector<Graph>& graphs, const std::vector<std::string>& names,
    std::size_t repeats, std::size_t hidden, std::uint64_t seed,
    bool parallel) {
  if (graphs.size() != names.size()) {
    throw ValueError("bench_message_passing: one name per graph required");
  }

  auto measure_one = [&](std::size_t i, std::uint64_t graph_seed) {
    const Graph& g = graphs[i];
    MessagePassingBenchRow row;
    row.name = names[i];
    row.n = g.num_nodes;
    row.m = g.num_edges();

    // constant features and weights, so the forwards run without building
    // autodiff graphs
    std::mt19937_64 rng(graph_seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> xv(g.num_nodes * hidden), ev(g.num_edges() * hidden);
    for (auto& v : xv) v = dist(rng);
    for (auto& v : ev) v = dist(rng);
    Graph gb = g;
    gb.node_features = Tensor::from_values(g.num_nodes, hidden, xv);
    gb.edge_features = Tensor::from_values(g.num_edges(), hidden, ev);

    std::vector<double> wv(hidden * hidden);
    for (auto& v : wv) v = dist(rng);
    GcnLayer gcn_const;
    gcn_const.weight = Tensor::from_values(hidden, hidden, wv);
    gcn_const.bias = Tensor::zeros(1, hidden);
    for (auto& v : wv) v = dist(rng);
    EhgnnLayer ehg_const;
    ehg_const.weight = Tensor::from_values(hidden, hidden, wv);
    ehg_const.bias = Tensor::zeros(1, hidden);

    auto node_stats = time_op(
        [&]() {
          Tensor out = gcn_forward(gcn_const, gb, gb.node_features);
          g_sink = g_sink + out.rows();
        },
        repeats);
    auto edge_stats = time_op(
        [&]() {
          Tensor out = ehgnn_forward(ehg_const, gb, gb.edge_features);
          g_sink = g_sink + out.rows();
        },
        repeats);
    row.node_mp_seconds = node_stats.median;
    row.node_mp_spread = node_stats.spread;
    row.edge_mp_seconds = edge_stats.median;
    row.edge_mp_spread = edge_stats.spread;
    return row;
  };

  std::vector<MessagePassingBenchRow> rows(graphs.size());
  if (parallel) {
    std::vector<std::future<MessagePassingBenchRow>> futs;
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      futs.push_back(std::async(std::launch::async, measure_one, i, seed + i));
    }
    for (std::size_t i = 0; i < graphs.size(); ++i) rows[i] = futs[i].get();
  } else {
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      rows[i] = measure_one(i, seed + i);
    }
  }
  return rows;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ValueError("loglog_slope: need two or more points");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void write_transform_csv(const std::string& path,
                         const std::vector<TransformBenchRow>& rows) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  out << "m,dht_seconds,linegraph_seconds,dht_pairs,linegraph_edges\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%zu,%.9g,%.9g,%zu,%zu\n", r.m,
                  r.dht_seconds, r.linegraph_seconds, r.dht_pairs,
                  r.linegraph_edges);
    out << buf;
  }
}

void write_mp_csv(const std::string& path,
                  const std::vector<MessagePassingBenchRow>& rows) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  out << "graph,n,m,node_mp_seconds,edge_mp_seconds,node_mp_spread,edge_mp_spread\n";
  char buf[192];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%zu,%zu,%.9g,%.9g,%.9g,%.9g\n",
                  r.name.c_str(), r.n, r.m, r.node_mp_seconds,
                  r.edge_mp_seconds, r.node_mp_spread, r.edge_mp_spread);
    out << buf;
  }
}

std::string format_transform_table(const std::vector<TransformBenchRow>& rows) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%10s %14s %14s %12s %16s\n", "m",
                "dht[s]", "linegraph[s]", "dht_pairs", "linegraph_edges");
  out << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%10zu %14.6g %14.6g %12zu %16zu\n", r.m,
                  r.dht_seconds, r.linegraph_seconds, r.dht_pairs,
                  r.linegraph_edges);
    out << buf;
  }
  return out.str();
}

std::string format_mp_table(const std::vector<MessagePassingBenchRow>& rows) {
  std::ostringstream out;
  char buf[200];
  std::snprintf(buf, sizeof(buf), "%-14s %8s %8s %13s %13s %10s\n", "graph", "n",
                "m", "node_mp[s]", "edge_mp[s]", "ratio");
  out << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%-14s %8zu %8zu %13.6g %13.6g %10.3f\n",
                  r.name.c_str(), r.n, r.m, r.node_mp_seconds, r.edge_mp_seconds,
                  r.edge_mp_seconds / r.node_mp_seconds);
    out << buf;
  }
  return out.str();
}

}  // namespace ehg
