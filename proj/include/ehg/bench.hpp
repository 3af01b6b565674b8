#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ehg/graph.hpp"

// Benchmark harness for the two complexity comparisons: graph-to-dual
// transformation vs line-graph construction, and node vs edge message
// passing. Structural counts are the primary outputs (they are
// machine-independent); wall times are secondary evidence. Timings are
// medians over repeats with one discarded warm-up, and short operations are
// batched so each sample spans at least a millisecond.

namespace ehg {

struct TransformBenchRow {
  std::size_t m = 0;
  double dht_seconds = 0.0;
  double linegraph_seconds = 0.0;
  std::size_t dht_pairs = 0;        // always 2m
  std::size_t linegraph_edges = 0;  // sum over nodes of C(deg, 2)
};

/// Seeded ER graphs with num_nodes nodes at each edge count in sizes
/// (ascending required).
std::vector<TransformBenchRow> bench_transform(const std::vector<std::size_t>& sizes,
                                               std::size_t repeats,
                                               std::size_t num_nodes = 1000,
                                               std::uint64_t seed = 0);

struct MessagePassingBenchRow {
  std::string name;
  std::size_t n = 0;
  std::size_t m = 0;
  double node_mp_seconds = 0.0;  // one node-level forward
  double edge_mp_seconds = 0.0;  // one edge-level forward on the dual
  double node_mp_spread = 0.0;   // max - min across repeats
  double edge_mp_spread = 0.0;
};

/// Single-threaded by default for stable timings; parallel fans the
/// independent per-graph measurements out across threads.
std::vector<MessagePassingBenchRow> bench_message_passing(
    const std::vector<Graph>& graphs, const std::vector<std::string>& names,
    std::size_t repeats, std::size_t hidden = 32, std::uint64_t seed = 0,
    bool parallel = false);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Expected line-graph edge count from the degree sequence alone.
std::size_t line_graph_edge_count(const Graph& g);

void write_transform_csv(const std::string& path,
                         const std::vector<TransformBenchRow>& rows);
void write_mp_csv(const std::string& path,
                  const std::vector<MessagePassingBenchRow>& rows);

std::string format_transform_table(const std::vector<TransformBenchRow>& rows);
std::string format_mp_table(const std::vector<MessagePassingBenchRow>& rows);

}  // namespace ehg
