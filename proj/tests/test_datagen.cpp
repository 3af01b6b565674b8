#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "ehg/datagen.hpp"
#include "ehg/dht.hpp"
#include "ehg/error.hpp"
#include "support/test_graphs.hpp"

using namespace ehg;
using namespace ehg::testsupport;

namespace {

struct TempDir {
  std::filesystem::path dir;
  TempDir() {
    dir = std::filesystem::temp_directory_path() /
          ("ehg_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
  }
  ~TempDir() { std::filesystem::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("clustered edge colors") {
  auto g = gen_clustered_edge_colors(100, 4, 3, 11);
  CHECK(g.num_nodes == 100);
  CHECK(g.node_dim() == 2);
  CHECK(g.edge_dim() == 3);
  CHECK_NOTHROW(validate(g));

  std::set<std::array<double, 3>> distinct;
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(g.edge_features.at(i, j) >= 0.0);
      CHECK(g.edge_features.at(i, j) <= 1.0);
    }
    distinct.insert({g.edge_features.at(i, 0), g.edge_features.at(i, 1),
                     g.edge_features.at(i, 2)});
  }
  CHECK(distinct.size() == 3);

  // single cluster: all edge features identical
  auto g1 = gen_clustered_edge_colors(30, 3, 1, 5);
  std::set<std::array<double, 3>> one;
  for (std::size_t i = 0; i < g1.num_edges(); ++i) {
    one.insert({g1.edge_features.at(i, 0), g1.edge_features.at(i, 1),
                g1.edge_features.at(i, 2)});
  }
  CHECK(one.size() == 1);

  // determinism
  auto a = gen_clustered_edge_colors(50, 4, 3, 99);
  auto b = gen_clustered_edge_colors(50, 4, 3, 99);
  CHECK(graphs_equal_bitexact(a, b));

  CHECK_THROWS_AS(gen_clustered_edge_colors(2, 1, 1, 0), ValueError);
  CHECK_THROWS_AS(gen_clustered_edge_colors(10, 10, 1, 0), ValueError);
}

TEST_CASE("erdos-renyi paired categories") {
  auto g = gen_erdos_renyi_paired(50, 150, 3);
  CHECK(g.num_nodes == 50);
  CHECK(g.num_edges() == 150);
  CHECK(g.node_dim() == 3);
  CHECK(g.edge_dim() == 6);
  CHECK_NOTHROW(validate(g));

  // edge categories always match the endpoint node values (brute force)
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    std::size_t uval = 0, vval = 0;
    for (std::size_t j = 0; j < 3; ++j) {
      if (g.node_features.at(g.edges[i].u, j) == 1.0) uval = j;
      if (g.node_features.at(g.edges[i].v, j) == 1.0) vval = j;
    }
    std::size_t cat = 0, ones = 0;
    for (std::size_t j = 0; j < 6; ++j) {
      if (g.edge_features.at(i, j) == 1.0) {
        cat = j;
        ++ones;
      }
    }
    CHECK(ones == 1);
    CHECK(cat == value_pair_category(uval, vval));
  }

  // sizes from the paper-scale setup are accepted
  CHECK_NOTHROW(gen_erdos_renyi_paired(1000, 10000, 1));
  CHECK_THROWS_AS(gen_erdos_renyi_paired(4, 100, 1), ValueError);

  auto a = gen_erdos_renyi_paired(30, 60, 7);
  auto b = gen_erdos_renyi_paired(30, 60, 7);
  CHECK(graphs_equal_bitexact(a, b));
}

TEST_CASE("pair category table") {
  CHECK(value_pair_category(0, 0) == 0);
  CHECK(value_pair_category(1, 0) == 1);
  CHECK(value_pair_category(0, 2) == 2);
  CHECK(value_pair_category(1, 1) == 3);
  CHECK(value_pair_category(2, 1) == 4);
  CHECK(value_pair_category(2, 2) == 5);
}

TEST_CASE("star, scale-free, cycle and path") {
  auto star = gen_star(4);
  CHECK(star.num_nodes == 5);
  CHECK(star.num_edges() == 4);
  CHECK(node_degrees(star) == std::vector<std::size_t>({4, 1, 1, 1, 1}));
  CHECK(star.node_features.at(0, 4) == 1.0);  // hub degree capped bucket

  auto sf = gen_scale_free(100, 13);
  CHECK(sf.num_nodes == 100);
  CHECK_NOTHROW(validate(sf));
  CHECK(sf.num_edges() > 300);
  auto sf2 = gen_scale_free(100, 13);
  CHECK(graphs_equal_bitexact(sf, sf2));

  auto cyc = gen_cycle_or_path(5, true);
  CHECK(cyc.num_edges() == 5);
  CHECK(cyc.label == 1);
  auto path = gen_cycle_or_path(5, false);
  CHECK(path.num_edges() == 4);
  CHECK(path.label == 0);
  CHECK_THROWS_AS(gen_cycle_or_path(2, true), ValueError);
}

TEST_CASE("json round trip is exact") {
  TempDir tmp;
  std::mt19937_64 rng(55);
  int done = 0;
  while (done < 10) {
    Graph g = random_graph(rng, 12, 30);
    if (g.num_edges() == 0) continue;  // [] loses the feature width
    if (done % 2 == 0) g.label = done;
    ++done;
    const auto p = tmp.path("g.json");
    write_graph_json(g, p);
    Graph back = read_graph_json(p);
    CHECK(graphs_equal_bitexact(g, back));
    CHECK(back.label == g.label);
  }

  // the zero-edge corner follows the featureless convention
  Graph empty;
  empty.num_nodes = 2;
  empty.node_features = Tensor::from_rows({{1, 2}, {3, 4}});
  empty.edge_features = Tensor::zeros(0, 5);
  const auto pe = tmp.path("empty.json");
  write_graph_json(empty, pe);
  Graph back = read_graph_json(pe);
  CHECK(back.num_edges() == 0);
  CHECK(back.edge_dim() == 0);
  CHECK(tensors_equal_bitexact(back.node_features, empty.node_features));

  // a generated graph with awkward doubles
  auto gc = gen_clustered_edge_colors(40, 3, 3, 123);
  const auto p = tmp.path("gc.json");
  write_graph_json(gc, p);
  CHECK(graphs_equal_bitexact(gc, read_graph_json(p)));
}

TEST_CASE("json validation and parse errors") {
  TempDir tmp;

  {
    std::ofstream f(tmp.path("selfloop.json"));
    f << R"({"num_nodes": 2, "node_features": [[0],[0]],
           "edges": [[0,0]], "edge_features": [[1]]})";
  }
  CHECK_THROWS_AS(read_graph_json(tmp.path("selfloop.json")), GraphError);

  {
    std::ofstream f(tmp.path("broken.json"));
    f << "{ not json";
  }
  CHECK_THROWS_AS(read_graph_json(tmp.path("broken.json")), ParseError);

  {
    std::ofstream f(tmp.path("nofeat.json"));
    f << R"({"num_nodes": 2, "edges": [[0,1]]})";
  }
  Graph g = read_graph_json(tmp.path("nofeat.json"));
  CHECK(g.edge_dim() == 0);
  CHECK(g.node_dim() == 0);
  CHECK(g.num_edges() == 1);

  CHECK_THROWS_AS(read_graph_json(tmp.path("missing.json")), ParseError);
}

TEST_CASE("dual json round trip and probe") {
  TempDir tmp;
  std::mt19937_64 rng(66);
  Graph g = random_graph(rng, 8, 16);
  const auto gp = tmp.path("g.json");
  const auto dp = tmp.path("d.json");
  write_graph_json(g, gp);
  CHECK(probe_graph_json(gp) == GraphFileKind::Graph);

  auto h = dht(g);
  write_dual_json(h, dp);
  CHECK(probe_graph_json(dp) == GraphFileKind::Dual);
  auto h2 = read_dual_json(dp);
  CHECK(h2.num_dual_nodes == h.num_dual_nodes);
  CHECK(h2.num_hyperedges == h.num_hyperedges);
  REQUIRE(h2.incidence.size() == h.incidence.size());
  for (std::size_t i = 0; i < h.incidence.size(); ++i)
    CHECK(h2.incidence[i] == h.incidence[i]);
  CHECK(tensors_equal_bitexact(h2.dual_node_features, h.dual_node_features));
  CHECK(tensors_equal_bitexact(h2.hyperedge_features, h.hyperedge_features));
}
