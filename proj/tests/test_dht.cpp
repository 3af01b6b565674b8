#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ehg/dht.hpp"
#include "ehg/error.hpp"
#include "support/test_graphs.hpp"

using namespace ehg;

namespace {

Graph path3() {
  Graph g;
  g.num_nodes = 3;
  g.edges = {{0, 1}, {1, 2}};
  g.node_features = Tensor::from_rows({{1}, {2}, {3}});
  g.edge_features = Tensor::from_rows({{10}, {20}});
  return g;
}

}  // namespace

TEST_CASE("dual pair list is the positional reshape of the edge list") {
  auto h = dht(path3());
  REQUIRE(h.incidence.size() == 4);
  CHECK(h.incidence[0] == IncidencePair{0, 0});
  CHECK(h.incidence[1] == IncidencePair{0, 1});
  CHECK(h.incidence[2] == IncidencePair{1, 1});
  CHECK(h.incidence[3] == IncidencePair{1, 2});
  CHECK(h.num_dual_nodes == 2);
  CHECK(h.num_hyperedges == 3);
}

TEST_CASE("dual transformation swaps the feature matrices") {
  Graph g;
  g.num_nodes = 2;
  g.edges = {{0, 1}};
  g.node_features = Tensor::from_rows({{100}, {200}});
  g.edge_features = Tensor::from_rows({{7}});
  auto h = dht(g);
  CHECK(h.dual_node_features.at(0, 0) == 7.0);
  CHECK(h.hyperedge_features.at(0, 0) == 100.0);
  CHECK(h.hyperedge_features.at(1, 0) == 200.0);

  Graph empty;
  empty.num_nodes = 3;
  empty.node_features = Tensor::zeros(3, 2);
  empty.edge_features = Tensor::zeros(0, 1);
  auto he = dht(empty);
  CHECK(he.incidence.empty());
  CHECK(he.num_dual_nodes == 0);
  CHECK(he.num_hyperedges == 3);
}

TEST_CASE("inverse recovers the graph and rejects broken layouts") {
  auto g = path3();
  CHECK(testsupport::graphs_equal_bitexact(dht_inverse(dht(g)), g));

  // hand-built pair list for a single edge (0, 1)
  DualHypergraph h;
  h.num_dual_nodes = 1;
  h.dual_node_features = Tensor::from_rows({{5}});
  h.num_hyperedges = 2;
  h.hyperedge_features = Tensor::from_rows({{1}, {2}});
  h.incidence = {{0, 0}, {0, 1}};
  auto back = dht_inverse(h);
  REQUIRE(back.edges.size() == 1);
  CHECK(back.edges[0] == Edge{0, 1});

  // a dual node with three incidences is not 2-regular
  DualHypergraph bad = h;
  bad.incidence = {{0, 0}, {0, 1}, {0, 1}};
  try {
    dht_inverse(bad);
    FAIL("expected GraphError");
  } catch (const GraphError& e) {
    CHECK(e.kind() == GraphError::Kind::NotTwoRegular);
  }
}

TEST_CASE("bijectivity on random graphs") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 100; ++trial) {
    Graph g = testsupport::random_graph(rng, 50, 200);
    auto h = dht(g);
    CHECK(h.incidence.size() == 2 * g.num_edges());
    CHECK(testsupport::graphs_equal_bitexact(dht_inverse(h), g));
  }
}

TEST_CASE("dual incidence is the transpose of the source incidence") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    Graph g = testsupport::random_graph(rng);
    auto inc = to_dense_incidence(g);
    auto h = dht(g);
    // rebuild the dual's dense incidence (m dual nodes x n hyperedges)
    std::vector<std::uint8_t> dual(h.num_dual_nodes * h.num_hyperedges, 0);
    for (const auto& p : h.incidence) {
      dual[p.dual_node * h.num_hyperedges + p.hyperedge] = 1;
    }
    for (std::size_t i = 0; i < inc.rows; ++i) {
      for (std::size_t j = 0; j < inc.cols; ++j) {
        CHECK(inc.at(i, j) == dual[j * h.num_hyperedges + i]);
      }
    }
  }
}

TEST_CASE("line graph sizes") {
  Graph star;
  star.num_nodes = 5;
  star.edges = {{0, 1}, {0, 2}, {0, 3}, {0, 4}};
  star.node_features = Tensor::zeros(5, 1);
  star.edge_features = Tensor::zeros(4, 1);
  CHECK(line_graph(star).edges.size() == 6);  // C(4,2)

  CHECK(line_graph(path3()).edges.size() == 1);

  Graph single;
  single.num_nodes = 2;
  single.edges = {{0, 1}};
  single.node_features = Tensor::zeros(2, 1);
  single.edge_features = Tensor::zeros(1, 1);
  auto lg = line_graph(single);
  CHECK(lg.num_nodes == 1);
  CHECK(lg.edges.empty());
}
