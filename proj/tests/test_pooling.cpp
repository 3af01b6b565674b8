#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ehg/dht.hpp"
#include "ehg/error.hpp"
#include "ehg/pooling.hpp"
#include "support/oracles.hpp"
#include "support/test_graphs.hpp"

using namespace ehg;
using namespace ehg::testsupport;

namespace {

Graph path3() {
  Graph g;
  g.num_nodes = 3;
  g.edges = {{0, 1}, {1, 2}};
  g.node_features = Tensor::from_rows({{1}, {2}, {3}});
  g.edge_features = Tensor::from_rows({{10}, {20}});
  return g;
}

ClusterAssignment identity_assignment(std::size_t m) {
  std::vector<double> id(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) id[i * m + i] = 1.0;
  return {Tensor::from_values(m, m, id), false};
}

}  // namespace

TEST_CASE("assignment rows are stochastic") {
  std::mt19937_64 rng(5);
  AssignmentGenerator gen(3, 4, rng);
  auto e = random_tensor(6, 3, rng);
  auto a = make_assignment(gen, e);
  CHECK_FALSE(a.overcomplete);
  for (std::size_t i = 0; i < 6; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < 4; ++j) s += a.c.at(i, j);
    CHECK(std::abs(s - 1.0) < 1e-9);
  }
}

TEST_CASE("assignment corner cases") {
  std::mt19937_64 rng(6);
  // one cluster: softmax over a single logit is the all-ones column
  AssignmentGenerator one(2, 1, rng);
  auto a1 = make_assignment(one, random_tensor(5, 2, rng));
  for (std::size_t i = 0; i < 5; ++i) CHECK(a1.c.at(i, 0) == 1.0);

  // zero weights: every row uniform
  AssignmentGenerator gen(2, 4, rng);
  set_values(gen.weight, std::vector<double>(8, 0.0));
  auto au = make_assignment(gen, random_tensor(3, 2, rng));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(au.c.at(i, j) == doctest::Approx(0.25).epsilon(1e-12));

  // strongly separated logits: one edge, logits [10, -10]
  AssignmentGenerator sep(1, 2, rng);
  set_values(sep.weight, {10.0, -10.0});
  auto as = make_assignment(sep, Tensor::from_rows({{1}}));
  CHECK(std::abs(as.c.at(0, 0) - 1.0) < 1e-4);
  CHECK(std::abs(as.c.at(0, 1)) < 1e-4);

  // over-complete clustering is permitted but flagged
  AssignmentGenerator big(1, 5, rng);
  auto ab = make_assignment(big, Tensor::from_rows({{1}}));
  CHECK(ab.overcomplete);
}

TEST_CASE("hypercluster with the identity assignment is the identity") {
  auto g = path3();
  auto pooled = hypercluster(g, g.edge_features, identity_assignment(2));
  CHECK(tensors_equal_bitexact(pooled.pooled_edge_features, g.edge_features));
  auto inc = to_dense_incidence(g);
  for (std::size_t v = 0; v < 3; ++v)
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(pooled.soft_incidence.at(v, j) == double(inc.at(v, j)));
}

TEST_CASE("hypercluster: hard single cluster sums features and incidence columns") {
  auto g = path3();
  ClusterAssignment hard{Tensor::from_rows({{1}, {1}}), false};
  auto pooled = hypercluster(g, g.edge_features, hard);
  CHECK(pooled.pooled_edge_features.at(0, 0) == 30.0);  // 10 + 20
  // column = sum of the two incidence columns: node1 touches both edges
  CHECK(pooled.soft_incidence.at(0, 0) == 1.0);
  CHECK(pooled.soft_incidence.at(1, 0) == 2.0);
  CHECK(pooled.soft_incidence.at(2, 0) == 1.0);
  CHECK(pooled.node_features.values()[0] == 1.0);  // nodes untouched
}

TEST_CASE("hypercluster soft incidence equals dense M*C on random graphs") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = random_graph(rng, 10, 25);
    if (g.num_edges() == 0) continue;
    AssignmentGenerator gen(g.edge_dim(), 3, rng);
    auto a = make_assignment(gen, g.edge_features);
    auto pooled = hypercluster(g, g.edge_features, a);
    auto inc = to_dense_incidence(g);
    for (std::size_t v = 0; v < g.num_nodes; ++v) {
      for (std::size_t j = 0; j < 3; ++j) {
        double want = 0.0;
        for (std::size_t i = 0; i < g.num_edges(); ++i)
          want += double(inc.at(v, i)) * a.c.at(i, j);
        CHECK(pooled.soft_incidence.at(v, j) == doctest::Approx(want).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("unpool broadcasts cluster mixtures") {
  // identity round trip
  auto g = path3();
  auto id = identity_assignment(2);
  auto pooled = hypercluster(g, g.edge_features, id);
  auto back = hypercluster_unpool(id, pooled.pooled_edge_features);
  CHECK(tensors_equal_bitexact(back, g.edge_features));

  // hard single cluster: every edge receives the pooled row
  ClusterAssignment hard{Tensor::from_rows({{1}, {1}}), false};
  auto pooled1 = hypercluster(g, g.edge_features, hard);
  auto back1 = hypercluster_unpool(hard, pooled1.pooled_edge_features);
  CHECK(back1.at(0, 0) == 30.0);
  CHECK(back1.at(1, 0) == 30.0);

  // soft mixture by hand
  ClusterAssignment half{Tensor::from_rows({{0.5, 0.5}}), false};
  auto mixed = hypercluster_unpool(half, Tensor::from_rows({{2}, {4}}));
  CHECK(mixed.at(0, 0) == 3.0);
}

TEST_CASE("hyperdrop score stays inside the tanh range") {
  std::mt19937_64 rng(13);
  Graph g = random_graph(rng, 10, 30);
  if (g.num_edges() == 0) return;
  ScoreLayer s(g.edge_dim(), rng);
  auto z = hyperdrop_score(s, g, g.edge_features);
  REQUIRE(z.rows() == g.num_edges());
  for (std::size_t i = 0; i < z.rows(); ++i) CHECK(std::abs(z.at(i, 0)) < 1.0);

  // zero weights give a zero score vector
  set_values(s.inner.weight, std::vector<double>(g.edge_dim(), 0.0));
  set_values(s.inner.bias, {0.0});
  auto z0 = hyperdrop_score(s, g, g.edge_features);
  for (std::size_t i = 0; i < z0.rows(); ++i) CHECK(z0.at(i, 0) == 0.0);
}

TEST_CASE("hyperdrop score: hand-set pre-activation of 1") {
  Graph g;
  g.num_nodes = 2;
  g.edges = {{0, 1}};
  g.node_features = Tensor::zeros(2, 1);
  g.edge_features = Tensor::from_rows({{1}});
  std::mt19937_64 rng(17);
  ScoreLayer s(1, rng);
  // single edge doubles its feature, so weight 0.5 gives pre-activation 1
  set_values(s.inner.weight, {0.5});
  set_values(s.inner.bias, {0.0});
  auto z = hyperdrop_score(s, g, g.edge_features);
  CHECK(z.at(0, 0) == doctest::Approx(std::tanh(1.0)).epsilon(1e-12));
}

TEST_CASE("topk selection") {
  auto z = Tensor::from_rows({{0.9}, {-0.2}, {0.5}, {0.5}});
  CHECK(topk_select(z, 0.5) == std::vector<std::size_t>({0, 2}));
  CHECK(topk_select(z, 1.0) == std::vector<std::size_t>({0, 1, 2, 3}));

  auto z2 = Tensor::from_rows({{0.1}, {0.3}, {0.2}});
  CHECK(topk_select(z2, 0.34) == std::vector<std::size_t>({1, 2}));

  CHECK_THROWS_AS(topk_select(z, 0.0), ValueError);
  CHECK_THROWS_AS(topk_select(z, 1.5), ValueError);
}

TEST_CASE("argmax invariance: positive scaling never changes the selection") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t m = 1 + rng() % 12;
    std::vector<double> zv(m);
    for (auto& x : zv) x = dist(rng);
    auto z = Tensor::from_values(m, 1, zv);
    for (auto& x : zv) x *= 37.5;
    auto zs = Tensor::from_values(m, 1, zv);
    const double ratio = 0.1 + 0.9 * dist(rng) * dist(rng);
    const double r = std::min(1.0, std::abs(ratio) + 0.05);
    CHECK(topk_select(z, r) == topk_select(zs, r));
  }
}

TEST_CASE("hyperdrop preserves nodes and gates kept features") {
  // triangle, keep_ratio 0.6 -> k = 2, the negative-scored edge is dropped
  Graph tri;
  tri.num_nodes = 3;
  tri.edges = {{0, 1}, {1, 2}, {0, 2}};
  tri.node_features = Tensor::from_rows({{1}, {2}, {3}});
  tri.edge_features = Tensor::from_rows({{1}, {1}, {1}});
  auto z = Tensor::from_rows({{0.9}, {0.8}, {-0.5}});
  auto pooled = hyperdrop(tri, tri.edge_features, z, 0.6);
  CHECK(pooled.kept_indices == std::vector<std::size_t>({0, 1}));
  CHECK(pooled.base.num_nodes == 3);
  CHECK(tensors_equal_bitexact(pooled.base.node_features, tri.node_features));
  CHECK(pooled.base.edges.size() == 2);
  CHECK(pooled.base.edge_features.at(0, 0) == doctest::Approx(0.9));
  CHECK(pooled.base.edge_features.at(1, 0) == doctest::Approx(0.8));

  // keep_ratio 1: everything stays, features gated by the scores
  auto full = hyperdrop(tri, tri.edge_features, z, 1.0);
  CHECK(full.base.edges.size() == 3);
  CHECK(full.base.edge_features.at(2, 0) == doctest::Approx(-0.5));

  // dropping the middle edge of a path isolates a node but keeps it
  auto g = path3();
  auto zp = Tensor::from_rows({{0.9}, {-0.9}});
  auto dropped = hyperdrop(g, g.edge_features, zp, 0.5);
  CHECK(dropped.base.num_nodes == 3);
  CHECK(dropped.base.edges.size() == 1);
  CHECK(dropped.base.edges[0] == Edge{0, 1});
}

TEST_CASE("hyperdrop equals node drop on the dual hypergraph") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    Graph g = random_graph(rng, 10, 25);
    if (g.num_edges() == 0) continue;
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> zv(g.num_edges());
    for (auto& x : zv) x = dist(rng);
    auto z = Tensor::from_values(g.num_edges(), 1, zv);
    const double ratio = 0.3 + 0.7 * std::abs(dist(rng));

    auto direct = hyperdrop(g, g.edge_features, z, std::min(1.0, ratio));

    // dual route: drop dual nodes of dht(g), reindex positionally, invert
    auto idx = topk_select(z, std::min(1.0, ratio));
    auto h = dht(g);
    DualHypergraph hd;
    hd.num_dual_nodes = idx.size();
    hd.num_hyperedges = h.num_hyperedges;
    hd.hyperedge_features = h.hyperedge_features;
    std::vector<double> feats;
    for (std::size_t newi = 0; newi < idx.size(); ++newi) {
      const std::size_t old = idx[newi];
      hd.incidence.push_back({newi, h.incidence[2 * old].hyperedge});
      hd.incidence.push_back({newi, h.incidence[2 * old + 1].hyperedge});
      for (std::size_t j = 0; j < g.edge_dim(); ++j)
        feats.push_back(g.edge_features.at(old, j) * zv[old]);
    }
    hd.dual_node_features =
        Tensor::from_values(idx.size(), g.edge_dim(), feats);
    Graph dual_route = dht_inverse(hd);

    CHECK(dual_route.num_nodes == direct.base.num_nodes);
    REQUIRE(dual_route.edges.size() == direct.base.edges.size());
    for (std::size_t i = 0; i < dual_route.edges.size(); ++i)
      CHECK(dual_route.edges[i] == direct.base.edges[i]);
    for (std::size_t i = 0; i < dual_route.edges.size(); ++i)
      for (std::size_t j = 0; j < g.edge_dim(); ++j)
        CHECK(dual_route.edge_features.at(i, j) ==
              doctest::Approx(direct.base.edge_features.at(i, j)).epsilon(1e-15));
  }
}

TEST_CASE("weighted message passing over the pooled graph") {
  // path 0-1, Z = [0.5], identity weights: X'_0 = 1/2*2 + 0.5*(1/2*4) = 2
  Graph g;
  g.num_nodes = 2;
  g.edges = {{0, 1}};
  g.node_features = Tensor::from_rows({{2}, {4}});
  g.edge_features = Tensor::from_rows({{1}});
  auto z = Tensor::from_rows({{0.5}});
  auto pooled = hyperdrop(g, g.edge_features, z, 1.0);

  std::mt19937_64 rng(29);
  GcnLayer l(1, 1, rng);
  set_values(l.weight, {1.0});
  set_values(l.bias, {0.0});
  auto out = gcn_with_edge_weights(l, pooled, g.node_features);
  CHECK(out.at(0, 0) == doctest::Approx(2.0));
  CHECK(out.at(1, 0) == doctest::Approx(2.5));  // 1/2*4 + 0.5*(1/2*2)

  // all weights 1 equals the plain forward on the same structure
  auto ones = Tensor::from_rows({{1.0}});
  auto p1 = hyperdrop(g, g.edge_features, ones, 1.0);
  auto a = gcn_with_edge_weights(l, p1, g.node_features);
  auto b = gcn_forward(l, p1.base, g.node_features);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a.values()[i] == doctest::Approx(b.values()[i]).epsilon(1e-15));

  // zero weight: neighbor contributes nothing beyond self terms
  auto z0 = Tensor::from_rows({{0.0}});
  auto p0 = hyperdrop(g, g.edge_features, z0, 1.0);
  auto out0 = gcn_with_edge_weights(l, p0, g.node_features);
  CHECK(out0.at(0, 0) == doctest::Approx(1.0));  // just 1/2 * 2
}

TEST_CASE("gradient checks through the pooling paths") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 4; ++trial) {
    Graph g = random_graph(rng, 8, 14);
    if (g.num_edges() < 2) continue;
    const std::size_t de = g.edge_dim();

    {
      // assignment + cluster + unpool pipeline
      AssignmentGenerator gen(de, 3, rng);
      Tensor r = random_tensor(g.num_edges(), de, rng);
      auto res = gradient_check(
          [&]() {
            auto a = make_assignment(gen, g.edge_features);
            auto pooled = hypercluster(g, g.edge_features, a);
            auto back = hypercluster_unpool(a, pooled.pooled_edge_features);
            return sum_all(mul(back, r));
          },
          gen.params());
      CHECK(res.max_rel_err < 1e-4);
    }
    {
      // score layer through tanh
      ScoreLayer s(de, rng);
      Tensor r = random_tensor(g.num_edges(), 1, rng);
      auto res = gradient_check(
          [&]() {
            return sum_all(mul(hyperdrop_score(s, g, g.edge_features), r));
          },
          s.params());
      CHECK(res.max_rel_err < 1e-4);
    }
    {
      // drop gate at a fixed selection (top-k flips are not differentiable
      // events; the gate path is)
      ScoreLayer s(de, rng);
      Tensor r = random_tensor(
          topk_select(hyperdrop_score(s, g, g.edge_features), 0.5).size(), de,
          rng);
      auto res = gradient_check(
          [&]() {
            auto z = hyperdrop_score(s, g, g.edge_features);
            auto pooled = hyperdrop(g, g.edge_features, z, 0.5);
            return sum_all(mul(pooled.base.edge_features, r));
          },
          s.params());
      CHECK(res.max_rel_err < 1e-4);
    }
  }
}
