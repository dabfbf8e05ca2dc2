#include <doctest.h>

#include <stdexcept>

#include "linenet/channel_sim.hpp"
#include "linenet/general_net.hpp"
#include "linenet/metrics.hpp"

using namespace linenet;

namespace {

ErasureDag dag(std::uint32_t nodes, std::vector<DagEdge> edges, std::uint32_t source, std::uint32_t sink) {
  ErasureDag d;
  d.nodes = nodes;
  d.edges = std::move(edges);
  d.source = source;
  d.sink = sink;
  return d;
}

// Split at A, merge at D: S->A, A->B, A->C, B->D, C->D, D->T with a
// bottleneck-free second route S->C.
ErasureDag split_merge() {
  return dag(6, {{0, 1, 0.1}, {1, 2, 0.1}, {1, 3, 0.1}, {2, 4, 0.1}, {3, 4, 0.1}, {4, 5, 0.1}, {0, 3, 0.1}, {4, 5, 0.1}},
             0, 5);
}

}  // namespace

TEST_CASE("path decomposition") {
  auto line = dag(4, {{0, 1, 0.1}, {1, 2, 0.1}, {2, 3, 0.1}}, 0, 3);
  auto d = decompose_paths(line);
  REQUIRE(d.m() == 1);
  CHECK(d.paths[0] == std::vector<std::uint32_t>{0, 1, 2});

  auto parallel = dag(4, {{0, 1, 0.1}, {1, 3, 0.1}, {0, 2, 0.1}, {2, 3, 0.1}}, 0, 3);
  CHECK(decompose_paths(parallel).m() == 2);
  CHECK(max_flow(parallel) == 2);

  auto sm = split_merge();
  auto p = decompose_paths(sm);
  CHECK(p.m() == 2);
  std::vector<int> used(sm.edges.size(), 0);
  for (const auto& path : p.paths) {
    CHECK(sm.edges[path.front()].from == sm.source);
    CHECK(sm.edges[path.back()].to == sm.sink);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) CHECK(sm.edges[path[i]].to == sm.edges[path[i + 1]].from);
    for (auto e : path) ++used[e];
  }
  for (int u : used) CHECK(u <= 1);
}

TEST_CASE("DAG validation") {
  CHECK_THROWS_AS(dag(3, {{0, 1, 0.1}, {1, 0, 0.1}, {1, 2, 0.1}}, 0, 2).validate(), ConfigError);
  CHECK_THROWS_AS(dag(3, {{0, 1, 0.1}, {1, 2, 0.1}, {2, 1, 0.1}}, 0, 2).validate(), ConfigError);
  CHECK_THROWS_AS(dag(2, {{0, 1, 1.5}}, 0, 1).validate(), ConfigError);
  CHECK_THROWS_AS(dag(2, {{0, 0, 0.1}}, 0, 1).validate(), ConfigError);
  CHECK_THROWS_AS(decompose_paths(dag(3, {{0, 1, 0.1}}, 0, 2)), NoPathError);
  auto sm = split_merge();
  auto back = dag_from_json(to_json(sm));
  CHECK(back.edges.size() == sm.edges.size());
  CHECK(back.sink == sm.sink);
  CHECK_THROWS_AS(dag_from_json(nlohmann::json{{"nodes", 2}}), ConfigError);
}

TEST_CASE("split_blocks") {
  CHECK(split_blocks(10, 3) == std::vector<std::size_t>{4, 3, 3});
  CHECK(split_blocks(4, 4) == std::vector<std::size_t>{1, 1, 1, 1});
  CHECK_THROWS(split_blocks(4, 0));
}

TEST_CASE("end-to-end matrix") {
  auto sm = split_merge();
  auto paths = decompose_paths(sm);
  auto blocks = split_blocks(7, paths.m());
  std::vector<gf2::BitMatrix> links;
  // Identity links: every edge carries its path's block unchanged.
  std::vector<std::size_t> width(sm.edges.size(), 0);
  for (std::size_t p = 0; p < paths.m(); ++p)
    for (auto e : paths.paths[p]) width[e] = blocks[p];
  for (auto w : width) links.push_back(gf2::BitMatrix::identity(w));
  CHECK(end_to_end_matrix(sm, paths, blocks, links) == gf2::BitMatrix::identity(7));

  Rng rng(3);
  for (int t = 0; t < 1000; ++t) {
    // Random DAG: a layered graph with random extra edges.
    const std::uint32_t n = 3 + static_cast<std::uint32_t>(rng.uniform(5));
    std::vector<DagEdge> edges;
    for (std::uint32_t v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1, 0.1});
    for (int extra = 0; extra < 4; ++extra) {
      auto a = static_cast<std::uint32_t>(rng.uniform(n - 1));
      auto b = a + 1 + static_cast<std::uint32_t>(rng.uniform(n - 1 - a));
      edges.push_back({a, b, 0.1});
    }
    auto g = dag(n, edges, 0, n - 1);
    auto d = decompose_paths(g);
    const std::size_t k = d.m() + rng.uniform(20);
    auto bs = split_blocks(k, d.m());
    std::vector<std::size_t> rows_in(g.edges.size(), 0);
    std::vector<gf2::BitMatrix> mats(g.edges.size());
    for (std::size_t p = 0; p < d.m(); ++p) {
      std::size_t dim = bs[p];
      for (auto e : d.paths[p]) {
        const std::size_t out = dim + rng.uniform(4);
        mats[e] = gf2::random_full_column_rank(out, dim, rng);
        dim = out;
      }
    }
    for (std::size_t e = 0; e < mats.size(); ++e)
      if (mats[e].rows() == 0) mats[e] = gf2::BitMatrix::identity(1);
    CHECK(gf2::has_full_column_rank(end_to_end_matrix(g, d, bs, mats)));
  }
  std::vector<gf2::BitMatrix> wrong(sm.edges.size(), gf2::BitMatrix::identity(2));
  CHECK_THROWS_AS(end_to_end_matrix(sm, paths, blocks, wrong), std::invalid_argument);
}

TEST_CASE("multipath runs") {
  NetworkConfig base;
  base.scheme = SchemeId::kGreedyRandom;
  base.seed = 12;
  base.record_events = false;

  auto line = dag(3, {{0, 1, 0.1}, {1, 2, 0.1}}, 0, 2);
  auto single = run_multipath(line, 500, base);
  NetworkConfig cfg = base;
  cfg.k = 500;
  cfg.links = {{0.1}, {0.1}};
  auto direct = measure(run(cfg));
  CHECK(single.combined.completion_slot == direct.completion_slot);
  CHECK(single.combined.received == direct.received);

  auto parallel = dag(4, {{0, 1, 0.1}, {1, 3, 0.1}, {0, 2, 0.1}, {2, 3, 0.1}}, 0, 3);
  auto two = run_multipath(parallel, 10000, base);
  REQUIRE(two.combined.success);
  CHECK(two.block_sizes == std::vector<std::size_t>{5000, 5000});
  CHECK(two.combined.achieved_rate == doctest::Approx(2 * 0.9).epsilon(0.05));

  CHECK_THROWS_AS(run_multipath(dag(3, {{0, 1, 0.1}}, 0, 2), 10, base), NoPathError);
}
