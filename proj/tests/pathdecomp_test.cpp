#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include <indm/pathdecomp.hpp>

#include "test_graphs.hpp"

using namespace indm;
using namespace indm::testing;

namespace {

path_decomposition pd(std::vector<vertex_set> bags) { return {std::move(bags)}; }

// Pathwidth by trying every vertex order; only for tiny graphs.
int permutation_pathwidth(const graph& g) {
  std::vector<vertex> order = g.vertices();
  int best = std::numeric_limits<int>::max();
  do {
    best = std::min(best, width(decomposition_from_order(g, order)));
  } while (std::next_permutation(order.begin(), order.end()));
  return order.empty() ? -1 : best;
}

graph subdivide(const graph& g, edge e, vertex mid) {
  std::vector<edge> es;
  for (const edge& f : g.edges())
    if (!(f == e))
      es.push_back(f);
  es.push_back({e.u, mid});
  es.push_back({e.v, mid});
  return graph(g.vertices(), es);
}

} // namespace

TEST(Validate, Examples) {
  graph p3 = path_graph(3);
  EXPECT_TRUE(validate(p3, pd({{1, 2}, {2, 3}})));
  EXPECT_FALSE(validate(p3, pd({{1, 2}, {3}})));          // edge 2-3 uncovered
  EXPECT_FALSE(validate(p3, pd({{1, 2}, {3}, {2, 3}})));  // 2 reappears
  EXPECT_FALSE(validate(p3, pd({{1, 2}})));               // 3 missing
  EXPECT_FALSE(validate(p3, pd({{1, 2}, {2, 3, 4}})));    // 4 not a vertex
  EXPECT_FALSE(validate(p3, pd({{2, 1}, {2, 3}})));       // unsorted bag
  EXPECT_TRUE(validate(cycle_graph(4), pd({{1, 2, 4}, {2, 3, 4}})));
  EXPECT_TRUE(validate(graph{}, pd({})));
}

TEST(Width, Examples) {
  EXPECT_EQ(width(pd({{1, 2}, {2, 3}})), 1);
  EXPECT_EQ(width(pd({{1, 2, 4}, {2, 3, 4}})), 2);
  EXPECT_EQ(width(pd({})), -1);
  EXPECT_EQ(width(pd({{}})), -1);
}

TEST(MakeNice, Pattern) {
  auto n = make_nice(pd({{1, 2}, {2, 3}}));
  std::vector<nice_node> want{{nice_kind::leaf, 0, {}},         {nice_kind::introduce, 1, {1}},
                              {nice_kind::introduce, 2, {1, 2}}, {nice_kind::forget, 1, {2}},
                              {nice_kind::introduce, 3, {2, 3}}, {nice_kind::forget, 2, {3}},
                              {nice_kind::forget, 3, {}}};
  EXPECT_EQ(n.nodes, want);
  EXPECT_EQ(n.width(), 1);
  EXPECT_TRUE(validate(path_graph(3), n));
  EXPECT_EQ(make_nice(n.plain()), n);
}

TEST(MakeNice, PreservesValidityAndWidth) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    graph g = random_graph(rng, 9, 0.35);
    auto base = base_decompose(g);
    auto n = make_nice(base);
    EXPECT_TRUE(validate(g, n));
    EXPECT_EQ(n.width(), width(base));
    EXPECT_EQ(make_nice(n.plain()), n);
  }
}

TEST(Contract, CycleBecomesLoop) {
  auto rec = contract(cycle_graph(6));
  EXPECT_EQ(rec.contracted.order(), 1u);
  EXPECT_EQ(rec.representatives, make_set({1}));
  ASSERT_EQ(rec.red_edges.size(), 1u);
  EXPECT_EQ(rec.red_edges[0].x, 1u);
  EXPECT_EQ(rec.red_edges[0].y, 1u);
  EXPECT_EQ(rec.red_edges[0].path.size(), 5u);
  EXPECT_TRUE(rec.red_vertices.empty());
}

TEST(Contract, CubicGraphUnchanged) {
  auto rec = contract(petersen_graph());
  EXPECT_EQ(rec.contracted, petersen_graph());
  EXPECT_TRUE(rec.red_edges.empty());
  EXPECT_TRUE(rec.red_vertices.empty());
}

TEST(Contract, SubdividedEdgeBecomesRedEdge) {
  auto rec = contract(subdivide(petersen_graph(), {1, 2}, 11));
  EXPECT_EQ(rec.contracted, petersen_graph());
  ASSERT_EQ(rec.red_edges.size(), 1u);
  EXPECT_EQ(rec.red_edges[0].path, std::vector<vertex>{11});
  EXPECT_EQ(make_set({rec.red_edges[0].x, rec.red_edges[0].y}), make_set({1, 2}));
}

TEST(Contract, PendantPathBecomesRedVertex) {
  // K4 with a path 1-5-6 hanging off vertex 1
  graph g({}, {{1, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 4}, {1, 5}, {5, 6}, {4, 7}, {7, 8}, {8, 9}});
  auto rec = contract(delete_vertices(g, {7, 8, 9}));
  ASSERT_EQ(rec.red_vertices.size(), 1u);
  EXPECT_EQ(rec.red_vertices[0].v, 1u);
  EXPECT_EQ(rec.red_vertices[0].path, (std::vector<vertex>{6, 5}));
}

TEST(Contract, PathKeepsAnEnd) {
  auto rec = contract(path_graph(5));
  EXPECT_EQ(rec.representatives, make_set({1}));
  ASSERT_EQ(rec.red_vertices.size(), 1u);
  EXPECT_EQ(rec.red_vertices[0].path, (std::vector<vertex>{5, 4, 3, 2}));
}

TEST(Contract, RejectsHighDegree) {
  EXPECT_THROW(contract(star_graph(4)), std::domain_error);
}

TEST(Contract, NoAdjacentLowDegreeCoreVertices) {
  // counting red edges with multiplicity, no kept vertex has degree <= 2
  // unless it represents a component without degree-3 vertices
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    graph g = random_subcubic_graph(rng, 16, 30);
    auto rec = contract(g);
    std::map<vertex, std::size_t> deg;
    for (const edge& e : g.edges())
      if (rec.contracted.contains(e.u) && rec.contracted.contains(e.v))
        ++deg[e.u], ++deg[e.v];
    for (const auto& r : rec.red_edges)
      ++deg[r.x], ++deg[r.y];
    for (const auto& r : rec.red_vertices)
      ++deg[r.v];
    std::size_t hidden = 0;
    for (const auto& r : rec.red_edges)
      hidden += r.path.size();
    for (const auto& r : rec.red_vertices)
      hidden += r.path.size();
    EXPECT_EQ(hidden + rec.contracted.order(), g.order());
    for (vertex v : rec.contracted.vertices())
      if (!set_contains(rec.representatives, v)) {
        EXPECT_EQ(deg[v], 3u);
      }
  }
}

TEST(Expand, IdentityWithoutRedParts) {
  auto rec = contract(petersen_graph());
  auto base = base_decompose(rec.contracted);
  EXPECT_EQ(expand(rec, base), base);
}

TEST(Expand, OneRedEdge) {
  graph g = subdivide(petersen_graph(), {1, 2}, 11);
  auto rec = contract(g);
  auto base = base_decompose(rec.contracted);
  auto out = expand(rec, base);
  EXPECT_TRUE(validate(g, out));
  EXPECT_LE(width(out), width(base) + 2);
}

TEST(Expand, OneRedVertex) {
  graph g = path_graph(4);
  auto rec = contract(g);
  auto out = expand(rec, base_decompose(rec.contracted));
  EXPECT_TRUE(validate(g, out));
  EXPECT_EQ(width(out), 1);
}

TEST(Expand, RejectsInvalidDecomposition) {
  auto rec = contract(petersen_graph());
  EXPECT_THROW(expand(rec, pd({{1, 2}})), contract_error);
}

TEST(Expand, ValidAndWithinTwoOnRandomSubcubic) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 300; ++t) {
    graph g = random_subcubic_graph(rng, static_cast<vertex>(6 + rng() % 18), 40);
    auto rec = contract(g);
    auto base = base_decompose(rec.contracted);
    auto out = expand(rec, base);
    ASSERT_TRUE(validate(g, out)) << serialize(g);
    EXPECT_LE(width(out), std::max(width(base), 0) + 2);
  }
}

TEST(BaseDecompose, KnownWidths) {
  EXPECT_EQ(width(base_decompose(path_graph(4))), 1);
  EXPECT_EQ(width(base_decompose(cycle_graph(5))), 2);
  EXPECT_EQ(width(base_decompose(binary_tree(7))), 1); // a caterpillar
  EXPECT_EQ(width(base_decompose(binary_tree(15))), 2);
  EXPECT_EQ(width(base_decompose(petersen_graph())), 5);
  EXPECT_EQ(width(base_decompose(complete_graph(5))), 4);
}

TEST(BaseDecompose, ExactMatchesPermutationOracle) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 60; ++t) {
    graph g = random_graph(rng, static_cast<vertex>(2 + rng() % 6), 0.45);
    auto b = base_decompose(g);
    EXPECT_TRUE(validate(g, b));
    int per_component = -1;
    for (const auto& c : connected_components(g))
      per_component = std::max(per_component, permutation_pathwidth(induced_subgraph(g, c)));
    EXPECT_EQ(width(b), per_component);
  }
}

TEST(BaseDecompose, HeuristicIsValid) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 20; ++t) {
    graph g = random_subcubic_graph(rng, 40, 80);
    auto b = base_decompose(g, 4);
    EXPECT_TRUE(validate(g, b));
  }
}

TEST(DecomposeForInstance, Examples) {
  auto e = decompose_for_instance(graph({}, {{1, 2}}), 0);
  EXPECT_EQ(e.width, 1);
  EXPECT_EQ(e.bound, 2);
  EXPECT_TRUE(e.exact);

  auto p = decompose_for_instance(petersen_graph(), 4);
  EXPECT_EQ(p.width, 5);
  EXPECT_EQ(p.bound, 4);
  EXPECT_TRUE(validate(petersen_graph(), p.nice));

  auto path = decompose_for_instance(path_graph(10), 0);
  EXPECT_EQ(path.width, 1);
  EXPECT_TRUE(validate(path_graph(10), path.nice));
}

TEST(DecomposeForInstance, LargeComponentIsNotExact) {
  std::mt19937_64 rng(17);
  graph g = random_subcubic_graph(rng, 30, 200);
  auto d = decompose_for_instance(g, 12, 15);
  EXPECT_TRUE(validate(g, d.nice));
  EXPECT_EQ(d.exact, std::all_of(connected_components(g).begin(), connected_components(g).end(),
                                 [](const vertex_set& c) { return c.size() <= 15 || c.size() < 3; }));
}

TEST(DecomposeForInstance, RejectsHighDegree) {
  EXPECT_THROW(decompose_for_instance(star_graph(4), 3), std::domain_error);
}

TEST(WidthBound, Values) {
  EXPECT_EQ(width_bound(0), 2);
  EXPECT_EQ(width_bound(1), 3);
  EXPECT_EQ(width_bound(12), 7);
  EXPECT_EQ(width_bound(13), 8);
}

TEST(ExactThreshold, FromEnvironment) {
  ::setenv("INDM_EXACT_THRESHOLD", "9", 1);
  EXPECT_EQ(exact_threshold_from_env(), 9u);
  ::setenv("INDM_EXACT_THRESHOLD", "3", 1);
  EXPECT_EQ(exact_threshold_from_env(), default_exact_threshold);
  ::setenv("INDM_EXACT_THRESHOLD", "nine", 1);
  EXPECT_EQ(exact_threshold_from_env(), default_exact_threshold);
  ::unsetenv("INDM_EXACT_THRESHOLD");
  EXPECT_EQ(exact_threshold_from_env(), default_exact_threshold);
}

TEST(Serialize, RoundTrip) {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 30; ++t) {
    graph g = random_subcubic_graph(rng, 12, 20);
    auto d = decompose_for_instance(g, 5);
    EXPECT_EQ(parse_nice_path_decomposition(serialize(d.nice)), d.nice);
    auto plain = d.nice.plain();
    EXPECT_EQ(parse_path_decomposition(serialize(plain)), plain);
  }
}

TEST(Serialize, Format) {
  EXPECT_EQ(serialize(pd({{1, 2}, {2, 3}})), "pd 2 1\n1 2\n2 3\n");
  EXPECT_EQ(serialize(make_nice(pd({{4}}))), "pd 3 0\nL :\nI 4 : 4\nF 4 :\n");
}

TEST(Serialize, ParseErrors) {
  EXPECT_THROW(parse_path_decomposition("bags 2 1\n1\n2\n"), parse_error);
  EXPECT_THROW(parse_path_decomposition("pd 3 1\n1 2\n"), parse_error);
  EXPECT_THROW(parse_path_decomposition("pd 1 0\nx\n"), parse_error);
  EXPECT_THROW(parse_nice_path_decomposition("pd 1 0\nQ :\n"), parse_error);
  EXPECT_THROW(parse_nice_path_decomposition("pd 1 0\nI 3 3\n"), parse_error);
}
