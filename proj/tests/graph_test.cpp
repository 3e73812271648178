#include <random>

#include <gtest/gtest.h>

#include <indm/graph.hpp>

#include "test_graphs.hpp"

using namespace indm;
using namespace indm::testing;

TEST(ParseGraph, DimacsSingleEdge) {
  graph g = parse_graph("p edge 2 1\ne 1 2\n");
  EXPECT_EQ(g.vertices(), make_set({1, 2}));
  ASSERT_EQ(g.size(), 1u);
  EXPECT_TRUE(g.adjacent(1, 2));
}

TEST(ParseGraph, EmptyText) {
  graph g = parse_graph("");
  EXPECT_TRUE(g.empty());
  EXPECT_EQ(g.size(), 0u);
  EXPECT_TRUE(parse_graph("p edge 0 0\n").empty());
}

TEST(ParseGraph, SelfLoopIsRejected) {
  EXPECT_THROW(parse_graph("e 1 1"), validation_error);
  EXPECT_THROW(parse_graph("3 3\n"), validation_error);
}

TEST(ParseGraph, DimacsHeaderDeclaresIsolatedVertices) {
  graph g = parse_graph("c comment\np edge 4 1\ne 2 3\n");
  EXPECT_EQ(g.vertices(), make_set({1, 2, 3, 4}));
  EXPECT_EQ(g.degree(1), 0u);
}

TEST(ParseGraph, DimacsEndpointOutOfRange) {
  EXPECT_THROW(parse_graph("p edge 2 1\ne 1 3\n"), validation_error);
}

TEST(ParseGraph, MalformedLineReportsLineNumber) {
  try {
    parse_graph("1 2\n2 x\n");
    FAIL() << "expected parse_error";
  } catch (const parse_error& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_graph("p edge 3\n"), parse_error);
  EXPECT_THROW(parse_graph("1 2 3\n"), parse_error);
}

TEST(ParseGraph, EdgeListWithCommentsAndDuplicates) {
  graph g = parse_graph("# triangle\n1 2\n2 3 # inline\n3 1\n2 1\n");
  EXPECT_EQ(g.order(), 3u);
  EXPECT_EQ(g.size(), 3u);
}

TEST(ParseGraph, EdgeListHeader) {
  graph g = parse_graph("4 2\n1 2\n2 3\n");
  EXPECT_EQ(g.vertices(), make_set({1, 2, 3, 4}));
  EXPECT_EQ(g.size(), 2u);
  graph z = parse_graph("3 1\n0 1\n");
  EXPECT_EQ(z.vertices(), make_set({0, 1, 2}));
}

TEST(DeleteVertices, MiddleOfP3) {
  graph g = delete_vertices(path_graph(3), {2});
  EXPECT_EQ(g.vertices(), make_set({1, 3}));
  EXPECT_EQ(g.size(), 0u);
}

TEST(DeleteVertices, EmptySetIsIdentity) {
  graph p = petersen_graph();
  EXPECT_EQ(delete_vertices(p, {}), p);
}

TEST(DeleteVertices, C5LeavesOneEdge) {
  graph g = delete_vertices(cycle_graph(5), {1, 2, 3});
  EXPECT_EQ(g.vertices(), make_set({4, 5}));
  EXPECT_EQ(g.edges(), (std::vector<edge>{{4, 5}}));
}

TEST(DeleteVertices, NotASubsetThrows) {
  EXPECT_THROW(delete_vertices(path_graph(3), {7}), std::domain_error);
}

TEST(DeleteVertices, EdgeCountMatchesBruteCount) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    graph g = random_graph(rng, 12, 0.35);
    vertex_set s;
    for (vertex v : g.vertices())
      if (rng() % 3 == 0)
        s.push_back(v);
    graph h = delete_vertices(g, s);
    std::size_t expected = 0;
    for (const edge& e : g.edges())
      expected += !set_contains(s, e.u) && !set_contains(s, e.v);
    EXPECT_EQ(h.size(), expected);
    for (vertex v : h.vertices())
      for (vertex w : h.neighbors(v))
        EXPECT_TRUE(h.adjacent(w, v));
  }
}

TEST(DegreeProfile, Examples) {
  EXPECT_EQ(degree_profile(petersen_graph()), (std::map<std::size_t, std::size_t>{{3, 10}}));
  EXPECT_EQ(degree_profile(path_graph(2)), (std::map<std::size_t, std::size_t>{{1, 2}}));
  EXPECT_TRUE(degree_profile(graph{}).empty());
}

TEST(Serialize, RoundTripsCanonicalForm) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    graph g = delete_vertices(random_graph(rng, 10, 0.2), {static_cast<vertex>(rng() % 10 + 1)});
    std::string text = serialize(g);
    graph back = parse_graph(text);
    EXPECT_EQ(back, g);
    EXPECT_EQ(serialize(back), text);
  }
}

TEST(Serialize, DimacsRoundTrip) {
  graph p = petersen_graph();
  std::string text = serialize_dimacs(p);
  EXPECT_EQ(text.substr(0, text.find('\n')), "p edge 10 15");
  EXPECT_EQ(parse_graph(text), p);
  EXPECT_THROW(serialize_dimacs(star_graph(2)), validation_error);
}

TEST(Components, SplitsAndOrders) {
  graph g({1, 2, 3, 4, 5}, {{4, 5}, {1, 3}});
  auto cs = connected_components(g);
  ASSERT_EQ(cs.size(), 3u);
  EXPECT_EQ(cs[0], make_set({1, 3}));
  EXPECT_EQ(cs[1], make_set({2}));
  EXPECT_EQ(cs[2], make_set({4, 5}));
}
