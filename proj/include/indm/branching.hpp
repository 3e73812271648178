#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "graph.hpp"
#include "oracle.hpp"

namespace indm {

/// IND decrements the deletion budget k; EXTEND decrements the number of
/// vertices left in the working graph and never prunes.
enum class search_mode { ind, extend };

enum class rule : std::size_t {
  isolated = 0,      // degree-0 vertices forced into the solution
  dominated_pair = 1, // N[v] within N[u]: delete u, or pair u with v
  neighbor_pairs = 2, // delete u, or pair u with each neighbor in turn
};

inline constexpr std::size_t rule_count = 3;

inline const char* rule_name(rule r) {
  switch (r) {
  case rule::isolated:
    return "isolated";
  case rule::dominated_pair:
    return "dominated_pair";
  case rule::neighbor_pairs:
    return "neighbor_pairs";
  }
  return "?";
}

/// One node of the search tree. Vertices placed in the solution and committed
/// matching pairs have already been removed from `g`.
struct branch_node {
  graph g;
  long budget = 0;
  vertex_set committed;
  std::vector<vertex_pair> paired;
  std::vector<std::uint32_t> id; // child index taken at each level
};

inline branch_node make_root(graph g, long k, search_mode mode) {
  branch_node root;
  root.budget = mode == search_mode::ind ? k : static_cast<long>(g.order());
  root.g = std::move(g);
  return root;
}

inline bool is_pruned(const branch_node& node, search_mode mode) {
  return mode == search_mode::ind && node.budget < 0;
}

struct branching_vector {
  std::vector<int> decrements;

  explicit branching_vector(std::vector<int> t) : decrements(std::move(t)) {
    if (decrements.size() < 2)
      throw std::invalid_argument("branching vector needs at least two entries");
    for (int x : decrements)
      if (x < 1)
        throw std::invalid_argument("branching vector entries must be positive");
  }
};

/// Unique root c > 1 of 1 = sum_i c^{-t_i}, by bisection on [1, s + 1].
inline double branching_number(const branching_vector& b) {
  auto excess = [&](double x) {
    double s = 0;
    for (int t : b.decrements)
      s += std::pow(x, -t);
    return 1.0 - s;
  };
  double lo = 1.0, hi = static_cast<double>(b.decrements.size()) + 1.0;
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    (excess(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct search_stats {
  std::uint64_t nodes_expanded = 0;
  std::uint64_t leaves = 0;
  std::uint64_t pruned = 0;
  std::size_t max_depth = 0;
  std::array<std::uint64_t, rule_count> rule_fires{};

  std::uint64_t fires(rule r) const { return rule_fires[static_cast<std::size_t>(r)]; }

  search_stats& merge(const search_stats& o) {
    nodes_expanded += o.nodes_expanded;
    leaves += o.leaves;
    pruned += o.pruned;
    max_depth = std::max(max_depth, o.max_depth);
    for (std::size_t i = 0; i < rule_count; ++i)
      rule_fires[i] += o.rule_fires[i];
    return *this;
  }

  bool operator==(const search_stats&) const = default;
};

inline nlohmann::json rule_counts_json(const search_stats& s) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < rule_count; ++i)
    j[rule_name(static_cast<rule>(i))] = s.rule_fires[i];
  return j;
}

inline nlohmann::json to_json(const search_stats& s) {
  return {{"nodes", s.nodes_expanded},
          {"leaves", s.leaves},
          {"pruned", s.pruned},
          {"max_depth", s.max_depth},
          {"rule_counts", rule_counts_json(s)}};
}

/// Vertex of maximum degree among those of degree >= 4, smallest id on ties.
inline std::optional<vertex> find_branch_vertex(const graph& g) {
  std::optional<vertex> best;
  std::size_t best_deg = 3;
  for (vertex v : g.vertices())
    if (g.degree(v) > best_deg) {
      best = v;
      best_deg = g.degree(v);
    }
  return best;
}

/// Smallest v != u with N[v] a subset of N[u]. Such a v is necessarily a
/// neighbor of u.
inline std::optional<vertex> find_dominated_neighbor(const graph& g, vertex u) {
  const vertex_set nu = g.closed_neighborhood(u);
  for (vertex v : g.neighbors(u))
    if (is_subset(g.closed_neighborhood(v), nu))
      return v;
  return std::nullopt;
}

/// Moves every isolated vertex of the working graph into the solution.
inline branch_node reduce_isolated(branch_node node) {
  vertex_set isolated;
  for (vertex v : node.g.vertices())
    if (node.g.degree(v) == 0)
      isolated.push_back(v);
  if (isolated.empty())
    return node;
  node.g = delete_vertices(node.g, isolated);
  node.budget -= static_cast<long>(isolated.size());
  node.committed = set_union(node.committed, isolated);
  return node;
}

/// How a node splits: child 0 puts `u` into the solution, child i >= 1 pairs
/// `u` with partners[i - 1].
struct branch_plan {
  rule kind;
  vertex u;
  std::vector<vertex> partners;

  std::size_t child_count() const { return partners.size() + 1; }
};

inline std::optional<branch_plan> plan_branch(const graph& g) {
  auto u = find_branch_vertex(g);
  if (!u)
    return std::nullopt;
  if (auto v = find_dominated_neighbor(g, *u))
    return branch_plan{rule::dominated_pair, *u, {*v}};
  auto nb = g.neighbors(*u);
  return branch_plan{rule::neighbor_pairs, *u, {nb.begin(), nb.end()}};
}

inline branch_node make_child(const branch_node& parent, const branch_plan& plan, std::size_t i,
                              search_mode mode) {
  branch_node child;
  child.id = parent.id;
  child.id.push_back(static_cast<std::uint32_t>(i));
  child.paired = parent.paired;
  if (i == 0) {
    child.g = delete_vertices(parent.g, {plan.u});
    child.budget = parent.budget - 1;
    child.committed = set_union(parent.committed, {plan.u});
    return child;
  }
  const vertex u = plan.u, v = plan.partners.at(i - 1);
  // everything adjacent to the new pair except the pair itself
  vertex_set doomed = set_union(vertex_set(parent.g.neighbors(u).begin(), parent.g.neighbors(u).end()),
                                vertex_set(parent.g.neighbors(v).begin(), parent.g.neighbors(v).end()));
  doomed = set_difference(doomed, make_set({u, v}));
  long removed = static_cast<long>(doomed.size());
  if (mode == search_mode::extend)
    removed += 2;
  child.committed = set_union(parent.committed, doomed);
  child.g = delete_vertices(parent.g, set_union(doomed, make_set({u, v})));
  child.budget = parent.budget - removed;
  child.paired.emplace_back(std::min(u, v), std::max(u, v));
  return child;
}

/// Children for "u in S" and "u paired with v" where N[v] lies inside N[u].
/// Children with negative budget are returned; the search prunes them.
inline std::vector<branch_node> branch_rule1(const branch_node& node, vertex u, vertex v,
                                             search_mode mode = search_mode::ind) {
  if (node.g.degree(u) < 4)
    throw contract_error("dominated-pair rule needs d(u) >= 4");
  if (u == v || !node.g.contains(v) ||
      !is_subset(node.g.closed_neighborhood(v), node.g.closed_neighborhood(u)))
    throw contract_error("dominated-pair rule needs N[v] within N[u]");
  branch_plan plan{rule::dominated_pair, u, {v}};
  return {make_child(node, plan, 0, mode), make_child(node, plan, 1, mode)};
}

/// Children for "u in S" and, for each neighbor v, "u paired with v".
inline std::vector<branch_node> branch_rule2(const branch_node& node, vertex u,
                                             search_mode mode = search_mode::ind) {
  const graph& g = node.g;
  if (g.degree(u) < 4)
    throw contract_error("neighbor-pairs rule needs d(u) >= 4");
  const vertex_set nu = g.closed_neighborhood(u);
  for (vertex v : g.neighbors(u)) {
    auto nv = g.neighbors(v);
    if (std::all_of(nv.begin(), nv.end(), [&](vertex x) { return set_contains(nu, x); }))
      throw contract_error("neighbor-pairs rule needs every neighbor of u to reach outside N[u]");
  }
  auto nb = g.neighbors(u);
  branch_plan plan{rule::neighbor_pairs, u, {nb.begin(), nb.end()}};
  std::vector<branch_node> out;
  for (std::size_t i = 0; i < plan.child_count(); ++i)
    out.push_back(make_child(node, plan, i, mode));
  return out;
}

/// Depth-first search that splits until no vertex has degree above 3 and
/// hands each surviving leaf to `on_leaf`. Only the current root-to-node path
/// is held in memory; siblings are regenerated from their parent on demand.
/// `on_leaf` returns true to stop the search.
template <class LeafFn>
search_stats run_search(graph g, long budget, search_mode mode, LeafFn&& on_leaf) {
  struct frame {
    branch_node node;
    branch_plan plan;
    std::size_t next = 0;
  };
  search_stats stats;
  std::vector<frame> path;
  bool stop = false;

  auto visit = [&](branch_node node) {
    if (is_pruned(node, mode)) {
      ++stats.pruned;
      return;
    }
    const std::size_t before = node.g.order();
    node = reduce_isolated(std::move(node));
    if (node.g.order() != before)
      ++stats.rule_fires[static_cast<std::size_t>(rule::isolated)];
    if (is_pruned(node, mode)) {
      ++stats.pruned;
      return;
    }
    ++stats.nodes_expanded;
    stats.max_depth = std::max(stats.max_depth, node.id.size());
    auto plan = plan_branch(node.g);
    if (!plan) {
      ++stats.leaves;
      stop = on_leaf(static_cast<const branch_node&>(node));
      return;
    }
    ++stats.rule_fires[static_cast<std::size_t>(plan->kind)];
    path.push_back({std::move(node), std::move(*plan), 0});
  };

  visit(make_root(std::move(g), budget, mode));
  while (!path.empty() && !stop) {
    frame& top = path.back();
    if (top.next == top.plan.child_count()) {
      path.pop_back();
      continue;
    }
    visit(make_child(top.node, top.plan, top.next++, mode));
  }
  return stats;
}

} // namespace indm
