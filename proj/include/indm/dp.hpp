#pragma once

// Minimum deletion over a nice path decomposition. Each bag vertex gets one of
// three colors:
//   0  deleted
//   1  kept, no kept neighbor yet (waits for a partner)
//   2  kept, exactly one kept neighbor (its partner)
// A table maps every coloring of a bag to the least number of deletions among
// the vertices seen so far, with every kept vertex of degree <= 1.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "graph.hpp"
#include "oracle.hpp"
#include "pathdecomp.hpp"

namespace indm {

using dp_cost = std::uint32_t;
inline constexpr dp_cost dp_infinity = std::numeric_limits<dp_cost>::max();

inline dp_cost saturating_add(dp_cost a, dp_cost b) {
  return a > dp_infinity - b ? dp_infinity : a + b;
}

/// `exact_pairs` never forgets a color-1 vertex, so every kept vertex ends up
/// paired. `literal` also allows it, which solves the relaxed problem where
/// kept vertices may stay isolated.
enum class forget_rule { exact_pairs, literal };

/// 3^16 entries of 4 bytes is about 170 MB per table.
inline constexpr std::size_t max_dp_bag = 16;

/// Coloring index: sum over bag positions i of color * 3^i.
struct dp_table {
  vertex_set bag;
  std::vector<dp_cost> cost;
};

namespace detail {

inline const std::vector<std::size_t>& powers_of_three() {
  static const std::vector<std::size_t> p = [] {
    std::vector<std::size_t> v(max_dp_bag + 2, 1);
    for (std::size_t i = 1; i < v.size(); ++i)
      v[i] = v[i - 1] * 3;
    return v;
  }();
  return p;
}

inline std::size_t position(const vertex_set& bag, vertex v) {
  return static_cast<std::size_t>(std::lower_bound(bag.begin(), bag.end(), v) - bag.begin());
}

inline unsigned digit(std::size_t f, std::size_t pos) {
  return static_cast<unsigned>(f / powers_of_three()[pos] % 3);
}

// drop the digit at pos
inline std::size_t without_digit(std::size_t f, std::size_t pos) {
  const auto& p3 = powers_of_three();
  return f / p3[pos + 1] * p3[pos] + f % p3[pos];
}

// insert digit d at pos
inline std::size_t with_digit(std::size_t f, std::size_t pos, unsigned d) {
  const auto& p3 = powers_of_three();
  return f / p3[pos] * p3[pos + 1] + d * p3[pos] + f % p3[pos];
}

inline std::vector<std::size_t> bag_neighbor_positions(const graph& g, const vertex_set& bag,
                                                        vertex v) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < bag.size(); ++i)
    if (g.adjacent(v, bag[i]))
      out.push_back(i);
  return out;
}

inline void check_bag_size(std::size_t n) {
  if (n > max_dp_bag)
    throw std::length_error("bag of size " + std::to_string(n) + " exceeds the DP limit of " +
                            std::to_string(max_dp_bag));
}

/// Child coloring that an introduce entry reads from, or nothing if the entry
/// is infeasible by the introduce conditions alone.
inline std::optional<std::size_t> introduce_source(std::size_t f, std::size_t pos,
                                                   const std::vector<std::size_t>& nbpos) {
  const unsigned c = digit(f, pos);
  if (c == 0)
    return without_digit(f, pos);
  std::optional<std::size_t> kept;
  std::size_t kept_count = 0;
  for (auto j : nbpos)
    if (digit(f, j) != 0) {
      ++kept_count;
      kept = j;
    }
  if (c == 1)
    return kept_count == 0 ? std::optional(without_digit(f, pos)) : std::nullopt;
  // c == 2: exactly one kept bag neighbor w, shown as 2, which was 1 before
  if (kept_count != 1 || digit(f, *kept) != 2)
    return std::nullopt;
  return without_digit(f - powers_of_three()[*kept], pos);
}

} // namespace detail

inline dp_table dp_leaf() { return {{}, {0}}; }

inline dp_table dp_introduce(const dp_table& child, const vertex_set& bag_after, vertex v,
                             const graph& g) {
  if (set_contains(child.bag, v) || bag_after != set_union(child.bag, {v}))
    throw contract_error("introduce: bag must be the child bag plus a new vertex");
  detail::check_bag_size(bag_after.size());
  const std::size_t pos = detail::position(bag_after, v);
  const auto nbpos = detail::bag_neighbor_positions(g, bag_after, v);
  dp_table out{bag_after, std::vector<dp_cost>(detail::powers_of_three()[bag_after.size()])};
  for (std::size_t f = 0; f < out.cost.size(); ++f) {
    auto src = detail::introduce_source(f, pos, nbpos);
    if (!src) {
      out.cost[f] = dp_infinity;
      continue;
    }
    out.cost[f] = saturating_add(child.cost[*src], detail::digit(f, pos) == 0 ? 1 : 0);
  }
  return out;
}

inline dp_table dp_forget(const dp_table& child, const vertex_set& bag_after, vertex v,
                          forget_rule rule = forget_rule::exact_pairs) {
  if (!set_contains(child.bag, v) || bag_after != set_difference(child.bag, {v}))
    throw contract_error("forget: bag must be the child bag minus one vertex");
  const std::size_t pos = detail::position(child.bag, v);
  dp_table out{bag_after, std::vector<dp_cost>(detail::powers_of_three()[bag_after.size()])};
  for (std::size_t f = 0; f < out.cost.size(); ++f) {
    dp_cost best = std::min(child.cost[detail::with_digit(f, pos, 0)],
                            child.cost[detail::with_digit(f, pos, 2)]);
    if (rule == forget_rule::literal)
      best = std::min(best, child.cost[detail::with_digit(f, pos, 1)]);
    out.cost[f] = best;
  }
  return out;
}

struct dp_options {
  forget_rule rule = forget_rule::exact_pairs;
  /// Keep one table at a time and recompute predecessors while walking back.
  bool low_memory = false;
};

struct dp_trace_entry {
  nice_kind kind;
  vertex v;
  std::size_t bag_size;
  std::size_t finite_entries;
};

struct dp_result {
  dp_cost minimum = dp_infinity;
  /// Deleted vertices plus the pairs formed by color-2 introductions. Under
  /// forget_rule::literal, kept vertices may be unpaired.
  solution sol;
  std::vector<dp_trace_entry> trace;
};

inline nlohmann::json to_json(const dp_result& r) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& e : r.trace) {
    const char* tag = e.kind == nice_kind::leaf ? "L" : e.kind == nice_kind::introduce ? "I" : "F";
    nodes.push_back({{"kind", tag},
                     {"vertex", e.v},
                     {"bag_size", e.bag_size},
                     {"finite", e.finite_entries}});
  }
  return {{"cost", r.minimum}, {"nodes", nodes}};
}

namespace detail {

inline dp_table dp_step(const dp_table& prev, const nice_node& node, const graph& g,
                        forget_rule rule) {
  if (node.kind == nice_kind::introduce)
    return dp_introduce(prev, node.bag, node.v, g);
  if (node.kind == nice_kind::forget)
    return dp_forget(prev, node.bag, node.v, rule);
  throw contract_error("leaf node in the middle of a nice decomposition");
}

inline dp_table dp_table_at(const graph& g, const nice_path_decomposition& npd, std::size_t upto,
                            forget_rule rule) {
  dp_table t = dp_leaf();
  for (std::size_t i = 1; i <= upto; ++i)
    t = dp_step(t, npd.nodes[i], g, rule);
  return t;
}

} // namespace detail

/// Runs the table sweep over `npd` and walks back from the final empty bag to
/// recover one optimal deletion set and its pairs.
inline dp_result solve_dp(const graph& g, const nice_path_decomposition& npd,
                          const dp_options& opt = {}) {
  if (!validate(g, npd))
    throw contract_error("solve_dp needs a valid nice decomposition of the graph");
  detail::check_bag_size(static_cast<std::size_t>(npd.width() + 1));
  const std::size_t r = npd.nodes.size();
  dp_result res;
  std::vector<dp_table> tables;
  dp_table cur = dp_leaf();
  auto record = [&](const dp_table& t, const nice_node& n) {
    std::size_t finite = static_cast<std::size_t>(
        std::count_if(t.cost.begin(), t.cost.end(), [](dp_cost c) { return c != dp_infinity; }));
    res.trace.push_back({n.kind, n.v, t.bag.size(), finite});
  };
  record(cur, npd.nodes[0]);
  if (!opt.low_memory)
    tables.push_back(cur);
  for (std::size_t i = 1; i < r; ++i) {
    cur = detail::dp_step(cur, npd.nodes[i], g, opt.rule);
    record(cur, npd.nodes[i]);
    if (!opt.low_memory)
      tables.push_back(cur);
  }
  res.minimum = cur.cost[0];
  if (res.minimum == dp_infinity)
    return res;

  std::size_t f = 0;
  std::vector<vertex> deleted;
  for (std::size_t i = r - 1; i >= 1; --i) {
    const nice_node& node = npd.nodes[i];
    dp_table prev_storage;
    const dp_table* here = &cur;
    const dp_table* prev = &prev_storage;
    if (opt.low_memory) {
      prev_storage = detail::dp_table_at(g, npd, i - 1, opt.rule);
    } else {
      here = &tables[i];
      prev = &tables[i - 1];
    }
    if (node.kind == nice_kind::introduce) {
      const std::size_t pos = detail::position(node.bag, node.v);
      const unsigned c = detail::digit(f, pos);
      if (c == 0)
        deleted.push_back(node.v);
      if (c == 2) {
        for (auto j : detail::bag_neighbor_positions(g, node.bag, node.v))
          if (detail::digit(f, j) != 0) {
            vertex w = node.bag[j];
            res.sol.matching.emplace_back(std::min(w, node.v), std::max(w, node.v));
          }
      }
      f = *detail::introduce_source(f, pos, detail::bag_neighbor_positions(g, node.bag, node.v));
    } else {
      const std::size_t pos = detail::position(prev->bag, node.v);
      std::vector<unsigned> options{0, 2};
      if (opt.rule == forget_rule::literal)
        options.push_back(1);
      for (unsigned d : options)
        if (prev->cost[detail::with_digit(f, pos, d)] == here->cost[f]) {
          f = detail::with_digit(f, pos, d);
          break;
        }
    }
    if (opt.low_memory)
      cur = std::move(prev_storage);
  }
  res.sol.deleted = make_set(std::move(deleted));
  std::sort(res.sol.matching.begin(), res.sol.matching.end());
  return res;
}

} // namespace indm
