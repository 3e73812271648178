#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "branching.hpp"
#include "dp.hpp"
#include "graph.hpp"
#include "oracle.hpp"
#include "pathdecomp.hpp"

namespace indm {

struct solve_options {
  std::size_t exact_threshold = exact_threshold_from_env();
  dp_options dp;
  /// Called with every decomposition built for a leaf component, along with
  /// the leaf's remaining budget (IND) or -1 (EXTEND).
  std::function<void(const graph&, long, const instance_decomposition&)> on_decomposition;
};

struct pipeline_stats {
  search_stats search;
  std::vector<int> leaf_widths; // widest component decomposition per solved leaf
  std::uint64_t dp_calls = 0;
  std::uint64_t gate_rejections = 0;

  int max_width() const {
    return leaf_widths.empty() ? -1 : *std::max_element(leaf_widths.begin(), leaf_widths.end());
  }
};

struct ind_answer {
  bool decision = false;
  std::optional<solution> sol;
  pipeline_stats stats;
};

struct extend_answer {
  solution sol;
  pipeline_stats stats;
};

namespace detail {

struct leaf_result {
  std::size_t cost = 0;
  solution sol;
};

/// Solves a maximum-degree-3 graph one component at a time. With a limit,
/// gives up as soon as the running total exceeds it.
inline std::optional<leaf_result> solve_leaf(const graph& g, long budget,
                                             std::optional<std::size_t> limit,
                                             const solve_options& opt, pipeline_stats& stats) {
  leaf_result out;
  int widest = -1;
  for (const auto& comp : connected_components(g)) {
    graph sub = induced_subgraph(g, comp);
    auto dec = decompose_for_instance(sub, std::max(budget, 0L), opt.exact_threshold);
    if (opt.on_decomposition)
      opt.on_decomposition(sub, budget, dec);
    widest = std::max(widest, dec.width);
    ++stats.dp_calls;
    auto r = solve_dp(sub, dec.nice, opt.dp);
    out.cost += r.minimum;
    out.sol.deleted = set_union(out.sol.deleted, r.sol.deleted);
    out.sol.matching.insert(out.sol.matching.end(), r.sol.matching.begin(), r.sol.matching.end());
    if (limit && out.cost > *limit) {
      stats.leaf_widths.push_back(widest);
      return std::nullopt;
    }
  }
  stats.leaf_widths.push_back(widest);
  return out;
}

inline solution assemble(const branch_node& leaf, const solution& part) {
  solution s;
  s.deleted = set_union(leaf.committed, part.deleted);
  s.matching = leaf.paired;
  s.matching.insert(s.matching.end(), part.matching.begin(), part.matching.end());
  std::sort(s.matching.begin(), s.matching.end());
  return s;
}

inline void check_certificate(const graph& g, const solution& s) {
  auto c = certify(g, s.deleted);
  if (!c || c->matching != s.matching)
    throw std::logic_error("internal error: assembled solution failed its certificate check");
}

} // namespace detail

/// Decides whether at most k deletions leave an induced matching. Splits on
/// vertices of degree >= 4 until the maximum degree is 3, rejects leaves with
/// more than 2.5s degree-3 vertices for remaining budget s, and runs the
/// coloring DP on the rest. Stops at the first accepting leaf.
inline ind_answer solve_ind(const graph& g, long k, const solve_options& opt = {}) {
  if (k < 0)
    throw std::invalid_argument("budget must be non-negative");
  ind_answer ans;
  ans.stats.search = run_search(g, k, search_mode::ind, [&](const branch_node& leaf) {
    const long s = leaf.budget;
    const auto cubic = static_cast<long>(count_degree(leaf.g, 3));
    if (2 * cubic > 5 * s) {
      ++ans.stats.gate_rejections;
      return false;
    }
    auto r = detail::solve_leaf(leaf.g, s, static_cast<std::size_t>(s), opt, ans.stats);
    if (!r)
      return false;
    ans.sol = detail::assemble(leaf, r->sol);
    return true;
  });
  if (ans.sol) {
    detail::check_certificate(g, *ans.sol);
    ans.decision = ans.sol->deleted.size() <= static_cast<std::size_t>(k);
    if (!ans.decision)
      throw std::logic_error("internal error: accepted solution exceeds the budget");
  }
  return ans;
}

/// Minimum deletion set. Explores the whole EXTEND search tree and keeps the
/// cheapest leaf (first found on ties).
inline extend_answer solve_extend(const graph& g, const solve_options& opt = {}) {
  extend_answer ans;
  std::optional<std::size_t> best;
  ans.stats.search = run_search(g, 0, search_mode::extend, [&](const branch_node& leaf) {
    auto r = detail::solve_leaf(leaf.g, -1, std::nullopt, opt, ans.stats);
    const std::size_t total = leaf.committed.size() + r->cost;
    if (!best || total < *best) {
      best = total;
      ans.sol = detail::assemble(leaf, r->sol);
    }
    return false;
  });
  detail::check_certificate(g, ans.sol);
  return ans;
}

/// Certificate check. Throws std::domain_error if s is not a subset of V(g).
inline bool verify(const graph& g, const vertex_set& s, std::optional<long> k = std::nullopt) {
  const bool ok = is_induced_matching(delete_vertices(g, s));
  return ok && (!k || static_cast<long>(s.size()) <= *k);
}

inline nlohmann::json to_json(const solution& s) {
  nlohmann::json m = nlohmann::json::array();
  for (const auto& [u, v] : s.matching)
    m.push_back({u, v});
  return {{"solution", s.deleted}, {"matching", m}};
}

inline solution solution_from_json(const nlohmann::json& j) {
  solution s;
  s.deleted = make_set(j.at("solution").get<std::vector<vertex>>());
  for (const auto& p : j.at("matching"))
    s.matching.emplace_back(p.at(0).get<vertex>(), p.at(1).get<vertex>());
  return s;
}

inline nlohmann::json to_json(const pipeline_stats& s) {
  return {{"nodes", s.search.nodes_expanded},
          {"leaves", s.search.leaves},
          {"pruned", s.search.pruned},
          {"max_depth", s.search.max_depth},
          {"max_width", s.max_width()},
          {"dp_calls", s.dp_calls},
          {"gate_rejections", s.gate_rejections},
          {"rule_counts", rule_counts_json(s.search)}};
}

inline nlohmann::json to_json(const ind_answer& a) {
  nlohmann::json j = a.sol ? to_json(*a.sol) : to_json(solution{});
  j["decision"] = a.decision ? "yes" : "no";
  j["stats"] = to_json(a.stats);
  return j;
}

inline nlohmann::json to_json(const extend_answer& a) {
  nlohmann::json j = to_json(a.sol);
  j["decision"] = "optimal";
  j["size"] = a.sol.deleted.size();
  j["stats"] = to_json(a.stats);
  return j;
}

} // namespace indm
