#pragma once

// Reference solver by exhaustive enumeration. Kept deliberately naive: the
// rest of the library is tested against it.

#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "graph.hpp"

namespace indm {

using vertex_pair = std::pair<vertex, vertex>;

/// A deletion set together with the perfect matching that G - deleted induces.
struct solution {
  vertex_set deleted;
  std::vector<vertex_pair> matching; // (u, v) with u < v, ascending

  bool operator==(const solution&) const = default;
};

/// True iff every vertex has degree exactly 1, i.e. every component is one
/// edge. The empty graph qualifies.
inline bool is_induced_matching(const graph& g) {
  for (vertex v : g.vertices())
    if (g.degree(v) != 1)
      return false;
  return true;
}

/// The matching edges of an induced-matching graph; empty optional otherwise.
inline std::optional<std::vector<vertex_pair>> matching_of(const graph& g) {
  if (!is_induced_matching(g))
    return std::nullopt;
  std::vector<vertex_pair> out;
  for (vertex v : g.vertices()) {
    vertex w = g.neighbors(v).front();
    if (v < w)
      out.emplace_back(v, w);
  }
  return out;
}

/// Builds the certified solution for deletion set s, if s is valid.
inline std::optional<solution> certify(const graph& g, vertex_set s) {
  auto m = matching_of(delete_vertices(g, s));
  if (!m)
    return std::nullopt;
  return solution{std::move(s), std::move(*m)};
}

namespace detail {

struct bit_graph {
  std::vector<vertex> ids;
  std::vector<std::uint64_t> adj;

  explicit bit_graph(const graph& g) : ids(g.vertices()), adj(ids.size(), 0) {
    if (ids.size() > 64)
      throw std::domain_error("brute force oracle supports at most 64 vertices");
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (vertex w : g.neighbors(ids[i])) {
        auto j = static_cast<std::size_t>(
            std::lower_bound(ids.begin(), ids.end(), w) - ids.begin());
        adj[i] |= std::uint64_t{1} << j;
      }
  }

  bool valid(std::uint64_t deleted) const {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (deleted >> i & 1)
        continue;
      if (std::popcount(adj[i] & ~deleted) != 1)
        return false;
    }
    return true;
  }
};

} // namespace detail

/// Smallest valid deletion set of size at most k, or nothing. Subsets are
/// tried by increasing size and lexicographically within a size, so the
/// answer is the lexicographically first minimum solution.
inline std::optional<solution> brute_force_ind(const graph& g, std::size_t k) {
  detail::bit_graph bg(g);
  const std::size_t n = bg.ids.size();
  for (std::size_t size = 0; size <= std::min(k, n); ++size) {
    std::vector<std::size_t> pick(size);
    for (std::size_t i = 0; i < size; ++i)
      pick[i] = i;
    while (true) {
      std::uint64_t mask = 0;
      for (auto i : pick)
        mask |= std::uint64_t{1} << i;
      if (bg.valid(mask)) {
        vertex_set s;
        for (auto i : pick)
          s.push_back(bg.ids[i]);
        return certify(g, std::move(s));
      }
      // next combination in lexicographic order
      std::size_t i = size;
      while (i > 0 && pick[i - 1] == n - size + i - 1)
        --i;
      if (i == 0)
        break;
      ++pick[i - 1];
      for (std::size_t j = i; j < size; ++j)
        pick[j] = pick[j - 1] + 1;
    }
  }
  return std::nullopt;
}

/// Minimum valid deletion set. Always exists: deleting everything is valid.
inline solution brute_force_extend(const graph& g) {
  return *brute_force_ind(g, g.order());
}

} // namespace indm
