#pragma once

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace indm {

using vertex = std::uint32_t;

/// Sorted, duplicate-free list of vertex ids.
using vertex_set = std::vector<vertex>;

struct edge {
  vertex u;
  vertex v;

  auto operator<=>(const edge&) const = default;
};

inline vertex_set make_set(std::vector<vertex> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

inline vertex_set make_set(std::initializer_list<vertex> ids) {
  return make_set(std::vector<vertex>(ids));
}

inline bool set_contains(const vertex_set& s, vertex v) {
  return std::binary_search(s.begin(), s.end(), v);
}

inline vertex_set set_union(const vertex_set& a, const vertex_set& b) {
  vertex_set out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline vertex_set set_difference(const vertex_set& a, const vertex_set& b) {
  vertex_set out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool is_subset(const vertex_set& a, const vertex_set& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

/// Simple undirected graph over stable vertex ids.
///
/// Adjacency is indexed directly by id, so ids should stay small. Neighbor
/// lists are kept sorted; every query iterates in ascending id order. A graph
/// is not modified after construction; deletion builds a new value.
class graph {
public:
  graph() = default;

  /// Builds a graph from explicit vertices and edges. Endpoints not listed in
  /// `vertices` are added. Repeated edges are merged; a self-loop throws
  /// validation_error.
  graph(std::vector<vertex> vertices, const std::vector<edge>& edges) {
    for (const edge& e : edges) {
      if (e.u == e.v)
        throw validation_error("self-loop on vertex " + std::to_string(e.u));
      vertices.push_back(e.u);
      vertices.push_back(e.v);
    }
    vertices_ = make_set(std::move(vertices));
    if (!vertices_.empty()) {
      adj_.resize(static_cast<std::size_t>(vertices_.back()) + 1);
      present_.resize(adj_.size(), 0);
    }
    for (vertex v : vertices_)
      present_[v] = 1;
    for (const edge& e : edges) {
      adj_[e.u].push_back(e.v);
      adj_[e.v].push_back(e.u);
    }
    for (vertex v : vertices_) {
      auto& nb = adj_[v];
      std::sort(nb.begin(), nb.end());
      nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
      edge_count_ += nb.size();
    }
    edge_count_ /= 2;
  }

  graph(std::initializer_list<vertex> vertices, std::initializer_list<edge> edges)
      : graph(std::vector<vertex>(vertices), std::vector<edge>(edges)) {}

  const vertex_set& vertices() const noexcept { return vertices_; }

  bool contains(vertex v) const noexcept { return v < present_.size() && present_[v]; }

  std::span<const vertex> neighbors(vertex v) const {
    if (!contains(v))
      return {};
    return adj_[v];
  }

  std::size_t degree(vertex v) const { return neighbors(v).size(); }

  bool adjacent(vertex u, vertex v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  std::size_t order() const noexcept { return vertices_.size(); }
  std::size_t size() const noexcept { return edge_count_; }
  bool empty() const noexcept { return vertices_.empty(); }

  std::size_t max_degree() const {
    std::size_t d = 0;
    for (vertex v : vertices_)
      d = std::max(d, adj_[v].size());
    return d;
  }

  /// N[v] as a sorted set.
  vertex_set closed_neighborhood(vertex v) const {
    auto nb = neighbors(v);
    vertex_set out(nb.begin(), nb.end());
    out.insert(std::upper_bound(out.begin(), out.end(), v), v);
    return out;
  }

  /// Edges with u < v in ascending order.
  std::vector<edge> edges() const {
    std::vector<edge> out;
    out.reserve(edge_count_);
    for (vertex u : vertices_)
      for (vertex v : adj_[u])
        if (u < v)
          out.push_back({u, v});
    return out;
  }

  bool operator==(const graph& o) const {
    return vertices_ == o.vertices_ && edges() == o.edges();
  }

  friend graph delete_vertices(const graph& g, const vertex_set& s);

private:
  vertex_set vertices_;
  std::vector<std::vector<vertex>> adj_;
  std::vector<char> present_;
  std::size_t edge_count_ = 0;
};

/// G[V(g) \ s]. Surviving ids are unchanged. Throws std::domain_error if s is
/// not a subset of V(g).
inline graph delete_vertices(const graph& g, const vertex_set& s) {
  for (vertex v : s)
    if (!g.contains(v))
      throw std::domain_error("cannot delete vertex " + std::to_string(v) + ": not in graph");
  if (s.empty())
    return g;
  graph out;
  out.vertices_ = set_difference(g.vertices_, s);
  out.present_.assign(g.present_.size(), 0);
  for (vertex v : out.vertices_)
    out.present_[v] = 1;
  // trim storage to the largest surviving id
  std::size_t cap = out.vertices_.empty() ? 0 : static_cast<std::size_t>(out.vertices_.back()) + 1;
  out.present_.resize(cap);
  out.adj_.resize(cap);
  for (vertex v : out.vertices_) {
    auto& nb = out.adj_[v];
    for (vertex w : g.adj_[v])
      if (w < cap && out.present_[w])
        nb.push_back(w);
    out.edge_count_ += nb.size();
  }
  out.edge_count_ /= 2;
  return out;
}

inline graph induced_subgraph(const graph& g, const vertex_set& keep) {
  return delete_vertices(g, set_difference(g.vertices(), keep));
}

/// Degree -> number of vertices with that degree.
inline std::map<std::size_t, std::size_t> degree_profile(const graph& g) {
  std::map<std::size_t, std::size_t> out;
  for (vertex v : g.vertices())
    ++out[g.degree(v)];
  return out;
}

inline std::size_t count_degree(const graph& g, std::size_t d) {
  return static_cast<std::size_t>(std::count_if(g.vertices().begin(), g.vertices().end(),
                                                [&](vertex v) { return g.degree(v) == d; }));
}

/// Connected components, each sorted, ordered by smallest member.
inline std::vector<vertex_set> connected_components(const graph& g) {
  std::vector<vertex_set> out;
  std::vector<char> seen(g.vertices().empty() ? 0 : g.vertices().back() + 1, 0);
  for (vertex root : g.vertices()) {
    if (seen[root])
      continue;
    vertex_set comp;
    std::vector<vertex> stack{root};
    seen[root] = 1;
    while (!stack.empty()) {
      vertex v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (vertex w : g.neighbors(v))
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
      ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
      ++j;
    if (j > i)
      out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::uint64_t to_uint(std::string_view tok, std::size_t line) {
  std::uint64_t x = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (ec != std::errc{} || p != tok.data() + tok.size())
    throw parse_error(line, "expected a non-negative integer, got '" + std::string(tok) + "'");
  if (x > 0xFFFFFFFEull)
    throw parse_error(line, "vertex id out of range");
  return x;
}

struct data_line {
  std::size_t number;
  std::vector<std::string_view> tokens;
};

inline graph parse_dimacs(const std::vector<data_line>& lines) {
  std::vector<vertex> vertices;
  std::vector<edge> edges;
  bool have_header = false;
  std::uint64_t n = 0;
  for (const auto& [no, tok] : lines) {
    if (tok[0] == "p") {
      if (have_header)
        throw parse_error(no, "duplicate 'p' header");
      if (tok.size() != 4)
        throw parse_error(no, "expected 'p edge <n> <m>'");
      n = to_uint(tok[2], no);
      to_uint(tok[3], no);
      have_header = true;
      for (std::uint64_t v = 1; v <= n; ++v)
        vertices.push_back(static_cast<vertex>(v));
    } else if (tok[0] == "e") {
      if (tok.size() != 3)
        throw parse_error(no, "expected 'e <u> <v>'");
      auto u = to_uint(tok[1], no), v = to_uint(tok[2], no);
      if (have_header && (u < 1 || v < 1 || u > n || v > n))
        throw validation_error("line " + std::to_string(no) + ": endpoint outside 1.." +
                               std::to_string(n));
      edges.push_back({static_cast<vertex>(u), static_cast<vertex>(v)});
    } else {
      throw parse_error(no, "unexpected DIMACS line type '" + std::string(tok[0]) + "'");
    }
  }
  return graph(std::move(vertices), edges);
}

inline graph parse_edge_list(const std::vector<data_line>& lines) {
  std::vector<vertex> vertices;
  std::vector<edge> edges;
  std::size_t first = 0;
  // "n m" header: accepted when exactly m pair lines follow and all ids fit in it
  if (!lines.empty() && lines[0].tokens.size() == 2) {
    auto n = to_uint(lines[0].tokens[0], lines[0].number);
    auto m = to_uint(lines[0].tokens[1], lines[0].number);
    bool header = lines.size() - 1 == m;
    bool zero_based = false;
    for (std::size_t i = 1; header && i < lines.size(); ++i) {
      if (lines[i].tokens.size() != 2) {
        header = false;
        break;
      }
      for (auto t : lines[i].tokens) {
        auto x = to_uint(t, lines[i].number);
        zero_based = zero_based || x == 0;
        if (x > n)
          header = false;
      }
    }
    if (header && zero_based && n > 0) {
      for (std::size_t i = 1; i < lines.size(); ++i)
        for (auto t : lines[i].tokens)
          if (to_uint(t, lines[i].number) >= n)
            header = false;
    }
    if (header) {
      first = 1;
      for (std::uint64_t v = zero_based ? 0 : 1; v < n + (zero_based ? 0 : 1); ++v)
        vertices.push_back(static_cast<vertex>(v));
    }
  }
  for (std::size_t i = first; i < lines.size(); ++i) {
    const auto& [no, tok] = lines[i];
    if (tok.size() == 1 && first == 0) {
      vertices.push_back(static_cast<vertex>(to_uint(tok[0], no)));
    } else if (tok.size() == 2) {
      edges.push_back({static_cast<vertex>(to_uint(tok[0], no)),
                       static_cast<vertex>(to_uint(tok[1], no))});
    } else {
      throw parse_error(no, "expected 'u v'");
    }
  }
  return graph(std::move(vertices), edges);
}

} // namespace detail

/// Parses DIMACS (`p edge n m`, `e u v`, `c` comments) or a plain edge list
/// (`u v` per line, `#` comments, optional `n m` header, a lone id declares an
/// isolated vertex). The format is picked from the first data line.
inline graph parse_graph(std::string_view text) {
  std::vector<detail::data_line> lines;
  std::size_t no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos)
      end = text.size();
    ++no;
    std::string_view line = text.substr(pos, end - pos);
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    auto tok = detail::split_ws(line);
    if (!tok.empty() && tok[0] != "c")
      lines.push_back({no, std::move(tok)});
    pos = end + 1;
  }
  if (lines.empty())
    return {};
  const auto& head = lines.front().tokens[0];
  if (head == "p" || head == "e")
    return detail::parse_dimacs(lines);
  return detail::parse_edge_list(lines);
}

/// Canonical edge-list text: isolated vertices first (one id per line), then
/// edges `u v` with u < v, everything ascending. parse_graph inverts it.
inline std::string serialize(const graph& g) {
  std::ostringstream os;
  for (vertex v : g.vertices())
    if (g.degree(v) == 0)
      os << v << '\n';
  for (const edge& e : g.edges())
    os << e.u << ' ' << e.v << '\n';
  return os.str();
}

/// DIMACS text; requires the vertex set to be exactly 1..n.
inline std::string serialize_dimacs(const graph& g) {
  const auto& vs = g.vertices();
  for (std::size_t i = 0; i < vs.size(); ++i)
    if (vs[i] != i + 1)
      throw validation_error("DIMACS output needs vertex ids 1..n");
  std::ostringstream os;
  os << "p edge " << g.order() << ' ' << g.size() << '\n';
  for (const edge& e : g.edges())
    os << "e " << e.u << ' ' << e.v << '\n';
  return os.str();
}

} // namespace indm
