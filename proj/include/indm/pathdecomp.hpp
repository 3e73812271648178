#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"

namespace indm {

struct path_decomposition {
  std::vector<vertex_set> bags;

  bool operator==(const path_decomposition&) const = default;
};

/// Largest bag size minus one; -1 when every bag is empty.
inline int width(const path_decomposition& pd) {
  std::size_t m = 0;
  for (const auto& b : pd.bags)
    m = std::max(m, b.size());
  return static_cast<int>(m) - 1;
}

/// Cover, edge and interval conditions.
inline bool validate(const graph& g, const path_decomposition& pd) {
  std::map<vertex, std::size_t> first, last;
  for (std::size_t i = 0; i < pd.bags.size(); ++i) {
    const auto& bag = pd.bags[i];
    if (!std::is_sorted(bag.begin(), bag.end()) ||
        std::adjacent_find(bag.begin(), bag.end()) != bag.end())
      return false;
    for (vertex v : bag) {
      if (!g.contains(v))
        return false;
      if (auto it = last.find(v); it != last.end() && it->second != i - 1)
        return false; // reappears after a gap
      first.try_emplace(v, i);
      last[v] = i;
    }
  }
  if (first.size() != g.order())
    return false;
  for (const edge& e : g.edges()) {
    // both intervals must overlap
    if (std::max(first[e.u], first[e.v]) > std::min(last[e.u], last[e.v]))
      return false;
  }
  return true;
}

enum class nice_kind { leaf, introduce, forget };

struct nice_node {
  nice_kind kind = nice_kind::leaf;
  vertex v = 0; // introduced or forgotten vertex; unused for leaf
  vertex_set bag;

  bool operator==(const nice_node&) const = default;
};

/// Leaf, then one introduce or forget per step, ending at the empty bag.
struct nice_path_decomposition {
  std::vector<nice_node> nodes;

  path_decomposition plain() const {
    path_decomposition pd;
    for (const auto& n : nodes)
      pd.bags.push_back(n.bag);
    return pd;
  }

  int width() const { return indm::width(plain()); }

  bool operator==(const nice_path_decomposition&) const = default;
};

inline bool validate(const graph& g, const nice_path_decomposition& npd) {
  const auto& ns = npd.nodes;
  if (ns.empty() || ns.front().kind != nice_kind::leaf || !ns.front().bag.empty() ||
      !ns.back().bag.empty())
    return false;
  for (std::size_t i = 1; i < ns.size(); ++i) {
    const auto& prev = ns[i - 1].bag;
    const auto& cur = ns[i];
    if (cur.kind == nice_kind::introduce) {
      if (set_contains(prev, cur.v) || cur.bag != set_union(prev, {cur.v}))
        return false;
    } else if (cur.kind == nice_kind::forget) {
      if (!set_contains(prev, cur.v) || cur.bag != set_difference(prev, {cur.v}))
        return false;
    } else {
      return false;
    }
  }
  return validate(g, npd.plain());
}

/// Between consecutive bags: forget departing vertices, then introduce
/// arriving ones, each in ascending id order. Width is unchanged.
inline nice_path_decomposition make_nice(const path_decomposition& pd) {
  nice_path_decomposition out;
  out.nodes.push_back({nice_kind::leaf, 0, {}});
  vertex_set cur;
  auto step_to = [&](const vertex_set& next) {
    for (vertex v : set_difference(cur, next)) {
      cur = set_difference(cur, {v});
      out.nodes.push_back({nice_kind::forget, v, cur});
    }
    for (vertex v : set_difference(next, cur)) {
      cur = set_union(cur, {v});
      out.nodes.push_back({nice_kind::introduce, v, cur});
    }
  };
  for (const auto& bag : pd.bags)
    step_to(bag);
  step_to({});
  return out;
}

// --- contraction -----------------------------------------------------------

/// A maximal run of degree-<=2 vertices whose ends attach to x and y
/// (x == y when the run closes a cycle through x). `path` runs from the
/// vertex next to x to the vertex next to y.
struct red_edge {
  vertex x;
  vertex y;
  std::vector<vertex> path;

  bool operator==(const red_edge&) const = default;
};

/// A pendant run hanging off v. `path` starts at the free end and finishes
/// at the neighbor of v.
struct red_vertex {
  vertex v;
  std::vector<vertex> path;

  bool operator==(const red_vertex&) const = default;
};

struct contraction_record {
  graph contracted;
  std::vector<red_edge> red_edges;
  std::vector<red_vertex> red_vertices;
  vertex_set representatives; // kept vertices of components with no degree-3 vertex
};

/// Keeps the degree-3 vertices (plus one representative per component that
/// has none) and folds every run of degree-<=2 vertices into a red edge
/// between its two attachment points or a red vertex at its single one.
/// Throws std::domain_error if the maximum degree exceeds 3.
inline contraction_record contract(const graph& g) {
  if (g.max_degree() > 3)
    throw std::domain_error("contraction needs maximum degree at most 3");
  contraction_record rec;
  vertex_set core;
  for (vertex v : g.vertices())
    if (g.degree(v) == 3)
      core.push_back(v);
  for (const auto& comp : connected_components(g)) {
    if (std::any_of(comp.begin(), comp.end(), [&](vertex v) { return g.degree(v) == 3; }))
      continue;
    // a cycle keeps its smallest vertex, a path its smallest end
    vertex rep = comp.front();
    for (vertex v : comp)
      if (g.degree(v) <= 1) {
        rep = v;
        break;
      }
    rec.representatives.push_back(rep);
  }
  rec.representatives = make_set(std::move(rec.representatives));
  core = set_union(core, rec.representatives);

  std::vector<char> done(g.vertices().empty() ? 0 : g.vertices().back() + 1, 0);
  for (vertex v : core)
    done[v] = 1;
  auto inner = [&](vertex v) { return !set_contains(core, v); };

  for (vertex start : g.vertices()) {
    if (done[start])
      continue;
    // walk to one end of the run of non-core vertices containing start
    vertex end = start, prev = start;
    while (true) {
      std::optional<vertex> step;
      for (vertex w : g.neighbors(end))
        if (inner(w) && w != prev && w != end)
          step = w;
      if (!step || *step == start)
        break;
      prev = end;
      end = *step;
    }
    // walk back from that end, collecting the run in order
    std::vector<vertex> run{end};
    done[end] = 1;
    prev = end;
    vertex cur = end;
    while (true) {
      std::optional<vertex> step;
      for (vertex w : g.neighbors(cur))
        if (inner(w) && !done[w])
          step = w;
      if (!step)
        break;
      run.push_back(*step);
      done[*step] = 1;
      prev = cur;
      cur = *step;
    }
    auto attachments = [&](vertex v) {
      std::vector<vertex> out;
      for (vertex w : g.neighbors(v))
        if (!inner(w))
          out.push_back(w);
      return out;
    };
    std::vector<vertex> head = attachments(run.front());
    std::vector<vertex> tail = run.size() > 1 ? attachments(run.back()) : std::vector<vertex>{};
    if (run.size() == 1 && head.size() == 2) {
      tail = {head[1]};
      head.resize(1);
    }
    if (!head.empty() && !tail.empty()) {
      rec.red_edges.push_back({head[0], tail[0], run});
    } else if (!head.empty()) {
      std::reverse(run.begin(), run.end());
      rec.red_vertices.push_back({head[0], run});
    } else if (!tail.empty()) {
      rec.red_vertices.push_back({tail[0], run});
    }
  }

  std::vector<edge> edges;
  for (const edge& e : g.edges())
    if (!inner(e.u) && !inner(e.v))
      edges.push_back(e);
  for (const auto& r : rec.red_edges)
    if (r.x != r.y)
      edges.push_back({std::min(r.x, r.y), std::max(r.x, r.y)});
  rec.contracted = graph(std::vector<vertex>(core.begin(), core.end()), edges);
  return rec;
}

namespace detail {

/// Bags for a sweep of `chain` on top of a fixed base bag, holding at most two
/// chain vertices at a time: B+c1, B+c1+c2, B+c2, ..., B+ca.
inline void sweep_chain(std::vector<vertex_set>& out, const vertex_set& base,
                        const std::vector<vertex>& chain) {
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (i > 0)
      out.push_back(set_union(base, make_set({chain[i - 1], chain[i]})));
    out.push_back(set_union(base, {chain[i]}));
  }
}

} // namespace detail

/// Re-inserts the contracted runs into a decomposition of the contracted
/// graph. The first run ending at a vertex y is swept just before y is
/// introduced, on top of the bag preceding that introduction, with its last
/// vertex carried into y's bag. Further runs ending at y, and cycles through
/// y, are swept on top of y's introduce bag. Width grows by at most 2.
inline path_decomposition expand(const contraction_record& rec, const path_decomposition& pd) {
  if (!validate(rec.contracted, pd))
    throw contract_error("expand needs a valid decomposition of the contracted graph");
  if (rec.red_edges.empty() && rec.red_vertices.empty())
    return pd;

  const nice_path_decomposition nice = make_nice(pd);
  std::map<vertex, std::size_t> intro_at;
  for (std::size_t i = 0; i < nice.nodes.size(); ++i)
    if (nice.nodes[i].kind == nice_kind::introduce)
      intro_at[nice.nodes[i].v] = i;

  // chains that must finish next to y, oriented to end beside y
  std::map<vertex, std::vector<std::vector<vertex>>> incoming, loops;
  for (const auto& r : rec.red_edges) {
    if (r.x == r.y) {
      loops[r.x].push_back(r.path);
    } else if (intro_at.at(r.x) < intro_at.at(r.y)) {
      incoming[r.y].push_back(r.path);
    } else {
      incoming[r.x].emplace_back(r.path.rbegin(), r.path.rend());
    }
  }
  for (const auto& r : rec.red_vertices)
    incoming[r.v].push_back(r.path);

  path_decomposition out;
  for (std::size_t i = 0; i < nice.nodes.size(); ++i) {
    const nice_node& node = nice.nodes[i];
    if (node.kind != nice_kind::introduce) {
      out.bags.push_back(node.bag);
      continue;
    }
    const vertex y = node.v;
    const vertex_set& before = nice.nodes[i - 1].bag;
    std::vector<std::vector<vertex>> after;
    if (auto it = incoming.find(y); it != incoming.end()) {
      const auto& first = it->second.front();
      detail::sweep_chain(out.bags, before, first);
      out.bags.push_back(set_union(node.bag, {first.back()}));
      after.assign(it->second.begin() + 1, it->second.end());
    }
    out.bags.push_back(node.bag);
    if (auto it = loops.find(y); it != loops.end())
      after.insert(after.end(), it->second.begin(), it->second.end());
    for (const auto& chain : after) {
      detail::sweep_chain(out.bags, node.bag, chain);
      out.bags.push_back(node.bag);
    }
  }
  return out;
}

// --- base decompositions ---------------------------------------------------

/// Bags X_i = {v_i} plus every earlier vertex that still has a neighbor at
/// position >= i. Width equals the vertex separation of the order.
inline path_decomposition decomposition_from_order(const graph& g,
                                                   const std::vector<vertex>& order) {
  std::map<vertex, std::size_t> pos;
  for (std::size_t i = 0; i < order.size(); ++i)
    pos[order[i]] = i;
  std::vector<std::size_t> last_needed(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    last_needed[i] = i;
    for (vertex w : g.neighbors(order[i]))
      last_needed[i] = std::max(last_needed[i], pos.at(w));
  }
  path_decomposition pd;
  for (std::size_t i = 0; i < order.size(); ++i) {
    vertex_set bag{order[i]};
    for (std::size_t j = 0; j < i; ++j)
      if (last_needed[j] >= i)
        bag.push_back(order[j]);
    pd.bags.push_back(make_set(std::move(bag)));
  }
  return pd;
}

inline constexpr std::size_t default_exact_threshold = 15;
inline constexpr std::size_t max_exact_threshold = 24;

/// Exact-threshold from INDM_EXACT_THRESHOLD when set and sane.
inline std::size_t exact_threshold_from_env() {
  if (const char* s = std::getenv("INDM_EXACT_THRESHOLD")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(s, &end, 10);
    if (end != s && *end == '\0' && v >= 4 && v <= max_exact_threshold)
      return v;
  }
  return default_exact_threshold;
}

namespace detail {

/// Minimum vertex separation order of a connected graph, by dynamic
/// programming over vertex subsets.
inline std::vector<vertex> exact_order(const graph& g) {
  const auto& ids = g.vertices();
  const std::size_t n = ids.size();
  if (n > max_exact_threshold)
    throw std::length_error("exact pathwidth search is limited to " +
                            std::to_string(max_exact_threshold) + " vertices");
  std::vector<std::uint32_t> adj(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (vertex w : g.neighbors(ids[i]))
      adj[i] |= 1u << (std::lower_bound(ids.begin(), ids.end(), w) - ids.begin());
  const std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1;
  std::vector<std::uint8_t> best(std::size_t{1} << n, 0);
  for (std::uint32_t s = 1; s <= full; ++s) {
    std::uint8_t boundary = 0;
    std::uint8_t sub = std::numeric_limits<std::uint8_t>::max();
    for (std::size_t i = 0; i < n; ++i) {
      if (!(s >> i & 1))
        continue;
      if (adj[i] & ~s & full)
        ++boundary;
      sub = std::min(sub, best[s & ~(1u << i)]);
    }
    best[s] = std::max(boundary, sub);
  }
  // peel the last vertex repeatedly
  std::vector<vertex> order(n);
  std::uint32_t s = full;
  for (std::size_t k = n; k-- > 0;) {
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i)
      if ((s >> i & 1) && (pick == n || best[s & ~(1u << i)] < best[s & ~(1u << pick)]))
        pick = i;
    order[k] = ids[pick];
    s &= ~(1u << pick);
  }
  return order;
}

inline std::size_t separation(const graph& g, const std::vector<vertex>& order) {
  return static_cast<std::size_t>(width(decomposition_from_order(g, order)) + 1);
}

/// Grow the placed prefix by the vertex that leaves the smallest boundary;
/// ties go to fewer unplaced neighbors, then smaller id.
inline std::vector<vertex> greedy_boundary_order(const graph& g) {
  const auto& ids = g.vertices();
  std::map<vertex, std::size_t> unplaced; // unplaced-neighbor count
  for (vertex v : ids)
    unplaced[v] = g.degree(v);
  vertex_set placed;
  std::vector<vertex> order;
  std::size_t boundary = 0;
  while (order.size() < ids.size()) {
    std::optional<vertex> pick;
    std::size_t pick_b = 0, pick_u = 0;
    for (vertex v : ids) {
      if (set_contains(placed, v))
        continue;
      // boundary after placing v: v joins if it still has unplaced
      // neighbors; placed neighbors whose last unplaced neighbor was v leave
      std::size_t b = boundary + (unplaced[v] > 0 ? 1 : 0);
      for (vertex w : g.neighbors(v))
        if (set_contains(placed, w) && unplaced[w] == 1)
          --b;
      std::size_t u = unplaced[v];
      if (!pick || b < pick_b || (b == pick_b && u < pick_u)) {
        pick = v;
        pick_b = b;
        pick_u = u;
      }
    }
    placed = set_union(placed, {*pick});
    order.push_back(*pick);
    for (vertex w : g.neighbors(*pick))
      --unplaced[w];
    boundary = pick_b;
  }
  return order;
}

/// Breadth-first order from a minimum-degree vertex, neighbors by degree.
inline std::vector<vertex> bfs_order(const graph& g) {
  std::vector<vertex> order;
  vertex_set seen;
  for (vertex root0 : g.vertices()) {
    if (set_contains(seen, root0))
      continue;
    // restart in each component from its minimum-degree vertex
    vertex root = root0;
    std::vector<vertex> comp{root0};
    vertex_set cseen{root0};
    for (std::size_t i = 0; i < comp.size(); ++i)
      for (vertex w : g.neighbors(comp[i]))
        if (!set_contains(cseen, w)) {
          cseen = set_union(cseen, {w});
          comp.push_back(w);
        }
    for (vertex v : comp)
      if (g.degree(v) < g.degree(root) || (g.degree(v) == g.degree(root) && v < root))
        root = v;
    std::vector<vertex> queue{root};
    seen = set_union(seen, {root});
    for (std::size_t i = 0; i < queue.size(); ++i) {
      std::vector<vertex> nb(g.neighbors(queue[i]).begin(), g.neighbors(queue[i]).end());
      std::stable_sort(nb.begin(), nb.end(),
                       [&](vertex a, vertex b) { return g.degree(a) < g.degree(b); });
      for (vertex w : nb)
        if (!set_contains(seen, w)) {
          seen = set_union(seen, {w});
          queue.push_back(w);
        }
    }
    order.insert(order.end(), queue.begin(), queue.end());
  }
  return order;
}

} // namespace detail

/// Decomposition of g: minimum width, per component, when a component has at
/// most `exact_threshold` vertices; otherwise the better of two greedy
/// vertex-separation orders.
inline path_decomposition base_decompose(const graph& g,
                                         std::size_t exact_threshold = default_exact_threshold) {
  path_decomposition out;
  for (const auto& comp : connected_components(g)) {
    graph sub = induced_subgraph(g, comp);
    std::vector<vertex> order;
    if (comp.size() <= exact_threshold) {
      order = detail::exact_order(sub);
    } else {
      order = detail::greedy_boundary_order(sub);
      auto alt = detail::bfs_order(sub);
      if (detail::separation(sub, alt) < detail::separation(sub, order))
        order = std::move(alt);
    }
    auto pd = decomposition_from_order(sub, order);
    out.bags.insert(out.bags.end(), pd.bags.begin(), pd.bags.end());
  }
  return out;
}

struct instance_decomposition {
  nice_path_decomposition nice;
  int width = -1;
  bool exact = false; // every component was small enough for exact search
  int bound = 0;      // ceil(2.5k/6) + 2
};

inline int width_bound(long k) {
  // ceil(2.5k / 6) = ceil(5k / 12)
  return static_cast<int>((5 * std::max(k, 0L) + 11) / 12) + 2;
}

/// Nice decomposition of a maximum-degree-3 graph, built per component: lone
/// vertices and edges get a single bag; larger components go through
/// contract, base_decompose and expand. A component within the exact
/// threshold is also decomposed directly, and the narrower result is kept.
inline instance_decomposition decompose_for_instance(
    const graph& g, long k, std::size_t exact_threshold = default_exact_threshold) {
  if (g.max_degree() > 3)
    throw std::domain_error("instance decomposition needs maximum degree at most 3");
  path_decomposition pd;
  bool exact = true;
  for (const auto& comp : connected_components(g)) {
    graph sub = induced_subgraph(g, comp);
    if (sub.max_degree() <= 1) {
      pd.bags.push_back(comp);
      continue;
    }
    auto rec = contract(sub);
    auto best = expand(rec, base_decompose(rec.contracted, exact_threshold));
    if (comp.size() <= exact_threshold) {
      auto direct = base_decompose(sub, exact_threshold);
      if (width(direct) < width(best))
        best = std::move(direct);
    } else {
      exact = false;
    }
    pd.bags.insert(pd.bags.end(), best.bags.begin(), best.bags.end());
  }
  instance_decomposition out;
  out.nice = make_nice(pd);
  out.width = out.nice.width();
  out.exact = exact;
  out.bound = width_bound(k);
  return out;
}

// --- text format -----------------------------------------------------------

/// `pd r width` then one line of ascending ids per bag.
inline std::string serialize(const path_decomposition& pd) {
  std::ostringstream os;
  os << "pd " << pd.bags.size() << ' ' << width(pd) << '\n';
  for (const auto& bag : pd.bags) {
    for (std::size_t i = 0; i < bag.size(); ++i)
      os << (i ? " " : "") << bag[i];
    os << '\n';
  }
  return os.str();
}

/// Same header; each line is `L :`, `I v : bag` or `F v : bag`.
inline std::string serialize(const nice_path_decomposition& npd) {
  std::ostringstream os;
  os << "pd " << npd.nodes.size() << ' ' << npd.width() << '\n';
  for (const auto& n : npd.nodes) {
    switch (n.kind) {
    case nice_kind::leaf:
      os << "L :";
      break;
    case nice_kind::introduce:
      os << "I " << n.v << " :";
      break;
    case nice_kind::forget:
      os << "F " << n.v << " :";
      break;
    }
    for (vertex v : n.bag)
      os << ' ' << v;
    os << '\n';
  }
  return os.str();
}

namespace detail {

inline std::vector<std::string> text_lines(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream is{std::string(text)};
  for (std::string line; std::getline(is, line);) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    out.push_back(line);
  }
  return out;
}

inline std::size_t read_header(const std::vector<std::string>& lines) {
  std::istringstream h(lines.empty() ? std::string() : lines[0]);
  std::string tag;
  long r = -1, w = 0;
  if (!(h >> tag >> r >> w) || tag != "pd" || r < 0)
    throw parse_error(1, "expected 'pd <r> <width>'");
  if (lines.size() < static_cast<std::size_t>(r) + 1)
    throw parse_error(lines.size(), "fewer bag lines than declared");
  return static_cast<std::size_t>(r);
}

inline vertex_set read_ids(std::istringstream& is, std::size_t line) {
  std::vector<vertex> ids;
  std::string tok;
  while (is >> tok)
    ids.push_back(static_cast<vertex>(to_uint(tok, line)));
  return make_set(std::move(ids));
}

} // namespace detail

inline path_decomposition parse_path_decomposition(std::string_view text) {
  auto lines = detail::text_lines(text);
  std::size_t r = detail::read_header(lines);
  path_decomposition pd;
  for (std::size_t i = 1; i <= r; ++i) {
    std::istringstream is(lines[i]);
    pd.bags.push_back(detail::read_ids(is, i + 1));
  }
  return pd;
}

inline nice_path_decomposition parse_nice_path_decomposition(std::string_view text) {
  auto lines = detail::text_lines(text);
  std::size_t r = detail::read_header(lines);
  nice_path_decomposition npd;
  for (std::size_t i = 1; i <= r; ++i) {
    std::istringstream is(lines[i]);
    std::string tag, colon;
    nice_node n;
    is >> tag;
    if (tag == "L") {
      n.kind = nice_kind::leaf;
    } else if (tag == "I" || tag == "F") {
      n.kind = tag == "I" ? nice_kind::introduce : nice_kind::forget;
      std::string v;
      is >> v;
      n.v = static_cast<vertex>(detail::to_uint(v, i + 1));
    } else {
      throw parse_error(i + 1, "expected tag L, I or F");
    }
    if (!(is >> colon) || colon != ":")
      throw parse_error(i + 1, "expected ':' before the bag");
    n.bag = detail::read_ids(is, i + 1);
    npd.nodes.push_back(std::move(n));
  }
  return npd;
}

} // namespace indm
