// indm: command-line frontend for the induced-matching deletion solver.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <indm/indm.hpp>

namespace fs = std::filesystem;
using namespace indm;

namespace {

// exit statuses
constexpr int ok = 0;
constexpr int infeasible = 1;
constexpr int usage = 2;

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

graph load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw usage_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_graph(ss.str());
}

std::string join(const std::vector<vertex>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i)
    out += (i ? "," : "") + std::to_string(ids[i]);
  return out;
}

std::string join_pairs(const std::vector<vertex_pair>& m) {
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i)
    out += (i ? "," : "") + std::to_string(m[i].first) + "-" + std::to_string(m[i].second);
  return out;
}

std::vector<vertex> parse_ids(const std::string& text) {
  std::vector<vertex> out;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (tok.empty())
      continue;
    try {
      std::size_t used = 0;
      unsigned long v = std::stoul(tok, &used);
      if (used != tok.size() || v > std::numeric_limits<vertex>::max())
        throw std::invalid_argument(tok);
      out.push_back(static_cast<vertex>(v));
    } catch (const std::exception&) {
      throw usage_error("bad vertex id '" + tok + "'");
    }
  }
  return out;
}

void print_stats(const pipeline_stats& s) {
  std::cout << "stats: nodes=" << s.search.nodes_expanded << " leaves=" << s.search.leaves
            << " pruned=" << s.search.pruned << " max_depth=" << s.search.max_depth
            << " max_width=" << s.max_width() << " dp_calls=" << s.dp_calls
            << " gate_rejections=" << s.gate_rejections;
  for (std::size_t i = 0; i < rule_count; ++i)
    std::cout << ' ' << rule_name(static_cast<rule>(i)) << '=' << s.search.rule_fires[i];
  std::cout << '\n';
}

struct bench_row {
  std::size_t n, m;
  long k;
  bool yes;
  std::size_t size;
  std::uint64_t nodes, leaves;
  int width;
  double millis;
};

// Solves at the given budget, or at the optimum when k < 0.
bench_row bench_one(const graph& g, long k, const solve_options& opt) {
  if (k < 0)
    k = static_cast<long>(solve_extend(g, opt).sol.deleted.size());
  auto t0 = std::chrono::steady_clock::now();
  auto a = solve_ind(g, k, opt);
  auto t1 = std::chrono::steady_clock::now();
  return {g.order(),
          g.size(),
          k,
          a.decision,
          a.sol ? a.sol->deleted.size() : 0,
          a.stats.search.nodes_expanded,
          a.stats.search.leaves,
          a.stats.max_width(),
          std::chrono::duration<double, std::milli>(t1 - t0).count()};
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deletion to induced matching: solve, verify, decompose, bench"};
  app.require_subcommand(1);
  app.fallthrough();

  bool json = false;
  std::size_t threshold = exact_threshold_from_env();
  app.add_flag("--json", json, "JSON output");
  app.add_option("--threshold", threshold, "largest component decomposed exactly")
      ->check(CLI::Range(std::size_t{4}, max_exact_threshold));

  std::string file;
  long k = -1;

  auto* ind = app.add_subcommand("solve-ind", "decide whether at most K deletions suffice");
  ind->add_option("-k", k, "deletion budget")->required()->check(CLI::NonNegativeNumber);
  ind->add_option("FILE", file)->required();

  auto* ext = app.add_subcommand("solve-extend", "minimum deletion set");
  ext->add_option("FILE", file)->required();

  std::string set_text;
  auto* ver = app.add_subcommand("verify", "check a deletion set");
  ver->add_option("FILE", file)->required();
  ver->add_option("--set", set_text, "comma-separated vertex ids")->required();
  ver->add_option("-k", k, "budget")->check(CLI::NonNegativeNumber);

  bool nice = false, trace = false, literal = false;
  auto* dec = app.add_subcommand("decompose", "path decomposition of the graph");
  dec->add_option("FILE", file)->required();
  dec->add_option("-k", k, "budget used for the width bound")->check(CLI::NonNegativeNumber);
  dec->add_flag("--nice", nice, "print the nice form");
  dec->add_flag("--dp", trace, "run the coloring DP and print its trace");
  dec->add_flag("--literal", literal, "with --dp, let forgotten vertices stay unpaired");

  std::string dir;
  std::size_t random_count = 0;
  std::uint64_t seed = 1;
  std::size_t random_n = 14;
  bool no_timing = false;
  auto* bench = app.add_subcommand("bench", "CSV of search statistics per instance");
  bench->add_option("DIR", dir, "directory of instance files");
  bench->add_option("-k", k, "budget (default: the optimum)")->check(CLI::NonNegativeNumber);
  bench->add_option("--random", random_count, "random G(n, 0.3) instances instead of DIR");
  bench->add_option("--n", random_n, "vertices per random instance")->check(CLI::Range(1, 64));
  bench->add_option("--seed", seed, "seed for --random");
  bench->add_flag("--no-timing", no_timing, "print 0 in the millis column");

  std::string vec_text;
  auto* bn = app.add_subcommand("branching-number", "root of a branching vector");
  bn->add_option("VECTOR", vec_text, "comma-separated decrements, e.g. 1,4,4,4,4")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  solve_options opt;
  opt.exact_threshold = threshold;

  try {
    if (*bn) {
      std::vector<int> t;
      for (vertex x : parse_ids(vec_text))
        t.push_back(static_cast<int>(x));
      double c = branching_number(branching_vector(t));
      if (json)
        std::cout << nlohmann::json{{"vector", t}, {"root", c}}.dump() << '\n';
      else
        std::cout << std::fixed << std::setprecision(4) << c << '\n';
      return ok;
    }

    if (*ind) {
      graph g = load(file);
      auto a = solve_ind(g, k, opt);
      if (json) {
        std::cout << to_json(a).dump() << '\n';
      } else {
        std::cout << "decision: " << (a.decision ? "yes" : "no") << '\n';
        if (a.sol)
          std::cout << "solution: " << join(a.sol->deleted) << '\n'
                    << "matching: " << join_pairs(a.sol->matching) << '\n';
        print_stats(a.stats);
      }
      return ok;
    }

    if (*ext) {
      graph g = load(file);
      auto a = solve_extend(g, opt);
      if (json) {
        std::cout << to_json(a).dump() << '\n';
      } else {
        std::cout << "size: " << a.sol.deleted.size() << '\n'
                  << "solution: " << join(a.sol.deleted) << '\n'
                  << "matching: " << join_pairs(a.sol.matching) << '\n';
        print_stats(a.stats);
      }
      return ok;
    }

    if (*ver) {
      graph g = load(file);
      vertex_set s = make_set(parse_ids(set_text));
      for (vertex v : s)
        if (!g.contains(v))
          throw usage_error("vertex " + std::to_string(v) + " is not in the graph");
      std::optional<long> budget;
      if (k >= 0)
        budget = k;
      bool good = verify(g, s, budget);
      if (json)
        std::cout << nlohmann::json{{"valid", good}, {"size", s.size()}}.dump() << '\n';
      else
        std::cout << (good ? "valid" : "invalid") << '\n';
      return good ? ok : infeasible;
    }

    if (*dec) {
      graph g = load(file);
      nice_path_decomposition npd;
      std::optional<int> bound;
      if (g.max_degree() <= 3) {
        auto d = decompose_for_instance(g, std::max(k, 0L), threshold);
        npd = std::move(d.nice);
        if (k >= 0)
          bound = d.bound;
      } else {
        npd = make_nice(base_decompose(g, threshold));
      }
      nlohmann::json j;
      if (json) {
        j["width"] = npd.width();
        if (bound)
          j["bound"] = *bound;
        if (nice)
          j["nice"] = serialize(npd);
        else
          j["bags"] = npd.plain().bags;
      } else {
        std::cout << "width " << npd.width() << '\n';
        if (bound)
          std::cout << "bound " << *bound << '\n';
        std::cout << (nice ? serialize(npd) : serialize(npd.plain()));
      }
      if (trace) {
        dp_options dopt;
        dopt.rule = literal ? forget_rule::literal : forget_rule::exact_pairs;
        auto r = solve_dp(g, npd, dopt);
        if (json) {
          j["dp"] = to_json(r);
        } else {
          std::cout << "dp cost " << r.minimum << '\n';
          for (const auto& e : r.trace) {
            const char* tag = e.kind == nice_kind::leaf        ? "L"
                              : e.kind == nice_kind::introduce ? "I"
                                                               : "F";
            std::cout << tag;
            if (e.kind != nice_kind::leaf)
              std::cout << ' ' << e.v;
            std::cout << " bag=" << e.bag_size << " finite=" << e.finite_entries << '\n';
          }
        }
      }
      if (json)
        std::cout << j.dump() << '\n';
      return ok;
    }

    if (*bench) {
      std::vector<std::pair<std::string, graph>> instances;
      if (random_count > 0) {
        std::mt19937_64 rng(seed);
        std::bernoulli_distribution coin(0.3);
        for (std::size_t i = 0; i < random_count; ++i) {
          std::vector<vertex> vs;
          std::vector<edge> es;
          for (vertex a = 1; a <= random_n; ++a) {
            vs.push_back(a);
            for (vertex b = a + 1; b <= random_n; ++b)
              if (coin(rng))
                es.push_back({a, b});
          }
          instances.emplace_back("random" + std::to_string(i), graph(vs, es));
        }
      } else {
        if (dir.empty() || !fs::is_directory(dir))
          throw usage_error("bench needs a directory or --random N");
        std::vector<fs::path> paths;
        for (const auto& entry : fs::directory_iterator(dir))
          if (entry.is_regular_file())
            paths.push_back(entry.path());
        std::sort(paths.begin(), paths.end());
        for (const auto& p : paths)
          instances.emplace_back(p.filename().string(), load(p.string()));
      }
      std::cout << "instance,n,m,k,decision,|S|,nodes,leaves,max_width,millis\n";
      for (const auto& [name, g] : instances) {
        auto r = bench_one(g, k, opt);
        std::cout << name << ',' << r.n << ',' << r.m << ',' << r.k << ','
                  << (r.yes ? "yes" : "no") << ',' << r.size << ',' << r.nodes << ','
                  << r.leaves << ',' << r.width << ',' << std::fixed << std::setprecision(3)
                  << (no_timing ? 0.0 : r.millis) << '\n';
        std::cout.unsetf(std::ios::fixed);
      }
      return ok;
    }
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  } catch (const parse_error& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return usage;
  } catch (const validation_error& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  }
  return usage;
}
