#pragma once

// Power chains: a weak subject asks someone it trusts, who asks someone they
// trust, and so on, until the request reaches a subject strong enough to
// face the adversary. Each hop must go to a strictly stronger subject.

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "imbalance/error.hpp"

namespace imbalance {

struct Subject {
  std::string name;
  std::map<std::string, double> strength_vs;  // adversary -> strength against it

  bool operator==(const Subject&) const = default;
};

/// `requester` can turn to `helper` for help.
struct TrustEdge {
  std::string requester;
  std::string helper;
  double willingness = 1.0;  // in (0,1]

  bool operator==(const TrustEdge&) const = default;
};

struct TrustGraph {
  std::vector<Subject> subjects;
  std::vector<TrustEdge> edges;

  bool operator==(const TrustGraph&) const = default;

  std::optional<std::size_t> index_of(const std::string& name) const {
    for (std::size_t i = 0; i < subjects.size(); ++i) {
      if (subjects[i].name == name) return i;
    }
    return std::nullopt;
  }

  void validate() const {
    std::set<std::string> names;
    for (const auto& s : subjects) {
      detail::require(!s.name.empty(), Errc::InvalidInput, "subject names must be non-empty");
      detail::require(names.insert(s.name).second, Errc::InvalidInput, "duplicate subject '" + s.name + "'");
      for (const auto& [adv, k] : s.strength_vs) {
        detail::require(std::isfinite(k), Errc::InvalidInput,
                        "strength of '" + s.name + "' vs '" + adv + "' must be finite");
      }
    }
    for (const auto& e : edges) {
      detail::require(names.count(e.requester) && names.count(e.helper), Errc::InvalidInput,
                      "edge " + e.requester + " -> " + e.helper + " references an unknown subject");
      detail::require(e.requester != e.helper, Errc::InvalidInput, "self-loop on '" + e.requester + "'");
      detail::require(std::isfinite(e.willingness) && e.willingness > 0.0 && e.willingness <= 1.0,
                      Errc::InvalidInput, "willingness must lie in (0,1]");
    }
  }
};

struct PowerChain {
  std::vector<std::string> path;  // weak requester first, terminal helper last
  double terminal_strength = 0.0;
  double min_willingness = 1.0;   // 1 for a zero-hop chain

  bool operator==(const PowerChain&) const = default;
};

namespace detail {

// Adjacency restricted to hops toward strictly stronger helpers.
struct ChainGraph {
  std::vector<double> strength;
  std::vector<std::vector<std::pair<std::size_t, double>>> out;  // (helper, willingness)
  std::size_t weak = 0;
};

inline ChainGraph build_chain_graph(const TrustGraph& g, const std::string& weak, const std::string& adversary) {
  g.validate();
  ChainGraph cg;
  const auto w = g.index_of(weak);
  require(w.has_value(), Errc::InvalidInput, "weak subject '" + weak + "' is not in the graph");
  cg.weak = *w;
  cg.strength.resize(g.subjects.size());
  for (std::size_t i = 0; i < g.subjects.size(); ++i) {
    const auto it = g.subjects[i].strength_vs.find(adversary);
    require(it != g.subjects[i].strength_vs.end(), Errc::InvalidInput,
            "subject '" + g.subjects[i].name + "' has no strength against '" + adversary + "'");
    cg.strength[i] = it->second;
  }
  cg.out.resize(g.subjects.size());
  std::unordered_map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < g.subjects.size(); ++i) idx[g.subjects[i].name] = i;
  for (const auto& e : g.edges) {
    const auto from = idx.at(e.requester);
    const auto to = idx.at(e.helper);
    if (cg.strength[to] > cg.strength[from]) cg.out[from].emplace_back(to, e.willingness);
  }
  return cg;
}

}  // namespace detail

/// Shortest chain (fewest hops) from `weak` to any subject whose strength
/// against `adversary` reaches `threshold`, with strength strictly rising at
/// every hop. Among shortest chains the one with the largest minimum
/// willingness wins; remaining ties go to the lexicographically smallest
/// sequence of names. Throws NoChain if none exists.
inline PowerChain find_power_chain(const TrustGraph& g, const std::string& weak, const std::string& adversary,
                                   double threshold) {
  detail::require(std::isfinite(threshold), Errc::InvalidInput, "threshold must be finite");
  const detail::ChainGraph cg = detail::build_chain_graph(g, weak, adversary);
  const std::size_t n = cg.strength.size();
  auto is_goal = [&](std::size_t v) { return cg.strength[v] >= threshold; };

  if (is_goal(cg.weak)) return PowerChain{{weak}, cg.strength[cg.weak], 1.0};

  constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

  // Hops from weak to the nearest goal, using only edges with willingness >= floor.
  auto shortest_hops = [&](double floor) {
    std::vector<std::size_t> dist(n, kUnreached);
    std::deque<std::size_t> queue{cg.weak};
    dist[cg.weak] = 0;
    while (!queue.empty()) {
      const auto v = queue.front();
      queue.pop_front();
      if (is_goal(v)) return dist[v];
      for (const auto& [to, will] : cg.out[v]) {
        if (will >= floor && dist[to] == kUnreached) {
          dist[to] = dist[v] + 1;
          queue.push_back(to);
        }
      }
    }
    return kUnreached;
  };

  const std::size_t hops = shortest_hops(0.0);
  if (hops == kUnreached) {
    detail::fail(Errc::NoChain, "no power chain from '" + weak + "' reaches strength " + std::to_string(threshold) +
                                    " against '" + adversary + "'");
  }

  // Largest willingness floor that still admits a chain of the same length.
  std::vector<double> levels;
  for (const auto& adj : cg.out) {
    for (const auto& [to, will] : adj) levels.push_back(will);
  }
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  double floor = 0.0;
  for (double level : levels) {
    if (shortest_hops(level) == hops) {
      floor = level;
      break;
    }
  }

  // Distance to the nearest goal over the floor-filtered graph, then a greedy
  // walk that always takes the smallest name still on a shortest route.
  std::vector<std::vector<std::size_t>> in(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (const auto& [to, will] : cg.out[v]) {
      if (will >= floor) in[to].push_back(v);
    }
  }
  std::vector<std::size_t> to_goal(n, kUnreached);
  std::deque<std::size_t> queue;
  for (std::size_t v = 0; v < n; ++v) {
    if (is_goal(v)) {
      to_goal[v] = 0;
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop_front();
    for (auto from : in[v]) {
      if (to_goal[from] == kUnreached) {
        to_goal[from] = to_goal[v] + 1;
        queue.push_back(from);
      }
    }
  }

  PowerChain chain;
  chain.path.push_back(weak);
  chain.min_willingness = 1.0;
  std::size_t v = cg.weak;
  for (std::size_t remaining = hops; remaining > 0; --remaining) {
    std::optional<std::size_t> best;
    double best_will = 0.0;
    for (const auto& [to, will] : cg.out[v]) {
      if (will < floor || to_goal[to] != remaining - 1) continue;
      if (!best || g.subjects[to].name < g.subjects[*best].name) {
        best = to;
        best_will = will;
      } else if (to == *best) {
        best_will = std::max(best_will, will);  // parallel edges
      }
    }
    v = *best;
    chain.path.push_back(g.subjects[v].name);
    chain.min_willingness = std::min(chain.min_willingness, best_will);
  }
  chain.terminal_strength = cg.strength[v];
  return chain;
}

/// Test oracle: enumerates every simple path from `weak` and reports the
/// fewest hops of any qualifying chain. Refuses graphs above `max_nodes`.
inline std::optional<std::size_t> shortest_chain_bruteforce(const TrustGraph& g, const std::string& weak,
                                                            const std::string& adversary, double threshold,
                                                            std::size_t max_nodes = 12) {
  detail::require(g.subjects.size() <= max_nodes, Errc::TooLarge,
                  "brute force is limited to " + std::to_string(max_nodes) + " subjects");
  g.validate();
  const auto w = g.index_of(weak);
  detail::require(w.has_value(), Errc::InvalidInput, "weak subject '" + weak + "' is not in the graph");

  std::vector<double> strength;
  for (const auto& s : g.subjects) {
    const auto it = s.strength_vs.find(adversary);
    detail::require(it != s.strength_vs.end(), Errc::InvalidInput,
                    "subject '" + s.name + "' has no strength against '" + adversary + "'");
    strength.push_back(it->second);
  }

  std::optional<std::size_t> best;
  std::vector<std::size_t> path{*w};
  std::vector<bool> on_path(g.subjects.size(), false);
  on_path[*w] = true;

  std::function<void()> dfs = [&]() {
    const std::size_t v = path.back();
    bool rising = true;
    for (std::size_t i = 1; i < path.size(); ++i) rising = rising && strength[path[i]] > strength[path[i - 1]];
    if (!rising) return;
    if (strength[v] >= threshold) {
      const std::size_t hops = path.size() - 1;
      if (!best || hops < *best) best = hops;
    }
    for (const auto& e : g.edges) {
      if (e.requester != g.subjects[v].name) continue;
      const auto to = *g.index_of(e.helper);
      if (on_path[to]) continue;
      on_path[to] = true;
      path.push_back(to);
      dfs();
      path.pop_back();
      on_path[to] = false;
    }
  };
  dfs();
  return best;
}

inline bool chain_exists_bruteforce(const TrustGraph& g, const std::string& weak, const std::string& adversary,
                                    double threshold, std::size_t max_nodes = 12) {
  return shortest_chain_bruteforce(g, weak, adversary, threshold, max_nodes).has_value();
}

}  // namespace imbalance
