#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "support.hpp"

using namespace imbalance;

namespace {

TrustGraph line_graph() {
  TrustGraph g;
  g.subjects = {{"victim", {{"minister", 0}}}, {"prefect", {{"minister", 2}}}, {"dupin", {{"minister", 5}}}};
  g.edges = {{"victim", "prefect", 1.0}, {"prefect", "dupin", 0.8}};
  return g;
}

TrustGraph random_graph(std::mt19937_64& rng, std::size_t n) {
  TrustGraph g;
  for (std::size_t i = 0; i < n; ++i) {
    // Small integer strengths so that equal strengths (blocked hops) occur.
    const double k = static_cast<double>(std::uniform_int_distribution<int>(0, 6)(rng));
    g.subjects.push_back({"n" + std::to_string(i), {{"adv", k}}});
  }
  const double density = oracle::uniform(rng, 0.1, 0.6);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || oracle::uniform(rng, 0, 1) > density) continue;
      const double will = std::uniform_int_distribution<int>(1, 4)(rng) / 4.0;
      g.edges.push_back({"n" + std::to_string(i), "n" + std::to_string(j), will});
    }
  }
  return g;
}

// Best achievable minimum willingness over qualifying chains of exactly `hops`.
double best_min_willingness(const TrustGraph& g, const std::string& weak, double threshold, std::size_t hops) {
  double best = -1.0;
  std::vector<std::string> path{weak};
  auto strength = [&](const std::string& name) { return g.subjects[*g.index_of(name)].strength_vs.at("adv"); };
  std::function<void(double)> dfs = [&](double min_will) {
    if (path.size() - 1 == hops) {
      if (strength(path.back()) >= threshold) best = std::max(best, min_will);
      return;
    }
    for (const auto& e : g.edges) {
      if (e.requester != path.back() || strength(e.helper) <= strength(e.requester)) continue;
      path.push_back(e.helper);
      dfs(std::min(min_will, e.willingness));
      path.pop_back();
    }
  };
  dfs(1.0);
  return best;
}

}  // namespace

TEST(PowerChain, LineGraph) {
  const auto c = find_power_chain(line_graph(), "victim", "minister", 4.0);
  EXPECT_EQ(c.path, (std::vector<std::string>{"victim", "prefect", "dupin"}));
  EXPECT_EQ(c.terminal_strength, 5.0);
  EXPECT_EQ(c.min_willingness, 0.8);
  EXPECT_TRUE(chain_exists_bruteforce(line_graph(), "victim", "minister", 4.0));
}

TEST(PowerChain, ZeroHop) {
  const auto c = find_power_chain(line_graph(), "prefect", "minister", 1.0);
  EXPECT_EQ(c.path, std::vector<std::string>{"prefect"});
  EXPECT_EQ(c.min_willingness, 1.0);
}

TEST(PowerChain, IsolatedWeak) {
  TrustGraph g = line_graph();
  g.edges.clear();
  try {
    find_power_chain(g, "victim", "minister", 4.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NoChain);
  }
  EXPECT_FALSE(chain_exists_bruteforce(g, "victim", "minister", 4.0));
}

TEST(PowerChain, HopsMustRiseStrictly) {
  TrustGraph g = line_graph();
  g.subjects[1].strength_vs["minister"] = 0.0;  // prefect no stronger than the victim
  EXPECT_THROW(find_power_chain(g, "victim", "minister", 4.0), Error);
}

TEST(PowerChain, PrefersWillingHelpersThenNames) {
  TrustGraph g;
  g.subjects = {{"w", {{"adv", 0}}}, {"b", {{"adv", 1}}}, {"a", {{"adv", 1}}}, {"t", {{"adv", 5}}}};
  g.edges = {{"w", "a", 0.3}, {"a", "t", 1.0}, {"w", "b", 0.9}, {"b", "t", 0.9}};
  EXPECT_EQ(find_power_chain(g, "w", "adv", 5).path, (std::vector<std::string>{"w", "b", "t"}));
  g.edges[0].willingness = 0.9;
  EXPECT_EQ(find_power_chain(g, "w", "adv", 5).path, (std::vector<std::string>{"w", "a", "t"}));
}

TEST(PowerChain, InvalidGraphs) {
  TrustGraph g = line_graph();
  g.edges.push_back({"victim", "nobody", 1.0});
  EXPECT_THROW(find_power_chain(g, "victim", "minister", 4.0), Error);
  g = line_graph();
  g.edges[0].willingness = 0.0;
  EXPECT_THROW(find_power_chain(g, "victim", "minister", 4.0), Error);
  EXPECT_THROW(find_power_chain(line_graph(), "ghost", "minister", 4.0), Error);
  EXPECT_THROW(find_power_chain(line_graph(), "victim", "king", 4.0), Error);
}

TEST(PowerChain, BruteForceRefusesLargeGraphs) {
  std::mt19937_64 rng(1);
  const auto g = random_graph(rng, 13);
  try {
    shortest_chain_bruteforce(g, "n0", "adv", 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::TooLarge);
  }
}

TEST(PowerChain, Presets) {
  const auto poe = support::load_body<io::PowerChainScenario>("purloined-letter");
  const auto c1 = find_power_chain(poe.graph, poe.weak, poe.adversary, poe.threshold);
  EXPECT_EQ(c1.path, (std::vector<std::string>{"victim", "prefect", "dupin"}));
  EXPECT_TRUE(chain_exists_bruteforce(poe.graph, poe.weak, poe.adversary, poe.threshold));

  const auto job = support::load_body<io::PowerChainScenario>("soft-landing");
  const auto c2 = find_power_chain(job.graph, job.weak, job.adversary, job.threshold);
  EXPECT_EQ(c2.path, (std::vector<std::string>{"employee", "relative", "hr-director", "lawyer"}));
  EXPECT_TRUE(chain_exists_bruteforce(job.graph, job.weak, job.adversary, job.threshold));
}

TEST(PowerChainProperties, OracleEquivalenceMinimalityStrictness) {
  std::mt19937_64 rng(51);
  int found = 0;
  for (int i = 0; i < 400; ++i) {
    const auto n = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    const auto g = random_graph(rng, n);
    const double threshold = static_cast<double>(std::uniform_int_distribution<int>(1, 6)(rng));
    const auto oracle_hops = shortest_chain_bruteforce(g, "n0", "adv", threshold);
    std::optional<PowerChain> chain;
    try {
      chain = find_power_chain(g, "n0", "adv", threshold);
    } catch (const Error& e) {
      ASSERT_EQ(e.code(), Errc::NoChain);
    }
    ASSERT_EQ(chain.has_value(), oracle_hops.has_value()) << "case " << i;
    if (!chain) continue;
    ++found;
    EXPECT_EQ(chain->path.size() - 1, *oracle_hops);
    for (std::size_t j = 1; j < chain->path.size(); ++j) {
      const auto& prev = g.subjects[*g.index_of(chain->path[j - 1])];
      const auto& cur = g.subjects[*g.index_of(chain->path[j])];
      EXPECT_GT(cur.strength_vs.at("adv"), prev.strength_vs.at("adv"));
    }
    EXPECT_GE(chain->terminal_strength, threshold);
    EXPECT_EQ(chain->min_willingness, best_min_willingness(g, "n0", threshold, *oracle_hops));
  }
  EXPECT_GT(found, 50);
}
