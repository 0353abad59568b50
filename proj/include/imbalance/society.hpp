#pragma once

// Society-scale exchange: agents are paired at random every round, each pair
// splits a fixed surplus, and the regime decides how much wealth translates
// into bargaining power. Under an authoritarian rule the power ratio grows
// without bound with the wealth ratio; institutions cap it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "imbalance/error.hpp"

namespace imbalance {

/// Mean absolute pairwise difference over twice the mean.
inline double gini(std::span<const double> wealths) {
  detail::require(!wealths.empty(), Errc::EmptyInput, "gini of an empty population");
  std::vector<double> w(wealths.begin(), wealths.end());
  for (double v : w) {
    detail::require(std::isfinite(v) && v >= 0.0, Errc::InvalidInput, "wealth must be finite and >= 0");
  }
  std::sort(w.begin(), w.end());
  const double n = static_cast<double>(w.size());
  double total = 0.0;
  double weighted = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    total += w[i];
    weighted += (2.0 * static_cast<double>(i + 1) - n - 1.0) * w[i];
  }
  detail::require(total > 0.0, Errc::AllZero, "gini of an all-zero population");
  return std::max(0.0, weighted / (n * total));
}

struct ConstantWealth {
  double value = 1.0;
  bool operator==(const ConstantWealth&) const = default;
};
struct UniformWealth {
  double lo = 1.0;
  double hi = 2.0;
  bool operator==(const UniformWealth&) const = default;
};
struct LogNormalWealth {
  double mu = 0.0;
  double sigma = 1.0;
  bool operator==(const LogNormalWealth&) const = default;
};
using WealthDistribution = std::variant<ConstantWealth, UniformWealth, LogNormalWealth>;

struct Authoritarian {
  double power_exponent = 1.0;  // rho = wealth_ratio ^ gamma
  bool operator==(const Authoritarian&) const = default;
};
struct Institutional {
  double cap = 1.0;  // rho = min(wealth_ratio, cap)
  bool operator==(const Institutional&) const = default;
};
using RegimeRule = std::variant<Authoritarian, Institutional>;

struct SocietyConfig {
  std::size_t n_agents = 200;
  WealthDistribution initial_wealth = UniformWealth{};
  RegimeRule regime = Institutional{};
  std::size_t epochs = 100;
  std::size_t pairings_per_epoch = 1;
  std::uint64_t seed = 1;
  double unit_surplus = 1.0;

  bool operator==(const SocietyConfig&) const = default;

  void validate() const {
    using detail::require;
    require(n_agents >= 2, Errc::InvalidConfig, "n_agents must be >= 2");
    require(epochs >= 1, Errc::InvalidConfig, "epochs must be >= 1");
    require(pairings_per_epoch >= 1, Errc::InvalidConfig, "pairings_per_epoch must be >= 1");
    require(std::isfinite(unit_surplus) && unit_surplus > 0.0, Errc::InvalidConfig, "unit_surplus must be > 0");
    if (const auto* c = std::get_if<ConstantWealth>(&initial_wealth)) {
      require(std::isfinite(c->value) && c->value > 0.0, Errc::InvalidConfig, "constant wealth must be > 0");
    } else if (const auto* u = std::get_if<UniformWealth>(&initial_wealth)) {
      require(std::isfinite(u->lo) && std::isfinite(u->hi) && u->lo > 0.0 && u->hi >= u->lo,
              Errc::InvalidConfig, "uniform wealth needs 0 < lo <= hi");
    } else if (const auto* l = std::get_if<LogNormalWealth>(&initial_wealth)) {
      require(std::isfinite(l->mu) && std::isfinite(l->sigma) && l->sigma >= 0.0, Errc::InvalidConfig,
              "lognormal wealth needs finite mu and sigma >= 0");
    }
    if (const auto* a = std::get_if<Authoritarian>(&regime)) {
      require(std::isfinite(a->power_exponent) && a->power_exponent >= 0.0, Errc::InvalidConfig,
              "power_exponent must be >= 0");
    } else if (const auto* i = std::get_if<Institutional>(&regime)) {
      require(std::isfinite(i->cap) && i->cap >= 1.0, Errc::InvalidConfig, "cap must be >= 1");
    }
  }
};

struct EpochRecord {
  std::size_t epoch = 0;  // 0 is the initial population
  double gini = 0.0;
  double total_wealth = 0.0;
  double conservation_error = 0.0;  // relative, against before + injected surplus

  bool operator==(const EpochRecord&) const = default;
};

struct WealthTrace {
  std::vector<EpochRecord> epochs;
  std::vector<double> final_wealth;
  double max_conservation_error = 0.0;

  bool operator==(const WealthTrace&) const = default;

  double final_gini() const { return epochs.back().gini; }
};

/// Power ratio of the richer agent over the poorer one.
inline double regime_power_ratio(const RegimeRule& regime, double wealth_ratio) {
  if (const auto* a = std::get_if<Authoritarian>(&regime)) {
    return a->power_exponent == 0.0 ? 1.0 : std::pow(wealth_ratio, a->power_exponent);
  }
  return std::min(wealth_ratio, std::get<Institutional>(regime).cap);
}

/// Share of the surplus taken by the side with imbalance ratio rho, rho/(1+rho).
inline double stronger_share(double rho) { return 1.0 / (1.0 + 1.0 / rho); }

inline WealthTrace run_society(const SocietyConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);

  std::vector<double> w(cfg.n_agents);
  std::visit(
      [&](const auto& dist) {
        using D = std::decay_t<decltype(dist)>;
        if constexpr (std::is_same_v<D, ConstantWealth>) {
          std::fill(w.begin(), w.end(), dist.value);
        } else if constexpr (std::is_same_v<D, UniformWealth>) {
          std::uniform_real_distribution<double> u(dist.lo, dist.hi);
          for (auto& v : w) v = u(rng);
        } else {
          std::lognormal_distribution<double> ln(dist.mu, dist.sigma);
          for (auto& v : w) v = ln(rng);
        }
      },
      cfg.initial_wealth);

  auto total = [&] { return std::accumulate(w.begin(), w.end(), 0.0); };

  WealthTrace trace;
  trace.epochs.reserve(cfg.epochs + 1);
  trace.epochs.push_back({0, gini(w), total(), 0.0});

  std::vector<std::size_t> order(cfg.n_agents);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const double surplus = cfg.unit_surplus;

  for (std::size_t e = 1; e <= cfg.epochs; ++e) {
    const double before = trace.epochs.back().total_wealth;
    double injected = 0.0;
    for (std::size_t round = 0; round < cfg.pairings_per_epoch; ++round) {
      // One uniform random matching; with an odd population one agent sits out.
      std::shuffle(order.begin(), order.end(), rng);
      for (std::size_t k = 0; k + 1 < order.size(); k += 2) {
        std::size_t rich = order[k];
        std::size_t poor = order[k + 1];
        if (w[rich] < w[poor]) std::swap(rich, poor);
        const double rho = regime_power_ratio(cfg.regime, w[rich] / w[poor]);
        const double share = stronger_share(rho);
        w[rich] += surplus * share;
        w[poor] += surplus * (1.0 - share);
        injected += surplus;
      }
    }
    const double after = total();
    const double expected = before + injected;
    const double err = std::abs(after - expected) / expected;
    trace.max_conservation_error = std::max(trace.max_conservation_error, err);
    trace.epochs.push_back({e, gini(w), after, err});
  }
  trace.final_wealth = std::move(w);
  return trace;
}

struct SeedResult {
  std::uint64_t seed = 0;
  double final_gini_a = 0.0;
  double final_gini_b = 0.0;

  bool operator==(const SeedResult&) const = default;
};

struct RegimeComparison {
  std::vector<SeedResult> per_seed;
  double mean_gini_a = 0.0;
  double mean_gini_b = 0.0;
  double mean_difference = 0.0;  // a - b
  int sign = 0;
  std::size_t a_higher_count = 0;

  bool operator==(const RegimeComparison&) const = default;
};

/// Runs both configs over seeds cfg_a.seed, cfg_a.seed + 1, ... The configs
/// must be identical except for the regime. Replicates run in parallel;
/// results do not depend on scheduling.
inline RegimeComparison compare_regimes(const SocietyConfig& cfg_a, const SocietyConfig& cfg_b, std::size_t n_seeds) {
  detail::require(n_seeds >= 1, Errc::InvalidConfig, "n_seeds must be >= 1");
  SocietyConfig probe = cfg_b;
  probe.regime = cfg_a.regime;
  detail::require(probe == cfg_a, Errc::ConfigMismatch, "configs may differ only in regime");
  cfg_a.validate();
  cfg_b.validate();

  RegimeComparison cmp;
  cmp.per_seed.resize(n_seeds);

  auto replicate = [&](std::size_t i) {
    SocietyConfig a = cfg_a;
    SocietyConfig b = cfg_b;
    a.seed = b.seed = cfg_a.seed + i;
    cmp.per_seed[i] = {a.seed, run_society(a).final_gini(), run_society(b).final_gini()};
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(n_seeds, std::thread::hardware_concurrency()));
  std::vector<std::future<void>> jobs;
  for (std::size_t t = 0; t < workers; ++t) {
    jobs.push_back(std::async(std::launch::async, [&, t] {
      for (std::size_t i = t; i < n_seeds; i += workers) replicate(i);
    }));
  }
  for (auto& j : jobs) j.get();

  for (const auto& r : cmp.per_seed) {
    cmp.mean_gini_a += r.final_gini_a;
    cmp.mean_gini_b += r.final_gini_b;
    if (r.final_gini_a > r.final_gini_b) ++cmp.a_higher_count;
  }
  cmp.mean_gini_a /= static_cast<double>(n_seeds);
  cmp.mean_gini_b /= static_cast<double>(n_seeds);
  cmp.mean_difference = cmp.mean_gini_a - cmp.mean_gini_b;
  cmp.sign = (cmp.mean_difference > 0.0) - (cmp.mean_difference < 0.0);
  return cmp;
}

}  // namespace imbalance
