#pragma once

#include <optional>
#include <random>
#include <string>

#include "imbalance/imbalance.hpp"
#include "imbalance/io/cli.hpp"
#include "oracles.hpp"

namespace support {

inline std::string preset_path(const std::string& name) {
  return std::string(IMBALANCE_SCENARIO_DIR) + "/" + name + ".json";
}

inline imbalance::io::Scenario load_preset(const std::string& name) {
  const auto text = imbalance::io::read_file(preset_path(name));
  if (!text) throw std::runtime_error("missing preset " + name);
  return imbalance::io::parse_scenario(*text);
}

template <class Body>
Body load_body(const std::string& name) {
  return std::get<Body>(load_preset(name).body);
}

inline imbalance::PerceptionView random_view(std::mt19937_64& rng, imbalance::Role role, double lo, double hi) {
  using namespace imbalance;
  return {Motivation{oracle::uniform(rng, lo, hi)}, Motivation{oracle::uniform(rng, lo, hi)},
          Power{oracle::uniform(rng, lo, hi)}, Power{oracle::uniform(rng, lo, hi)}, role};
}

inline imbalance::ConcessionRates random_rates(std::mt19937_64& rng) {
  imbalance::ConcessionRates r;
  r.buyer_yield = oracle::uniform(rng, 0.02, 0.5);
  r.buyer_close = oracle::uniform(rng, 0.0, 0.95 - r.buyer_yield);
  r.seller_yield = oracle::uniform(rng, 0.02, 0.5);
  r.seller_close = oracle::uniform(rng, 0.0, 0.95 - r.seller_yield);
  return r;
}

/// 3 to 5 stages, mild perceived imbalances, seller costs shrinking inward.
inline imbalance::ChainSpec random_chain(std::mt19937_64& rng) {
  using namespace imbalance;
  ChainSpec c;
  c.anchor_price = oracle::uniform(rng, 1.0, 10.0);
  c.gap_epsilon = 0.005;
  const int n = std::uniform_int_distribution<int>(3, 5)(rng);
  double frac = 1.0;
  for (int i = 0; i < n; ++i) {
    frac *= oracle::uniform(rng, 0.3, 0.5);
    ChainStage s;
    s.name = "s" + std::to_string(i);
    s.buyer_view = random_view(rng, Role::Buyer, 0.8, 1.25);
    s.seller_view = random_view(rng, Role::Seller, 0.8, 1.25);
    s.base_seller_reserve = ReservePrice{frac * c.anchor_price};
    s.rates = random_rates(rng);
    c.stages.push_back(s);
  }
  return c;
}

/// Gives stage k's buyer a larger power advantage, seen from both sides.
inline imbalance::ChainSpec boost_buyer_power(imbalance::ChainSpec c, std::size_t k, double factor) {
  c.stages[k].buyer_view.own_power = c.stages[k].buyer_view.own_power * factor;
  c.stages[k].seller_view.other_power_perceived = c.stages[k].seller_view.other_power_perceived * factor;
  return c;
}

/// Checks the squeeze properties for one perturbation. Returns an empty
/// string when they hold, otherwise a description of the first violation.
inline std::string check_squeeze(const imbalance::ChainSpec& base, std::size_t k, double factor) {
  const auto before = imbalance::propagate(base);
  const auto after = imbalance::propagate(boost_buyer_power(base, k, factor));
  for (std::size_t i = 0; i < k; ++i) {
    if (!(before[i] == after[i])) return "stage " + std::to_string(i) + " changed upstream of the perturbation";
  }
  for (std::size_t i = k; i < before.size(); ++i) {
    if (!before[i].settlement) break;
    if (!after[i].settlement) return {};  // squeezed to a breakdown
    if (*after[i].settlement > *before[i].settlement) {
      return "stage " + std::to_string(i) + " settlement rose";
    }
  }
  if (before[k].margin && after[k].margin && *after[k].margin < *before[k].margin) {
    return "stage " + std::to_string(k) + " margin fell";
  }
  return {};
}

}  // namespace support
