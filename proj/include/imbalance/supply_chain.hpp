#pragma once

// Multi-stage supply chains settled link by link, starting from the
// market-facing stage. Each link's buyer can never pay more than what it
// receives downstream minus the margin it insists on keeping, so pressure on
// the retail price is pushed back toward raw materials and labor.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "imbalance/error.hpp"
#include "imbalance/exchange.hpp"
#include "imbalance/negotiation.hpp"

namespace imbalance {

struct ChainStage {
  std::string name;
  PerceptionView seller_view{.role = Role::Seller};
  PerceptionView buyer_view{.role = Role::Buyer};
  ReservePrice base_seller_reserve{0.0};
  // Buyer's pre-adjustment reserve. Defaults to the price the buyer itself
  // receives downstream.
  std::optional<ReservePrice> base_buyer_reserve;
  double margin_floor = 0.0;
  ConcessionRates rates;

  bool operator==(const ChainStage&) const = default;
};

/// Stage 0 is the market-facing link; the last stage is raw material or labor.
struct ChainSpec {
  std::vector<ChainStage> stages;
  double anchor_price = 0.0;
  double gap_epsilon = 0.05;
  int max_steps = 10000;
  RateBounds rate_bounds;

  bool operator==(const ChainSpec&) const = default;

  void validate() const {
    detail::require(!stages.empty(), Errc::InvalidConfig, "chain needs at least one stage");
    detail::require(std::isfinite(anchor_price) && anchor_price > 0.0, Errc::InvalidConfig,
                    "anchor_price must be > 0");
    detail::require(std::isfinite(gap_epsilon) && gap_epsilon > 0.0, Errc::InvalidConfig,
                    "gap_epsilon must be > 0");
    detail::require(max_steps >= 1, Errc::InvalidConfig, "max_steps must be >= 1");
    for (const auto& s : stages) {
      const std::string where = "stage '" + s.name + "': ";
      detail::require(s.buyer_view.role == Role::Buyer, Errc::InvalidConfig, where + "buyer_view role");
      detail::require(s.seller_view.role == Role::Seller, Errc::InvalidConfig, where + "seller_view role");
      detail::require(std::isfinite(s.margin_floor) && s.margin_floor >= 0.0, Errc::InvalidConfig,
                      where + "margin_floor must be >= 0");
      detail::require(std::isfinite(s.base_seller_reserve.value) && s.base_seller_reserve.value >= 0.0,
                      Errc::InvalidConfig, where + "base_seller_reserve must be >= 0");
      if (s.base_buyer_reserve) {
        detail::require(std::isfinite(s.base_buyer_reserve->value) && s.base_buyer_reserve->value >= 0.0,
                        Errc::InvalidConfig, where + "base_buyer_reserve must be >= 0");
      }
      s.rates.validate();
      // Surface degenerate perceptions as configuration errors up front.
      try {
        (void)imbalance_ratio(s.buyer_view);
        (void)imbalance_ratio(s.seller_view);
      } catch (const Error& e) {
        detail::fail(Errc::InvalidConfig, where + e.what());
      }
    }
  }
};

struct StageResult {
  std::string stage;
  bool reached = false;  // false once an earlier link has broken down
  double incoming_price = 0.0;
  ReservePrice buyer_reserve_effective{0.0};
  ReservePrice seller_reserve_effective{0.0};
  ConcessionRates rates;
  std::optional<double> settlement;  // nullopt: Breakdown
  std::optional<double> margin;      // incoming_price - settlement
  int steps = 0;

  bool operator==(const StageResult&) const = default;
};

/// Negotiation config for one link, given what its buyer receives downstream.
/// Each side opens at the lower/higher of the two adjusted reserves.
inline NegotiationConfig stage_negotiation(const ChainStage& s, double incoming_price, double gap_epsilon,
                                           int max_steps, const RateBounds& bounds = {}) {
  const double rho_buyer = imbalance_ratio(s.buyer_view);
  const double rho_seller = imbalance_ratio(s.seller_view);
  const ReservePrice buyer_base = s.base_buyer_reserve.value_or(ReservePrice{incoming_price});
  const double buyer_reserve =
      std::max(0.0, std::min(adjust_reserve_full(buyer_base, s.buyer_view).value, incoming_price - s.margin_floor));
  const double seller_reserve = adjust_reserve_full(s.base_seller_reserve, s.seller_view).value;

  NegotiationConfig cfg;
  cfg.buyer_reserve = buyer_reserve;
  cfg.seller_reserve = seller_reserve;
  cfg.buyer_open = std::min(buyer_reserve, seller_reserve);
  cfg.seller_open = std::max(buyer_reserve, seller_reserve);
  cfg.rates = concession_rates_from_imbalance(s.rates, rho_buyer, rho_seller, bounds);
  cfg.gap_epsilon = gap_epsilon;
  cfg.max_steps = max_steps;
  return cfg;
}

/// Settles the chain from the market-facing link inward. A Breakdown at one
/// link leaves every deeper link unreached.
inline std::vector<StageResult> propagate(const ChainSpec& spec) {
  spec.validate();
  std::vector<StageResult> results;
  results.reserve(spec.stages.size());

  double incoming = spec.anchor_price;
  bool broken = false;
  for (const auto& s : spec.stages) {
    StageResult r;
    r.stage = s.name;
    if (broken) {
      results.push_back(std::move(r));
      continue;
    }
    r.reached = true;
    r.incoming_price = incoming;
    const NegotiationConfig cfg = stage_negotiation(s, incoming, spec.gap_epsilon, spec.max_steps, spec.rate_bounds);
    r.buyer_reserve_effective = ReservePrice{cfg.buyer_reserve};
    r.seller_reserve_effective = ReservePrice{cfg.seller_reserve};
    r.rates = cfg.rates;
    const NegotiationTrace trace = run(cfg);
    r.steps = trace.steps.back().step;
    if (const auto* a = std::get_if<Agreement>(&trace.outcome)) {
      r.settlement = a->price;
      r.margin = incoming - a->price;
      incoming = a->price;
    } else {
      broken = true;
    }
    results.push_back(std::move(r));
  }
  return results;
}

struct StageShare {
  std::string stage;
  double margin_share = 0.0;

  bool operator==(const StageShare&) const = default;
};

struct SqueezeReport {
  double anchor_price = 0.0;
  std::vector<StageShare> shares;       // settled stages only
  std::optional<double> terminal_share;  // final settlement / anchor, when complete
  bool complete = false;
  double total_share = 0.0;

  bool operator==(const SqueezeReport&) const = default;
};

/// How the anchor price is divided among the links. Without a Breakdown the
/// margin shares plus the terminal share add up to 1.
inline SqueezeReport squeeze_report(const std::vector<StageResult>& results) {
  SqueezeReport rep;
  if (results.empty() || !results.front().reached) return rep;
  rep.anchor_price = results.front().incoming_price;
  rep.complete = true;
  for (const auto& r : results) {
    if (!r.margin) {
      rep.complete = false;
      break;
    }
    const double share = *r.margin / rep.anchor_price;
    rep.shares.push_back({r.stage, share});
    rep.total_share += share;
  }
  if (rep.complete) {
    rep.terminal_share = *results.back().settlement / rep.anchor_price;
    rep.total_share += *rep.terminal_share;
  }
  return rep;
}

}  // namespace imbalance
