#pragma once

// Money-free exchanges: each side weighs what it gives up against what it
// receives, plus any threat hanging over a refusal and whatever protection
// its environment offers against that threat.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "imbalance/error.hpp"
#include "imbalance/exchange.hpp"
#include "imbalance/quantity.hpp"

namespace imbalance {

/// The four welfare arrows of a two-way exchange. Costs are positive
/// magnitudes of welfare given up.
struct ExchangeProposal {
  WelfareDelta give_cost_a{0.0};  // ΔU_AA
  WelfareDelta gain_for_b{0.0};   // ΔU_BA
  WelfareDelta give_cost_b{0.0};  // ΔU_BB
  WelfareDelta gain_for_a{0.0};   // ΔU_AB
  // Chance that A actually delivers what it promised B. Discounts gain_for_b.
  double promise_kept_probability = 1.0;

  bool operator==(const ExchangeProposal&) const = default;

  void validate() const {
    for (auto v : {give_cost_a, gain_for_b, give_cost_b, gain_for_a}) {
      detail::require(std::isfinite(v.value), Errc::InvalidInput, "proposal welfare deltas must be finite");
    }
    detail::require(std::isfinite(promise_kept_probability) && promise_kept_probability >= 0.0 &&
                        promise_kept_probability <= 1.0,
                    Errc::InvalidInput, "promise_kept_probability must lie in [0,1]");
  }
};

/// Something outside the traded goods that weighs on one side's choice.
struct ExternalInfluence {
  WelfareDelta threat_on_refusal{0.0};  // welfare lost if this side says no
  double shield = 0.0;                  // fraction of the threat neutralized by the context

  bool operator==(const ExternalInfluence&) const = default;

  void validate() const {
    detail::require(std::isfinite(threat_on_refusal.value) && threat_on_refusal.value >= 0.0,
                    Errc::InvalidInput, "threat_on_refusal must be finite and >= 0");
    detail::require(std::isfinite(shield) && shield >= 0.0 && shield <= 1.0, Errc::InvalidInput,
                    "shield must lie in [0,1]");
  }
};

enum class Verdict { BothAccept, ARefuses, BRefuses, BothRefuse };

constexpr const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::BothAccept: return "both_accept";
    case Verdict::ARefuses: return "a_refuses";
    case Verdict::BRefuses: return "b_refuses";
    case Verdict::BothRefuse: return "both_refuse";
  }
  return "unknown";
}

struct BalanceSheet {
  Motivation m_a{0.0};
  Motivation m_a_effective{0.0};
  Motivation m_b_raw{0.0};
  Motivation m_b_effective{0.0};
  Power k_a{0.0};
  Power k_b{0.0};
  std::optional<double> equity;  // nullopt when the index is not defined
  Verdict verdict = Verdict::BothRefuse;

  bool operator==(const BalanceSheet&) const = default;
};

/// Each side accepts iff its effective motivation is strictly positive.
inline Verdict accept_decision(const BalanceSheet& s) {
  const bool a = s.m_a_effective.value > 0.0;
  const bool b = s.m_b_effective.value > 0.0;
  if (a && b) return Verdict::BothAccept;
  if (a) return Verdict::BRefuses;
  if (b) return Verdict::ARefuses;
  return Verdict::BothRefuse;
}

inline Motivation effective_motivation(Motivation raw, const ExternalInfluence& infl) {
  return Motivation{raw.value + infl.threat_on_refusal.value * (1.0 - infl.shield)};
}

inline BalanceSheet welfare_balance(const ExchangeProposal& p, const ExternalInfluence& infl_a = {},
                                    const ExternalInfluence& infl_b = {}) {
  p.validate();
  infl_a.validate();
  infl_b.validate();

  const WelfareDelta gain_for_b = p.gain_for_b * p.promise_kept_probability;

  BalanceSheet s;
  s.m_a = motivation(p.gain_for_a, p.give_cost_a);
  s.m_b_raw = motivation(gain_for_b, p.give_cost_b);
  s.k_a = power(gain_for_b, p.give_cost_a);
  s.k_b = power(p.gain_for_a, p.give_cost_b);
  s.m_a_effective = effective_motivation(s.m_a, infl_a);
  s.m_b_effective = effective_motivation(s.m_b_raw, infl_b);

  // The index only makes sense for well-posed exchanges; extortion cases
  // with non-positive terms get no equity value.
  const bool defined = s.m_a.value >= kDefaultRatioFloor && s.m_b_raw.value >= kDefaultRatioFloor &&
                       s.k_a.value >= kDefaultRatioFloor && s.k_b.value >= kDefaultRatioFloor;
  if (defined) s.equity = equity_index(s.m_a, s.k_a, s.m_b_raw, s.k_b);
  s.verdict = accept_decision(s);
  return s;
}

struct ExchangeRecord {
  std::string stratum;
  double equity = 1.0;

  bool operator==(const ExchangeRecord&) const = default;
};

struct EquitySummary {
  std::string stratum;
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  std::array<double, 9> deciles{};  // 10th .. 90th percentiles

  bool operator==(const EquitySummary&) const = default;
};

struct EquityMap {
  std::vector<EquitySummary> strata;  // ordered by stratum label
  EquitySummary pooled;

  bool operator==(const EquityMap&) const = default;
};

namespace detail {

// Linear interpolation between closest ranks on sorted data.
inline double quantile_sorted(std::span<const double> sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline EquitySummary summarize(std::string label, std::vector<double> values) {
  std::sort(values.begin(), values.end());
  EquitySummary s;
  s.stratum = std::move(label);
  s.count = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  s.median = quantile_sorted(values, 0.5);
  for (std::size_t d = 0; d < 9; ++d) s.deciles[d] = quantile_sorted(values, static_cast<double>(d + 1) / 10.0);
  return s;
}

}  // namespace detail

/// Per-stratum equity statistics plus a pooled summary. Summaries are
/// computed from sorted values, so record order does not matter.
inline EquityMap equity_map(std::span<const ExchangeRecord> records) {
  detail::require(!records.empty(), Errc::EmptyInput, "equity_map needs at least one record");
  std::map<std::string, std::vector<double>> by_stratum;
  std::vector<double> all;
  all.reserve(records.size());
  for (const auto& r : records) {
    detail::require(std::isfinite(r.equity) && r.equity > 0.0, Errc::InvalidInput,
                    "equity of stratum '" + r.stratum + "' must be > 0");
    by_stratum[r.stratum].push_back(r.equity);
    all.push_back(r.equity);
  }
  EquityMap m;
  for (auto& [label, values] : by_stratum) m.strata.push_back(detail::summarize(label, std::move(values)));
  m.pooled = detail::summarize("*", std::move(all));
  return m;
}

}  // namespace imbalance
