#pragma once

// Executes a scenario and packages the outcome for output.

#include <chrono>
#include <optional>
#include <string>
#include <vector>
#include <algorithm>
#include <functional>

#include "imbalance/io/csv.hpp"
#include "imbalance/io/scenario.hpp"
#include "imbalance/version.hpp"

namespace imbalance::io {

struct RunReport {
  json scenario;  // echo of the scenario as run
  json outcome;
  std::string engine_version = kEngineVersion;
  double duration_ms = 0.0;

  bool operator==(const RunReport&) const = default;
};

inline json report_to_json(const RunReport& r) {
  return json{{"engine_version", r.engine_version},
              {"duration_ms", r.duration_ms},
              {"scenario", r.scenario},
              {"outcome", r.outcome}};
}

inline RunReport report_from_json(const json& j) {
  detail::ObjectReader r(j, "");
  RunReport rep;
  rep.engine_version = r.string("engine_version");
  rep.duration_ms = r.number("duration_ms");
  rep.scenario = r.raw("scenario");
  rep.outcome = r.raw("outcome");
  r.finish();
  return rep;
}

/// Result of running one scenario: the JSON payload plus the CSV rendering.
struct RunResult {
  RunReport report;
  std::string csv;
};

namespace detail {

inline json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline json outcome_json(const Outcome& o) {
  if (const auto* a = std::get_if<Agreement>(&o)) return json{{"kind", "agreement"}, {"step", a->step}, {"price", a->price}};
  return json{{"kind", "breakdown"}, {"steps", std::get<Breakdown>(o).steps}};
}

inline void execute(const NegotiationScenario& s, RunResult& out) {
  const ResolvedNegotiation res = resolve(s);
  const NegotiationTrace trace = run(res.config);
  json steps = json::array();
  for (const auto& st : trace.steps) {
    steps.push_back(json{{"step", st.step}, {"offer_buyer", st.buyer}, {"offer_seller", st.seller}, {"gap", st.gap}});
  }
  json fp = nullptr;
  try {
    const Offers f = fixed_point(res.config);
    fp = json{{"buyer", f.buyer}, {"seller", f.seller}};
  } catch (const Error& e) {
    if (e.code() != Errc::SingularSystem) throw;
  }
  out.report.outcome = json{{"reserves", {{"buyer", res.config.buyer_reserve}, {"seller", res.config.seller_reserve}}},
                            {"rho_buyer", optional_json(res.rho_buyer)},
                            {"rho_seller", optional_json(res.rho_seller)},
                            {"rates", to_json(res.config.rates)},
                            {"stable", is_stable(res.config.rates)},
                            {"fixed_point", fp},
                            {"result", outcome_json(trace.outcome)},
                            {"steps", std::move(steps)}};
  out.csv = write_trace_csv(trace);
}

inline void execute(const ChainSpec& c, RunResult& out) {
  const auto results = propagate(c);
  const SqueezeReport rep = squeeze_report(results);
  json stages = json::array();
  for (const auto& r : results) {
    json st{{"stage", r.stage}, {"reached", r.reached}};
    if (r.reached) {
      st["incoming_price"] = r.incoming_price;
      st["buyer_reserve"] = r.buyer_reserve_effective.value;
      st["seller_reserve"] = r.seller_reserve_effective.value;
      st["rates"] = to_json(r.rates);
      st["settlement"] = optional_json(r.settlement);
      st["margin"] = optional_json(r.margin);
      st["steps"] = r.steps;
    }
    stages.push_back(std::move(st));
  }
  json shares = json::array();
  for (const auto& s : rep.shares) shares.push_back(json{{"stage", s.stage}, {"margin_share", s.margin_share}});
  out.report.outcome = json{{"stages", std::move(stages)},
                            {"squeeze",
                             {{"anchor_price", rep.anchor_price},
                              {"complete", rep.complete},
                              {"shares", std::move(shares)},
                              {"terminal_share", optional_json(rep.terminal_share)},
                              {"total_share", rep.total_share}}}};
  out.csv = write_chain_csv(results);
}

inline json summary_json(const EquitySummary& s) {
  return json{{"stratum", s.stratum}, {"count", s.count}, {"mean", s.mean}, {"median", s.median}, {"deciles", s.deciles}};
}

inline void execute(const NonmarketScenario& s, RunResult& out) {
  json sheets = json::array();
  std::vector<BalanceSheet> all;
  std::vector<std::string> strata;
  std::vector<ExchangeRecord> records;
  for (const auto& e : s.exchanges) {
    const BalanceSheet b = welfare_balance(e.proposal, e.influence_a, e.influence_b);
    sheets.push_back(json{{"stratum", e.stratum},
                          {"m_a", b.m_a.value},
                          {"m_a_effective", b.m_a_effective.value},
                          {"m_b_raw", b.m_b_raw.value},
                          {"m_b_effective", b.m_b_effective.value},
                          {"k_a", b.k_a.value},
                          {"k_b", b.k_b.value},
                          {"equity", optional_json(b.equity)},
                          {"verdict", to_string(b.verdict)}});
    if (b.equity) records.push_back({e.stratum, *b.equity});
    all.push_back(b);
    strata.push_back(e.stratum);
  }
  json map = nullptr;
  if (!records.empty()) {
    const EquityMap m = equity_map(records);
    json st = json::array();
    for (const auto& x : m.strata) st.push_back(summary_json(x));
    map = json{{"strata", std::move(st)}, {"pooled", summary_json(m.pooled)}};
  }
  out.report.outcome = json{{"exchanges", std::move(sheets)}, {"equity_map", std::move(map)}};
  out.csv = write_balance_csv(strata, all);
}

inline void execute(const PowerChainScenario& s, RunResult& out) {
  std::optional<PowerChain> chain;
  try {
    chain = find_power_chain(s.graph, s.weak, s.adversary, s.threshold);
  } catch (const Error& e) {
    if (e.code() != Errc::NoChain) throw;
  }
  if (chain) {
    out.report.outcome = json{{"found", true},
                              {"path", chain->path},
                              {"hops", chain->path.size() - 1},
                              {"terminal_strength", chain->terminal_strength},
                              {"min_willingness", chain->min_willingness}};
  } else {
    out.report.outcome = json{{"found", false}};
  }
  out.csv = write_power_chain_csv(s.graph, s.adversary, chain);
}

// Share of total wealth held by the top `fraction` of agents.
inline double top_share(std::vector<double> w, double fraction) {
  std::sort(w.begin(), w.end(), std::greater<>());
  const auto k = std::max<std::size_t>(1, static_cast<std::size_t>(fraction * static_cast<double>(w.size())));
  double top = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    total += w[i];
    if (i < k) top += w[i];
  }
  return top / total;
}

inline void execute(const SocietyConfig& c, RunResult& out) {
  const WealthTrace trace = run_society(c);
  json epochs = json::array();
  for (const auto& e : trace.epochs) {
    epochs.push_back(json{{"epoch", e.epoch}, {"gini", e.gini}, {"total_wealth", e.total_wealth}});
  }
  out.report.outcome = json{{"final_gini", trace.final_gini()},
                            {"top10_share", top_share(trace.final_wealth, 0.1)},
                            {"bottom50_share", 1.0 - top_share(trace.final_wealth, 0.5)},
                            {"max_conservation_error", trace.max_conservation_error},
                            {"epochs", std::move(epochs)}};
  out.csv = write_wealth_csv(trace);
}

}  // namespace detail

/// Runs a validated scenario. Engine errors propagate as imbalance::Error.
inline RunResult run_scenario(const Scenario& s) {
  const auto start = std::chrono::steady_clock::now();
  RunResult out;
  out.report.scenario = scenario_to_json(s);
  std::visit([&](const auto& body) { detail::execute(body, out); }, s.body);
  out.report.duration_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace imbalance::io
