#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "imbalance/negotiation.hpp"
#include "imbalance/nonmarket.hpp"
#include "imbalance/power_graph.hpp"
#include "imbalance/society.hpp"
#include "imbalance/supply_chain.hpp"

namespace imbalance::io {

/// Six significant digits, '.' as decimal point regardless of locale, and
/// always a fractional part for finite values ("2" is written "2.0").
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 6);
  std::string s(buf.data(), res.ptr);
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

inline std::string write_trace_csv(const NegotiationTrace& trace) {
  std::string out = "step,offer_buyer,offer_seller,gap\n";
  for (const auto& s : trace.steps) {
    out += std::to_string(s.step) + "," + format_number(s.buyer) + "," + format_number(s.seller) + "," +
           format_number(s.gap) + "\n";
  }
  if (const auto* a = std::get_if<Agreement>(&trace.outcome)) {
    out += "# outcome,agreement," + std::to_string(a->step) + "," + format_number(a->price) + "\n";
  } else {
    out += "# outcome,breakdown," + std::to_string(std::get<Breakdown>(trace.outcome).steps) + "\n";
  }
  return out;
}

inline std::string write_chain_csv(const std::vector<StageResult>& results) {
  const SqueezeReport rep = squeeze_report(results);
  std::string out = "stage,incoming_price,buyer_reserve,seller_reserve,settlement,margin,margin_share\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  std::optional<std::size_t> broken_at;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    if (!r.reached) continue;
    if (!r.settlement && !broken_at) broken_at = i;
    std::optional<double> share;
    if (r.margin) share = *r.margin / rep.anchor_price;
    out += r.stage + "," + format_number(r.incoming_price) + "," + format_number(r.buyer_reserve_effective.value) +
           "," + format_number(r.seller_reserve_effective.value) + "," + opt(r.settlement) + "," + opt(r.margin) +
           "," + opt(share) + "\n";
  }
  if (broken_at) {
    out += "# outcome,breakdown," + results[*broken_at].stage + "\n";
  } else {
    out += "# outcome,complete," + format_number(rep.terminal_share.value_or(0.0)) + "\n";
  }
  return out;
}

inline std::string write_balance_csv(const std::vector<std::string>& strata, const std::vector<BalanceSheet>& sheets) {
  std::string out = "stratum,m_a,m_a_effective,m_b_raw,m_b_effective,k_a,k_b,equity,verdict\n";
  for (std::size_t i = 0; i < sheets.size(); ++i) {
    const auto& s = sheets[i];
    out += strata[i] + "," + format_number(s.m_a.value) + "," + format_number(s.m_a_effective.value) + "," +
           format_number(s.m_b_raw.value) + "," + format_number(s.m_b_effective.value) + "," +
           format_number(s.k_a.value) + "," + format_number(s.k_b.value) + "," +
           (s.equity ? format_number(*s.equity) : std::string("undefined")) + "," + to_string(s.verdict) + "\n";
  }
  return out;
}

inline std::string write_power_chain_csv(const TrustGraph& g, const std::string& adversary,
                                         const std::optional<PowerChain>& chain) {
  std::string out = "hop,subject,strength\n";
  if (!chain) return out + "# outcome,no_chain\n";
  for (std::size_t i = 0; i < chain->path.size(); ++i) {
    const auto idx = g.index_of(chain->path[i]);
    out += std::to_string(i) + "," + chain->path[i] + "," +
           format_number(g.subjects[*idx].strength_vs.at(adversary)) + "\n";
  }
  return out + "# outcome,found," + std::to_string(chain->path.size() - 1) + "\n";
}

inline std::string write_wealth_csv(const WealthTrace& trace) {
  std::string out = "epoch,gini,total_wealth\n";
  for (const auto& e : trace.epochs) {
    out += std::to_string(e.epoch) + "," + format_number(e.gini) + "," + format_number(e.total_wealth) + "\n";
  }
  return out + "# outcome,final_gini," + format_number(trace.final_gini()) + "\n";
}

}  // namespace imbalance::io
