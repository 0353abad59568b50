#pragma once

// Scenario documents: one JSON object per run,
//
//   { "version": 1, "kind": "...", "metadata": { "label": "text" }, "body": { ... } }
//
// Parsing is strict: unknown fields are rejected and every numeric rule is
// checked against the field it came from. See docs/scenario-schema.md.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "imbalance/exchange.hpp"
#include "imbalance/negotiation.hpp"
#include "imbalance/nonmarket.hpp"
#include "imbalance/power_graph.hpp"
#include "imbalance/society.hpp"
#include "imbalance/supply_chain.hpp"

namespace imbalance::io {

using json = nlohmann::ordered_json;

inline constexpr int kScenarioVersion = 1;

// ---------------------------------------------------------------------------
// Errors

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public ScenarioError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& detail)
      : ScenarioError("parse error at line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                      detail),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class SchemaError : public ScenarioError {
 public:
  SchemaError(std::string path, const std::string& detail)
      : ScenarioError("schema error at " + path + ": " + detail), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class InvariantError : public ScenarioError {
 public:
  InvariantError(std::string path, std::string rule)
      : ScenarioError("invariant violated at " + path + ": " + rule), path_(std::move(path)), rule_(std::move(rule)) {}
  const std::string& path() const { return path_; }
  const std::string& rule() const { return rule_; }

 private:
  std::string path_;
  std::string rule_;
};

// ---------------------------------------------------------------------------
// Scenario model

/// Reserve prices derived from each side's perceptions instead of given directly.
struct PerceptionSetup {
  ReservePrice buyer_base{0.0};
  PerceptionView buyer_view{.role = Role::Buyer};
  ReservePrice seller_base{0.0};
  PerceptionView seller_view{.role = Role::Seller};
  bool couple_rates = true;  // rescale concession rates by the imbalance ratios

  bool operator==(const PerceptionSetup&) const = default;
};

struct NegotiationScenario {
  double buyer_open = 0.0;
  double seller_open = 0.0;
  std::optional<double> buyer_reserve;
  std::optional<double> seller_reserve;
  std::optional<PerceptionSetup> perceptions;
  ConcessionRates rates;
  double gap_epsilon = 0.05;
  int max_steps = 1000;

  bool operator==(const NegotiationScenario&) const = default;
};

struct ResolvedNegotiation {
  NegotiationConfig config;
  std::optional<double> rho_buyer;
  std::optional<double> rho_seller;
};

inline ResolvedNegotiation resolve(const NegotiationScenario& s) {
  ResolvedNegotiation r;
  r.config.buyer_open = s.buyer_open;
  r.config.seller_open = s.seller_open;
  r.config.rates = s.rates;
  r.config.gap_epsilon = s.gap_epsilon;
  r.config.max_steps = s.max_steps;
  if (s.perceptions) {
    const auto& p = *s.perceptions;
    r.rho_buyer = imbalance_ratio(p.buyer_view);
    r.rho_seller = imbalance_ratio(p.seller_view);
    r.config.buyer_reserve = adjust_reserve_full(p.buyer_base, p.buyer_view).value;
    r.config.seller_reserve = adjust_reserve_full(p.seller_base, p.seller_view).value;
    if (p.couple_rates) r.config.rates = concession_rates_from_imbalance(s.rates, *r.rho_buyer, *r.rho_seller);
  } else {
    r.config.buyer_reserve = s.buyer_reserve.value_or(0.0);
    r.config.seller_reserve = s.seller_reserve.value_or(0.0);
  }
  return r;
}

struct NonmarketExchange {
  std::string stratum;
  ExchangeProposal proposal;
  ExternalInfluence influence_a;
  ExternalInfluence influence_b;

  bool operator==(const NonmarketExchange&) const = default;
};

struct NonmarketScenario {
  std::vector<NonmarketExchange> exchanges;

  bool operator==(const NonmarketScenario&) const = default;
};

struct PowerChainScenario {
  TrustGraph graph;
  std::string weak;
  std::string adversary;
  double threshold = 0.0;

  bool operator==(const PowerChainScenario&) const = default;
};

using ScenarioBody = std::variant<NegotiationScenario, ChainSpec, NonmarketScenario, PowerChainScenario, SocietyConfig>;

enum class ScenarioKind { Negotiation, Chain, Nonmarket, PowerChain, Society };

constexpr std::string_view to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Negotiation: return "negotiation";
    case ScenarioKind::Chain: return "chain";
    case ScenarioKind::Nonmarket: return "nonmarket";
    case ScenarioKind::PowerChain: return "power_chain";
    case ScenarioKind::Society: return "society";
  }
  return "unknown";
}

struct Scenario {
  int version = kScenarioVersion;
  std::map<std::string, std::string> metadata;
  ScenarioBody body;

  bool operator==(const Scenario&) const = default;

  ScenarioKind kind() const { return static_cast<ScenarioKind>(body.index()); }
};

// ---------------------------------------------------------------------------
// Strict object reader

namespace detail {

inline std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

inline std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

inline std::string type_name(const json& j) { return j.type_name(); }

/// Wraps one JSON object; tracks which keys were read so that leftovers can
/// be reported as unknown fields.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw SchemaError(path_.empty() ? "<root>" : path_, "expected object, got " + type_name(j_));
  }

  const std::string& path() const { return path_; }
  std::string at(std::string_view key) const { return join(path_, key); }
  bool has(std::string_view key) const { return j_.contains(std::string(key)); }

  const json& raw(std::string_view key) {
    const std::string k(key);
    if (!j_.contains(k)) throw SchemaError(at(key), "missing required field");
    seen_.insert(k);
    return j_.at(k);
  }

  double number(std::string_view key) {
    const json& v = raw(key);
    if (!v.is_number()) throw SchemaError(at(key), "expected number, got " + type_name(v));
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw InvariantError(at(key), "must be finite");
    return d;
  }

  template <class Rule>
  double number(std::string_view key, Rule rule) {
    const double d = number(key);
    if (!rule.ok(d)) throw InvariantError(at(key), rule.text);
    return d;
  }

  std::optional<double> optional_number(std::string_view key) {
    if (!has(key)) return std::nullopt;
    return number(key);
  }

  template <class Rule>
  std::optional<double> optional_number(std::string_view key, Rule rule) {
    if (!has(key)) return std::nullopt;
    return number(key, rule);
  }

  std::uint64_t unsigned_integer(std::string_view key, std::uint64_t min_value = 0) {
    const json& v = raw(key);
    if (!v.is_number_integer()) throw SchemaError(at(key), "expected integer, got " + type_name(v));
    if (v.is_number_unsigned()) {
      const auto u = v.get<std::uint64_t>();
      if (u < min_value) throw InvariantError(at(key), "must be >= " + std::to_string(min_value));
      return u;
    }
    const auto s = v.get<std::int64_t>();
    if (s < 0 || static_cast<std::uint64_t>(s) < min_value)
      throw InvariantError(at(key), "must be >= " + std::to_string(min_value));
    return static_cast<std::uint64_t>(s);
  }

  std::string string(std::string_view key) {
    const json& v = raw(key);
    if (!v.is_string()) throw SchemaError(at(key), "expected string, got " + type_name(v));
    return v.get<std::string>();
  }

  bool boolean(std::string_view key) {
    const json& v = raw(key);
    if (!v.is_boolean()) throw SchemaError(at(key), "expected boolean, got " + type_name(v));
    return v.get<bool>();
  }

  ObjectReader object(std::string_view key) { return ObjectReader(raw(key), at(key)); }

  const json& array(std::string_view key) {
    const json& v = raw(key);
    if (!v.is_array()) throw SchemaError(at(key), "expected array, got " + type_name(v));
    return v;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw SchemaError(at(it.key()), "unknown field");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

struct Rule {
  bool (*check)(double);
  const char* text;
  bool ok(double v) const { return check(v); }
};

inline constexpr Rule kPositive{[](double v) { return v > 0.0; }, "must be > 0"};
inline constexpr Rule kNonNegative{[](double v) { return v >= 0.0; }, "must be >= 0"};
inline constexpr Rule kOpenUnit{[](double v) { return v > 0.0 && v < 1.0; }, "must lie in (0,1)"};
inline constexpr Rule kHalfOpenUnit{[](double v) { return v >= 0.0 && v < 1.0; }, "must lie in [0,1)"};
inline constexpr Rule kClosedUnit{[](double v) { return v >= 0.0 && v <= 1.0; }, "must lie in [0,1]"};
inline constexpr Rule kWillingness{[](double v) { return v > 0.0 && v <= 1.0; }, "must lie in (0,1]"};
inline constexpr Rule kRatioTerm{[](double v) { return v >= kDefaultRatioFloor; }, "must be strictly positive (>= 1e-9)"};
inline constexpr Rule kAtLeastOne{[](double v) { return v >= 1.0; }, "must be >= 1"};

inline int positive_int(ObjectReader& r, std::string_view key) {
  const auto v = r.unsigned_integer(key, 1);
  if (v > static_cast<std::uint64_t>(std::numeric_limits<int>::max()))
    throw InvariantError(r.at(key), "too large");
  return static_cast<int>(v);
}

inline ConcessionRates read_rates(ObjectReader r) {
  ConcessionRates c;
  c.buyer_yield = r.number("r_a", kOpenUnit);
  c.buyer_close = r.number("r_a_prime", kHalfOpenUnit);
  c.seller_yield = r.number("r_b", kOpenUnit);
  c.seller_close = r.number("r_b_prime", kHalfOpenUnit);
  r.finish();
  if (c.buyer_yield + c.buyer_close >= 1.0) throw InvariantError(r.at("r_a_prime"), "r_a + r_a_prime must be < 1");
  if (c.seller_yield + c.seller_close >= 1.0) throw InvariantError(r.at("r_b_prime"), "r_b + r_b_prime must be < 1");
  return c;
}

inline PerceptionView read_view(ObjectReader r, Role role) {
  PerceptionView v;
  v.role = role;
  v.own_motivation = Motivation{r.number("own_motivation", kRatioTerm)};
  v.other_motivation_perceived = Motivation{r.number("other_motivation_perceived", kRatioTerm)};
  v.own_power = Power{r.number("own_power", kRatioTerm)};
  v.other_power_perceived = Power{r.number("other_power_perceived", kRatioTerm)};
  r.finish();
  return v;
}

inline NegotiationScenario read_negotiation(ObjectReader r) {
  NegotiationScenario s;
  s.buyer_open = r.number("buyer_open");
  s.seller_open = r.number("seller_open");
  if (s.seller_open < s.buyer_open) throw InvariantError(r.at("seller_open"), "must be >= buyer_open");
  s.rates = read_rates(r.object("rates"));
  s.gap_epsilon = r.optional_number("gap_epsilon", kPositive).value_or(0.05);
  s.max_steps = r.has("max_steps") ? positive_int(r, "max_steps") : 1000;

  const bool direct = r.has("buyer_reserve") || r.has("seller_reserve");
  if (r.has("perceptions") == direct) {
    throw SchemaError(r.path(), "exactly one of {buyer_reserve, seller_reserve} or perceptions is required");
  }
  if (direct) {
    s.buyer_reserve = r.number("buyer_reserve", kNonNegative);
    s.seller_reserve = r.number("seller_reserve", kNonNegative);
  } else {
    ObjectReader p = r.object("perceptions");
    PerceptionSetup ps;
    {
      ObjectReader b = p.object("buyer");
      ps.buyer_base = ReservePrice{b.number("base_reserve", kNonNegative)};
      ps.buyer_view = read_view(b.object("view"), Role::Buyer);
      b.finish();
    }
    {
      ObjectReader b = p.object("seller");
      ps.seller_base = ReservePrice{b.number("base_reserve", kNonNegative)};
      ps.seller_view = read_view(b.object("view"), Role::Seller);
      b.finish();
    }
    ps.couple_rates = p.has("couple_rates") ? p.boolean("couple_rates") : true;
    p.finish();
    s.perceptions = ps;
  }
  r.finish();
  return s;
}

inline ChainSpec read_chain(ObjectReader r) {
  ChainSpec c;
  c.anchor_price = r.number("anchor_price", kPositive);
  c.gap_epsilon = r.optional_number("gap_epsilon", kPositive).value_or(0.05);
  c.max_steps = r.has("max_steps") ? positive_int(r, "max_steps") : 10000;
  const json& stages = r.array("stages");
  if (stages.empty()) throw InvariantError(r.at("stages"), "needs at least one stage");
  for (std::size_t i = 0; i < stages.size(); ++i) {
    ObjectReader s(stages[i], index_path(r.at("stages"), i));
    ChainStage st;
    st.name = s.string("name");
    st.buyer_view = read_view(s.object("buyer_view"), Role::Buyer);
    st.seller_view = read_view(s.object("seller_view"), Role::Seller);
    st.base_seller_reserve = ReservePrice{s.number("base_seller_reserve", kNonNegative)};
    if (auto b = s.optional_number("base_buyer_reserve", kNonNegative)) st.base_buyer_reserve = ReservePrice{*b};
    st.margin_floor = s.optional_number("margin_floor", kNonNegative).value_or(0.0);
    st.rates = read_rates(s.object("rates"));
    s.finish();
    c.stages.push_back(std::move(st));
  }
  r.finish();
  return c;
}

inline ExternalInfluence read_influence(ObjectReader r) {
  ExternalInfluence f;
  f.threat_on_refusal = WelfareDelta{r.optional_number("threat_on_refusal", kNonNegative).value_or(0.0)};
  f.shield = r.optional_number("shield", kClosedUnit).value_or(0.0);
  r.finish();
  return f;
}

inline NonmarketScenario read_nonmarket(ObjectReader r) {
  NonmarketScenario s;
  const json& xs = r.array("exchanges");
  if (xs.empty()) throw InvariantError(r.at("exchanges"), "needs at least one exchange");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    ObjectReader x(xs[i], index_path(r.at("exchanges"), i));
    NonmarketExchange e;
    e.stratum = x.has("stratum") ? x.string("stratum") : "default";
    {
      ObjectReader p = x.object("proposal");
      e.proposal.give_cost_a = WelfareDelta{p.number("give_cost_a")};
      e.proposal.gain_for_b = WelfareDelta{p.number("gain_for_b")};
      e.proposal.give_cost_b = WelfareDelta{p.number("give_cost_b")};
      e.proposal.gain_for_a = WelfareDelta{p.number("gain_for_a")};
      e.proposal.promise_kept_probability = p.optional_number("promise_kept_probability", kClosedUnit).value_or(1.0);
      p.finish();
    }
    if (x.has("influence_a")) e.influence_a = read_influence(x.object("influence_a"));
    if (x.has("influence_b")) e.influence_b = read_influence(x.object("influence_b"));
    x.finish();
    s.exchanges.push_back(std::move(e));
  }
  r.finish();
  return s;
}

inline PowerChainScenario read_power_chain(ObjectReader r) {
  PowerChainScenario s;
  s.weak = r.string("weak");
  s.adversary = r.string("adversary");
  s.threshold = r.number("threshold");
  std::set<std::string> names;
  const json& nodes = r.array("subjects");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    ObjectReader n(nodes[i], index_path(r.at("subjects"), i));
    Subject sub;
    sub.name = n.string("name");
    if (sub.name.empty()) throw InvariantError(n.at("name"), "must be non-empty");
    if (!names.insert(sub.name).second) throw InvariantError(n.at("name"), "duplicate subject name");
    ObjectReader st = n.object("strength_vs");
    const json& raw = n.raw("strength_vs");
    for (auto it = raw.begin(); it != raw.end(); ++it) sub.strength_vs[it.key()] = st.number(it.key());
    st.finish();
    if (!sub.strength_vs.count(s.adversary))
      throw InvariantError(n.at("strength_vs"), "missing strength against adversary '" + s.adversary + "'");
    n.finish();
    s.graph.subjects.push_back(std::move(sub));
  }
  if (!names.count(s.weak)) throw InvariantError(r.at("weak"), "must name a subject");
  const json& edges = r.array("trust");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    ObjectReader e(edges[i], index_path(r.at("trust"), i));
    TrustEdge edge;
    edge.requester = e.string("requester");
    edge.helper = e.string("helper");
    if (!names.count(edge.requester)) throw InvariantError(e.at("requester"), "must name a subject");
    if (!names.count(edge.helper)) throw InvariantError(e.at("helper"), "must name a subject");
    if (edge.requester == edge.helper) throw InvariantError(e.at("helper"), "self-loops are not allowed");
    edge.willingness = e.optional_number("willingness", kWillingness).value_or(1.0);
    e.finish();
    s.graph.edges.push_back(std::move(edge));
  }
  r.finish();
  return s;
}

inline SocietyConfig read_society(ObjectReader r) {
  SocietyConfig c;
  c.n_agents = r.unsigned_integer("n_agents", 2);
  c.epochs = r.unsigned_integer("epochs", 1);
  c.pairings_per_epoch = r.has("pairings_per_epoch") ? r.unsigned_integer("pairings_per_epoch", 1) : 1;
  c.seed = r.unsigned_integer("seed");
  c.unit_surplus = r.optional_number("unit_surplus", kPositive).value_or(1.0);
  {
    ObjectReader w = r.object("initial_wealth");
    const std::string kind = w.string("kind");
    if (kind == "constant") {
      c.initial_wealth = ConstantWealth{w.number("value", kPositive)};
    } else if (kind == "uniform") {
      UniformWealth u{w.number("lo", kPositive), w.number("hi", kPositive)};
      if (u.hi < u.lo) throw InvariantError(w.at("hi"), "must be >= lo");
      c.initial_wealth = u;
    } else if (kind == "lognormal") {
      c.initial_wealth = LogNormalWealth{w.number("mu"), w.number("sigma", kNonNegative)};
    } else {
      throw SchemaError(w.at("kind"), "expected one of constant, uniform, lognormal");
    }
    w.finish();
  }
  {
    ObjectReader g = r.object("regime");
    const std::string kind = g.string("kind");
    if (kind == "authoritarian") {
      c.regime = Authoritarian{g.number("power_exponent", kNonNegative)};
    } else if (kind == "institutional") {
      c.regime = Institutional{g.number("cap", kAtLeastOne)};
    } else {
      throw SchemaError(g.at("kind"), "expected one of authoritarian, institutional");
    }
    g.finish();
  }
  r.finish();
  return c;
}

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace detail

/// Validates a parsed document. Throws SchemaError or InvariantError.
inline Scenario scenario_from_json(const json& doc) {
  detail::ObjectReader root(doc, "");
  Scenario s;
  const auto version = root.unsigned_integer("version");
  if (version != static_cast<std::uint64_t>(kScenarioVersion))
    throw InvariantError("version", "unsupported version " + std::to_string(version));
  s.version = static_cast<int>(version);
  const std::string kind = root.string("kind");
  if (root.has("metadata")) {
    const json& meta = root.raw("metadata");
    if (!meta.is_object()) throw SchemaError("metadata", std::string("expected object, got ") + meta.type_name());
    for (auto it = meta.begin(); it != meta.end(); ++it) {
      if (!it.value().is_string()) throw SchemaError("metadata." + it.key(), "labels must be strings");
      s.metadata[it.key()] = it.value().get<std::string>();
    }
  }
  detail::ObjectReader body = root.object("body");
  if (kind == "negotiation") {
    s.body = detail::read_negotiation(body);
  } else if (kind == "chain") {
    s.body = detail::read_chain(body);
  } else if (kind == "nonmarket") {
    s.body = detail::read_nonmarket(body);
  } else if (kind == "power_chain") {
    s.body = detail::read_power_chain(body);
  } else if (kind == "society") {
    s.body = detail::read_society(body);
  } else {
    throw SchemaError("kind", "unknown scenario kind '" + kind + "'");
  }
  root.finish();
  return s;
}

/// Parses and validates scenario text. Throws ParseError, SchemaError or
/// InvariantError.
inline Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(line, col, e.what());
  }
  return scenario_from_json(doc);
}

// ---------------------------------------------------------------------------
// Serialization

namespace detail {

inline json to_json(const ConcessionRates& r) {
  return json{{"r_a", r.buyer_yield}, {"r_a_prime", r.buyer_close}, {"r_b", r.seller_yield}, {"r_b_prime", r.seller_close}};
}

inline json to_json(const PerceptionView& v) {
  return json{{"own_motivation", v.own_motivation.value},
              {"other_motivation_perceived", v.other_motivation_perceived.value},
              {"own_power", v.own_power.value},
              {"other_power_perceived", v.other_power_perceived.value}};
}

inline json body_json(const NegotiationScenario& s) {
  json j{{"buyer_open", s.buyer_open}, {"seller_open", s.seller_open}};
  if (s.perceptions) {
    const auto& p = *s.perceptions;
    j["perceptions"] = json{{"buyer", {{"base_reserve", p.buyer_base.value}, {"view", to_json(p.buyer_view)}}},
                            {"seller", {{"base_reserve", p.seller_base.value}, {"view", to_json(p.seller_view)}}},
                            {"couple_rates", p.couple_rates}};
  } else {
    j["buyer_reserve"] = s.buyer_reserve.value_or(0.0);
    j["seller_reserve"] = s.seller_reserve.value_or(0.0);
  }
  j["rates"] = to_json(s.rates);
  j["gap_epsilon"] = s.gap_epsilon;
  j["max_steps"] = s.max_steps;
  return j;
}

inline json body_json(const ChainSpec& c) {
  json stages = json::array();
  for (const auto& s : c.stages) {
    json st{{"name", s.name},
            {"buyer_view", to_json(s.buyer_view)},
            {"seller_view", to_json(s.seller_view)},
            {"base_seller_reserve", s.base_seller_reserve.value}};
    if (s.base_buyer_reserve) st["base_buyer_reserve"] = s.base_buyer_reserve->value;
    st["margin_floor"] = s.margin_floor;
    st["rates"] = to_json(s.rates);
    stages.push_back(std::move(st));
  }
  return json{{"anchor_price", c.anchor_price}, {"gap_epsilon", c.gap_epsilon}, {"max_steps", c.max_steps},
              {"stages", std::move(stages)}};
}

inline json to_json(const ExternalInfluence& f) {
  return json{{"threat_on_refusal", f.threat_on_refusal.value}, {"shield", f.shield}};
}

inline json body_json(const NonmarketScenario& s) {
  json xs = json::array();
  for (const auto& e : s.exchanges) {
    xs.push_back(json{{"stratum", e.stratum},
                      {"proposal",
                       {{"give_cost_a", e.proposal.give_cost_a.value},
                        {"gain_for_b", e.proposal.gain_for_b.value},
                        {"give_cost_b", e.proposal.give_cost_b.value},
                        {"gain_for_a", e.proposal.gain_for_a.value},
                        {"promise_kept_probability", e.proposal.promise_kept_probability}}},
                      {"influence_a", to_json(e.influence_a)},
                      {"influence_b", to_json(e.influence_b)}});
  }
  return json{{"exchanges", std::move(xs)}};
}

inline json body_json(const PowerChainScenario& s) {
  json subjects = json::array();
  for (const auto& n : s.graph.subjects) {
    json st = json::object();
    for (const auto& [adv, k] : n.strength_vs) st[adv] = k;
    subjects.push_back(json{{"name", n.name}, {"strength_vs", std::move(st)}});
  }
  json trust = json::array();
  for (const auto& e : s.graph.edges) {
    trust.push_back(json{{"requester", e.requester}, {"helper", e.helper}, {"willingness", e.willingness}});
  }
  return json{{"weak", s.weak},
              {"adversary", s.adversary},
              {"threshold", s.threshold},
              {"subjects", std::move(subjects)},
              {"trust", std::move(trust)}};
}

inline json body_json(const SocietyConfig& c) {
  json wealth = std::visit(
      [](const auto& d) -> json {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, ConstantWealth>) return json{{"kind", "constant"}, {"value", d.value}};
        else if constexpr (std::is_same_v<D, UniformWealth>) return json{{"kind", "uniform"}, {"lo", d.lo}, {"hi", d.hi}};
        else return json{{"kind", "lognormal"}, {"mu", d.mu}, {"sigma", d.sigma}};
      },
      c.initial_wealth);
  json regime = std::visit(
      [](const auto& r) -> json {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, Authoritarian>) return json{{"kind", "authoritarian"}, {"power_exponent", r.power_exponent}};
        else return json{{"kind", "institutional"}, {"cap", r.cap}};
      },
      c.regime);
  return json{{"n_agents", c.n_agents},
              {"initial_wealth", std::move(wealth)},
              {"regime", std::move(regime)},
              {"epochs", c.epochs},
              {"pairings_per_epoch", c.pairings_per_epoch},
              {"seed", c.seed},
              {"unit_surplus", c.unit_surplus}};
}

}  // namespace detail

inline json scenario_to_json(const Scenario& s) {
  json meta = json::object();
  for (const auto& [k, v] : s.metadata) meta[k] = v;
  return json{{"version", s.version},
              {"kind", std::string(to_string(s.kind()))},
              {"metadata", std::move(meta)},
              {"body", std::visit([](const auto& b) { return detail::body_json(b); }, s.body)}};
}

inline std::string serialize_scenario(const Scenario& s, int indent = 2) { return scenario_to_json(s).dump(indent); }

}  // namespace imbalance::io
