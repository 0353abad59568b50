#pragma once

// Primitive quantities of a bilateral exchange: motivation, power, and the
// reserve-price adjustment each side applies before bargaining starts.

#include <algorithm>
#include <cmath>
#include <string>

#include "imbalance/error.hpp"
#include "imbalance/quantity.hpp"

namespace imbalance {

enum class Role { Buyer, Seller };

/// Magnitudes below this are treated as zero when they appear in a ratio.
inline constexpr double kDefaultRatioFloor = 1e-9;

/// One side's private picture of the exchange.
///
/// For a buyer A the fields hold (M_A, M_BA, K_A, K_BA); for a seller B they
/// hold (M_B, M_AB, K_B, K_AB). The "perceived" fields are always about the
/// counterpart, as estimated by the owner of the view.
struct PerceptionView {
  Motivation own_motivation{1.0};
  Motivation other_motivation_perceived{1.0};
  Power own_power{1.0};
  Power other_power_perceived{1.0};
  Role role = Role::Buyer;

  bool operator==(const PerceptionView&) const = default;
};

namespace detail {

inline void require_finite(double v, const char* what) {
  require(std::isfinite(v), Errc::InvalidInput, std::string(what) + " must be finite");
}

inline void require_ratio_term(double v, double floor, const char* what) {
  require(std::isfinite(v) && v >= floor, Errc::DegenerateRatio,
          std::string(what) + " must be strictly positive (>= " + std::to_string(floor) + ")");
}

inline ReservePrice clamp_price(double p) { return ReservePrice{std::max(0.0, p)}; }

}  // namespace detail

/// M = gain - loss, with the loss given as a positive magnitude.
inline Motivation motivation(WelfareDelta gain, WelfareDelta loss) {
  detail::require_finite(gain.value, "gain");
  detail::require_finite(loss.value, "loss");
  return Motivation{gain.value - loss.value};
}

/// K = welfare moved in the counterpart minus the welfare it costs to move it.
inline Power power(WelfareDelta effect_on_other, WelfareDelta own_cost) {
  detail::require_finite(effect_on_other.value, "effect_on_other");
  detail::require_finite(own_cost.value, "own_cost");
  return Power{effect_on_other.value - own_cost.value};
}

/// Buyer: M_A / M_BA. Seller: M_AB / M_B.
inline double motivation_ratio(const PerceptionView& v, double floor = kDefaultRatioFloor) {
  detail::require_ratio_term(v.own_motivation.value, floor, "own_motivation");
  detail::require_ratio_term(v.other_motivation_perceived.value, floor, "other_motivation_perceived");
  return v.role == Role::Buyer ? v.own_motivation.value / v.other_motivation_perceived.value
                               : v.other_motivation_perceived.value / v.own_motivation.value;
}

/// Buyer: K_BA / K_A. Seller: K_B / K_AB.
inline double power_ratio(const PerceptionView& v, double floor = kDefaultRatioFloor) {
  detail::require_ratio_term(v.own_power.value, floor, "own_power");
  detail::require_ratio_term(v.other_power_perceived.value, floor, "other_power_perceived");
  return v.role == Role::Buyer ? v.other_power_perceived.value / v.own_power.value
                               : v.own_power.value / v.other_power_perceived.value;
}

/// Perceived imbalance as a single scalar. Values above 1 raise the owner's
/// reserve price; values below 1 lower it. For a buyer, rho > 1 means the
/// buyer believes itself the weaker or more eager side; for a seller, rho > 1
/// means the seller believes itself the stronger side.
inline double imbalance_ratio(const PerceptionView& v, double floor = kDefaultRatioFloor) {
  return motivation_ratio(v, floor) * power_ratio(v, floor);
}

/// Reserve price corrected for perceived motivation only.
inline ReservePrice adjust_reserve_motivation(ReservePrice base, const PerceptionView& v,
                                              double floor = kDefaultRatioFloor) {
  detail::require_finite(base.value, "base reserve");
  return detail::clamp_price(base.value * motivation_ratio(v, floor));
}

/// Reserve price corrected for perceived motivation and power, floored at 0.
inline ReservePrice adjust_reserve_full(ReservePrice base, const PerceptionView& v,
                                        double floor = kDefaultRatioFloor) {
  detail::require_finite(base.value, "base reserve");
  return detail::clamp_price(base.value * imbalance_ratio(v, floor));
}

/// Equity of an exchange, (M_A K_B) / (M_B K_A). Equals 1 for a balanced
/// exchange and falls below 1 as A gains power or B becomes more eager.
/// All four magnitudes must be strictly positive.
inline double equity_index(Motivation m_a, Power k_a, Motivation m_b, Power k_b,
                           double floor = kDefaultRatioFloor) {
  detail::require_ratio_term(m_a.value, floor, "m_a");
  detail::require_ratio_term(k_a.value, floor, "k_a");
  detail::require_ratio_term(m_b.value, floor, "m_b");
  detail::require_ratio_term(k_b.value, floor, "k_b");
  return (m_a.value * k_b.value) / (m_b.value * k_a.value);
}

}  // namespace imbalance
