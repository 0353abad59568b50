#pragma once

#include <compare>

namespace imbalance {

// Thin strong typedef over double. Arithmetic is closed within one tag;
// mixing tags requires an explicit .value.
template <class Tag>
struct Quantity {
  double value{};

  constexpr Quantity() = default;
  constexpr explicit Quantity(double v) : value(v) {}

  constexpr auto operator<=>(const Quantity&) const = default;

  constexpr Quantity operator-() const { return Quantity{-value}; }
  constexpr Quantity& operator+=(Quantity o) { value += o.value; return *this; }
  constexpr Quantity& operator-=(Quantity o) { value -= o.value; return *this; }

  friend constexpr Quantity operator+(Quantity a, Quantity b) { return Quantity{a.value + b.value}; }
  friend constexpr Quantity operator-(Quantity a, Quantity b) { return Quantity{a.value - b.value}; }
  friend constexpr Quantity operator*(Quantity a, double s) { return Quantity{a.value * s}; }
  friend constexpr Quantity operator*(double s, Quantity a) { return Quantity{s * a.value}; }
};

/// Change in well-being of one party, on a per-scenario welfare scale.
using WelfareDelta = Quantity<struct WelfareDeltaTag>;
/// Net welfare a party expects from completing an exchange.
using Motivation = Quantity<struct MotivationTag>;
/// Welfare a party can move in the other, net of its own cost.
using Power = Quantity<struct PowerTag>;
/// Buyer's maximum or seller's minimum acceptable price.
using ReservePrice = Quantity<struct ReservePriceTag>;

}  // namespace imbalance
