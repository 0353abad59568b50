#pragma once

// The negotiation dance as a coupled linear difference system.
//
//   X^A_{n+1} = X^A_n + r_a (p*_RA - X^A_n) + r'_a (X^B_n - X^A_n)
//   X^B_{n+1} = X^B_n - r_b (X^B_n - p*_RB) - r'_b (X^B_n - X^A_n)
//
// A is the buyer, B the seller. r pulls an offer toward the party's own
// reserve, r' pulls it toward the counterpart's current offer.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <variant>
#include <vector>

#include "imbalance/error.hpp"

namespace imbalance {

struct ConcessionRates {
  double buyer_yield = 0.0;   // r_a
  double buyer_close = 0.0;   // r'_a
  double seller_yield = 0.0;  // r_b
  double seller_close = 0.0;  // r'_b

  bool operator==(const ConcessionRates&) const = default;

  /// Throws InvalidConfig unless yields are in (0,1), closes in [0,1) and
  /// each side's pair sums below 1.
  void validate() const {
    auto in_open = [](double r) { return std::isfinite(r) && r > 0.0 && r < 1.0; };
    auto in_half_open = [](double r) { return std::isfinite(r) && r >= 0.0 && r < 1.0; };
    detail::require(in_open(buyer_yield), Errc::InvalidConfig, "r_a must lie in (0,1)");
    detail::require(in_half_open(buyer_close), Errc::InvalidConfig, "r'_a must lie in [0,1)");
    detail::require(in_open(seller_yield), Errc::InvalidConfig, "r_b must lie in (0,1)");
    detail::require(in_half_open(seller_close), Errc::InvalidConfig, "r'_b must lie in [0,1)");
    detail::require(buyer_yield + buyer_close < 1.0, Errc::InvalidConfig, "r_a + r'_a must be < 1");
    detail::require(seller_yield + seller_close < 1.0, Errc::InvalidConfig, "r_b + r'_b must be < 1");
  }
};

/// Clamp window used when concession rates are rescaled by perceived imbalance.
struct RateBounds {
  double min_yield = 1e-6;
  double max_rate = 0.99;
  double max_pair_sum = 0.99;

  bool operator==(const RateBounds&) const = default;
};

struct Offers {
  double buyer = 0.0;
  double seller = 0.0;

  bool operator==(const Offers&) const = default;
};

struct NegotiationConfig {
  double buyer_open = 0.0;      // X^A_0
  double seller_open = 0.0;     // X^B_0
  double buyer_reserve = 0.0;   // p*_RA, already adjusted
  double seller_reserve = 0.0;  // p*_RB, already adjusted
  ConcessionRates rates;
  double gap_epsilon = 0.05;
  int max_steps = 1000;

  bool operator==(const NegotiationConfig&) const = default;

  void validate() const {
    for (double v : {buyer_open, seller_open, buyer_reserve, seller_reserve}) {
      detail::require(std::isfinite(v), Errc::InvalidConfig, "prices must be finite");
    }
    rates.validate();
    detail::require(seller_open >= buyer_open, Errc::InvalidConfig,
                    "seller_open must be >= buyer_open");
    detail::require(std::isfinite(gap_epsilon) && gap_epsilon > 0.0, Errc::InvalidConfig,
                    "gap_epsilon must be > 0");
    detail::require(max_steps >= 1, Errc::InvalidConfig, "max_steps must be >= 1");
  }
};

struct OfferStep {
  int step = 0;
  double buyer = 0.0;
  double seller = 0.0;
  double gap = 0.0;  // seller - buyer

  bool operator==(const OfferStep&) const = default;
};

struct Agreement {
  double price = 0.0;
  int step = 0;

  bool operator==(const Agreement&) const = default;
};

struct Breakdown {
  int steps = 0;

  bool operator==(const Breakdown&) const = default;
};

using Outcome = std::variant<Agreement, Breakdown>;

struct NegotiationTrace {
  std::vector<OfferStep> steps;
  Outcome outcome;

  bool operator==(const NegotiationTrace&) const = default;

  bool agreed() const { return std::holds_alternative<Agreement>(outcome); }
};

/// Rescales base rates by the perceived imbalances. A buyer with rho > 1
/// (weaker or more eager) concedes faster; a seller with rho > 1 (stronger)
/// concedes slower. Results are clamped into `bounds`; a side whose pair sum
/// would reach 1 is shrunk proportionally to `bounds.max_pair_sum`.
inline ConcessionRates concession_rates_from_imbalance(const ConcessionRates& base, double rho_buyer,
                                                       double rho_seller, const RateBounds& bounds = {}) {
  detail::require(std::isfinite(rho_buyer) && rho_buyer > 0.0, Errc::DegenerateRatio,
                  "rho_buyer must be > 0");
  detail::require(std::isfinite(rho_seller) && rho_seller > 0.0, Errc::DegenerateRatio,
                  "rho_seller must be > 0");
  if (rho_buyer == 1.0 && rho_seller == 1.0) return base;

  auto yield = [&](double r) { return std::clamp(r, bounds.min_yield, bounds.max_rate); };
  auto close = [&](double r) { return std::clamp(r, 0.0, bounds.max_rate); };
  auto shrink = [&](double& y, double& c) {
    const double sum = y + c;
    if (sum >= 1.0) {
      const double s = bounds.max_pair_sum / sum;
      y *= s;
      c *= s;
    }
  };

  ConcessionRates out;
  out.buyer_yield = yield(base.buyer_yield * rho_buyer);
  out.buyer_close = close(base.buyer_close * rho_buyer);
  out.seller_yield = yield(base.seller_yield / rho_seller);
  out.seller_close = close(base.seller_close / rho_seller);
  shrink(out.buyer_yield, out.buyer_close);
  shrink(out.seller_yield, out.seller_close);
  return out;
}

/// One round of offers, exactly as the difference system is written.
inline Offers step(Offers x, const NegotiationConfig& cfg) {
  detail::require(std::isfinite(x.buyer) && std::isfinite(x.seller), Errc::InvalidInput,
                  "offers must be finite");
  const auto& r = cfg.rates;
  const double gap = x.seller - x.buyer;
  return Offers{
      x.buyer + r.buyer_yield * (cfg.buyer_reserve - x.buyer) + r.buyer_close * gap,
      x.seller - r.seller_yield * (x.seller - cfg.seller_reserve) - r.seller_close * gap,
  };
}

inline Offers fixed_point(const NegotiationConfig& cfg);

namespace detail {

// Where the straight segments a->b of the two offer paths intersect, given
// that the gap changes sign (or hits zero) between a and b.
inline double crossing_price(const Offers& a, const Offers& b) {
  const double ga = a.seller - a.buyer;
  const double gb = b.seller - b.buyer;
  if (ga == gb) return b.buyer;
  const double t = ga / (ga - gb);
  return a.buyer + t * (b.buyer - a.buyer);
}

// Price at which the offer paths meet once the parties stop at `x`. Offers
// already crossed: the crossing point of the last segment. Otherwise the
// dance is followed forward to its crossing, or to its rest point when the
// paths never cross. Always within the interval spanned by `x`.
inline double meeting_price(const NegotiationConfig& cfg, const Offers& prev, const Offers& x) {
  const double lo = std::min(x.buyer, x.seller);
  const double hi = std::max(x.buyer, x.seller);
  if (x.seller - x.buyer < 0.0) return std::clamp(crossing_price(prev, x), lo, hi);
  if (x.seller == x.buyer) return x.buyer;

  Offers y = x;
  for (int i = 0; i < cfg.max_steps; ++i) {
    const Offers next = step(y, cfg);
    if (next.seller - next.buyer <= 0.0) return std::clamp(crossing_price(y, next), lo, hi);
    y = next;
  }
  double price = 0.5 * (y.buyer + y.seller);
  try {
    const Offers f = fixed_point(cfg);
    price = 0.5 * (f.buyer + f.seller);
  } catch (const Error&) {
  }
  return std::clamp(price, lo, hi);
}

}  // namespace detail

/// Iterates the dance until the gap closes or max_steps is reached.
///
/// Agreement is declared at the first step whose gap is <= gap_epsilon.
/// The price is where the two offer paths meet: the crossing of the
/// straight segments between successive offers, or the midpoint of the
/// rest point when the paths never cross. It does not depend on
/// gap_epsilon and lies between the two final offers.
inline NegotiationTrace run(const NegotiationConfig& cfg) {
  cfg.validate();
  NegotiationTrace trace;
  trace.steps.reserve(static_cast<std::size_t>(std::min(cfg.max_steps, 4096)) + 1);

  Offers x{cfg.buyer_open, cfg.seller_open};
  Offers prev = x;
  for (int n = 0;; ++n) {
    const double gap = x.seller - x.buyer;
    trace.steps.push_back({n, x.buyer, x.seller, gap});
    if (gap <= cfg.gap_epsilon) {
      trace.outcome = Agreement{detail::meeting_price(cfg, prev, x), n};
      return trace;
    }
    if (n == cfg.max_steps) {
      trace.outcome = Breakdown{n};
      return trace;
    }
    prev = x;
    x = step(x, cfg);
  }
}

/// Rest point of the coupled system (where both increments vanish).
inline Offers fixed_point(const NegotiationConfig& cfg) {
  const auto& r = cfg.rates;
  // [ r_a + r'_a    -r'_a      ] [X^A]   [ r_a p*_RA ]
  // [ -r'_b         r_b + r'_b ] [X^B] = [ r_b p*_RB ]
  const double a11 = r.buyer_yield + r.buyer_close;
  const double a12 = -r.buyer_close;
  const double a21 = -r.seller_close;
  const double a22 = r.seller_yield + r.seller_close;
  const double b1 = r.buyer_yield * cfg.buyer_reserve;
  const double b2 = r.seller_yield * cfg.seller_reserve;
  const double det = a11 * a22 - a12 * a21;
  detail::require(std::abs(det) >= 1e-12, Errc::SingularSystem,
                  "fixed-point system is singular (|det| < 1e-12)");
  return Offers{(b1 * a22 - a12 * b2) / det, (a11 * b2 - a21 * b1) / det};
}

/// Eigenvalues of the homogeneous iteration matrix
/// [[1 - r_a - r'_a, r'_a], [r'_b, 1 - r_b - r'_b]].
inline std::array<std::complex<double>, 2> iteration_eigenvalues(const ConcessionRates& r) {
  const double m11 = 1.0 - r.buyer_yield - r.buyer_close;
  const double m12 = r.buyer_close;
  const double m21 = r.seller_close;
  const double m22 = 1.0 - r.seller_yield - r.seller_close;
  const double tr = m11 + m22;
  const double det = m11 * m22 - m12 * m21;
  const std::complex<double> disc = std::sqrt(std::complex<double>(tr * tr - 4.0 * det, 0.0));
  return {(tr + disc) / 2.0, (tr - disc) / 2.0};
}

/// True iff the iteration is a strict contraction (both |lambda| < 1).
/// Modulus exactly 1 counts as unstable.
inline bool is_stable(const ConcessionRates& r) {
  const auto ev = iteration_eigenvalues(r);
  return std::abs(ev[0]) < 1.0 && std::abs(ev[1]) < 1.0;
}

}  // namespace imbalance
