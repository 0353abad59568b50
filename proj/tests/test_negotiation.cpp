#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "imbalance/negotiation.hpp"
#include "oracles.hpp"

using namespace imbalance;

namespace {

NegotiationConfig hourly_wage() {
  NegotiationConfig c;
  c.seller_open = 4.5;
  c.buyer_open = 2.5;
  c.rates = {0.05, 0.02, 0.3, 0.2};
  c.buyer_reserve = 5.0;
  c.seller_reserve = 2.0;
  c.gap_epsilon = 0.05;
  return c;
}

ConcessionRates random_rates(std::mt19937_64& rng) {
  ConcessionRates r;
  r.buyer_yield = oracle::uniform(rng, 0.01, 0.6);
  r.buyer_close = oracle::uniform(rng, 0.0, 0.98 - r.buyer_yield);
  r.seller_yield = oracle::uniform(rng, 0.01, 0.6);
  r.seller_close = oracle::uniform(rng, 0.0, 0.98 - r.seller_yield);
  return r;
}

// Reserves bracket the opening offers: p_RB <= X^A_0 < X^B_0 <= p_RA.
NegotiationConfig random_bracketed(std::mt19937_64& rng) {
  NegotiationConfig c;
  c.seller_reserve = oracle::uniform(rng, 0.0, 5.0);
  c.buyer_open = c.seller_reserve + oracle::uniform(rng, 0.0, 3.0);
  c.seller_open = c.buyer_open + oracle::uniform(rng, 0.1, 5.0);
  c.buyer_reserve = c.seller_open + oracle::uniform(rng, 0.0, 3.0);
  c.rates = random_rates(rng);
  c.max_steps = 100000;
  return c;
}

double price_of(const NegotiationTrace& t) { return std::get<Agreement>(t.outcome).price; }

// Follows the matrix-form iteration until the offers cross and intersects
// the last segment.
double crossing_oracle(const NegotiationConfig& c, double xa, double xb) {
  const oracle::Dance d{c.buyer_reserve, c.seller_reserve, c.rates.buyer_yield, c.rates.buyer_close,
                        c.rates.seller_yield, c.rates.seller_close};
  for (int i = 0; i < 100000; ++i) {
    const auto [na, nb] = oracle::iterate(d, xa, xb, 1);
    if (nb - na <= 0) {
      const double t = (xb - xa) / ((xb - xa) - (nb - na));
      return xa + t * (na - xa);
    }
    xa = na;
    xb = nb;
  }
  return std::nan("");
}

}  // namespace

TEST(ConcessionRates, Validation) {
  EXPECT_NO_THROW((ConcessionRates{0.05, 0.02, 0.3, 0.2}.validate()));
  EXPECT_NO_THROW((ConcessionRates{0.5, 0.0, 0.5, 0.0}.validate()));
  for (const ConcessionRates& bad : {ConcessionRates{0.0, 0.1, 0.3, 0.2}, ConcessionRates{1.0, 0.0, 0.3, 0.2},
                                     ConcessionRates{0.5, 0.5, 0.3, 0.2}, ConcessionRates{0.3, 0.2, 0.6, 0.4},
                                     ConcessionRates{0.3, -0.1, 0.3, 0.2}, ConcessionRates{0.3, 0.1, std::nan(""), 0.2}}) {
    try {
      bad.validate();
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::InvalidConfig);
    }
  }
}

TEST(NegotiationConfig, Validation) {
  auto c = hourly_wage();
  c.seller_open = 2.0;
  EXPECT_THROW(c.validate(), Error);
  c = hourly_wage();
  c.gap_epsilon = 0.0;
  EXPECT_THROW(c.validate(), Error);
  c = hourly_wage();
  c.max_steps = 0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Step, HourlyWageFirstTwoSteps) {
  const auto c = hourly_wage();
  const Offers s1 = step({2.5, 4.5}, c);
  EXPECT_NEAR(s1.buyer, 2.665, 1e-12);
  EXPECT_NEAR(s1.seller, 3.35, 1e-12);
  const Offers s2 = step(s1, c);
  EXPECT_NEAR(s2.buyer, 2.79545, 1e-12);
  EXPECT_NEAR(s2.seller, 2.808, 1e-12);
}

TEST(Step, AtReservesWithZeroCloseIsStationary) {
  auto c = hourly_wage();
  c.rates.buyer_close = 0.0;
  c.rates.seller_close = 0.0;
  const Offers x{c.buyer_reserve, c.seller_reserve};
  EXPECT_EQ(step(x, c), x);
}

TEST(Step, ZeroGapFixedReserves) {
  auto c = hourly_wage();
  c.buyer_reserve = 3.0;
  c.seller_reserve = 3.0;
  EXPECT_EQ(step({3.0, 3.0}, c), (Offers{3.0, 3.0}));
}

TEST(Step, RejectsNonFinite) {
  EXPECT_THROW(step({std::nan(""), 1.0}, hourly_wage()), Error);
}

TEST(Run, HourlyWage) {
  const auto t = run(hourly_wage());
  ASSERT_EQ(t.steps.size(), 3u);
  EXPECT_EQ(t.steps[0].buyer, 2.5);
  EXPECT_EQ(t.steps[0].seller, 4.5);
  EXPECT_NEAR(t.steps[2].gap, 0.01255, 1e-12);
  ASSERT_TRUE(t.agreed());
  const auto a = std::get<Agreement>(t.outcome);
  EXPECT_EQ(a.step, 2);
  // Step 3 would be (2.9059..., 2.5630...); the paths cross just after step 2.
  EXPECT_NEAR(a.price, crossing_oracle(hourly_wage(), 2.79545, 2.808), 1e-12);
  EXPECT_NEAR(a.price, 2.79935, 1e-5);
  EXPECT_LT(a.price, 0.5 * (t.steps[2].buyer + t.steps[2].seller));
}

TEST(Run, ZeroStepAgreement) {
  auto c = hourly_wage();
  c.buyer_open = 3.0;
  c.seller_open = 3.01;
  const auto t = run(c);
  ASSERT_EQ(t.steps.size(), 1u);
  EXPECT_NEAR(price_of(t), crossing_oracle(c, 3.0, 3.01), 1e-12);
  EXPECT_GE(price_of(t), 3.0);
  EXPECT_LE(price_of(t), 3.01);
}

TEST(Run, EqualOpeningsSettleThere) {
  auto c = hourly_wage();
  c.buyer_open = 3.2;
  c.seller_open = 3.2;
  const auto t = run(c);
  EXPECT_EQ(price_of(t), 3.2);
  EXPECT_EQ(std::get<Agreement>(t.outcome).step, 0);
}

TEST(Run, PriceDoesNotDependOnTolerance) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 300; ++i) {
    auto c = random_bracketed(rng);
    c.gap_epsilon = 1e-9;
    const double tight = price_of(run(c));
    c.gap_epsilon = oracle::uniform(rng, 0.01, 0.5);
    EXPECT_NEAR(price_of(run(c)), tight, 1e-9);
  }
}

TEST(Run, NoCrossingSettlesAtRestMidpoint) {
  // Reserves leave no zone of agreement, but the rest-point gap is inside tolerance.
  auto c = hourly_wage();
  c.buyer_reserve = 3.0;
  c.seller_reserve = 3.02;
  c.buyer_open = 2.9;
  c.seller_open = 3.1;
  c.gap_epsilon = 0.05;
  const auto t = run(c);
  ASSERT_TRUE(t.agreed());
  const Offers f = fixed_point(c);
  const auto& last = t.steps.back();
  EXPECT_NEAR(price_of(t), std::clamp(0.5 * (f.buyer + f.seller), last.buyer, last.seller), 1e-12);
}

TEST(Run, BreakdownWithoutAgreementZone) {
  auto c = hourly_wage();
  c.buyer_reserve = 2.0;
  c.seller_reserve = 5.0;
  c.max_steps = 50;
  const auto t = run(c);
  ASSERT_FALSE(t.agreed());
  EXPECT_EQ(std::get<Breakdown>(t.outcome).steps, 50);
  EXPECT_EQ(t.steps.size(), 51u);
}

TEST(Run, SingleStepBudget) {
  auto c = hourly_wage();
  c.max_steps = 1;
  const auto t = run(c);
  EXPECT_FALSE(t.agreed());
  EXPECT_EQ(t.steps.size(), 2u);
}

TEST(FixedPoint, HourlyWage) {
  const Offers f = fixed_point(hourly_wage());
  EXPECT_NEAR(f.buyer, 137.0 / 31.0, 1e-12);
  EXPECT_NEAR(f.seller, 92.0 / 31.0, 1e-12);
  const auto o = oracle::rest_point({5.0, 2.0, 0.05, 0.02, 0.3, 0.2});
  EXPECT_NEAR(f.buyer, o.first, 1e-12);
  EXPECT_NEAR(f.seller, o.second, 1e-12);
}

TEST(FixedPoint, Singular) {
  auto c = hourly_wage();
  c.rates = {1e-9, 0.0, 1e-9, 0.0};
  try {
    fixed_point(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::SingularSystem);
  }
}

TEST(FixedPoint, MatchesIterationOnRandomStableConfigs) {
  std::mt19937_64 rng(21);
  int checked = 0;
  while (checked < 300) {
    NegotiationConfig c;
    c.buyer_reserve = oracle::uniform(rng, 0, 10);
    c.seller_reserve = oracle::uniform(rng, 0, 10);
    c.rates = random_rates(rng);
    if (c.rates.buyer_yield < 0.05 || c.rates.seller_yield < 0.05) continue;
    ++checked;
    const double xa = oracle::uniform(rng, 0, 10), xb = oracle::uniform(rng, 0, 10);
    Offers x{xa, xb};
    for (int i = 0; i < 10000; ++i) x = step(x, c);
    const Offers f = fixed_point(c);
    EXPECT_NEAR(x.buyer, f.buyer, 1e-6);
    EXPECT_NEAR(x.seller, f.seller, 1e-6);
    const auto o = oracle::iterate({c.buyer_reserve, c.seller_reserve, c.rates.buyer_yield, c.rates.buyer_close,
                                    c.rates.seller_yield, c.rates.seller_close},
                                   xa, xb, 10000);
    EXPECT_NEAR(o.first, f.buyer, 1e-6);
    EXPECT_NEAR(o.second, f.seller, 1e-6);
  }
}

TEST(FixedPoint, GapFormula) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    NegotiationConfig c;
    c.buyer_reserve = oracle::uniform(rng, 0, 10);
    c.seller_reserve = oracle::uniform(rng, 0, 10);
    c.rates = random_rates(rng);
    const auto& r = c.rates;
    const Offers f = fixed_point(c);
    const double g = (c.seller_reserve - c.buyer_reserve) /
                     (1.0 + r.buyer_close / r.buyer_yield + r.seller_close / r.seller_yield);
    EXPECT_NEAR(f.seller - f.buyer, g, 1e-9 * (1 + std::abs(g)));
  }
}

TEST(Eigenvalues, HourlyWage) {
  const auto ev = iteration_eigenvalues(hourly_wage().rates);
  EXPECT_NEAR(ev[0].real(), 0.93911, 1e-5);
  EXPECT_NEAR(ev[1].real(), 0.49089, 1e-5);
  EXPECT_EQ(ev[0].imag(), 0.0);
  EXPECT_NEAR((ev[0] + ev[1]).real(), 1.43, 1e-12);
  EXPECT_NEAR((ev[0] * ev[1]).real(), 0.461, 1e-12);
  EXPECT_TRUE(is_stable(hourly_wage().rates));
}

TEST(Eigenvalues, ZeroRatesAreUnstable) {
  const ConcessionRates zero{0.0, 0.0, 0.0, 0.0};
  const auto ev = iteration_eigenvalues(zero);
  EXPECT_EQ(ev[0], std::complex<double>(1.0, 0.0));
  EXPECT_EQ(ev[1], std::complex<double>(1.0, 0.0));
  EXPECT_FALSE(is_stable(zero));
}

TEST(Eigenvalues, ValidRatesAreStable) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) EXPECT_TRUE(is_stable(random_rates(rng)));
}

TEST(RateScaling, NeutralAndDirection) {
  const ConcessionRates base{0.1, 0.05, 0.2, 0.1};
  EXPECT_EQ(concession_rates_from_imbalance(base, 1.0, 1.0), base);
  const auto weak_buyer = concession_rates_from_imbalance(base, 2.0, 1.0);
  EXPECT_DOUBLE_EQ(weak_buyer.buyer_yield, 0.2);
  EXPECT_DOUBLE_EQ(weak_buyer.buyer_close, 0.1);
  EXPECT_EQ(weak_buyer.seller_yield, 0.2);
  const auto strong_seller = concession_rates_from_imbalance(base, 1.0, 4.0);
  EXPECT_DOUBLE_EQ(strong_seller.seller_yield, 0.05);
  EXPECT_DOUBLE_EQ(strong_seller.seller_close, 0.025);
}

TEST(RateScaling, StaysValid) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 5000; ++i) {
    const auto base = random_rates(rng);
    const double rb = std::exp(oracle::uniform(rng, -12, 12));
    const double rs = std::exp(oracle::uniform(rng, -12, 12));
    EXPECT_NO_THROW(concession_rates_from_imbalance(base, rb, rs).validate());
  }
  EXPECT_THROW(concession_rates_from_imbalance({0.1, 0.1, 0.1, 0.1}, 0.0, 1.0), Error);
}

TEST(NegotiationProperties, Determinism) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) {
    const auto c = random_bracketed(rng);
    EXPECT_EQ(run(c), run(c));
  }
}

TEST(NegotiationProperties, MonotoneDrift) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 300; ++i) {
    auto c = random_bracketed(rng);
    c.gap_epsilon = 1e-6;
    const auto t = run(c);
    for (std::size_t n = 0; n + 1 < t.steps.size(); ++n) {
      const auto& s = t.steps[n];
      if (s.seller > s.buyer && c.buyer_reserve >= s.buyer && s.seller >= c.seller_reserve) {
        EXPECT_GE(t.steps[n + 1].buyer, s.buyer);
        EXPECT_LE(t.steps[n + 1].seller, s.seller);
      }
    }
  }
}

TEST(NegotiationProperties, SettlementBounds) {
  std::mt19937_64 rng(10);
  for (int i = 0; i < 1000; ++i) {
    auto c = random_bracketed(rng);
    c.gap_epsilon = oracle::uniform(rng, 1e-6, 0.2);
    const auto t = run(c);
    ASSERT_TRUE(t.agreed());
    const double p = price_of(t);
    const auto& last = t.steps.back();
    EXPECT_GE(p, std::min(last.buyer, last.seller));
    EXPECT_LE(p, std::max(last.buyer, last.seller));
    EXPECT_GE(p, c.seller_reserve);
    EXPECT_LE(p, c.buyer_reserve);
  }
}

// Faster seller concession lowers the price; faster buyer concession raises it.
TEST(NegotiationProperties, ImbalanceEffect) {
  std::mt19937_64 rng(12);
  for (double eps : {1e-9, 0.05}) {
    const double slack = 1e-9;
    for (int i = 0; i < 1500; ++i) {
      auto c = random_bracketed(rng);
      c.gap_epsilon = eps;
      const double p0 = price_of(run(c));
      const double f = oracle::uniform(rng, 1.01, 1.5);

      auto seller_up = c;
      seller_up.rates.seller_yield = std::min(0.97, c.rates.seller_yield * f);
      seller_up.rates.seller_close = std::min(0.98 - seller_up.rates.seller_yield, c.rates.seller_close * f);
      if (seller_up.rates.seller_close >= c.rates.seller_close) {
        EXPECT_LE(price_of(run(seller_up)), p0 + slack) << "eps=" << eps << " case " << i;
      }

      auto buyer_up = c;
      buyer_up.rates.buyer_yield = std::min(0.97, c.rates.buyer_yield * f);
      buyer_up.rates.buyer_close = std::min(0.98 - buyer_up.rates.buyer_yield, c.rates.buyer_close * f);
      if (buyer_up.rates.buyer_close >= c.rates.buyer_close) {
        EXPECT_GE(price_of(run(buyer_up)), p0 - slack) << "eps=" << eps << " case " << i;
      }
    }
  }
}
