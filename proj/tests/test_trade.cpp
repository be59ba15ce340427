#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "sntp/errors.hpp"
#include "sntp/geometry.hpp"
#include "sntp/trade.hpp"

using namespace sntp;

namespace {

UtilitySpec cd_half() { return UtilitySpec::cobb_douglas(Vector::Constant(2, 0.5)); }
UtilitySpec ces_half() { return UtilitySpec::ces(Vector::Constant(2, 0.5), 0.5); }

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

Economy cd_pair() { return Economy({{cd_half(), "a"}, {cd_half(), "b"}}); }
Allocation shock() { return Allocation({Bundle{2.0, 1.0}, Bundle{1.0, 2.0}}); }

}  // namespace

TEST(Economy, Validation) {
  EXPECT_THROW(Economy({{cd_half(), "a"}}), ValidationError);
  EXPECT_THROW(Economy({{cd_half(), "a"}, {UtilitySpec::cobb_douglas(vec({0.2, 0.3, 0.5})), "b"}}), ValidationError);
  EXPECT_THROW(cd_pair().require_compatible(Allocation({Bundle{1.0, 1.0}})), ValidationError);
  EXPECT_THROW(SpeedVector(vec({0.5, 1.5})), ValidationError);
  EXPECT_THROW(SpeedVector(vec({-0.1, 0.5})), ValidationError);
}

TEST(Direction, Values) {
  const Economy e = cd_pair();
  const Allocation y = shock();
  EXPECT_TRUE(trade_direction(e, y, PriceVector{1.0, 1.0}, 0).isApprox(vec({-0.5, 0.5})));
  const PriceVector own = inverse_normalized_demand(cd_half(), y[0]);
  EXPECT_LT(trade_direction(e, y, own, 0).cwiseAbs().maxCoeff(), 1e-15);
  CounterRng rng(51, 0);
  for (int k = 0; k < 200; ++k) {
    const Allocation r({Bundle(oracle::log_uniform(2, rng)), Bundle(oracle::log_uniform(2, rng))});
    const PriceVector p(oracle::log_uniform(2, rng));
    for (std::size_t h = 0; h < 2; ++h) {
      EXPECT_NEAR(p.values().dot(trade_direction(e, r, p, h)), 0.0, 1e-12 * p.values().dot(r[h].values()));
    }
  }
}

TEST(Direction, LinearPath) {
  const Economy e = cd_pair();
  const Allocation y = shock();
  const PriceVector p{1.0, 1.0};
  EXPECT_EQ(linear_path_point(e, y, p, 0, 0.0), y[0]);
  EXPECT_TRUE(linear_path_point(e, y, p, 0, 1.0).values().isApprox(vec({1.5, 1.5})));
  EXPECT_THROW(linear_path_point(e, y, p, 0, 1.5), ValidationError);
  CounterRng rng(53, 0);
  for (const auto& u : {cd_half(), ces_half()}) {
    const Economy ee({{u, "a"}, {u, "b"}});
    for (int k = 0; k < 50; ++k) {
      const Allocation r({Bundle(oracle::log_uniform(2, rng)), Bundle(oracle::log_uniform(2, rng))});
      const PriceVector p2(oracle::log_uniform(2, rng));
      const Vector own = inverse_normalized_demand(u, r[0]).values();
      if (std::abs(own[0] / own[1] - p2[0] / p2[1]) < 1e-6 * own[0] / own[1]) continue;
      double prev = -std::numeric_limits<double>::infinity();
      for (int i = 0; i <= 100; ++i) {
        const double level = utility(u, linear_path_point(ee, r, p2, 0, i / 100.0));
        EXPECT_GT(level, prev);
        prev = level;
      }
    }
  }
}

TEST(Speeds, ContainsExamples) {
  const Economy e = cd_pair();
  const Allocation y = shock();
  EXPECT_TRUE(speed_contains(e, y, PriceVector{1.0, 1.0}, SpeedVector(vec({1.0, 1.0}))));
  EXPECT_FALSE(speed_contains(e, y, PriceVector{1.0, 1.0}, SpeedVector(vec({0.0, 0.0}))));
  const double q = 0.75;
  const double g = (2.0 - q * 1.0 + 3.0 * (q - 1.0)) / (2.0 - q * 1.0);
  EXPECT_NEAR(g, 0.4, 1e-15);
  EXPECT_TRUE(speed_contains(e, y, PriceVector{q, 1.0}, SpeedVector(vec({1.0, g}))));
  EXPECT_FALSE(speed_contains(e, y, PriceVector{q, 1.0}, SpeedVector(vec({1.0, 1.0}))));
}

TEST(TradeSet, Membership) {
  const Economy e = cd_pair();
  const Allocation y = shock();
  EXPECT_TRUE(has_trade(e, y, PriceVector{1.0, 1.0}));
  EXPECT_FALSE(has_trade(e, y, PriceVector{3.0, 1.0}));
  for (const auto& c : contract_curve_2x2(cd_half(), cd_half(), vec({3.0, 3.0}), 20)) {
    for (double q : {0.1, 0.5, 0.9, 1.0, 1.1, 2.0, 10.0}) EXPECT_FALSE(has_trade(e, c, PriceVector{q, 1.0}));
  }
  const TradeCheck tc = trade_check(e, y, PriceVector{1.0, 1.0});
  EXPECT_TRUE(tc.trade);
  EXPECT_NEAR(tc.volume, 2.0, 1e-9);
}

TEST(TradeSet, Interval) {
  const Economy e = cd_pair();
  const auto iv = trade_interval_2x2(e, shock());
  ASSERT_TRUE(iv.has_value());
  EXPECT_NEAR(iv->first, 0.5, 1e-15);
  EXPECT_NEAR(iv->second, 2.0, 1e-15);
  EXPECT_FALSE(trade_interval_2x2(e, Allocation({Bundle{1.0, 1.0}, Bundle{2.0, 2.0}})).has_value());

  const Economy ces({{ces_half(), "a"}, {UtilitySpec::ces(vec({0.3, 0.7}), 0.4), "b"}});
  const Allocation y({Bundle{3.0, 0.5}, Bundle{0.2, 4.0}});
  const auto civ = trade_interval_2x2(ces, y);
  ASSERT_TRUE(civ.has_value());
  EXPECT_FALSE(has_trade(ces, y, PriceVector{civ->first, 1.0}));
  EXPECT_FALSE(has_trade(ces, y, PriceVector{civ->second, 1.0}));
  const double lo = std::log(civ->first);
  const double hi = std::log(civ->second);
  for (double s = 1e-3; s < 1.0; s += 1e-3) {
    EXPECT_TRUE(has_trade(ces, y, PriceVector{std::exp(lo + s * (hi - lo)), 1.0})) << s;
  }
  EXPECT_FALSE(has_trade(ces, y, PriceVector{civ->first * 0.999, 1.0}));
  EXPECT_FALSE(has_trade(ces, y, PriceVector{civ->second * 1.001, 1.0}));
}

TEST(Box, Extremes) {
  const Economy e = cd_pair();
  const BoxSet b = msr_extremes(e, shock());
  EXPECT_NEAR(b.lower(0, 1), 0.5, 1e-15);
  EXPECT_NEAR(b.upper(0, 1), 2.0, 1e-15);
  const BoxSet same = msr_extremes(e, Allocation({Bundle{2.0, 1.0}, Bundle{2.0, 1.0}}));
  EXPECT_EQ(same.lower, same.upper);
  CounterRng rng(55, 0);
  const Economy three({{UtilitySpec::ces(vec({0.2, 0.3, 0.5}), 0.5), "a"},
                       {UtilitySpec::cobb_douglas(vec({0.4, 0.4, 0.2})), "b"},
                       {UtilitySpec::ces(vec({0.6, 0.2, 0.2}), 0.2), "c"}});
  for (int k = 0; k < 100; ++k) {
    const Allocation y({Bundle(oracle::log_uniform(3, rng)), Bundle(oracle::log_uniform(3, rng)),
                        Bundle(oracle::log_uniform(3, rng))});
    const BoxSet bx = msr_extremes(three, y);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (i != j) EXPECT_NEAR(bx.lower(i, j) * bx.upper(j, i), 1.0, 1e-12);
      }
    }
    for (std::size_t h = 0; h < 3; ++h) {
      const Vector r = inverse_normalized_demand(three.utility(h), y[h]).values();
      EXPECT_TRUE(box_contains(bx, r.head(2) / r[2]));
    }
  }
}

TEST(Box, ContainsExamplesAndSweep) {
  const Economy e = cd_pair();
  const BoxSet b = msr_extremes(e, shock());
  EXPECT_TRUE(box_contains(b, vec({1.0})));
  EXPECT_FALSE(box_contains(b, vec({3.0})));
  CounterRng rng(57, 0);
  const Economy ces({{ces_half(), "a"}, {UtilitySpec::ces(vec({0.3, 0.7}), 0.4), "b"}});
  for (int k = 0; k < 100; ++k) {
    const Allocation y({Bundle(oracle::log_uniform(2, rng)), Bundle(oracle::log_uniform(2, rng))});
    const BoxSet bx = msr_extremes(ces, y);
    for (double q = 0.01; q < 100.0; q *= 1.05) {
      if (has_trade(ces, y, PriceVector{q, 1.0})) EXPECT_TRUE(box_contains(bx, vec({q})));
    }
  }
}

TEST(Speeds, Sampling) {
  const Economy e = cd_pair();
  const Allocation y = shock();
  CounterRng rng(59, 0);
  const PriceVector p{0.75, 1.0};
  const SpeedVector top = sample_speed(e, y, p, SpeedPrior::MaxSpeed, rng);
  EXPECT_NEAR(top[0], 1.0, 1e-15);
  EXPECT_NEAR(top[1], 0.4, 1e-14);
  std::vector<double> lambdas;
  for (int k = 0; k < 4000; ++k) {
    const SpeedVector s = sample_speed(e, y, p, SpeedPrior::UniformCube, rng);
    EXPECT_TRUE(speed_contains(e, y, p, s));
    EXPECT_NEAR(s[1] / s[0], 0.4, 1e-12);
    lambdas.push_back(s[0]);
  }
  std::sort(lambdas.begin(), lambdas.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    ks = std::max({ks, (i + 1.0) / lambdas.size() - lambdas[i], lambdas[i] - static_cast<double>(i) / lambdas.size()});
  }
  EXPECT_LT(ks, 0.03);
  EXPECT_THROW(sample_speed(e, y, PriceVector{3.0, 1.0}, SpeedPrior::UniformCube, rng), SamplingError);
}

TEST(Speeds, ManyHouseholdsStayInPolytope) {
  const Economy e({{ces_half(), "a"}, {cd_half(), "b"}, {UtilitySpec::ces(vec({0.3, 0.7}), 0.4), "c"}});
  const Allocation y({Bundle{3.0, 0.5}, Bundle{0.5, 3.0}, Bundle{1.0, 1.0}});
  CounterRng rng(61, 0);
  for (int k = 0; k < 100; ++k) {
    const PriceVector p{0.6 + 0.8 * rng.uniform(), 1.0};
    if (!has_trade(e, y, p)) continue;
    for (auto prior : {SpeedPrior::UniformCube, SpeedPrior::MaxSpeed}) {
      const SpeedVector s = sample_speed(e, y, p, prior, rng);
      EXPECT_TRUE(speed_contains(e, y, p, s));
      if (prior == SpeedPrior::MaxSpeed) EXPECT_NEAR(s.values().maxCoeff(), 1.0, 1e-12);
    }
  }
}

TEST(Advance, Examples) {
  const Economy e = cd_pair();
  const Allocation y = shock();
  const Allocation eq = advance(e, y, PriceVector{1.0, 1.0}, SpeedVector(vec({1.0, 1.0})));
  EXPECT_TRUE(eq[0].values().isApprox(vec({1.5, 1.5})));
  EXPECT_TRUE(eq[1].values().isApprox(vec({1.5, 1.5})));
  const Allocation half = advance(e, y, PriceVector{1.0, 1.0}, SpeedVector(vec({0.5, 0.5})));
  EXPECT_TRUE(half.aggregate().isApprox(vec({3.0, 3.0}), 1e-15));
  const Allocation ladder = advance(e, y, PriceVector{0.75, 1.0}, SpeedVector(vec({1.0, 0.4})));
  EXPECT_NEAR(ladder[0][0], 5.0 / 3.0, 1e-14);
  EXPECT_NEAR(ladder[0][1], 5.0 / 4.0, 1e-14);
  EXPECT_THROW(advance(e, y, PriceVector{1.0, 1.0}, SpeedVector(vec({1.0, 0.5}))), ValidationError);
}

TEST(Pareto, Predicate) {
  const Economy e = cd_pair();
  EXPECT_TRUE(is_pareto_optimal(e, Allocation({Bundle{1.5, 1.5}, Bundle{1.5, 1.5}})));
  EXPECT_FALSE(is_pareto_optimal(e, shock()));
  EXPECT_THROW(is_pareto_optimal(e, shock(), 0.0), ValidationError);
  CounterRng rng(63, 0);
  const auto curve = contract_curve_2x2(cd_half(), cd_half(), vec({3.0, 3.0}), 500);
  for (int k = 0; k < 1000; ++k) {
    const Allocation y = k % 2 == 0
                             ? Allocation({Bundle(oracle::log_uniform(2, rng)), Bundle(oracle::log_uniform(2, rng))})
                             : curve[static_cast<std::size_t>(rng.uniform() * curve.size())];
    EXPECT_EQ(is_pareto_optimal(e, y), !trade_interval_2x2(e, y).has_value());
  }
}
