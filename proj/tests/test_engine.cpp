#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "sntp/engine.hpp"
#include "sntp/errors.hpp"
#include "sntp/geometry.hpp"
#include "sntp/verify.hpp"

using namespace sntp;

namespace {

UtilitySpec cd_half() { return UtilitySpec::cobb_douglas(Vector::Constant(2, 0.5)); }
Economy cd_pair() { return Economy({{cd_half(), "a"}, {cd_half(), "b"}}); }
Allocation shock() { return Allocation({Bundle{2.0, 1.0}, Bundle{1.0, 2.0}}); }

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

SimConfig config(PriorSpec prior, int runs, std::uint64_t seed = 1) {
  return SimConfig{.economy = cd_pair(),
                   .initial = shock(),
                   .prior = std::move(prior),
                   .max_steps = 500,
                   .pareto_tol = kParetoTolerance,
                   .master_seed = seed,
                   .runs = runs,
                   .threads = 1};
}

// Steps shrink to rounding size near the contract curve.
constexpr double kRound = 1e-14;

double utility_of(const Economy& e, const Allocation& y, std::size_t h) { return utility(e.utility(h), y[h]); }

}  // namespace

TEST(Density, Values) {
  EXPECT_NEAR(q_density(PriorSpec{ArctanNormal{1.0, 0.1}, SpeedPrior::UniformCube}, 1.0), 0.5, 1e-15);
  EXPECT_NEAR(q_density(PriorSpec{UniformArc{}, SpeedPrior::UniformCube}, 1.0), 0.5, 1e-15);
  const PriorSpec wide{ArctanNormal{1.0, 1e3}, SpeedPrior::UniformCube};
  const PriorSpec arc{UniformArc{}, SpeedPrior::UniformCube};
  const double ref = q_density(wide, 1.0) / q_density(arc, 1.0);
  for (double q : {0.6, 1.8}) EXPECT_NEAR(q_density(wide, q) / q_density(arc, q), ref, 1e-6);
  EXPECT_THROW(q_density(arc, -1.0), ValidationError);
}

TEST(Density, PriorValidation) {
  EXPECT_THROW((PriorSpec{ArctanNormal{1.0, 0.0}, SpeedPrior::UniformCube}.validate()), ValidationError);
  EXPECT_THROW((PriorSpec{ArctanNormal{-1.0, 0.1}, SpeedPrior::UniformCube}.validate()), ValidationError);
  EXPECT_THROW((PriorSpec{Tabulated{{vec({1.0})}, {-1.0}}, SpeedPrior::UniformCube}.validate()), ValidationError);
  EXPECT_THROW((PriorSpec{Tabulated{{}, {}}, SpeedPrior::UniformCube}.validate()), ValidationError);
}

TEST(DrawPrice, UniformArcLaw) {
  const Economy e = cd_pair();
  const Allocation y = shock();
  const PriorSpec prior{UniformArc{}, SpeedPrior::UniformCube};
  CounterRng rng(71, 0);
  std::vector<double> q;
  for (int k = 0; k < 10000; ++k) {
    q.push_back(draw_price(e, y, prior, rng)[0]);
    ASSERT_TRUE(has_trade(e, y, PriceVector{q.back(), 1.0}));
  }
  const double a = std::atan(0.5);
  const double b = std::atan(2.0);
  EXPECT_LT(ks_one_sample(q, [&](double x) { return (std::atan(x) - a) / (b - a); }), 0.02);
}

TEST(DrawPrice, StickyPriorConcentrates) {
  const Economy e = cd_pair();
  const Allocation y = shock();
  const PriorSpec prior{ArctanNormal{1.0, 0.05}, SpeedPrior::UniformCube};
  CounterRng rng(73, 0);
  int inside = 0;
  for (int k = 0; k < 10000; ++k) {
    const double q = draw_price(e, y, prior, rng)[0];
    inside += (q > 0.8 && q < 1.25) ? 1 : 0;
  }
  // (0.8, 1.25) is about +-2.2 sigma on the angle; the angle law is a normal
  // truncated to (atan 0.5, atan 2).
  auto phi = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
  auto z = [](double q) { return (std::atan(q) - std::atan(1.0)) / 0.05; };
  const double mass = (phi(z(1.25)) - phi(z(0.8))) / (phi(z(2.0)) - phi(z(0.5)));
  EXPECT_NEAR(mass, 0.973, 0.001);
  EXPECT_NEAR(inside / 1e4, mass, 0.005);
}

TEST(DrawPrice, EmptyTradeSetHitsCap) {
  const Economy e = cd_pair();
  const Allocation y = shock();
  const PriorSpec prior{Tabulated{{vec({3.0})}, {1.0}}, SpeedPrior::UniformCube};
  CounterRng rng(75, 0);
  EXPECT_THROW(draw_price(e, y, prior, rng, 100), SamplingError);
}

TEST(Step, ParetoStopAndForcedEquilibrium) {
  const Economy e = cd_pair();
  CounterRng rng(77, 0);
  const Allocation eq({Bundle{1.5, 1.5}, Bundle{1.5, 1.5}});
  const PriorSpec arc{UniformArc{}, SpeedPrior::UniformCube};
  EXPECT_TRUE(std::holds_alternative<ParetoStop>(sntp_step(e, eq, arc, kParetoTolerance, rng)));

  const PriorSpec forced{Tabulated{{vec({1.0})}, {1.0}}, SpeedPrior::MaxSpeed};
  const auto out = sntp_step(e, shock(), forced, kParetoTolerance, rng);
  ASSERT_TRUE(std::holds_alternative<TradeStep>(out));
  const TradeStep& s = std::get<TradeStep>(out);
  for (std::size_t h = 0; h < 2; ++h) EXPECT_TRUE(s.next[h].values().isApprox(vec({1.5, 1.5}), 1e-14));
}

TEST(Step, UtilityNeverDecreases) {
  const Economy e = cd_pair();
  const PriorSpec arc{UniformArc{}, SpeedPrior::UniformCube};
  CounterRng rng(79, 0);
  Allocation y = shock();
  for (int t = 0; t < 100; ++t) {
    const auto out = sntp_step(e, y, arc, kParetoTolerance, rng);
    if (std::holds_alternative<ParetoStop>(out)) break;
    const Allocation& next = std::get<TradeStep>(out).next;
    for (std::size_t h = 0; h < 2; ++h) EXPECT_GE(utility_of(e, next, h), utility_of(e, y, h) - kRound);
    y = next;
  }
}

TEST(Trajectory, ValidationAndInvariants) {
  SimConfig bad = config(PriorSpec{UniformArc{}, SpeedPrior::UniformCube}, 1);
  bad.max_steps = 0;
  EXPECT_THROW(bad.validate(), ValidationError);
  bad.max_steps = 10;
  bad.runs = 0;
  EXPECT_THROW(bad.validate(), ValidationError);

  const SimConfig cfg = config(PriorSpec{UniformArc{}, SpeedPrior::UniformCube}, 1);
  const Economy& e = cfg.economy;
  for (std::uint64_t run = 0; run < 20; ++run) {
    const Trajectory t = run_trajectory(cfg, run);
    const Trajectory again = run_trajectory(cfg, run);
    ASSERT_EQ(t.states.size(), again.states.size());
    for (std::size_t k = 0; k < t.states.size(); ++k) {
      for (std::size_t h = 0; h < 2; ++h) EXPECT_EQ(t.states[k][h].values(), again.states[k][h].values());
      EXPECT_LT((t.states[k].aggregate() - vec({3.0, 3.0})).cwiseAbs().maxCoeff(), 1e-8);
      if (k > 0) {
        for (std::size_t h = 0; h < 2; ++h) {
          EXPECT_GE(utility_of(e, t.states[k], h), utility_of(e, t.states[k - 1], h) - kRound);
        }
      }
    }
    if (t.terminal == Terminal::ParetoReached) EXPECT_TRUE(is_pareto_optimal(e, t.states.back()));
  }
}

TEST(MonteCarlo, ThreadInvariance) {
  SimConfig cfg = config(PriorSpec{UniformArc{}, SpeedPrior::MaxSpeed}, 200, 9);
  const OutcomeDistribution one = run_monte_carlo(cfg);
  cfg.threads = 4;
  const OutcomeDistribution four = run_monte_carlo(cfg);
  EXPECT_EQ(one.projection, four.projection);
  EXPECT_EQ(one.steps, four.steps);
  EXPECT_EQ(one.histogram.counts, four.histogram.counts);
  EXPECT_EQ(one.mean, four.mean);
}

TEST(MonteCarlo, Statistics) {
  const OutcomeDistribution d = run_monte_carlo(config(PriorSpec{UniformArc{}, SpeedPrior::UniformCube}, 500));
  ASSERT_EQ(d.samples.size(), 500u);
  ASSERT_EQ(d.bands.size(), 3u);
  for (std::size_t i = 1; i < d.bands.size(); ++i) {
    EXPECT_LE(d.bands[i].lo, d.bands[i - 1].lo);
    EXPECT_GE(d.bands[i].hi, d.bands[i - 1].hi);
  }
  std::size_t total = 0;
  for (auto c : d.histogram.counts) total += c;
  EXPECT_EQ(total, 500u);
  EXPECT_NEAR(d.mean, 1.5, 0.1);
  // Contract curve of identical CD households is the diagonal.
  for (const auto& y : d.samples) EXPECT_NEAR(y[0][0], y[0][1], 1e-3);
}

TEST(Example3, ExactValues) {
  EXPECT_DOUBLE_EQ(example3_outcome_value(1), 1.5);
  EXPECT_DOUBLE_EQ(example3_outcome_value(2), 35.0 / 24.0);
  const OutcomeDistribution d = example3_process(1, 10000);
  std::vector<int> count(4, 0);
  for (int j : d.steps) {
    if (j <= 3) ++count[j];
  }
  EXPECT_NEAR(count[1] / 1e4, 0.5, 0.02);
  EXPECT_NEAR(count[2] / 1e4, 0.25, 0.02);
  EXPECT_NEAR(count[3] / 1e4, 0.125, 0.02);
  EXPECT_EQ(example3_process(1, 1).samples.size(), 1u);
  EXPECT_THROW(example3_process(1, 0), ValidationError);
}
