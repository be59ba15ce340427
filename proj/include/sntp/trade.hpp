#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sntp/prefs.hpp"
#include "sntp/rng.hpp"
#include "sntp/types.hpp"

namespace sntp {

struct Household {
  UtilitySpec utility;
  std::string label;
};

class Economy {
 public:
  explicit Economy(std::vector<Household> households);

  const std::vector<Household>& households() const { return households_; }
  const UtilitySpec& utility(std::size_t h) const { return households_[h].utility; }
  std::size_t size() const { return households_.size(); }
  Eigen::Index goods() const { return households_.front().utility.goods(); }

  // Throws ValidationError when y does not match this economy's shape.
  void require_compatible(const Allocation& y) const;

 private:
  std::vector<Household> households_;
};

class SpeedVector {
 public:
  SpeedVector() = default;
  explicit SpeedVector(Vector sigma);

  const Vector& values() const { return sigma_; }
  double operator[](Eigen::Index h) const { return sigma_[h]; }
  Eigen::Index size() const { return sigma_.size(); }

 private:
  Vector sigma_;
};

// Extreme substitution-rate ratios over households:
// lower(i, j) = min_h r_hi / r_hj, upper(i, j) = max_h r_hi / r_hj, r_h = x_n^-1(y_h).
struct BoxSet {
  Matrix lower;
  Matrix upper;
};

enum class SpeedPrior { UniformCube, MaxSpeed };

inline constexpr double kParetoTolerance = 1e-8;
inline constexpr double kTradeThreshold = 1e-9;
inline constexpr double kDegenerateDirection = 1e-12;

// x_n,h(p / p.y_h) - y_h
Vector trade_direction(const Economy& e, const Allocation& y, const PriceVector& p, std::size_t h);
Bundle linear_path_point(const Economy& e, const Allocation& y, const PriceVector& p, std::size_t h, double t);

bool speed_contains(const Economy& e, const Allocation& y, const PriceVector& p, const SpeedVector& sigma);

struct TradeCheck {
  bool trade = false;
  // Optimal sum_h sigma_h |d_h| divided by max_h |d_h|.
  double volume = 0.0;
  Vector witness;
};

// Solves the speed linear program and reports its optimum and maximizer.
TradeCheck trade_check(const Economy& e, const Allocation& y, const PriceVector& p);
bool has_trade(const Economy& e, const Allocation& y, const PriceVector& p);

// Open interval between the two households' rates, or nothing when they agree within tol.
std::optional<std::pair<double, double>> trade_interval_2x2(const Economy& e, const Allocation& y,
                                                            double tol = kParetoTolerance);

BoxSet msr_extremes(const Economy& e, const Allocation& y);
bool box_contains(const BoxSet& b, const Vector& q);

SpeedVector sample_speed(const Economy& e, const Allocation& y, const PriceVector& p, SpeedPrior prior,
                         CounterRng& rng);

Allocation advance(const Economy& e, const Allocation& y, const PriceVector& p, const SpeedVector& sigma);

// Largest relative spread max_h q_hi / min_h q_hi - 1 over goods i < L.
double mrs_gap(const Economy& e, const Allocation& y);
bool is_pareto_optimal(const Economy& e, const Allocation& y, double tol = kParetoTolerance);

}  // namespace sntp
