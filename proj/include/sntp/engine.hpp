#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "sntp/rng.hpp"
#include "sntp/trade.hpp"

namespace sntp {

// Normal law on the angle atan(q), centred at atan(center_rate).
struct ArctanNormal {
  double center_rate = 1.0;
  double sigma_angle = 0.1;
};

// Uniform law on the angle atan(q).
struct UniformArc {};

// Discrete prior: weighted atoms at the listed rate vectors.
struct Tabulated {
  std::vector<Vector> grid;
  std::vector<double> densities;
};

using QPrior = std::variant<ArctanNormal, UniformArc, Tabulated>;

struct PriorSpec {
  QPrior q_prior = UniformArc{};
  SpeedPrior s_prior = SpeedPrior::UniformCube;

  void validate() const;
};

struct SimConfig {
  Economy economy;
  Allocation initial;
  PriorSpec prior;
  int max_steps = 500;
  double pareto_tol = kParetoTolerance;
  std::uint64_t master_seed = 0;
  int runs = 1;
  // Worker threads for run_monte_carlo; 0 picks the hardware concurrency.
  int threads = 0;

  void validate() const;
};

enum class Terminal { ParetoReached, StepCap };

struct Trajectory {
  std::vector<Allocation> states;
  std::vector<Vector> prices;
  std::vector<SpeedVector> speeds;
  Terminal terminal = Terminal::StepCap;
};

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::size_t> counts;

  int bin_of(double x) const;
  double bin_lower(int bin) const;
  double bin_upper(int bin) const;
};

struct QuantileBand {
  double coverage = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

struct OutcomeDistribution {
  std::vector<Allocation> samples;
  // Household 1's rates at each terminal state.
  std::vector<Vector> terminal_q;
  std::vector<int> steps;
  std::vector<Terminal> terminals;
  // Household 1's first good for two-good, two-household economies,
  // otherwise the first coordinate of the terminal rate vector.
  std::vector<double> projection;
  Histogram histogram;
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<Vector> mean_bundles;
  int mode_bin = 0;
  int mean_bin = 0;
  // 50%, 80% and 90% central bands.
  std::vector<QuantileBand> bands;
  // Filled only when requested.
  std::vector<Trajectory> trajectories;
};

inline constexpr int kDefaultBins = 64;
inline constexpr int kRejectionCap = 100000;

double q_density(const PriorSpec& prior, const Vector& q);
double q_density(const PriorSpec& prior, double q);

Vector draw_price(const Economy& e, const Allocation& y, const PriorSpec& prior, CounterRng& rng,
                  int max_attempts = kRejectionCap);

struct TradeStep {
  Allocation next;
  Vector q;
  SpeedVector sigma;
};
struct ParetoStop {};

std::variant<TradeStep, ParetoStop> sntp_step(const Economy& e, const Allocation& y, const PriorSpec& prior,
                                              double pareto_tol, CounterRng& rng);

Trajectory run_trajectory(const SimConfig& cfg, std::uint64_t run_index);

OutcomeDistribution run_monte_carlo(const SimConfig& cfg, int bins = kDefaultBins, bool keep_trajectories = false);

// Builds projection statistics from filled samples/terminal_q/steps/terminals.
void summarize(OutcomeDistribution& dist, bool two_by_two, int bins);

// Probability-weighted outcome of the fair-coin price ladder on the 3x3 box;
// steps[r] holds the index j of the first tail.
OutcomeDistribution example3_process(std::uint64_t master_seed, int runs);
// Exact household-1 holding of each good when the first tail occurs at j.
double example3_outcome_value(int j);

}  // namespace sntp
