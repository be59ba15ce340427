#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sntp/engine.hpp"
#include "sntp/prefs.hpp"
#include "sntp/trade.hpp"

namespace sntp {

struct CheckReport {
  std::string name;
  int draws = 0;
  int failures = 0;
  double worst_violation = 0.0;
  std::uint64_t seed = 0;
  bool pass = true;

  // One line: name=... draws=... failures=... worst_violation=... seed=... pass=...
  std::string record() const;
};

// Every suite draws bundles and prices log-uniformly from [0.1, 10]^L and is
// deterministic in (inputs, draws, seed). With inject_fault set, a suite
// deliberately corrupts the quantity it checks so that it must fail.

// Budget identity, Euler identity, first-order conditions, the indirect-utility
// gradient, demand/Hicksian/expenditure duality, inverse-demand and d-map roundtrips.
CheckReport identity_suite(const UtilitySpec& u, int draws, std::uint64_t seed, bool inject_fault = false,
                           double tol = 1e-8);

// Closed-form Jacobians against central differences (relative 1e-5) and their
// agreement at tangency points (absolute 1e-6).
CheckReport jacobian_suite(const UtilitySpec& u, int draws, std::uint64_t seed, bool inject_fault = false);

// check_sharp and check_attractive over all good pairs, plus invariance of the
// attractiveness sign under the exponential transform.
CheckReport predicates_suite(const UtilitySpec& u, int draws, std::uint64_t seed, bool inject_fault = false);

// Rate attraction along each household path, monotone extreme rates, nested
// boxes and (for two goods and two households) the shrinking trade interval.
CheckReport attraction_suite(const Economy& e, int draws, std::uint64_t seed, bool inject_fault = false);

// has_trade implies box_contains on log-spaced rate grids around random allocations.
CheckReport box_suite(const Economy& e, int draws, std::uint64_t seed, bool inject_fault = false);

struct SamplerLaw {
  int samples = 0;
  // draw_price against the closed-form conditional CDF.
  double ks_engine = 0.0;
  // Rejection from a wider arc against the closed-form conditional CDF.
  double ks_rejection = 0.0;
  // Rejection from a wider arc against independent inverse-CDF draws on the exact interval.
  double ks_two_sample = 0.0;
};

// Two-good economies under the UniformArc prior.
SamplerLaw sampler_law(const Economy& e, const Allocation& y, int samples, std::uint64_t seed);
CheckReport sampler_suite(const Economy& e, const Allocation& y, int samples, std::uint64_t seed,
                          bool inject_fault = false, double threshold = 0.02);

// cfg must describe a two-good, two-household economy. Runs cfg.runs
// trajectories capped at 200 steps and requires 99% to reach a rate gap
// below 1e-3, then checks is_pareto_optimal against the empty trade interval
// and the LP on cfg.runs random allocations, half of them on the contract curve.
CheckReport welfare_suite(const SimConfig& cfg, bool inject_fault = false);

double ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf);
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// The bundled battery used by the CLI verify command. Suites whose name does
// not contain `filter` are skipped.
std::vector<CheckReport> run_suites(const std::string& filter, std::uint64_t seed, bool inject_fault = false,
                                    int draws = 1000);

}  // namespace sntp
