#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sntp/engine.hpp"
#include "sntp/errors.hpp"

namespace sntp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSampling = 3;

inline constexpr int kSummarySchemaVersion = 1;

// Malformed or inconsistent scenario files and flags.
class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

enum class Process { Sntp, CoinLadder };

struct Scenario {
  std::string name;
  Process process = Process::Sntp;
  SimConfig config;
  int bins = kDefaultBins;
};

// Strict JSON parsing: unknown keys, missing keys and wrong types raise ConfigError.
Scenario parse_scenario(const std::string& json_text);
// A path to a JSON file, or the name of a bundled scenario.
Scenario load_scenario(const std::string& path_or_name);

std::vector<std::string> bundled_scenario_names();
std::optional<std::string> bundled_scenario_text(const std::string& name);

// %.17g
std::string format_number(double x);

void write_outcomes_csv(std::ostream& out, const OutcomeDistribution& dist);
void write_summary_json(std::ostream& out, const Scenario& scenario, const OutcomeDistribution& dist);
void write_trajectories_csv(std::ostream& out, const OutcomeDistribution& dist);
void write_example3_csv(std::ostream& out, const OutcomeDistribution& dist);

// Full command line, argv[0] included. Diagnostics go to err, reports to out.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sntp::cli
