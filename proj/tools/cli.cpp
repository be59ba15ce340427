#include "sntp/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sntp/geometry.hpp"
#include "sntp/verify.hpp"

namespace sntp::cli {

// Generated from scenarios/*.json at build time.
extern const std::map<std::string, std::string> kBundledScenarios;

namespace {

using nlohmann::json;

// Hands out members of a JSON object and rejects whatever was not consumed.
class Fields {
 public:
  Fields(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& at(const std::string& key) {
    if (!j_.contains(key)) throw ConfigError(where_ + ": missing key '" + key + "'");
    used_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number()) throw ConfigError(where_ + "." + key + ": expected a number");
    return v.get<double>();
  }

  std::uint64_t count(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number_unsigned()) throw ConfigError(where_ + "." + key + ": expected a nonnegative integer");
    return v.get<std::uint64_t>();
  }

  std::string text(const std::string& key) {
    const json& v = at(key);
    if (!v.is_string()) throw ConfigError(where_ + "." + key + ": expected a string");
    return v.get<std::string>();
  }

  Vector vector(const std::string& key) { return to_vector(at(key), where_ + "." + key); }

  static Vector to_vector(const json& v, const std::string& where) {
    if (!v.is_array() || v.empty()) throw ConfigError(where + ": expected a nonempty array of numbers");
    Vector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw ConfigError(where + ": expected a nonempty array of numbers");
      out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
    }
    return out;
  }

  void done() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) throw ConfigError(where_ + ": unknown key '" + it.key() + "'");
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> used_;
};

int narrow(std::uint64_t v, const std::string& what) {
  if (v > 1000000000ULL) throw ConfigError(what + " is too large");
  return static_cast<int>(v);
}

UtilitySpec parse_utility(const json& j, const std::string& where) {
  Fields f(j, where);
  const std::string family = f.text("family");
  const Vector weights = f.vector("weights");
  UtilitySpec spec = [&] {
    if (family == "cobb_douglas_log") return UtilitySpec::cobb_douglas(weights);
    if (family == "ces") return UtilitySpec::ces(weights, f.number("sigma"));
    throw ConfigError(where + ".family: expected cobb_douglas_log or ces");
  }();
  f.done();
  return spec;
}

QPrior parse_q_prior(const json& j) {
  Fields f(j, "prior.q");
  const std::string kind = f.text("kind");
  QPrior out;
  if (kind == "arctan_normal") {
    out = ArctanNormal{f.number("center_rate"), f.number("sigma_angle")};
  } else if (kind == "uniform_arc") {
    out = UniformArc{};
  } else if (kind == "tabulated") {
    Tabulated tab;
    const json& grid = f.at("grid");
    if (!grid.is_array()) throw ConfigError("prior.q.grid: expected an array");
    for (const auto& point : grid) tab.grid.push_back(Fields::to_vector(point, "prior.q.grid"));
    const Vector densities = f.vector("densities");
    tab.densities.assign(densities.data(), densities.data() + densities.size());
    out = std::move(tab);
  } else {
    throw ConfigError("prior.q.kind: expected arctan_normal, uniform_arc or tabulated");
  }
  f.done();
  return out;
}

PriorSpec parse_prior(const json& j) {
  Fields f(j, "prior");
  PriorSpec prior;
  prior.q_prior = parse_q_prior(f.at("q"));
  const std::string speed = f.text("speed");
  if (speed == "uniform_cube") {
    prior.s_prior = SpeedPrior::UniformCube;
  } else if (speed == "max_speed") {
    prior.s_prior = SpeedPrior::MaxSpeed;
  } else {
    throw ConfigError("prior.speed: expected uniform_cube or max_speed");
  }
  f.done();
  return prior;
}

Scenario parse_root(const json& root) {
  Fields f(root, "scenario");
  const std::string name = f.text("name");
  const std::string process_name = f.text("process");
  Process process;
  if (process_name == "sntp") {
    process = Process::Sntp;
  } else if (process_name == "coin_ladder") {
    process = Process::CoinLadder;
  } else {
    throw ConfigError("scenario.process: expected sntp or coin_ladder");
  }

  const json& hs = f.at("households");
  if (!hs.is_array()) throw ConfigError("scenario.households: expected an array");
  std::vector<Household> households;
  std::vector<Bundle> endowments;
  for (std::size_t h = 0; h < hs.size(); ++h) {
    const std::string where = "households[" + std::to_string(h) + "]";
    Fields hf(hs[h], where);
    Household household{parse_utility(hf.at("utility"), where + ".utility"),
                        hf.has("label") ? hf.text("label") : "h" + std::to_string(h + 1)};
    endowments.emplace_back(hf.vector("endowment"));
    hf.done();
    households.push_back(std::move(household));
  }

  PriorSpec prior;
  if (process == Process::Sntp) {
    prior = parse_prior(f.at("prior"));
  } else if (f.has("prior")) {
    throw ConfigError("scenario.prior: the coin_ladder process has a fixed price schedule");
  }

  Fields ef(f.at("engine"), "engine");
  const int runs = narrow(ef.count("runs"), "engine.runs");
  const int max_steps = ef.has("max_steps") ? narrow(ef.count("max_steps"), "engine.max_steps") : 500;
  const double pareto_tol = ef.has("pareto_tol") ? ef.number("pareto_tol") : kParetoTolerance;
  const std::uint64_t seed = ef.count("master_seed");
  const int threads = ef.has("threads") ? narrow(ef.count("threads"), "engine.threads") : 0;
  const int bins = ef.has("bins") ? narrow(ef.count("bins"), "engine.bins") : kDefaultBins;
  ef.done();
  f.done();

  if (bins < 1) throw ConfigError("engine.bins must be at least 1");
  Scenario s{name, process,
             SimConfig{Economy(std::move(households)), Allocation(std::move(endowments)), std::move(prior), max_steps,
                       pareto_tol, seed, runs, threads},
             bins};
  s.config.validate();
  if (process == Process::CoinLadder) {
    const Allocation expected(std::vector<Bundle>{Bundle{2.0, 1.0}, Bundle{1.0, 2.0}});
    const UtilitySpec cd = UtilitySpec::cobb_douglas(Vector::Constant(2, 0.5));
    bool ok = s.config.economy.size() == 2 && s.config.initial == expected;
    for (std::size_t h = 0; ok && h < 2; ++h) {
      const UtilitySpec& u = s.config.economy.utility(h);
      ok = u.family() == cd.family() && u.weights() == cd.weights();
    }
    if (!ok) throw ConfigError("coin_ladder runs only on the symmetric 2x2 box with endowments (2,1), (1,2)");
  }
  return s;
}

std::string join_numbers(const Vector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_number(v[i]);
  }
  return out;
}

std::string terminal_tag(Terminal t) { return t == Terminal::ParetoReached ? "pareto" : "step_cap"; }

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(what + ": expected comma-separated numbers");
    }
  }
  if (out.empty()) throw ConfigError(what + ": expected comma-separated numbers");
  return out;
}

Vector to_vector(const std::vector<double>& v) { return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())); }

std::ofstream open_output(const std::filesystem::path& dir, const std::string& file) {
  std::filesystem::create_directories(dir);
  std::ofstream f(dir / file, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + (dir / file).string());
  return f;
}

struct SimulateArgs {
  std::string scenario;
  std::optional<int> runs;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_steps;
  std::optional<double> pareto_tol;
  std::optional<int> threads;
  std::optional<int> bins;
  bool trace = false;
  std::string out = ".";
};

struct Example3Args {
  int runs = 10000;
  std::uint64_t seed = 1;
  std::string out = ".";
};

struct ManifoldArgs {
  std::string family = "cobb_douglas_log";
  std::string weights = "0.5,0.5";
  double sigma = 0.5;
  std::string representation = "canonical";
  std::string anchor = "1,1";
  std::string kind = "indifference";
  double grid_lo = 0.25;
  double grid_hi = 4.0;
  int grid_n = 41;
  std::string out = ".";
};

struct VerifyArgs {
  std::string filter;
  std::uint64_t seed = 1;
  int draws = 1000;
  bool inject_fault = false;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  Scenario s = load_scenario(a.scenario);
  if (a.runs) s.config.runs = *a.runs;
  if (a.seed) s.config.master_seed = *a.seed;
  if (a.max_steps) s.config.max_steps = *a.max_steps;
  if (a.pareto_tol) s.config.pareto_tol = *a.pareto_tol;
  if (a.threads) s.config.threads = *a.threads;
  if (a.bins) s.bins = *a.bins;
  if (s.bins < 1) throw ConfigError("--bins must be at least 1");
  try {
    s.config.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  if (s.process == Process::CoinLadder && a.trace) throw ConfigError("--trace is not available for coin_ladder");

  OutcomeDistribution dist;
  if (s.process == Process::CoinLadder) {
    dist = example3_process(s.config.master_seed, s.config.runs);
    summarize(dist, true, s.bins);
  } else {
    dist = run_monte_carlo(s.config, s.bins, a.trace);
  }
  const std::filesystem::path dir(a.out);
  {
    auto f = open_output(dir, "outcomes.csv");
    write_outcomes_csv(f, dist);
  }
  {
    auto f = open_output(dir, "summary.json");
    write_summary_json(f, s, dist);
  }
  if (a.trace) {
    auto f = open_output(dir, "trajectories.csv");
    write_trajectories_csv(f, dist);
  }
  out << "scenario=" << s.name << " runs=" << s.config.runs << " mean=" << format_number(dist.mean)
      << " stddev=" << format_number(dist.stddev) << " out=" << dir.string() << "\n";
  return kExitOk;
}

int cmd_example3(const Example3Args& a, std::ostream& out) {
  if (a.runs < 1) throw ConfigError("--runs must be at least 1");
  const OutcomeDistribution dist = example3_process(a.seed, a.runs);
  auto f = open_output(a.out, "example3.csv");
  write_example3_csv(f, dist);
  std::ostringstream table;
  write_example3_csv(table, dist);
  out << table.str();
  return kExitOk;
}

int cmd_manifold(const ManifoldArgs& a, std::ostream& out) {
  const Vector weights = to_vector(parse_list(a.weights, "--weights"));
  UtilitySpec u = [&] {
    if (a.family == "cobb_douglas_log") return UtilitySpec::cobb_douglas(weights);
    if (a.family == "ces") return UtilitySpec::ces(weights, a.sigma);
    throw ConfigError("--family: expected cobb_douglas_log or ces");
  }();
  Representation rep;
  if (a.representation == "canonical") {
    rep = Representation::Canonical;
  } else if (a.representation == "exponential") {
    rep = Representation::Exponential;
  } else {
    throw ConfigError("--representation: expected canonical or exponential");
  }
  ManifoldKind kind;
  if (a.kind == "indifference") {
    kind = ManifoldKind::Indifference;
  } else if (a.kind == "offer") {
    kind = ManifoldKind::Offer;
  } else if (a.kind == "trade_hyperplane") {
    kind = ManifoldKind::TradeHyperplane;
  } else {
    throw ConfigError("--kind: expected indifference, offer or trade_hyperplane");
  }
  const Vector anchor_values = to_vector(parse_list(a.anchor, "--anchor"));
  if (anchor_values.size() != u.goods()) throw ConfigError("--anchor must have one entry per good");
  const Bundle anchor(anchor_values);
  if (!(a.grid_lo > 0.0) || !(a.grid_hi > a.grid_lo) || a.grid_n < 2) {
    throw ConfigError("grid needs 0 < grid-lo < grid-hi and grid-n >= 2");
  }

  const Eigen::Index dims = u.goods() - 1;
  if (dims > 2) throw ConfigError("manifold export covers two or three goods");
  const bool log_spaced = kind != ManifoldKind::TradeHyperplane;
  std::vector<double> axis(static_cast<std::size_t>(a.grid_n));
  for (int k = 0; k < a.grid_n; ++k) {
    const double s = static_cast<double>(k) / (a.grid_n - 1);
    axis[static_cast<std::size_t>(k)] =
        log_spaced ? a.grid_lo * std::pow(a.grid_hi / a.grid_lo, s) : a.grid_lo + s * (a.grid_hi - a.grid_lo);
  }
  std::vector<Vector> grid;
  if (dims == 1) {
    for (double x : axis) grid.push_back(Vector::Constant(1, x));
  } else {
    for (double x : axis) {
      for (double z : axis) grid.push_back((Vector(2) << x, z).finished());
    }
  }
  const ManifoldSample sample = sample_manifold(u, kind, anchor, grid);

  const Eigen::Index n = u.goods();
  auto f = open_output(a.out, "manifold.csv");
  f << "kind";
  for (Eigen::Index i = 1; i <= n; ++i) f << ",anchor_" << i;
  for (Eigen::Index i = 1; i <= n; ++i) f << ",c_" << i;
  for (Eigen::Index i = 1; i <= n; ++i) f << ",p_" << i;
  for (Eigen::Index i = 1; i < n; ++i) f << ",q_" << i;
  f << ",u,residual\n";
  for (const Bundle& c : sample.points) {
    const PriceVector p = inverse_normalized_demand(u, c);
    const FlatPoint fp = flatten(u, c);
    f << a.kind << ',' << join_numbers(anchor.values()) << ',' << join_numbers(c.values()) << ','
      << join_numbers(p.values()) << ',' << join_numbers(fp.q) << ',' << format_number(utility(u, c, rep)) << ','
      << format_number(manifold_residual(u, kind, anchor, c)) << '\n';
  }
  out << "kind=" << a.kind << " points=" << sample.points.size() << " out="
      << (std::filesystem::path(a.out) / "manifold.csv").string() << "\n";
  return kExitOk;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  if (a.draws < 1) throw ConfigError("--draws must be at least 1");
  const std::vector<CheckReport> reports = run_suites(a.filter, a.seed, a.inject_fault, a.draws);
  if (reports.empty()) throw ConfigError("--filter '" + a.filter + "' matches no suite");
  bool all = true;
  for (const auto& r : reports) {
    out << r.record() << "\n";
    all = all && r.pass;
  }
  return all ? kExitOk : kExitVerifyFailed;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
  }
  try {
    return parse_root(root);
  } catch (const ConfigError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

Scenario load_scenario(const std::string& path_or_name) {
  if (auto text = bundled_scenario_text(path_or_name)) return parse_scenario(*text);
  std::ifstream f(path_or_name, std::ios::binary);
  if (!f) throw ConfigError("no scenario file or bundled scenario named '" + path_or_name + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_scenario(ss.str());
}

std::vector<std::string> bundled_scenario_names() {
  std::vector<std::string> out;
  for (const auto& [name, text] : kBundledScenarios) out.push_back(name);
  return out;
}

std::optional<std::string> bundled_scenario_text(const std::string& name) {
  auto it = kBundledScenarios.find(name);
  if (it == kBundledScenarios.end()) return std::nullopt;
  return it->second;
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_outcomes_csv(std::ostream& out, const OutcomeDistribution& dist) {
  if (dist.samples.empty()) throw ValidationError("no outcomes to write");
  const std::size_t households = dist.samples.front().households();
  const Eigen::Index goods = dist.samples.front().goods();
  out << "run";
  for (Eigen::Index i = 1; i < goods; ++i) out << ",q_" << i;
  for (std::size_t h = 1; h <= households; ++h) {
    for (Eigen::Index i = 1; i <= goods; ++i) out << ",h" << h << "_g" << i;
  }
  out << ",steps,terminal\n";
  for (std::size_t r = 0; r < dist.samples.size(); ++r) {
    out << r << ',' << join_numbers(dist.terminal_q[r]);
    for (std::size_t h = 0; h < households; ++h) out << ',' << join_numbers(dist.samples[r][h].values());
    out << ',' << dist.steps[r] << ',' << terminal_tag(dist.terminals[r]) << '\n';
  }
}

void write_summary_json(std::ostream& out, const Scenario& scenario, const OutcomeDistribution& dist) {
  const bool two_by_two = scenario.config.economy.size() == 2 && scenario.config.economy.goods() == 2;
  json j;
  j["schema_version"] = kSummarySchemaVersion;
  j["scenario"] = scenario.name;
  j["runs"] = dist.samples.size();
  j["master_seed"] = scenario.config.master_seed;
  j["projection"] = two_by_two ? "household_1_good_1" : "household_1_rate_1";
  j["mean"] = dist.mean;
  j["stddev"] = dist.stddev;
  json bundles = json::array();
  for (const auto& m : dist.mean_bundles) {
    json b = json::array();
    for (Eigen::Index i = 0; i < m.size(); ++i) b.push_back(m[i]);
    bundles.push_back(b);
  }
  j["mean_bundles"] = bundles;
  const Histogram& hist = dist.histogram;
  j["histogram"] = {{"lo", hist.lo}, {"hi", hist.hi}, {"counts", hist.counts}};
  j["mode_bin"] = {{"index", dist.mode_bin},
                   {"lower", hist.bin_lower(dist.mode_bin)},
                   {"upper", hist.bin_upper(dist.mode_bin)}};
  j["mean_bin"] = dist.mean_bin;
  json bands = json::array();
  for (const auto& b : dist.bands) {
    bands.push_back({{"coverage", b.coverage},
                     {"lo", b.lo},
                     {"hi", b.hi},
                     {"width", b.hi - b.lo}});
  }
  j["quantile_bands"] = bands;
  std::size_t pareto = 0;
  for (Terminal t : dist.terminals) pareto += t == Terminal::ParetoReached;
  j["terminals"] = {{"pareto", pareto}, {"step_cap", dist.terminals.size() - pareto}};
  out << j.dump(2) << "\n";
}

void write_trajectories_csv(std::ostream& out, const OutcomeDistribution& dist) {
  if (dist.trajectories.empty()) throw ValidationError("no trajectories were kept");
  const Allocation& first = dist.trajectories.front().states.front();
  const std::size_t households = first.households();
  const Eigen::Index goods = first.goods();
  out << "run,step";
  for (Eigen::Index i = 1; i < goods; ++i) out << ",q_" << i;
  for (std::size_t h = 1; h <= households; ++h) out << ",sigma_" << h;
  for (std::size_t h = 1; h <= households; ++h) {
    for (Eigen::Index i = 1; i <= goods; ++i) out << ",h" << h << "_g" << i;
  }
  out << '\n';
  for (std::size_t r = 0; r < dist.trajectories.size(); ++r) {
    const Trajectory& tr = dist.trajectories[r];
    for (std::size_t t = 0; t < tr.states.size(); ++t) {
      out << r << ',' << t;
      for (Eigen::Index i = 0; i + 1 < goods; ++i) {
        out << ',';
        if (t > 0) out << format_number(tr.prices[t - 1][i]);
      }
      for (std::size_t h = 0; h < households; ++h) {
        out << ',';
        if (t > 0) out << format_number(tr.speeds[t - 1][static_cast<Eigen::Index>(h)]);
      }
      for (std::size_t h = 0; h < households; ++h) out << ',' << join_numbers(tr.states[t][h].values());
      out << '\n';
    }
  }
}

void write_example3_csv(std::ostream& out, const OutcomeDistribution& dist) {
  const int top = *std::max_element(dist.steps.begin(), dist.steps.end());
  std::vector<double> sums(static_cast<std::size_t>(top + 1), 0.0);
  std::vector<int> hits(static_cast<std::size_t>(top + 1), 0);
  for (std::size_t r = 0; r < dist.samples.size(); ++r) {
    const auto j = static_cast<std::size_t>(dist.steps[r]);
    sums[j] += dist.samples[r][0][0];
    ++hits[j];
  }
  const double runs = static_cast<double>(dist.samples.size());
  out << "j,value,simulated_value,empirical_mass,exact_mass\n";
  for (int j = 1; j <= top; ++j) {
    const auto k = static_cast<std::size_t>(j);
    out << j << ',' << format_number(example3_outcome_value(j)) << ',';
    if (hits[k] > 0) out << format_number(sums[k] / hits[k]);
    out << ',' << format_number(hits[k] / runs) << ',' << format_number(std::ldexp(1.0, -j)) << '\n';
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic non-tatonnement trade simulator"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo outcome distribution of a scenario");
  simulate->add_option("--scenario", sim.scenario, "Scenario JSON file or bundled scenario name")->required();
  simulate->add_option("--runs", sim.runs, "Number of trajectories");
  simulate->add_option("--seed", sim.seed, "Master seed");
  simulate->add_option("--max-steps", sim.max_steps, "Step cap per trajectory");
  simulate->add_option("--pareto-tol", sim.pareto_tol, "Stop when the rate gap is at most this");
  simulate->add_option("--threads", sim.threads, "Worker threads (0 = hardware concurrency)");
  simulate->add_option("--bins", sim.bins, "Histogram bins");
  simulate->add_flag("--trace", sim.trace, "Also write trajectories.csv");
  simulate->add_option("--out", sim.out, "Output directory");

  Example3Args ex3;
  auto* example3 = app.add_subcommand("example3", "Coin-flip price ladder on the symmetric 2x2 box");
  example3->add_option("--runs", ex3.runs, "Number of runs");
  example3->add_option("--seed", ex3.seed, "Master seed");
  example3->add_option("--out", ex3.out, "Output directory");

  ManifoldArgs man;
  auto* manifold = app.add_subcommand("manifold", "Export a canonical manifold in all three domains");
  manifold->add_option("--family", man.family, "cobb_douglas_log or ces");
  manifold->add_option("--weights", man.weights, "Comma-separated weights summing to 1");
  manifold->add_option("--sigma", man.sigma, "CES exponent in (0, 1)");
  manifold->add_option("--representation", man.representation, "canonical or exponential utility column");
  manifold->add_option("--anchor", man.anchor, "Comma-separated anchor bundle");
  manifold->add_option("--kind", man.kind, "indifference, offer or trade_hyperplane");
  manifold->add_option("--grid-lo", man.grid_lo, "Grid lower end");
  manifold->add_option("--grid-hi", man.grid_hi, "Grid upper end");
  manifold->add_option("--grid-n", man.grid_n, "Grid points per axis");
  manifold->add_option("--out", man.out, "Output directory");

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Run the randomized verification suites");
  verify->add_option("--filter", ver.filter, "Run only suites whose name contains this");
  verify->add_option("--seed", ver.seed, "Seed");
  verify->add_option("--draws", ver.draws, "Draws per suite");
  verify->add_flag("--inject-fault", ver.inject_fault, "Corrupt each checked quantity; every suite must fail");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (*simulate) return cmd_simulate(sim, out);
    if (*example3) return cmd_example3(ex3, out);
    if (*manifold) return cmd_manifold(man, out);
    return cmd_verify(ver, out);
  } catch (const ValidationError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UnreachableUtility& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "sampling failure: " << e.what() << "\n";
    return kExitSampling;
  }
}

}  // namespace sntp::cli
