#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sntp/cli.hpp"
#include "sntp/engine.hpp"
#include "sntp/geometry.hpp"
#include "sntp/prefs.hpp"
#include "sntp/trade.hpp"
#include "sntp/verify.hpp"

namespace py = pybind11;
using namespace sntp;

namespace {

Representation representation(const std::string& name) {
  if (name == "canonical") return Representation::Canonical;
  if (name == "exponential") return Representation::Exponential;
  throw ValidationError("representation must be 'canonical' or 'exponential'");
}

Allocation allocation(const std::vector<Vector>& rows) {
  std::vector<Bundle> bundles;
  for (const auto& r : rows) bundles.emplace_back(r);
  return Allocation(std::move(bundles));
}

Economy economy(const std::vector<UtilitySpec>& specs) {
  std::vector<Household> hs;
  for (std::size_t h = 0; h < specs.size(); ++h) hs.push_back({specs[h], "h" + std::to_string(h + 1)});
  return Economy(std::move(hs));
}

std::vector<Vector> rows(const Allocation& y) {
  std::vector<Vector> out;
  for (std::size_t h = 0; h < y.households(); ++h) out.push_back(y[h].values());
  return out;
}

py::dict summary(const OutcomeDistribution& d) {
  py::dict out;
  out["projection"] = d.projection;
  out["steps"] = d.steps;
  std::vector<std::string> terminals;
  for (auto t : d.terminals) terminals.push_back(t == Terminal::ParetoReached ? "pareto" : "step_cap");
  out["terminals"] = terminals;
  out["mean"] = d.mean;
  out["stddev"] = d.stddev;
  out["mean_bundles"] = d.mean_bundles;
  out["histogram"] = py::dict(py::arg("lo") = d.histogram.lo, py::arg("hi") = d.histogram.hi,
                              py::arg("counts") = d.histogram.counts);
  out["mode_bin"] = d.mode_bin;
  out["mean_bin"] = d.mean_bin;
  py::list bands;
  for (const auto& b : d.bands) {
    bands.append(py::dict(py::arg("coverage") = b.coverage, py::arg("lo") = b.lo, py::arg("hi") = b.hi));
  }
  out["bands"] = bands;
  return out;
}

}  // namespace

PYBIND11_MODULE(_sntp, m) {
  m.doc() = "Stochastic non-tatonnement exchange economies";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<UnreachableUtility>(m, "UnreachableUtility", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
  py::register_exception<SamplingError>(m, "SamplingError", base.ptr());

  py::class_<UtilitySpec>(m, "UtilitySpec")
      .def_static("cobb_douglas", &UtilitySpec::cobb_douglas, py::arg("weights"))
      .def_static("ces", &UtilitySpec::ces, py::arg("weights"), py::arg("sigma"))
      .def_property_readonly("goods", &UtilitySpec::goods)
      .def_property_readonly("elasticity", &UtilitySpec::elasticity);

  m.def(
      "utility",
      [](const UtilitySpec& u, const Vector& c, const std::string& rep) {
        return utility(u, Bundle(c), representation(rep));
      },
      py::arg("spec"), py::arg("bundle"), py::arg("representation") = "canonical");
  m.def(
      "gradient",
      [](const UtilitySpec& u, const Vector& c, const std::string& rep) {
        return gradient(u, Bundle(c), representation(rep));
      },
      py::arg("spec"), py::arg("bundle"), py::arg("representation") = "canonical");
  m.def(
      "normalized_demand", [](const UtilitySpec& u, const Vector& p) { return normalized_demand(u, PriceVector(p)).values(); },
      py::arg("spec"), py::arg("prices"));
  m.def(
      "inverse_normalized_demand",
      [](const UtilitySpec& u, const Vector& c) { return inverse_normalized_demand(u, Bundle(c)).values(); },
      py::arg("spec"), py::arg("bundle"));
  m.def(
      "hicksian_demand",
      [](const UtilitySpec& u, const Vector& p, double level) {
        return hicksian_demand(u, PriceVector(p), level).values();
      },
      py::arg("spec"), py::arg("prices"), py::arg("level"));
  m.def(
      "expenditure", [](const UtilitySpec& u, const Vector& p, double level) { return expenditure(u, PriceVector(p), level); },
      py::arg("spec"), py::arg("prices"), py::arg("level"));
  m.def(
      "indirect_utility", [](const UtilitySpec& u, const Vector& p) { return indirect_utility_normalized(u, PriceVector(p)); },
      py::arg("spec"), py::arg("prices"));
  m.def(
      "flatten",
      [](const UtilitySpec& u, const Vector& c) {
        const FlatPoint fp = flatten(u, Bundle(c));
        return py::make_tuple(fp.q, fp.u);
      },
      py::arg("spec"), py::arg("bundle"));
  m.def(
      "unflatten",
      [](const UtilitySpec& u, const Vector& q, double level) { return unflatten(u, FlatPoint{q, level}).values(); },
      py::arg("spec"), py::arg("rates"), py::arg("level"));

  m.def(
      "has_trade",
      [](const std::vector<UtilitySpec>& specs, const std::vector<Vector>& y, const Vector& p) {
        return has_trade(economy(specs), allocation(y), PriceVector(p));
      },
      py::arg("specs"), py::arg("allocation"), py::arg("prices"));
  m.def(
      "trade_interval",
      [](const std::vector<UtilitySpec>& specs, const std::vector<Vector>& y) {
        return trade_interval_2x2(economy(specs), allocation(y));
      },
      py::arg("specs"), py::arg("allocation"));
  m.def(
      "is_pareto_optimal",
      [](const std::vector<UtilitySpec>& specs, const std::vector<Vector>& y, double tol) {
        return is_pareto_optimal(economy(specs), allocation(y), tol);
      },
      py::arg("specs"), py::arg("allocation"), py::arg("tol") = kParetoTolerance);
  m.def(
      "advance",
      [](const std::vector<UtilitySpec>& specs, const std::vector<Vector>& y, const Vector& p, const Vector& sigma) {
        return rows(advance(economy(specs), allocation(y), PriceVector(p), SpeedVector(sigma)));
      },
      py::arg("specs"), py::arg("allocation"), py::arg("prices"), py::arg("speeds"));

  m.def("bundled_scenarios", &cli::bundled_scenario_names);
  m.def(
      "simulate",
      [](const std::string& scenario, std::optional<int> runs, std::optional<std::uint64_t> seed, int threads) {
        cli::Scenario s = cli::load_scenario(scenario);
        if (runs) s.config.runs = *runs;
        if (seed) s.config.master_seed = *seed;
        s.config.threads = threads;
        OutcomeDistribution d;
        {
          py::gil_scoped_release release;
          if (s.process == cli::Process::CoinLadder) {
            d = example3_process(s.config.master_seed, s.config.runs);
            summarize(d, true, s.bins);
          } else {
            d = run_monte_carlo(s.config, s.bins);
          }
        }
        return summary(d);
      },
      py::arg("scenario"), py::arg("runs") = py::none(), py::arg("seed") = py::none(), py::arg("threads") = 0);
  m.def(
      "example3",
      [](std::uint64_t seed, int runs) {
        const OutcomeDistribution d = example3_process(seed, runs);
        py::dict out;
        out["first_tail"] = d.steps;
        out["household1_good1"] = d.projection;
        return out;
      },
      py::arg("seed") = 1, py::arg("runs") = 10000);
  m.def("example3_value", &example3_outcome_value, py::arg("j"));
  m.def(
      "verify",
      [](const std::string& filter, std::uint64_t seed, int draws) {
        py::list out;
        for (const auto& r : run_suites(filter, seed, false, draws)) {
          out.append(py::dict(py::arg("name") = r.name, py::arg("draws") = r.draws, py::arg("failures") = r.failures,
                              py::arg("worst_violation") = r.worst_violation, py::arg("pass") = r.pass));
        }
        return out;
      },
      py::arg("filter") = "", py::arg("seed") = 1, py::arg("draws") = 1000);
}
