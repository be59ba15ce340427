#include "sntp/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <thread>

#include <boost/math/distributions/normal.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace sntp {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double arc_density(const QPrior& prior, double q) {
  const double jac = 1.0 / (1.0 + q * q);
  if (const auto* an = std::get_if<ArctanNormal>(&prior)) {
    const double z = (std::atan(q) - std::atan(an->center_rate)) / an->sigma_angle;
    return std::exp(-0.5 * z * z) * jac;
  }
  return jac;
}

// Angle drawn from the arc prior restricted to [a, b], by inverse CDF.
double draw_angle(const QPrior& prior, double a, double b, CounterRng& rng) {
  const double u = rng.uniform_open();
  const auto* an = std::get_if<ArctanNormal>(&prior);
  if (an == nullptr) return a + u * (b - a);
  const boost::math::normal standard;
  const double mu = std::atan(an->center_rate);
  const double s = an->sigma_angle;
  double za = (a - mu) / s;
  double zb = (b - mu) / s;
  // Work in the lower tail, where the CDF keeps its relative precision.
  const bool mirrored = za > 0.0;
  if (mirrored) {
    const double t = za;
    za = -zb;
    zb = -t;
  }
  const double fa = boost::math::cdf(standard, za);
  const double fb = boost::math::cdf(standard, zb);
  if (!(fb > fa)) throw SamplingError("prior assigns no representable mass to the trade-compatible arc");
  double z = boost::math::quantile(standard, std::clamp(fa + u * (fb - fa), fa, fb));
  if (mirrored) z = -z;
  return std::clamp(mu + s * z, a, b);
}

// Per-coordinate bounds on q = p_{1..L-1} / p_L over the box set, from the
// difference-constraint systems obtained by fixing which partner attains
// each min and max.
std::pair<Vector, Vector> box_rate_bounds(const BoxSet& box) {
  const Eigen::Index n = box.lower.rows();
  if (n > 4) throw ValidationError("arc priors support at most four goods; use a tabulated prior");
  const int partners = static_cast<int>(n - 1);
  const double inf = std::numeric_limits<double>::infinity();
  Vector lo = Vector::Constant(n - 1, inf);
  Vector hi = Vector::Constant(n - 1, -inf);
  long combos = 1;
  for (Eigen::Index i = 0; i < 2 * n; ++i) combos *= partners;
  std::vector<int> choice(static_cast<std::size_t>(2 * n));
  Matrix dist(n, n);
  for (long c = 0; c < combos; ++c) {
    long code = c;
    for (auto& ch : choice) {
      ch = static_cast<int>(code % partners);
      code /= partners;
    }
    dist.setConstant(inf);
    dist.diagonal().setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
      auto partner = [&](int k) { return static_cast<Eigen::Index>(k < i ? k : k + 1); };
      const Eigen::Index j = partner(choice[static_cast<std::size_t>(2 * i)]);
      const Eigen::Index k = partner(choice[static_cast<std::size_t>(2 * i + 1)]);
      // x_j <= x_i - ln m_ij  and  x_i <= x_k + ln M_ik
      dist(i, j) = std::min(dist(i, j), -std::log(box.lower(i, j)));
      dist(k, i) = std::min(dist(k, i), std::log(box.upper(i, k)));
    }
    for (Eigen::Index m = 0; m < n; ++m) {
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) dist(i, j) = std::min(dist(i, j), dist(i, m) + dist(m, j));
      }
    }
    if ((dist.diagonal().array() < -1e-12).any()) continue;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      lo[i] = std::min(lo[i], -dist(i, n - 1));
      hi[i] = std::max(hi[i], dist(n - 1, i));
    }
  }
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (!(lo[i] <= hi[i])) {
      lo[i] = -inf;
      hi[i] = inf;
    }
  }
  return {lo, hi};
}

double angle_of_log_rate(double x) {
  if (x == -std::numeric_limits<double>::infinity()) return 0.0;
  if (x == std::numeric_limits<double>::infinity()) return kHalfPi;
  return std::atan(std::exp(x));
}

Vector draw_tabulated(const Economy& e, const Allocation& y, const Tabulated& tab, CounterRng& rng) {
  std::vector<std::size_t> eligible;
  std::vector<double> cumulative;
  double total = 0.0;
  for (std::size_t k = 0; k < tab.grid.size(); ++k) {
    if (tab.densities[k] <= 0.0) continue;
    if (!has_trade(e, y, numeraire_prices(tab.grid[k]))) continue;
    total += tab.densities[k];
    eligible.push_back(k);
    cumulative.push_back(total);
  }
  if (eligible.empty()) throw SamplingError("tabulated prior has no atom with trade-compatible prices");
  const double u = rng.uniform() * total;
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  const std::size_t pick = it == cumulative.end() ? eligible.size() - 1 : static_cast<std::size_t>(it - cumulative.begin());
  return tab.grid[eligible[pick]];
}

void renormalize(std::vector<Bundle>& bundles, const Vector& target) {
  Vector total = Vector::Zero(target.size());
  for (const auto& b : bundles) total += b.values();
  const Vector scale = (target.array() / total.array()).matrix();
  for (auto& b : bundles) b = Bundle((b.values().array() * scale.array()).matrix());
}

std::exception_ptr with_run_context(std::exception_ptr ep, std::size_t run) {
  const std::string prefix = "run " + std::to_string(run) + ": ";
  try {
    std::rethrow_exception(ep);
  } catch (const SamplingError& err) {
    return std::make_exception_ptr(SamplingError(prefix + err.what()));
  } catch (const ValidationError& err) {
    return std::make_exception_ptr(ValidationError(prefix + err.what()));
  } catch (const DomainError& err) {
    return std::make_exception_ptr(DomainError(prefix + err.what()));
  } catch (const LpError& err) {
    return std::make_exception_ptr(LpError(prefix + err.what()));
  } catch (const Error& err) {
    return std::make_exception_ptr(Error(prefix + err.what()));
  } catch (...) {
    return std::current_exception();
  }
}

double type7_quantile(const std::vector<double>& sorted, double level) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * level;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

void PriorSpec::validate() const {
  std::visit(Overloaded{
                 [](const ArctanNormal& an) {
                   if (!(an.center_rate > 0.0) || !std::isfinite(an.center_rate)) {
                     throw ValidationError("ArctanNormal center_rate must be positive");
                   }
                   if (!(an.sigma_angle > 0.0) || !std::isfinite(an.sigma_angle)) {
                     throw ValidationError("ArctanNormal sigma_angle must be positive");
                   }
                 },
                 [](const UniformArc&) {},
                 [](const Tabulated& tab) {
                   if (tab.grid.empty() || tab.grid.size() != tab.densities.size()) {
                     throw ValidationError("tabulated prior needs one density per grid point");
                   }
                   bool any = false;
                   for (std::size_t k = 0; k < tab.grid.size(); ++k) {
                     require_positive(tab.grid[k], "tabulated grid point");
                     if (tab.grid[k].size() != tab.grid.front().size()) {
                       throw ValidationError("tabulated grid points differ in length");
                     }
                     if (!(tab.densities[k] >= 0.0) || !std::isfinite(tab.densities[k])) {
                       throw ValidationError("tabulated densities must be nonnegative");
                     }
                     any = any || tab.densities[k] > 0.0;
                   }
                   if (!any) throw ValidationError("tabulated densities are all zero");
                 },
             },
             q_prior);
}

void SimConfig::validate() const {
  economy.require_compatible(initial);
  prior.validate();
  if (max_steps < 1) throw ValidationError("max_steps must be at least 1");
  if (runs < 1) throw ValidationError("runs must be at least 1");
  if (!(pareto_tol > 0.0)) throw ValidationError("pareto_tol must be positive");
  if (threads < 0) throw ValidationError("threads must be nonnegative");
  if (const auto* tab = std::get_if<Tabulated>(&prior.q_prior)) {
    if (tab->grid.front().size() != economy.goods() - 1) {
      throw ValidationError("tabulated grid points need L-1 coordinates");
    }
  }
}

int Histogram::bin_of(double x) const {
  const int bins = static_cast<int>(counts.size());
  if (!(hi > lo)) return 0;
  const int b = static_cast<int>(std::floor((x - lo) / (hi - lo) * bins));
  return std::clamp(b, 0, bins - 1);
}

double Histogram::bin_lower(int bin) const { return lo + (hi - lo) * bin / static_cast<double>(counts.size()); }

double Histogram::bin_upper(int bin) const {
  return lo + (hi - lo) * (bin + 1) / static_cast<double>(counts.size());
}

double q_density(const PriorSpec& prior, double q) { return q_density(prior, Vector::Constant(1, q)); }

double q_density(const PriorSpec& prior, const Vector& q) {
  require_positive(q, "rate vector");
  if (const auto* tab = std::get_if<Tabulated>(&prior.q_prior)) {
    for (std::size_t k = 0; k < tab->grid.size(); ++k) {
      const Vector& g = tab->grid[k];
      if (g.size() == q.size() && ((g - q).array().abs() <= 1e-12 * g.array()).all()) return tab->densities[k];
    }
    return 0.0;
  }
  double density = 1.0;
  for (Eigen::Index i = 0; i < q.size(); ++i) density *= arc_density(prior.q_prior, q[i]);
  return density;
}

Vector draw_price(const Economy& e, const Allocation& y, const PriorSpec& prior, CounterRng& rng, int max_attempts) {
  if (const auto* tab = std::get_if<Tabulated>(&prior.q_prior)) return draw_tabulated(e, y, *tab, rng);
  const BoxSet box = msr_extremes(e, y);
  const Eigen::Index n = e.goods();
  Vector a(n - 1);
  Vector b(n - 1);
  if (n == 2) {
    a[0] = std::atan(box.lower(0, 1));
    b[0] = std::atan(box.upper(0, 1));
  } else {
    const auto [lo, hi] = box_rate_bounds(box);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      a[i] = angle_of_log_rate(lo[i]);
      b[i] = angle_of_log_rate(hi[i]);
    }
  }
  Vector q(n - 1);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      q[i] = std::tan(draw_angle(prior.q_prior, a[i], b[i], rng));
    }
    if (!((q.array() > kCoordinateFloor).all() && q.allFinite())) continue;
    if (n > 2 && !box_contains(box, q)) continue;
    if (has_trade(e, y, numeraire_prices(q))) return q;
  }
  throw SamplingError("price rejection sampler exceeded " + std::to_string(max_attempts) + " attempts");
}

std::variant<TradeStep, ParetoStop> sntp_step(const Economy& e, const Allocation& y, const PriorSpec& prior,
                                              double pareto_tol, CounterRng& rng) {
  if (is_pareto_optimal(e, y, pareto_tol)) return ParetoStop{};
  Vector q = draw_price(e, y, prior, rng);
  const PriceVector p = numeraire_prices(q);
  SpeedVector sigma = sample_speed(e, y, p, prior.s_prior, rng);
  Allocation next = advance(e, y, p, sigma);
  return TradeStep{std::move(next), std::move(q), std::move(sigma)};
}

Trajectory run_trajectory(const SimConfig& cfg, std::uint64_t run_index) {
  cfg.validate();
  CounterRng rng(cfg.master_seed, run_index);
  const Vector aggregate = cfg.initial.aggregate();
  Trajectory tr;
  tr.states.push_back(cfg.initial);
  for (int t = 1; t <= cfg.max_steps; ++t) {
    rng.set_step(static_cast<std::uint64_t>(t));
    auto outcome = sntp_step(cfg.economy, tr.states.back(), cfg.prior, cfg.pareto_tol, rng);
    if (std::holds_alternative<ParetoStop>(outcome)) {
      tr.terminal = Terminal::ParetoReached;
      return tr;
    }
    auto& step = std::get<TradeStep>(outcome);
    std::vector<Bundle> bundles = step.next.bundles();
    renormalize(bundles, aggregate);
    tr.states.emplace_back(std::move(bundles));
    tr.prices.push_back(std::move(step.q));
    tr.speeds.push_back(std::move(step.sigma));
  }
  tr.terminal = is_pareto_optimal(cfg.economy, tr.states.back(), cfg.pareto_tol) ? Terminal::ParetoReached
                                                                                  : Terminal::StepCap;
  return tr;
}

void summarize(OutcomeDistribution& dist, bool two_by_two, int bins) {
  if (bins < 1) throw ValidationError("histogram needs at least one bin");
  const std::size_t runs = dist.samples.size();
  if (runs == 0) throw ValidationError("no samples to summarize");
  dist.projection.resize(runs);
  for (std::size_t r = 0; r < runs; ++r) {
    dist.projection[r] = two_by_two ? dist.samples[r][0][0] : dist.terminal_q[r][0];
  }
  double sum = 0.0;
  for (double x : dist.projection) sum += x;
  dist.mean = sum / static_cast<double>(runs);
  double ss = 0.0;
  for (double x : dist.projection) ss += (x - dist.mean) * (x - dist.mean);
  dist.stddev = runs > 1 ? std::sqrt(ss / static_cast<double>(runs - 1)) : 0.0;

  const std::size_t households = dist.samples.front().households();
  dist.mean_bundles.assign(households, Vector::Zero(dist.samples.front().goods()));
  for (const auto& s : dist.samples) {
    for (std::size_t h = 0; h < households; ++h) dist.mean_bundles[h] += s[h].values();
  }
  for (auto& m : dist.mean_bundles) m /= static_cast<double>(runs);

  std::vector<double> sorted = dist.projection;
  std::sort(sorted.begin(), sorted.end());
  dist.histogram.lo = sorted.front();
  dist.histogram.hi = sorted.back();
  dist.histogram.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double x : dist.projection) ++dist.histogram.counts[static_cast<std::size_t>(dist.histogram.bin_of(x))];
  dist.mode_bin = static_cast<int>(std::max_element(dist.histogram.counts.begin(), dist.histogram.counts.end()) -
                                   dist.histogram.counts.begin());
  dist.mean_bin = dist.histogram.bin_of(dist.mean);
  dist.bands.clear();
  for (double coverage : {0.5, 0.8, 0.9}) {
    const double tail = 0.5 * (1.0 - coverage);
    dist.bands.push_back({coverage, type7_quantile(sorted, tail), type7_quantile(sorted, 1.0 - tail)});
  }
}

OutcomeDistribution run_monte_carlo(const SimConfig& cfg, int bins, bool keep_trajectories) {
  cfg.validate();
  const auto runs = static_cast<std::size_t>(cfg.runs);
  OutcomeDistribution dist;
  std::vector<std::optional<Allocation>> terminal(runs);
  dist.terminal_q.resize(runs);
  dist.steps.resize(runs);
  dist.terminals.resize(runs);
  if (keep_trajectories) dist.trajectories.resize(runs);
  std::vector<std::exception_ptr> errors(runs);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= runs) return;
      try {
        Trajectory tr = run_trajectory(cfg, r);
        const Allocation& last = tr.states.back();
        const Vector g = gradient(cfg.economy.utility(0), last[0]);
        dist.terminal_q[r] = g.head(g.size() - 1) / g[g.size() - 1];
        dist.steps[r] = static_cast<int>(tr.prices.size());
        dist.terminals[r] = tr.terminal;
        terminal[r] = last;
        if (keep_trajectories) dist.trajectories[r] = std::move(tr);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  unsigned threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(std::min<std::size_t>(runs, 256)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (std::size_t r = 0; r < runs; ++r) {
    if (errors[r]) std::rethrow_exception(with_run_context(errors[r], r));
  }
  dist.samples.reserve(runs);
  for (auto& t : terminal) dist.samples.push_back(std::move(*t));
  summarize(dist, cfg.economy.size() == 2 && cfg.economy.goods() == 2, bins);
  return dist;
}

double example3_outcome_value(int j) {
  if (j < 1) throw ValidationError("outcome index starts at 1");
  using Wide = boost::multiprecision::cpp_bin_float_50;
  Wide value = 1;
  for (int i = 1; i < j; ++i) value *= 1 + 1 / (boost::multiprecision::ldexp(Wide(1), i + 2) - 4);
  value *= 1 + 1 / (boost::multiprecision::ldexp(Wide(1), j + 1) - 2);
  return value.convert_to<double>();
}

OutcomeDistribution example3_process(std::uint64_t master_seed, int runs) {
  if (runs < 1) throw ValidationError("runs must be at least 1");
  constexpr int kLadderCap = 60;
  const UtilitySpec cd = UtilitySpec::cobb_douglas(Vector::Constant(2, 0.5));
  const Economy economy({{cd, "h1"}, {cd, "h2"}});
  const Allocation start(std::vector<Bundle>{Bundle{2.0, 1.0}, Bundle{1.0, 2.0}});

  OutcomeDistribution dist;
  dist.samples.reserve(static_cast<std::size_t>(runs));
  for (int r = 0; r < runs; ++r) {
    CounterRng rng(master_seed, static_cast<std::uint64_t>(r));
    Allocation y = start;
    int j = 0;
    for (int t = 1; t <= kLadderCap; ++t) {
      rng.set_step(static_cast<std::uint64_t>(t));
      const bool tail = !rng.coin() || t == kLadderCap;
      if (tail) {
        y = advance(economy, y, PriceVector{1.0, 1.0}, SpeedVector(Vector::Ones(2)));
        j = t;
        break;
      }
      const double q = 1.0 - std::ldexp(1.0, -(t + 1));
      const double slack = y[1][1] - q * y[1][0];
      Vector sigma(2);
      sigma << 1.0, (slack + 3.0 * (q - 1.0)) / slack;
      y = advance(economy, y, PriceVector{q, 1.0}, SpeedVector(sigma));
    }
    const Vector g = gradient(cd, y[0]);
    dist.terminal_q.push_back(Vector::Constant(1, g[0] / g[1]));
    dist.steps.push_back(j);
    dist.terminals.push_back(is_pareto_optimal(economy, y) ? Terminal::ParetoReached : Terminal::StepCap);
    dist.samples.push_back(std::move(y));
  }
  summarize(dist, true, kDefaultBins);
  return dist;
}

}  // namespace sntp
