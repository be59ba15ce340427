#include "sntp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <tuple>

#include "sntp/geometry.hpp"

namespace sntp {

namespace {

constexpr double kLogLo = -2.302585092994046;  // ln 0.1
constexpr double kLogSpan = 4.605170185988092;  // ln 100

Vector log_uniform(Eigen::Index n, CounterRng& rng) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = std::exp(kLogLo + kLogSpan * rng.uniform());
  return v;
}

double rel(double diff, double scale) { return std::abs(diff) / std::max(std::abs(scale), 1e-300); }

double rel_vec(const Vector& a, const Vector& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff(), 1e-300);
}

double rel_mat(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff(), 1e-300);
}

// Richardson-extrapolated central difference of a vector function, J_kl = d f_k / d p_l.
template <class F>
Matrix fd_jacobian(F&& f, const Vector& p, double rel_step) {
  const Eigen::Index n = p.size();
  Matrix j;
  for (Eigen::Index l = 0; l < n; ++l) {
    auto central = [&](double h) {
      Vector up = p;
      Vector down = p;
      up[l] += h;
      down[l] -= h;
      return Vector((f(up) - f(down)) / (2.0 * h));
    };
    const double h = rel_step * p[l];
    const Vector d = (4.0 * central(0.5 * h) - central(h)) / 3.0;
    if (l == 0) j.resize(d.size(), n);
    j.col(l) = d;
  }
  return j;
}

template <class F>
Vector fd_gradient(F&& f, const Vector& p, double rel_step) {
  auto wrapped = [&](const Vector& x) { return Vector::Constant(1, f(x)); };
  return fd_jacobian(wrapped, p, rel_step).row(0).transpose();
}

struct Tally {
  CheckReport report;

  void add(double violation, bool failed) {
    ++report.draws;
    if (failed) ++report.failures;
    if (std::isnan(violation)) violation = std::numeric_limits<double>::infinity();
    report.worst_violation = std::max(report.worst_violation, violation);
  }

  CheckReport finish() {
    report.pass = report.failures == 0;
    return report;
  }
};

Tally start(std::string name, std::uint64_t seed) {
  Tally t;
  t.report.name = std::move(name);
  t.report.seed = seed;
  return t;
}

std::vector<Bundle> random_bundles(std::size_t households, Eigen::Index goods, CounterRng& rng) {
  std::vector<Bundle> out;
  out.reserve(households);
  for (std::size_t h = 0; h < households; ++h) out.emplace_back(log_uniform(goods, rng));
  return out;
}

Vector household_rates(const UtilitySpec& u, const Vector& c) {
  const Vector g = gradient(u, Bundle(c));
  return g.head(g.size() - 1) / g[g.size() - 1];
}

// Allocation with p in its trade-compatible set: start from demands at p and
// undo random balanced trades lying in the budget plane.
std::pair<Allocation, PriceVector> trade_compatible_pair(const Economy& e, CounterRng& rng) {
  const Eigen::Index n = e.goods();
  const std::size_t households = e.size();
  const PriceVector p(log_uniform(n, rng));
  const Vector pv = p.values();
  Matrix x(n, static_cast<Eigen::Index>(households));
  Matrix t = Matrix::Zero(n, static_cast<Eigen::Index>(households));
  for (std::size_t h = 0; h < households; ++h) {
    const double wealth = pv.sum() * std::exp(kLogLo + kLogSpan * rng.uniform());
    x.col(static_cast<Eigen::Index>(h)) = normalized_demand(e.utility(h), PriceVector(pv / wealth)).values();
    if (h + 1 == households) break;
    Vector z(n);
    for (Eigen::Index i = 0; i < n; ++i) z[i] = rng.normal();
    z -= (z.dot(pv) / pv.squaredNorm()) * pv;
    t.col(static_cast<Eigen::Index>(h)) = z;
    t.col(static_cast<Eigen::Index>(households - 1)) -= z;
  }
  double reach = std::numeric_limits<double>::infinity();
  for (Eigen::Index h = 0; h < x.cols(); ++h) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (t(i, h) > 0.0) reach = std::min(reach, x(i, h) / t(i, h));
    }
  }
  const double scale = reach * (0.05 + 0.9 * rng.uniform());
  std::vector<Bundle> bundles;
  for (Eigen::Index h = 0; h < x.cols(); ++h) bundles.emplace_back(Vector(x.col(h) - scale * t.col(h)));
  return {Allocation(std::move(bundles)), p};
}

}  // namespace

std::string CheckReport::record() const {
  char buf[512];
  std::snprintf(buf, sizeof(buf), "name=%s draws=%d failures=%d worst_violation=%.6e seed=%llu pass=%s", name.c_str(),
                draws, failures, worst_violation, static_cast<unsigned long long>(seed), pass ? "true" : "false");
  return buf;
}

CheckReport identity_suite(const UtilitySpec& u, int draws, std::uint64_t seed, bool inject_fault, double tol) {
  if (draws < 1) throw ValidationError("draws must be at least 1");
  Tally tally = start("identity", seed);
  const Eigen::Index n = u.goods();
  auto demand = [&](const Vector& p) -> Vector {
    Vector x = normalized_demand(u, PriceVector(p)).values();
    return inject_fault ? Vector(1.01 * x) : x;
  };
  auto vn = [&](const Vector& p) { return utility(u, Bundle(demand(p))); };
  CounterRng rng(seed, 0);
  for (int d = 0; d < draws; ++d) {
    rng.set_step(static_cast<std::uint64_t>(d));
    const PriceVector p(log_uniform(n, rng));
    const Bundle c(log_uniform(n, rng));
    const Vector x = demand(p.values());
    const double lambda = gradient(u, Bundle(x)).dot(x);
    double worst = 0.0;
    // Budget exhaustion p . x_n(p) = 1.
    worst = std::max(worst, std::abs(p.values().dot(x) - 1.0));
    // p J x_n(p) = -x_n(p).
    const Matrix jx = fd_jacobian(demand, p.values(), 1e-3);
    worst = std::max(worst, rel_vec(jx.transpose() * p.values(), -x));
    // grad u(x_n(p)) = lambda_n(p) p.
    worst = std::max(worst, rel_vec(gradient(u, Bundle(x)), lambda * p.values()));
    // grad v_n(p) = -lambda_n(p) x_n(p).
    worst = std::max(worst, rel_vec(fd_gradient(vn, p.values(), 1e-3), -lambda * x));
    // x_n(p) = h(p, v_n(p)) and e(p, v_n(p)) = 1.
    const double v = vn(p.values());
    worst = std::max(worst, rel_vec(hicksian_demand(u, p, v).values(), x));
    worst = std::max(worst, std::abs(expenditure(u, p, v) - 1.0));
    // h(p, u) reaches u at cost e(p, u).
    const double level = utility(u, c);
    const Bundle h = hicksian_demand(u, p, level);
    worst = std::max(worst, rel(utility(u, h) - level, std::max(1.0, std::abs(level))));
    worst = std::max(worst, rel(p.values().dot(h.values()) - expenditure(u, p, level), expenditure(u, p, level)));
    // Inverse-demand roundtrips.
    worst = std::max(worst, rel_vec(normalized_demand(u, inverse_normalized_demand(u, c)).values(), c.values()));
    worst = std::max(worst, rel_vec(inverse_normalized_demand(u, Bundle(x)).values(), p.values()));
    // d-map roundtrips.
    const FlatPoint fp = flatten(u, c);
    const FlatPoint back = d_inverse(u, d_map(u, fp));
    worst = std::max(worst, rel_vec(back.q, fp.q));
    worst = std::max(worst, rel(back.u - fp.u, std::max(1.0, std::abs(fp.u))));
    worst = std::max(worst, rel_vec(d_map(u, d_inverse(u, p)).values(), p.values()));
    worst = std::max(worst, rel_vec(unflatten(u, fp).values(), c.values()));
    tally.add(worst, !(worst <= tol));
  }
  return tally.finish();
}

CheckReport jacobian_suite(const UtilitySpec& u, int draws, std::uint64_t seed, bool inject_fault) {
  if (draws < 1) throw ValidationError("draws must be at least 1");
  Tally tally = start("jacobian", seed);
  const Eigen::Index n = u.goods();
  CounterRng rng(seed, 0);
  for (int d = 0; d < draws; ++d) {
    rng.set_step(static_cast<std::uint64_t>(d));
    const Bundle anchor(log_uniform(n, rng));
    const PriceVector p(log_uniform(n, rng));
    const double level = utility(u, anchor);
    auto phi = [&](const Vector& x) { return hicksian_demand(u, PriceVector(x), level).values(); };
    auto psi = [&](const Vector& x) { return budget_demand(u, PriceVector(x), anchor).values(); };
    Matrix jphi = jacobian_phi(u, anchor, p);
    if (inject_fault) jphi *= 1.01;
    const double err_phi = rel_mat(jphi, fd_jacobian(phi, p.values(), 1e-4));
    const double err_psi = rel_mat(jacobian_psi(u, anchor, p), fd_jacobian(psi, p.values(), 1e-4));
    const PriceVector tangent = inverse_normalized_demand(u, anchor);
    Matrix tphi = jacobian_phi(u, anchor, tangent);
    if (inject_fault) tphi *= 1.01;
    const double tangency = (tphi - jacobian_psi(u, anchor, tangent)).cwiseAbs().maxCoeff();
    const bool failed = !(err_phi <= 1e-5) || !(err_psi <= 1e-5) || !(tangency <= 1e-6);
    tally.add(std::max({err_phi, err_psi, tangency}), failed);
  }
  return tally.finish();
}

CheckReport predicates_suite(const UtilitySpec& u, int draws, std::uint64_t seed, bool inject_fault) {
  if (draws < 1) throw ValidationError("draws must be at least 1");
  Tally tally = start("predicates", seed);
  const int n = static_cast<int>(u.goods());
  CounterRng rng(seed, 0);
  for (int d = 0; d < draws; ++d) {
    rng.set_step(static_cast<std::uint64_t>(d));
    const Bundle y(log_uniform(n, rng));
    const PriceVector p(log_uniform(n, rng));
    bool failed = !check_sharp(u, y, p);
    double worst = 0.0;
    if (failed) worst = 1.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        double form = attractive_form(u, y, p, i, j);
        if (inject_fault) form = -form;
        const bool attractive = form <= kAttractiveSlack;
        worst = std::max(worst, form);
        failed = failed || !attractive;
        const bool transformed = check_attractive(u, y, p, i, j, Representation::Exponential);
        if (!inject_fault && transformed != attractive) failed = true;
      }
    }
    tally.add(worst, failed);
  }
  return tally.finish();
}

CheckReport attraction_suite(const Economy& e, int draws, std::uint64_t seed, bool inject_fault) {
  if (draws < 1) throw ValidationError("draws must be at least 1");
  constexpr int kGrid = 100;
  constexpr double kSlack = 1e-9;
  Tally tally = start("attraction", seed);
  const Eigen::Index n = e.goods();
  const std::size_t households = e.size();
  const PriorSpec prior{UniformArc{}, SpeedPrior::UniformCube};
  CounterRng rng(seed, 0);
  for (int d = 0; d < draws; ++d) {
    rng.set_step(static_cast<std::uint64_t>(d));
    Allocation y;
    PriceVector p;
    if (n == 2) {
      y = Allocation(random_bundles(households, n, rng));
      if (is_pareto_optimal(e, y)) {
        tally.add(0.0, false);
        continue;
      }
      p = numeraire_prices(draw_price(e, y, prior, rng));
    } else {
      std::tie(y, p) = trade_compatible_pair(e, rng);
    }
    const SpeedVector sigma = sample_speed(e, y, p, prior.s_prior, rng);
    Vector target = p.values();
    if (inject_fault) target.head(n - 1) *= 1.3;

    double worst = 0.0;
    bool failed = false;
    auto note = [&](double excess) {
      worst = std::max(worst, excess);
      if (excess > kSlack) failed = true;
    };

    // Each household along its own full path: squared distance of every rate
    // ratio to the price ratio never grows and vanishes at the end.
    for (std::size_t h = 0; h < households; ++h) {
      const Vector dir = trade_direction(e, y, p, h);
      Matrix prev;
      for (int k = 0; k <= kGrid; ++k) {
        const Vector c = y[h].values() + (static_cast<double>(k) / kGrid) * dir;
        const Vector g = gradient(e.utility(h), Bundle(c));
        Matrix delta(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
          for (Eigen::Index j = 0; j < n; ++j) {
            const double gap = g[i] / g[j] - target[i] / target[j];
            delta(i, j) = gap * gap;
          }
        }
        if (k > 0) note((delta - prev).maxCoeff());
        if (k == kGrid) note(delta.maxCoeff());
        prev = delta;
      }
    }

    // Joint path: extreme ratios follow the case split, boxes nest when every
    // lower set is nonempty.
    std::vector<Vector> dirs(households);
    for (std::size_t h = 0; h < households; ++h) dirs[h] = trade_direction(e, y, p, h);
    auto joint = [&](double t) {
      std::vector<Bundle> b;
      b.reserve(households);
      for (std::size_t h = 0; h < households; ++h) {
        b.emplace_back(y[h].values() + sigma[static_cast<Eigen::Index>(h)] * t * dirs[h]);
      }
      return Allocation(std::move(b));
    };
    const BoxSet start_box = msr_extremes(e, y);
    Matrix ratio = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) ratio(i, j) = target[i] / target[j];
    }
    bool all_lower_nonempty = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i != j && !(start_box.lower(i, j) <= ratio(i, j))) all_lower_nonempty = false;
      }
    }
    BoxSet prev = start_box;
    for (int k = 1; k <= kGrid; ++k) {
      const BoxSet box = msr_extremes(e, joint(static_cast<double>(k) / kGrid));
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
          if (i == j) continue;
          const bool some_below = start_box.lower(i, j) <= ratio(i, j);
          const bool some_above = start_box.upper(i, j) >= ratio(i, j);
          note(some_below ? prev.lower(i, j) - box.lower(i, j) : box.lower(i, j) - prev.lower(i, j));
          note(some_above ? box.upper(i, j) - prev.upper(i, j) : prev.upper(i, j) - box.upper(i, j));
          if (all_lower_nonempty) {
            note(prev.lower(i, j) - box.lower(i, j));
            note(box.upper(i, j) - prev.upper(i, j));
          }
        }
      }
      if (households == 2 && n == 2) {
        const auto before = trade_interval_2x2(e, joint(static_cast<double>(k - 1) / kGrid), 0.0);
        const auto after = trade_interval_2x2(e, joint(static_cast<double>(k) / kGrid), 0.0);
        if (before && after) {
          note(before->first - after->first);
          note(after->second - before->second);
        } else if (!before && after) {
          failed = true;
        }
      }
      prev = box;
    }
    tally.add(worst, failed);
  }
  return tally.finish();
}

CheckReport box_suite(const Economy& e, int draws, std::uint64_t seed, bool inject_fault) {
  if (draws < 1) throw ValidationError("draws must be at least 1");
  Tally tally = start("box", seed);
  const Eigen::Index n = e.goods();
  if (n > 3) throw ValidationError("box sweeps cover two or three goods");
  const int per_axis = n == 2 ? 101 : 15;
  CounterRng rng(seed, 0);
  for (int d = 0; d < draws; ++d) {
    rng.set_step(static_cast<std::uint64_t>(d));
    const Allocation y(random_bundles(e.size(), n, rng));
    BoxSet box = msr_extremes(e, y);
    if (inject_fault) {
      box.lower *= 1.2;
      box.upper /= 1.2;
    }
    Vector lo = Vector::Constant(n - 1, std::numeric_limits<double>::infinity());
    Vector hi = Vector::Zero(n - 1);
    for (std::size_t h = 0; h < e.size(); ++h) {
      const Vector r = household_rates(e.utility(h), y[h].values());
      lo = lo.cwiseMin(r);
      hi = hi.cwiseMax(r);
    }
    lo /= 2.0;
    hi *= 2.0;
    int violations = 0;
    Vector q(n - 1);
    const int cells = n == 2 ? per_axis : per_axis * per_axis;
    for (int cell = 0; cell < cells; ++cell) {
      int code = cell;
      for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double s = static_cast<double>(code % per_axis) / (per_axis - 1);
        code /= per_axis;
        q[i] = lo[i] * std::pow(hi[i] / lo[i], s);
      }
      if (has_trade(e, y, numeraire_prices(q)) && !box_contains(box, q)) ++violations;
    }
    // Plus one point built inside the trade set.
    const auto [ty, tp] = trade_compatible_pair(e, rng);
    BoxSet tbox = msr_extremes(e, ty);
    if (inject_fault) {
      tbox.lower *= 1.2;
      tbox.upper /= 1.2;
    }
    const Vector tq = tp.values().head(n - 1) / tp[n - 1];
    if (has_trade(e, ty, tp) && !box_contains(tbox, tq)) ++violations;
    tally.add(static_cast<double>(violations), violations > 0);
  }
  return tally.finish();
}

double ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw ValidationError("empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ValidationError("empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

SamplerLaw sampler_law(const Economy& e, const Allocation& y, int samples, std::uint64_t seed) {
  if (e.goods() != 2) throw ValidationError("sampler law checks need two goods");
  if (samples < 1) throw ValidationError("samples must be at least 1");
  const BoxSet box = msr_extremes(e, y);
  const double lo = box.lower(0, 1);
  const double hi = box.upper(0, 1);
  const double a = std::atan(lo);
  const double b = std::atan(hi);
  auto cdf = [&](double q) { return std::clamp((std::atan(q) - a) / (b - a), 0.0, 1.0); };
  const PriorSpec prior{UniformArc{}, SpeedPrior::UniformCube};

  std::vector<double> engine;
  std::vector<double> rejection;
  std::vector<double> exact;
  engine.reserve(static_cast<std::size_t>(samples));
  rejection.reserve(static_cast<std::size_t>(samples));
  exact.reserve(static_cast<std::size_t>(samples));
  CounterRng engine_rng(seed, 1);
  CounterRng wide_rng(seed, 2);
  CounterRng exact_rng(seed, 3);
  const double wa = std::atan(0.5 * lo);
  const double wb = std::atan(2.0 * hi);
  for (int s = 0; s < samples; ++s) {
    engine_rng.set_step(static_cast<std::uint64_t>(s));
    engine.push_back(draw_price(e, y, prior, engine_rng)[0]);
    exact.push_back(std::tan(a + (b - a) * exact_rng.uniform_open()));
  }
  int attempts = 0;
  while (static_cast<int>(rejection.size()) < samples) {
    if (++attempts > 100 * samples) throw SamplingError("wide-arc rejection accepted too rarely");
    const double q = std::tan(wa + (wb - wa) * wide_rng.uniform_open());
    if (has_trade(e, y, PriceVector{q, 1.0})) rejection.push_back(q);
  }
  SamplerLaw law;
  law.samples = samples;
  law.ks_engine = ks_one_sample(engine, cdf);
  law.ks_rejection = ks_one_sample(rejection, cdf);
  law.ks_two_sample = ks_two_sample(rejection, exact);
  return law;
}

CheckReport sampler_suite(const Economy& e, const Allocation& y, int samples, std::uint64_t seed, bool inject_fault,
                          double threshold) {
  Tally tally = start("sampler", seed);
  SamplerLaw law = sampler_law(e, y, samples, seed);
  if (inject_fault) law.ks_two_sample += 1.0;
  for (double ks : {law.ks_engine, law.ks_rejection, law.ks_two_sample}) tally.add(ks, !(ks < threshold));
  return tally.finish();
}

CheckReport welfare_suite(const SimConfig& cfg, bool inject_fault) {
  cfg.validate();
  const Economy& e = cfg.economy;
  if (e.size() != 2 || e.goods() != 2) throw ValidationError("welfare suite needs two households and two goods");
  constexpr int kSteps = 200;
  constexpr double kGap = 1e-3;
  Tally tally = start("welfare", cfg.master_seed);
  const Vector aggregate = cfg.initial.aggregate();

  int converged = 0;
  for (int r = 0; r < cfg.runs; ++r) {
    CounterRng rng(cfg.master_seed, static_cast<std::uint64_t>(r));
    Allocation y = cfg.initial;
    for (int t = 0;; ++t) {
      if (mrs_gap(e, y) < kGap) {
        ++converged;
        break;
      }
      if (t == kSteps) break;
      rng.set_step(static_cast<std::uint64_t>(t + 1));
      const PriceVector p = numeraire_prices(draw_price(e, y, cfg.prior, rng));
      SpeedVector sigma = sample_speed(e, y, p, cfg.prior.s_prior, rng);
      if (inject_fault) sigma = SpeedVector(0.01 * sigma.values());
      y = advance(e, y, p, sigma);
    }
  }
  const double fraction = static_cast<double>(converged) / cfg.runs;
  const int stragglers = cfg.runs - converged;
  tally.report.draws += cfg.runs;
  tally.report.worst_violation = 1.0 - fraction;
  if (fraction < 0.99) tally.report.failures += stragglers;

  const std::vector<Allocation> curve = contract_curve_2x2(e.utility(0), e.utility(1), aggregate, 997);
  CounterRng rng(cfg.master_seed, std::numeric_limits<std::uint64_t>::max());
  for (int r = 0; r < cfg.runs; ++r) {
    rng.set_step(static_cast<std::uint64_t>(r));
    Allocation y;
    if (r % 2 == 0) {
      Vector share(2);
      share << 0.02 + 0.96 * rng.uniform(), 0.02 + 0.96 * rng.uniform();
      const Vector first = aggregate.cwiseProduct(share);
      y = Allocation(std::vector<Bundle>{Bundle(first), Bundle(Vector(aggregate - first))});
    } else {
      y = curve[static_cast<std::size_t>(rng.uniform() * static_cast<double>(curve.size()))];
    }
    const bool pareto = is_pareto_optimal(e, y, cfg.pareto_tol);
    const auto interval = trade_interval_2x2(e, y, cfg.pareto_tol);
    bool agree = pareto == !interval.has_value();
    if (interval) {
      agree = agree && has_trade(e, y, PriceVector{std::sqrt(interval->first * interval->second), 1.0});
    } else {
      const double own = household_rates(e.utility(0), y[0].values())[0];
      agree = agree && !has_trade(e, y, PriceVector{own, 1.0}) && !has_trade(e, y, PriceVector{own * 1.01, 1.0}) &&
              !has_trade(e, y, PriceVector{own / 1.01, 1.0});
    }
    ++tally.report.draws;
    if (!agree) ++tally.report.failures;
  }
  return tally.finish();
}

std::vector<CheckReport> run_suites(const std::string& filter, std::uint64_t seed, bool inject_fault, int draws) {
  const UtilitySpec cd2 = UtilitySpec::cobb_douglas(Vector::Constant(2, 0.5));
  const UtilitySpec ces2 = UtilitySpec::ces(Vector::Constant(2, 0.5), 0.5);
  const UtilitySpec cd3 = UtilitySpec::cobb_douglas((Vector(3) << 0.2, 0.3, 0.5).finished());
  const UtilitySpec ces3 = UtilitySpec::ces((Vector(3) << 0.25, 0.35, 0.4).finished(), 0.3);
  const UtilitySpec ces3b = UtilitySpec::ces((Vector(3) << 0.5, 0.2, 0.3).finished(), 0.7);
  const Economy cd_2x2({{cd2, "h1"}, {cd2, "h2"}});
  const Economy ces_2x2({{ces2, "h1"}, {UtilitySpec::ces((Vector(2) << 0.4, 0.6).finished(), 0.5), "h2"}});
  const Economy ces_2x3({{ces3, "h1"}, {ces3b, "h2"}});
  const Economy ces_3x3({{ces3, "h1"}, {ces3b, "h2"}, {cd3, "h3"}});
  const Allocation shock(std::vector<Bundle>{Bundle{2.0, 1.0}, Bundle{1.0, 2.0}});

  std::vector<CheckReport> out;
  auto wanted = [&](const std::string& name) { return filter.empty() || name.find(filter) != std::string::npos; };
  auto add = [&](const std::string& name, auto&& run) {
    if (!wanted(name)) return;
    CheckReport r = run();
    r.name = name;
    out.push_back(std::move(r));
  };
  const std::vector<std::pair<std::string, const UtilitySpec*>> specs{
      {"cobb_douglas_2", &cd2}, {"ces_2", &ces2}, {"cobb_douglas_3", &cd3}, {"ces_3", &ces3}};
  for (const auto& [label, spec] : specs) {
    add("identity/" + label, [&] { return identity_suite(*spec, draws, seed, inject_fault); });
  }
  for (const auto& [label, spec] : specs) {
    add("jacobian/" + label, [&] { return jacobian_suite(*spec, draws, seed, inject_fault); });
  }
  for (const auto& [label, spec] : specs) {
    add("predicates/" + label, [&] { return predicates_suite(*spec, draws, seed, inject_fault); });
  }
  add("attraction/cobb_douglas_2x2", [&] { return attraction_suite(cd_2x2, draws, seed, inject_fault); });
  add("attraction/ces_2x3", [&] { return attraction_suite(ces_2x3, draws, seed, inject_fault); });
  add("box/cobb_douglas_2x2", [&] { return box_suite(cd_2x2, draws, seed, inject_fault); });
  add("box/ces_2x3", [&] { return box_suite(ces_2x3, draws, seed, inject_fault); });
  add("box/mixed_3x3", [&] { return box_suite(ces_3x3, std::max(1, draws / 10), seed, inject_fault); });
  add("sampler/cobb_douglas_2x2",
      [&] { return sampler_suite(cd_2x2, shock, std::max(10000, 10 * draws), seed, inject_fault); });
  const PriorSpec max_speed{UniformArc{}, SpeedPrior::MaxSpeed};
  add("welfare/cobb_douglas_2x2", [&] {
    return welfare_suite(SimConfig{cd_2x2, shock, max_speed, 500, kParetoTolerance, seed, draws, 1}, inject_fault);
  });
  add("welfare/ces_2x2", [&] {
    return welfare_suite(SimConfig{ces_2x2, shock, max_speed, 500, kParetoTolerance, seed, draws, 1}, inject_fault);
  });
  return out;
}

}  // namespace sntp
