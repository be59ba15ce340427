#include "sntp/geometry.hpp"

#include <cmath>
#include <string>

namespace sntp {

namespace {

Vector rates_of(const Vector& g) {
  const Eigen::Index last = g.size() - 1;
  return g.head(last) / g[last];
}

double log_rate_gap(const UtilitySpec& a, const Bundle& ya, const UtilitySpec& b, const Bundle& yb) {
  const Vector ga = gradient(a, ya);
  const Vector gb = gradient(b, yb);
  return std::log(ga[0] / ga[1]) - std::log(gb[0] / gb[1]);
}

double excess_good1(const UtilitySpec& a, const UtilitySpec& b, const Allocation& w, double q) {
  const PriceVector p{q, 1.0};
  return budget_demand(a, p, w[0])[0] + budget_demand(b, p, w[1])[0] - w.aggregate()[0];
}

}  // namespace

FlatPoint flatten(const UtilitySpec& u, const Bundle& c) {
  return FlatPoint{rates_of(gradient(u, c)), utility(u, c)};
}

Bundle unflatten(const UtilitySpec& u, const FlatPoint& fp) {
  return hicksian_demand(u, numeraire_prices(fp.q), fp.u);
}

PriceVector d_map(const UtilitySpec& u, const FlatPoint& fp) {
  const PriceVector p = numeraire_prices(fp.q);
  return PriceVector(p.values() / expenditure(u, p, fp.u));
}

FlatPoint d_inverse(const UtilitySpec& u, const PriceVector& p) {
  const Eigen::Index last = p.size() - 1;
  return FlatPoint{p.values().head(last) / p[last], indirect_utility_normalized(u, p)};
}

PriceVector fixed_point(const UtilitySpec& u) {
  constexpr int kMaxIterations = 10000;
  constexpr double kDamping = 0.5;
  const Eigen::Index n = u.goods();
  Vector log_c = Vector::Constant(n, -0.5 * std::log(static_cast<double>(n)));
  for (int it = 0; it < kMaxIterations; ++it) {
    const Bundle c(log_c.array().exp().matrix());
    const Vector g = gradient(u, c);
    const Vector target = (g / g.norm()).array().log().matrix();
    Vector next = (1.0 - kDamping) * log_c + kDamping * target;
    next.array() -= std::log(next.array().exp().matrix().norm());
    const double step = (next - log_c).cwiseAbs().maxCoeff();
    log_c = next;
    if (step < 1e-15) break;
  }
  const PriceVector p(log_c.array().exp().matrix());
  const double residual = (normalized_demand(u, p).values() - p.values()).norm();
  if (!(residual <= 1e-10)) {
    throw ConvergenceError("fixed-point iteration stalled with residual " + std::to_string(residual));
  }
  return p;
}

ManifoldSample sample_manifold(const UtilitySpec& u, ManifoldKind kind, const Bundle& anchor,
                               std::span<const Vector> grid) {
  const Eigen::Index n = u.goods();
  if (anchor.size() != n) throw ValidationError("anchor dimension does not match utility");
  ManifoldSample out{kind, anchor, {}};
  out.points.reserve(grid.size());
  const double level = utility(u, anchor);
  const Vector r = inverse_normalized_demand(u, anchor).values();
  for (const Vector& g : grid) {
    if (g.size() != n - 1) throw ValidationError("manifold grid entries need L-1 coordinates");
    require_positive(g, "manifold grid entry");
    switch (kind) {
      case ManifoldKind::Indifference:
        out.points.push_back(hicksian_demand(u, numeraire_prices(g), level));
        break;
      case ManifoldKind::Offer:
        out.points.push_back(budget_demand(u, numeraire_prices(g), anchor));
        break;
      case ManifoldKind::TradeHyperplane: {
        const double last = (1.0 - r.head(n - 1).dot(g)) / r[n - 1];
        if (!(last > kCoordinateFloor)) break;
        Vector y(n);
        y.head(n - 1) = g;
        y[n - 1] = last;
        out.points.emplace_back(std::move(y));
        break;
      }
    }
  }
  return out;
}

double manifold_residual(const UtilitySpec& u, ManifoldKind kind, const Bundle& anchor, const Bundle& point) {
  switch (kind) {
    case ManifoldKind::Indifference:
      return utility(u, point) - utility(u, anchor);
    case ManifoldKind::Offer:
      return inverse_normalized_demand(u, point).values().dot(anchor.values()) - 1.0;
    case ManifoldKind::TradeHyperplane:
      return inverse_normalized_demand(u, anchor).values().dot(point.values()) - 1.0;
  }
  return 0.0;
}

Vector indirect_utility_gradient(const UtilitySpec& u, const PriceVector& p) {
  return -lambda_n(u, p) * normalized_demand(u, p).values();
}

Matrix indirect_utility_hessian(const UtilitySpec& u, const PriceVector& p) {
  const Eigen::Index n = p.size();
  Matrix h(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double step = 1e-5 * p[k];
    Vector up = p.values();
    Vector down = p.values();
    up[k] += step;
    down[k] -= step;
    h.col(k) = (indirect_utility_gradient(u, PriceVector(up)) - indirect_utility_gradient(u, PriceVector(down))) /
               (2.0 * step);
  }
  return 0.5 * (h + h.transpose());
}

Matrix jacobian_phi(const UtilitySpec& u, const Bundle& anchor, const PriceVector& p) {
  const double e = expenditure(u, p, utility(u, anchor));
  const PriceVector pt(p.values() / e);
  const Vector h = normalized_demand(u, pt).values();
  const Eigen::Index n = p.size();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix left = id - h * pt.values().transpose();
  const Matrix right = id - pt.values() * h.transpose();
  return -left * indirect_utility_hessian(u, pt) * right / (e * lambda_n(u, pt));
}

Matrix jacobian_psi(const UtilitySpec& u, const Bundle& anchor, const PriceVector& p) {
  const double wealth = p.values().dot(anchor.values());
  const PriceVector ps(p.values() / wealth);
  const Vector x = normalized_demand(u, ps).values();
  const Eigen::Index n = p.size();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix left = id - x * ps.values().transpose();
  const Matrix right = id - ps.values() * anchor.values().transpose();
  return -left * indirect_utility_hessian(u, ps) * right / (wealth * lambda_n(u, ps)) -
         x * (x - anchor.values()).transpose() / wealth;
}

bool omega_contains(const UtilitySpec& u, const Bundle& anchor, const PriceVector& p) {
  return indirect_utility_normalized(u, p) <= utility(u, anchor) + 1e-12;
}

bool gamma_contains(const UtilitySpec& u, const Bundle& anchor, const FlatPoint& fp) {
  const PriceVector p = numeraire_prices(fp.q);
  return p.values().dot(anchor.values()) <= expenditure(u, p, fp.u) + 1e-12;
}

double k_c(const UtilitySpec& u, const Bundle& anchor, const Vector& q) {
  const PriceVector p = numeraire_prices(q);
  return indirect_utility_normalized(u, PriceVector(p.values() / p.values().dot(anchor.values())));
}

ParetoPoint sample_pareto(std::span<const UtilitySpec> specs, const Vector& q, const Vector& levels) {
  if (specs.size() < 2) throw ValidationError("a Pareto point needs at least two households");
  if (static_cast<std::size_t>(levels.size()) != specs.size()) {
    throw ValidationError("one utility level per household is required");
  }
  const PriceVector p = numeraire_prices(q);
  std::vector<Bundle> bundles;
  bundles.reserve(specs.size());
  for (std::size_t h = 0; h < specs.size(); ++h) {
    bundles.push_back(hicksian_demand(specs[h], p, levels[static_cast<Eigen::Index>(h)]));
  }
  return ParetoPoint{q, levels, Allocation(std::move(bundles))};
}

std::vector<Allocation> contract_curve_2x2(const UtilitySpec& a, const UtilitySpec& b, const Vector& aggregate,
                                           int grid_size) {
  if (a.goods() != 2 || b.goods() != 2 || aggregate.size() != 2) {
    throw ValidationError("contract_curve_2x2 needs two goods");
  }
  if (grid_size < 1) throw ValidationError("grid_size must be positive");
  require_positive(aggregate, "aggregate endowment");
  std::vector<Allocation> curve;
  curve.reserve(static_cast<std::size_t>(grid_size));
  for (int k = 0; k < grid_size; ++k) {
    const double t = aggregate[0] * (k + 0.5) / grid_size;
    // Household 1's rate rises with its good-2 holding while household 2's falls.
    double lo = 0.0;
    double hi = aggregate[1];
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double gap =
          log_rate_gap(a, Bundle{t, mid}, b, Bundle{aggregate[0] - t, aggregate[1] - mid});
      if (gap < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double s = 0.5 * (lo + hi);
    curve.emplace_back(std::vector<Bundle>{Bundle{t, s}, Bundle{aggregate[0] - t, aggregate[1] - s}});
  }
  return curve;
}

WalrasEquilibrium walras_equilibrium_2x2(const UtilitySpec& a, const UtilitySpec& b, const Allocation& endowments) {
  if (a.goods() != 2 || b.goods() != 2 || endowments.households() != 2 || endowments.goods() != 2) {
    throw ValidationError("walras_equilibrium_2x2 needs two households and two goods");
  }
  const Vector ga = gradient(a, endowments[0]);
  const Vector gb = gradient(b, endowments[1]);
  const double ra = ga[0] / ga[1];
  const double rb = gb[0] / gb[1];
  double lo = std::min(ra, rb);
  double hi = std::max(ra, rb);
  if (hi - lo <= 1e-12 * hi) return WalrasEquilibrium{lo, endowments};

  const double z_lo = excess_good1(a, b, endowments, lo);
  const double z_hi = excess_good1(a, b, endowments, hi);
  if (!(z_lo >= 0.0 && z_hi <= 0.0)) {
    throw ConvergenceError("excess demand does not change sign over the rate interval");
  }
  for (int it = 0; it < 400; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (mid <= lo || mid >= hi) break;
    if (excess_good1(a, b, endowments, mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double z_l = std::abs(excess_good1(a, b, endowments, lo));
  const double z_h = std::abs(excess_good1(a, b, endowments, hi));
  const double q = z_l <= z_h ? lo : hi;
  const double residual = std::min(z_l, z_h);
  if (!(residual <= 1e-10 * std::max(1.0, endowments.aggregate()[0]))) {
    throw ConvergenceError("market clearing residual " + std::to_string(residual) + " above 1e-10");
  }
  const PriceVector p{q, 1.0};
  return WalrasEquilibrium{
      q, Allocation(std::vector<Bundle>{budget_demand(a, p, endowments[0]), budget_demand(b, p, endowments[1])})};
}

}  // namespace sntp
