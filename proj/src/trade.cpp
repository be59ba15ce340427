#include "sntp/trade.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sntp/lp.hpp"

namespace sntp {

namespace {

struct Directions {
  Matrix d;  // L x H, column h is household h's trade direction
  Vector norms;
  double scale = 0.0;
};

Directions directions(const Economy& e, const Allocation& y, const PriceVector& p) {
  e.require_compatible(y);
  if (p.size() != e.goods()) throw ValidationError("price vector length does not match the economy");
  Directions out;
  out.d.resize(e.goods(), static_cast<Eigen::Index>(e.size()));
  for (std::size_t h = 0; h < e.size(); ++h) {
    out.d.col(static_cast<Eigen::Index>(h)) = budget_demand(e.utility(h), p, y[h]).values() - y[h].values();
  }
  out.norms = out.d.colwise().norm().transpose();
  out.scale = out.norms.maxCoeff();
  return out;
}

// Orthonormal basis of the hyperplane orthogonal to p, as columns.
Matrix budget_plane_basis(const PriceVector& p) {
  const Eigen::Index n = p.size();
  Eigen::HouseholderQR<Matrix> qr(p.values());
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  return q.rightCols(n - 1);
}

// Balance constraints of the speed polytope expressed inside the budget plane,
// where every trade direction lives exactly by Walras' law.
Matrix balance_matrix(const Directions& dir, const PriceVector& p) {
  return budget_plane_basis(p).transpose() * dir.d / dir.scale;
}

double balance_tolerance(const Directions& dir, const Allocation& y) {
  double size = 0.0;
  for (const auto& b : y.bundles()) size = std::max(size, b.values().cwiseAbs().maxCoeff());
  return 1e-9 * dir.scale + 1e-14 * size;
}

Vector active_bounds(const Directions& dir) {
  Vector upper(dir.norms.size());
  for (Eigen::Index h = 0; h < upper.size(); ++h) upper[h] = dir.norms[h] < kDegenerateDirection ? 0.0 : 1.0;
  return upper;
}

SpeedVector ray_speed(const Directions& dir, SpeedPrior prior, CounterRng& rng) {
  const double n1 = dir.norms[0];
  const double n2 = dir.norms[1];
  if (n1 < kDegenerateDirection || n2 < kDegenerateDirection || dir.d.col(0).dot(dir.d.col(1)) >= 0.0) {
    throw SamplingError("speed set is empty at the requested prices");
  }
  Vector ray(2);
  if (n1 >= n2) {
    ray << n2 / n1, 1.0;
  } else {
    ray << 1.0, n1 / n2;
  }
  if (prior == SpeedPrior::MaxSpeed) return SpeedVector(ray);
  const double lambda = 1.0 - rng.uniform();
  return SpeedVector(lambda * ray);
}

SpeedVector hit_and_run_speed(const Directions& dir, const PriceVector& p, SpeedPrior prior, CounterRng& rng) {
  constexpr int kBurnIn = 64;
  constexpr double kClearance = 1e-12;
  const Eigen::Index households = dir.d.cols();
  const Matrix a = balance_matrix(dir, p);
  const Vector upper = active_bounds(dir);

  // Support of the polytope and an interior start from per-coordinate maximizers.
  std::vector<Eigen::Index> support;
  Vector start = Vector::Zero(households);
  for (Eigen::Index h = 0; h < households; ++h) {
    if (upper[h] == 0.0) continue;
    LpProblem lp{a, Vector::Zero(a.rows()), Vector::Unit(households, h), upper};
    const LpResult r = solve_lp(lp);
    if (r.status == LpStatus::Optimal && r.value > kTradeThreshold) {
      support.push_back(h);
      start += r.x;
    }
  }
  if (support.empty()) throw SamplingError("speed set is empty at the requested prices");
  const auto k = static_cast<Eigen::Index>(support.size());
  Vector x(k);
  Matrix ak(a.rows(), k);
  for (Eigen::Index i = 0; i < k; ++i) {
    x[i] = 0.5 * start[support[static_cast<std::size_t>(i)]] / static_cast<double>(k);
    ak.col(i) = a.col(support[static_cast<std::size_t>(i)]);
  }

  Eigen::JacobiSVD<Matrix> svd(ak, Eigen::ComputeFullV);
  const Vector sv = svd.singularValues();
  Eigen::Index rank = 0;
  const double cutoff = sv.size() > 0 ? 1e-10 * std::max(sv[0], 1e-300) : 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > cutoff) ++rank;
  }
  const Matrix null_basis = svd.matrixV().rightCols(k - rank);

  if (null_basis.cols() > 0) {
    for (int it = 0; it < kBurnIn; ++it) {
      Vector z(null_basis.cols());
      for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
      const Vector d = null_basis * z;
      double lo = -std::numeric_limits<double>::infinity();
      double hi = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < k; ++i) {
        if (d[i] > 0.0) {
          lo = std::max(lo, -x[i] / d[i]);
          hi = std::min(hi, (1.0 - x[i]) / d[i]);
        } else if (d[i] < 0.0) {
          lo = std::max(lo, (1.0 - x[i]) / d[i]);
          hi = std::min(hi, -x[i] / d[i]);
        }
      }
      lo += kClearance;
      hi -= kClearance;
      if (!(hi > lo)) continue;
      x += (lo + (hi - lo) * rng.uniform()) * d;
    }
  }

  Vector sigma = Vector::Zero(households);
  for (Eigen::Index i = 0; i < k; ++i) sigma[support[static_cast<std::size_t>(i)]] = std::clamp(x[i], 0.0, 1.0);
  if (prior == SpeedPrior::MaxSpeed) {
    const double top = sigma.maxCoeff();
    if (!(top > 0.0)) throw SamplingError("hit-and-run collapsed to the zero speed vector");
    sigma /= top;
  }
  return SpeedVector(sigma);
}

}  // namespace

Economy::Economy(std::vector<Household> households) : households_(std::move(households)) {
  if (households_.size() < 2) throw ValidationError("an economy needs at least two households");
  const Eigen::Index l = households_.front().utility.goods();
  for (const auto& h : households_) {
    if (h.utility.goods() != l) throw ValidationError("households disagree on the number of goods");
  }
}

void Economy::require_compatible(const Allocation& y) const {
  if (y.households() != size()) throw ValidationError("allocation and economy differ in household count");
  if (y.goods() != goods()) throw ValidationError("allocation and economy differ in good count");
}

SpeedVector::SpeedVector(Vector sigma) : sigma_(std::move(sigma)) {
  for (Eigen::Index h = 0; h < sigma_.size(); ++h) {
    if (!(sigma_[h] >= 0.0 && sigma_[h] <= 1.0)) throw ValidationError("speeds must lie in [0, 1]");
  }
}

Vector trade_direction(const Economy& e, const Allocation& y, const PriceVector& p, std::size_t h) {
  e.require_compatible(y);
  if (h >= e.size()) throw ValidationError("household index out of range");
  return budget_demand(e.utility(h), p, y[h]).values() - y[h].values();
}

Bundle linear_path_point(const Economy& e, const Allocation& y, const PriceVector& p, std::size_t h, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw ValidationError("path parameter must lie in [0, 1]");
  return Bundle(y[h].values() + t * trade_direction(e, y, p, h));
}

bool speed_contains(const Economy& e, const Allocation& y, const PriceVector& p, const SpeedVector& sigma) {
  if (sigma.size() != static_cast<Eigen::Index>(e.size())) throw ValidationError("one speed per household");
  const Directions dir = directions(e, y, p);
  const double volume = sigma.values().dot(dir.norms);
  if (!(volume > 1e-12)) return false;
  return (dir.d * sigma.values()).norm() <= balance_tolerance(dir, y);
}

TradeCheck trade_check(const Economy& e, const Allocation& y, const PriceVector& p) {
  const Directions dir = directions(e, y, p);
  const auto households = static_cast<Eigen::Index>(e.size());
  if (!(dir.scale >= kDegenerateDirection)) return TradeCheck{false, 0.0, Vector::Zero(households)};
  LpProblem lp{balance_matrix(dir, p), Vector::Zero(e.goods() - 1), dir.norms / dir.scale, active_bounds(dir)};
  const LpResult r = solve_lp(lp);
  if (r.status != LpStatus::Optimal) throw LpError("speed polytope reported infeasible although it contains zero");
  return TradeCheck{r.value > kTradeThreshold, r.value, r.x};
}

bool has_trade(const Economy& e, const Allocation& y, const PriceVector& p) { return trade_check(e, y, p).trade; }

std::optional<std::pair<double, double>> trade_interval_2x2(const Economy& e, const Allocation& y, double tol) {
  if (e.size() != 2 || e.goods() != 2) throw ValidationError("trade_interval_2x2 needs two households and two goods");
  e.require_compatible(y);
  const Vector g1 = gradient(e.utility(0), y[0]);
  const Vector g2 = gradient(e.utility(1), y[1]);
  const double a = g1[0] / g1[1];
  const double b = g2[0] / g2[1];
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  if (hi / lo - 1.0 <= tol) return std::nullopt;
  return std::make_pair(lo, hi);
}

BoxSet msr_extremes(const Economy& e, const Allocation& y) {
  e.require_compatible(y);
  const Eigen::Index n = e.goods();
  BoxSet box{Matrix::Constant(n, n, std::numeric_limits<double>::infinity()),
             Matrix::Constant(n, n, -std::numeric_limits<double>::infinity())};
  for (std::size_t h = 0; h < e.size(); ++h) {
    const Vector g = gradient(e.utility(h), y[h]);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const double ratio = g[i] / g[j];
        box.lower(i, j) = std::min(box.lower(i, j), ratio);
        box.upper(i, j) = std::max(box.upper(i, j), ratio);
      }
    }
  }
  return box;
}

bool box_contains(const BoxSet& b, const Vector& q) {
  const Eigen::Index n = b.lower.rows();
  if (q.size() != n - 1) throw ValidationError("rate vector must have L-1 coordinates");
  const PriceVector p = numeraire_prices(q);
  constexpr double kSlack = 1e-12;
  for (Eigen::Index i = 0; i < n; ++i) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      lo = std::min(lo, p[j] * b.lower(i, j));
      hi = std::max(hi, p[j] * b.upper(i, j));
    }
    if (p[i] < lo * (1.0 - kSlack) || p[i] > hi * (1.0 + kSlack)) return false;
  }
  return true;
}

SpeedVector sample_speed(const Economy& e, const Allocation& y, const PriceVector& p, SpeedPrior prior,
                         CounterRng& rng) {
  const Directions dir = directions(e, y, p);
  if (!(dir.scale >= kDegenerateDirection)) throw SamplingError("no household trades at the requested prices");
  if (e.size() == 2) return ray_speed(dir, prior, rng);
  return hit_and_run_speed(dir, p, prior, rng);
}

Allocation advance(const Economy& e, const Allocation& y, const PriceVector& p, const SpeedVector& sigma) {
  if (sigma.size() != static_cast<Eigen::Index>(e.size())) throw ValidationError("one speed per household");
  const Directions dir = directions(e, y, p);
  const Vector imbalance = dir.d * sigma.values();
  if (imbalance.norm() > balance_tolerance(dir, y)) {
    throw ValidationError("speeds do not balance the joint trade path");
  }
  std::vector<Bundle> next;
  next.reserve(e.size());
  for (std::size_t h = 0; h < e.size(); ++h) {
    next.emplace_back(y[h].values() + sigma[static_cast<Eigen::Index>(h)] * dir.d.col(static_cast<Eigen::Index>(h)));
  }
  return Allocation(std::move(next));
}

double mrs_gap(const Economy& e, const Allocation& y) {
  e.require_compatible(y);
  const Eigen::Index last = e.goods() - 1;
  Vector lo = Vector::Constant(last, std::numeric_limits<double>::infinity());
  Vector hi = Vector::Constant(last, 0.0);
  for (std::size_t h = 0; h < e.size(); ++h) {
    const Vector g = gradient(e.utility(h), y[h]);
    const Vector q = g.head(last) / g[last];
    lo = lo.cwiseMin(q);
    hi = hi.cwiseMax(q);
  }
  return (hi.array() / lo.array() - 1.0).maxCoeff();
}

bool is_pareto_optimal(const Economy& e, const Allocation& y, double tol) {
  if (!(tol > 0.0)) throw ValidationError("Pareto tolerance must be positive");
  return mrs_gap(e, y) <= tol;
}

}  // namespace sntp
