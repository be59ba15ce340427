#include "sntp/prefs.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace sntp {

namespace {

void require_dims(const UtilitySpec& u, Eigen::Index n, const char* what) {
  if (n != u.goods()) {
    throw ValidationError(std::string(what) + " has " + std::to_string(n) + " goods, utility expects " +
                          std::to_string(u.goods()));
  }
}

double ces_sigma(const UtilitySpec& u) { return *u.elasticity(); }

// S = sum a_i c_i^s
double ces_aggregate(const UtilitySpec& u, const Vector& c) {
  const double s = ces_sigma(u);
  double total = 0.0;
  for (Eigen::Index i = 0; i < c.size(); ++i) total += u.weights()[i] * std::pow(c[i], s);
  return total;
}

double log_sum_exp(const Vector& v) {
  const double m = v.maxCoeff();
  return m + std::log((v.array() - m).exp().sum());
}

double canonical_utility(const UtilitySpec& u, const Vector& c) {
  if (u.family() == Family::CobbDouglasLog) {
    return (u.weights().array() * c.array().log()).sum();
  }
  return std::pow(ces_aggregate(u, c), 1.0 / ces_sigma(u));
}

Vector canonical_gradient(const UtilitySpec& u, const Vector& c) {
  if (u.family() == Family::CobbDouglasLog) {
    return (u.weights().array() / c.array()).matrix();
  }
  const double s = ces_sigma(u);
  const double scale = std::pow(ces_aggregate(u, c), 1.0 / s - 1.0);
  return (scale * u.weights().array() * c.array().pow(s - 1.0)).matrix();
}

Matrix canonical_hessian(const UtilitySpec& u, const Vector& c) {
  if (u.family() == Family::CobbDouglasLog) {
    return (-(u.weights().array() / c.array().square())).matrix().asDiagonal();
  }
  const double s = ces_sigma(u);
  const double agg = ces_aggregate(u, c);
  const Vector theta = (u.weights().array() * c.array().pow(s - 1.0)).matrix();
  const Vector curv = (u.weights().array() * c.array().pow(s - 2.0)).matrix();
  Matrix h = (1.0 - s) * std::pow(agg, 1.0 / s - 2.0) * theta * theta.transpose();
  h.diagonal() -= (1.0 - s) * std::pow(agg, 1.0 / s - 1.0) * curv;
  return h;
}

}  // namespace

UtilitySpec::UtilitySpec(Family family, Vector weights, std::optional<double> elasticity)
    : family_(family), weights_(std::move(weights)), elasticity_(elasticity) {
  if (weights_.size() < 2) throw ValidationError("utility needs at least two goods");
  for (Eigen::Index i = 0; i < weights_.size(); ++i) {
    if (!std::isfinite(weights_[i]) || weights_[i] <= 0.0) {
      throw ValidationError("utility weights must be strictly positive");
    }
  }
  if (std::abs(weights_.sum() - 1.0) > 1e-12) throw ValidationError("utility weights must sum to 1");
  if (family_ == Family::Ces) {
    if (!elasticity_ || !(*elasticity_ > 0.0 && *elasticity_ < 1.0)) {
      throw ValidationError("CES elasticity must lie strictly inside (0, 1)");
    }
  }
}

UtilitySpec UtilitySpec::cobb_douglas(Vector weights) {
  return UtilitySpec(Family::CobbDouglasLog, std::move(weights), std::nullopt);
}

UtilitySpec UtilitySpec::ces(Vector weights, double sigma) {
  return UtilitySpec(Family::Ces, std::move(weights), sigma);
}

double utility(const UtilitySpec& u, const Bundle& c, Representation rep) {
  require_dims(u, c.size(), "bundle");
  const double v = canonical_utility(u, c.values());
  return rep == Representation::Canonical ? v : std::exp(v);
}

Vector gradient(const UtilitySpec& u, const Bundle& c, Representation rep) {
  require_dims(u, c.size(), "bundle");
  Vector g = canonical_gradient(u, c.values());
  if (rep == Representation::Exponential) g *= std::exp(canonical_utility(u, c.values()));
  return g;
}

Matrix hessian(const UtilitySpec& u, const Bundle& c, Representation rep) {
  require_dims(u, c.size(), "bundle");
  Matrix h = canonical_hessian(u, c.values());
  if (rep == Representation::Exponential) {
    const Vector g = canonical_gradient(u, c.values());
    h = std::exp(canonical_utility(u, c.values())) * (g * g.transpose() + h);
  }
  return h;
}

Bundle normalized_demand(const UtilitySpec& u, const PriceVector& p) {
  require_dims(u, p.size(), "price vector");
  if (u.family() == Family::CobbDouglasLog) {
    return Bundle((u.weights().array() / p.values().array()).matrix());
  }
  const double eta = 1.0 / (1.0 - ces_sigma(u));
  const Vector log_a = u.weights().array().log().matrix();
  const Vector log_p = p.values().array().log().matrix();
  const double log_den = log_sum_exp(eta * log_a + (1.0 - eta) * log_p);
  return Bundle((eta * (log_a - log_p).array() - log_den).exp().matrix());
}

PriceVector inverse_normalized_demand(const UtilitySpec& u, const Bundle& c) {
  require_dims(u, c.size(), "bundle");
  const Vector g = canonical_gradient(u, c.values());
  return PriceVector(g / g.dot(c.values()));
}

bool reachable(const UtilitySpec& u, double target) {
  if (!std::isfinite(target)) return false;
  return u.family() == Family::CobbDouglasLog || target > 0.0;
}

double expenditure(const UtilitySpec& u, const PriceVector& p, double target) {
  if (!reachable(u, target)) {
    throw UnreachableUtility("utility level " + std::to_string(target) + " is outside the family's range");
  }
  const double vn = indirect_utility_normalized(u, p);
  // x_n is homogeneous of degree -1, so v_n(p / e) is v_n(p) + ln e (log form) or e v_n(p) (CES).
  const double e = u.family() == Family::CobbDouglasLog ? std::exp(target - vn) : target / vn;
  if (!std::isfinite(e) || e < kCoordinateFloor) throw DomainError("expenditure left the representable range");
  return e;
}

Bundle hicksian_demand(const UtilitySpec& u, const PriceVector& p, double target) {
  const double e = expenditure(u, p, target);
  return normalized_demand(u, PriceVector(p.values() / e));
}

double indirect_utility_normalized(const UtilitySpec& u, const PriceVector& p) {
  return utility(u, normalized_demand(u, p));
}

double lambda_n(const UtilitySpec& u, const PriceVector& p) {
  const Bundle x = normalized_demand(u, p);
  return canonical_gradient(u, x.values()).dot(x.values());
}

Bundle budget_demand(const UtilitySpec& u, const PriceVector& p, const Bundle& y) {
  require_dims(u, y.size(), "bundle");
  return normalized_demand(u, PriceVector(p.values() / p.values().dot(y.values())));
}

bool check_sharp(const UtilitySpec& u, const Bundle& y, const PriceVector& p) {
  const Vector r = inverse_normalized_demand(u, y).values();
  const Vector excess = budget_demand(u, p, y).values() - y.values();
  const Eigen::Index n = r.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double implied = p[j] * r[i] / r[j];
      hi = std::max(hi, implied);
      lo = std::min(lo, implied);
    }
    if (p[i] > hi * (1.0 + kSharpMargin) && !(excess[i] < 0.0)) return false;
    if (p[i] < lo * (1.0 - kSharpMargin) && !(excess[i] > 0.0)) return false;
  }
  return true;
}

double attractive_form(const UtilitySpec& u, const Bundle& y, const PriceVector& p, int i, int j,
                       Representation rep) {
  const Eigen::Index n = u.goods();
  if (i < 0 || j < 0 || i >= n || j >= n) throw ValidationError("good index out of range");
  if (i == j) throw ValidationError("attractiveness needs two distinct goods");
  const Vector r = inverse_normalized_demand(u, y).values();
  const Vector d = budget_demand(u, p, y).values() - y.values();
  const Vector hd = hessian(u, y, rep) * d;
  return (r[i] / r[j] - p[i] / p[j]) * (r[j] * hd[i] - r[i] * hd[j]);
}

bool check_attractive(const UtilitySpec& u, const Bundle& y, const PriceVector& p, int i, int j,
                      Representation rep) {
  return attractive_form(u, y, p, i, j, rep) <= kAttractiveSlack;
}

}  // namespace sntp
