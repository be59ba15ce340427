#include "sntp/types.hpp"

#include <cmath>
#include <string>

namespace sntp {

void require_positive(const Vector& v, const char* what) {
  if (v.size() == 0) throw ValidationError(std::string(what) + " is empty");
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double x = v[i];
    if (!std::isfinite(x)) {
      throw DomainError(std::string(what) + " coordinate " + std::to_string(i) + " is not finite");
    }
    if (x <= 0.0) {
      throw ValidationError(std::string(what) + " coordinate " + std::to_string(i) +
                            " is not strictly positive");
    }
    if (x < kCoordinateFloor) {
      throw DomainError(std::string(what) + " coordinate " + std::to_string(i) +
                        " fell below 1e-300");
    }
  }
}

PriceVector numeraire_prices(const Vector& q) {
  Vector p(q.size() + 1);
  p.head(q.size()) = q;
  p[q.size()] = 1.0;
  return PriceVector(std::move(p));
}

Allocation::Allocation(std::vector<Bundle> bundles) : bundles_(std::move(bundles)) {
  if (bundles_.empty()) throw ValidationError("allocation has no households");
  const Eigen::Index l = bundles_.front().size();
  for (const auto& b : bundles_) {
    if (b.size() != l) throw ValidationError("allocation bundles differ in length");
  }
}

Vector Allocation::aggregate() const {
  Vector total = Vector::Zero(goods());
  for (const auto& b : bundles_) total += b.values();
  return total;
}

}  // namespace sntp
