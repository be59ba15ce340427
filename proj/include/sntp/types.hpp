#pragma once

#include <Eigen/Dense>

#include <initializer_list>
#include <vector>

#include "sntp/errors.hpp"

namespace sntp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kCoordinateFloor = 1e-300;

// Throws ValidationError for non-positive entries and DomainError for
// non-finite entries or entries in (0, 1e-300).
void require_positive(const Vector& v, const char* what);

// Strictly positive vector with a compile-time role tag, so bundles and
// prices cannot be swapped by accident.
template <class Tag>
class PositiveVector {
 public:
  PositiveVector() = default;
  explicit PositiveVector(Vector values) : v_(std::move(values)) {
    require_positive(v_, Tag::name);
  }
  PositiveVector(std::initializer_list<double> values) : v_(static_cast<Eigen::Index>(values.size())) {
    Eigen::Index i = 0;
    for (double x : values) v_[i++] = x;
    require_positive(v_, Tag::name);
  }

  const Vector& values() const { return v_; }
  double operator[](Eigen::Index i) const { return v_[i]; }
  Eigen::Index size() const { return v_.size(); }

  bool operator==(const PositiveVector& o) const {
    return v_.size() == o.v_.size() && v_ == o.v_;
  }

 private:
  Vector v_;
};

struct BundleTag {
  static constexpr const char* name = "bundle";
};
struct PriceTag {
  static constexpr const char* name = "price vector";
};

using Bundle = PositiveVector<BundleTag>;
using PriceVector = PositiveVector<PriceTag>;

// (q, 1): price vector whose last good is the numeraire.
PriceVector numeraire_prices(const Vector& q);

// H strictly positive bundles over the same L goods.
class Allocation {
 public:
  Allocation() = default;
  explicit Allocation(std::vector<Bundle> bundles);

  const std::vector<Bundle>& bundles() const { return bundles_; }
  const Bundle& operator[](std::size_t h) const { return bundles_[h]; }
  std::size_t households() const { return bundles_.size(); }
  Eigen::Index goods() const { return bundles_.empty() ? 0 : bundles_.front().size(); }
  Vector aggregate() const;

  bool operator==(const Allocation& o) const { return bundles_ == o.bundles_; }

 private:
  std::vector<Bundle> bundles_;
};

}  // namespace sntp
