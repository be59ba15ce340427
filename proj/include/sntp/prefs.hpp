#pragma once

#include <optional>

#include "sntp/types.hpp"

namespace sntp {

enum class Family { CobbDouglasLog, Ces };

// Preference of one household: u(c) = sum a_i ln c_i, or
// u(c) = (sum a_i c_i^s)^(1/s) with s in (0, 1).
class UtilitySpec {
 public:
  static UtilitySpec cobb_douglas(Vector weights);
  static UtilitySpec ces(Vector weights, double sigma);

  Family family() const { return family_; }
  const Vector& weights() const { return weights_; }
  // Present only for CES.
  std::optional<double> elasticity() const { return elasticity_; }
  Eigen::Index goods() const { return weights_.size(); }

 private:
  UtilitySpec(Family family, Vector weights, std::optional<double> elasticity);

  Family family_ = Family::CobbDouglasLog;
  Vector weights_;
  std::optional<double> elasticity_;
};

// Canonical is the family's own formula; Exponential evaluates exp(u(c)),
// the multiplicative Cobb-Douglas form when the family is CobbDouglasLog.
enum class Representation { Canonical, Exponential };

double utility(const UtilitySpec& u, const Bundle& c, Representation rep = Representation::Canonical);
Vector gradient(const UtilitySpec& u, const Bundle& c, Representation rep = Representation::Canonical);
Matrix hessian(const UtilitySpec& u, const Bundle& c, Representation rep = Representation::Canonical);

// Walrasian demand at unit wealth, x_n(p) = x(p, 1).
Bundle normalized_demand(const UtilitySpec& u, const PriceVector& p);
// grad u(c) / (grad u(c) . c)
PriceVector inverse_normalized_demand(const UtilitySpec& u, const Bundle& c);
Bundle hicksian_demand(const UtilitySpec& u, const PriceVector& p, double target);
double expenditure(const UtilitySpec& u, const PriceVector& p, double target);
double indirect_utility_normalized(const UtilitySpec& u, const PriceVector& p);
double lambda_n(const UtilitySpec& u, const PriceVector& p);

// Demand when the household sells y at prices p: x_n(p / (p . y)).
Bundle budget_demand(const UtilitySpec& u, const PriceVector& p, const Bundle& y);

// Does the utility range contain `target`? (CES needs target > 0.)
bool reachable(const UtilitySpec& u, double target);

bool check_sharp(const UtilitySpec& u, const Bundle& y, const PriceVector& p);

// Value of the bilinear form whose sign defines attractiveness for the pair (i, j).
double attractive_form(const UtilitySpec& u, const Bundle& y, const PriceVector& p, int i, int j,
                       Representation rep = Representation::Canonical);
bool check_attractive(const UtilitySpec& u, const Bundle& y, const PriceVector& p, int i, int j,
                      Representation rep = Representation::Canonical);

inline constexpr double kAttractiveSlack = 1e-10;
// Relative margin an antecedent of check_sharp must clear before it counts as triggered.
inline constexpr double kSharpMargin = 1e-12;

}  // namespace sntp
