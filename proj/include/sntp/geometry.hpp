#pragma once

#include <span>
#include <utility>
#include <vector>

#include "sntp/prefs.hpp"
#include "sntp/types.hpp"

namespace sntp {

// Image of a bundle in the flat domain: substitution rates against the
// last good, plus the utility level.
struct FlatPoint {
  Vector q;
  double u = 0.0;
};

FlatPoint flatten(const UtilitySpec& u, const Bundle& c);
Bundle unflatten(const UtilitySpec& u, const FlatPoint& fp);

// (q, 1) / e((q, 1), u)
PriceVector d_map(const UtilitySpec& u, const FlatPoint& fp);
// (p_1 / p_L, ..., p_{L-1} / p_L, v_n(p))
FlatPoint d_inverse(const UtilitySpec& u, const PriceVector& p);

// The unique p on the unit sphere with x_n(p) = p.
PriceVector fixed_point(const UtilitySpec& u);

enum class ManifoldKind { Indifference, Offer, TradeHyperplane };

struct ManifoldSample {
  ManifoldKind kind;
  Bundle anchor;
  std::vector<Bundle> points;
};

// For Indifference and Offer each grid entry is a rate vector q (length L-1).
// For TradeHyperplane each entry gives the first L-1 coordinates of the point;
// entries whose solved last coordinate is not positive are dropped.
ManifoldSample sample_manifold(const UtilitySpec& u, ManifoldKind kind, const Bundle& anchor,
                               std::span<const Vector> grid);

// Residual of the defining equation of `kind` through `anchor` at `point`.
double manifold_residual(const UtilitySpec& u, ManifoldKind kind, const Bundle& anchor, const Bundle& point);

// -lambda_n(p) x_n(p)
Vector indirect_utility_gradient(const UtilitySpec& u, const PriceVector& p);
// Central differences of indirect_utility_gradient, step 1e-5 scaled per coordinate.
Matrix indirect_utility_hessian(const UtilitySpec& u, const PriceVector& p);

// Jacobians (J_kl = d f_k / d p_l) of p -> h(p, u(anchor)) and p -> x_n(p / p.anchor).
Matrix jacobian_phi(const UtilitySpec& u, const Bundle& anchor, const PriceVector& p);
Matrix jacobian_psi(const UtilitySpec& u, const Bundle& anchor, const PriceVector& p);

bool omega_contains(const UtilitySpec& u, const Bundle& anchor, const PriceVector& p);
bool gamma_contains(const UtilitySpec& u, const Bundle& anchor, const FlatPoint& fp);
double k_c(const UtilitySpec& u, const Bundle& anchor, const Vector& q);

struct ParetoPoint {
  Vector q;
  Vector levels;
  Allocation allocation;
};

ParetoPoint sample_pareto(std::span<const UtilitySpec> specs, const Vector& q, const Vector& levels);

// Equal-rate allocations of a two-good, two-household box, swept over
// household 1's holding of good 1 on a uniform interior grid.
std::vector<Allocation> contract_curve_2x2(const UtilitySpec& a, const UtilitySpec& b, const Vector& aggregate,
                                           int grid_size);

struct WalrasEquilibrium {
  double q = 0.0;
  Allocation allocation;
};

WalrasEquilibrium walras_equilibrium_2x2(const UtilitySpec& a, const UtilitySpec& b, const Allocation& endowments);

}  // namespace sntp
