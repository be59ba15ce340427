#include "sntp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace sntp {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-12;
constexpr int kMaxPivots = 20000;

class Tableau {
 public:
  Tableau(Eigen::Index rows, Eigen::Index cols) : t_(Matrix::Zero(rows + 1, cols + 1)), basis_(rows, -1) {}

  double& at(Eigen::Index r, Eigen::Index c) { return t_(r, c); }
  double& rhs(Eigen::Index r) { return t_(r, t_.cols() - 1); }
  double& cost(Eigen::Index c) { return t_(t_.rows() - 1, c); }
  double value() { return t_(t_.rows() - 1, t_.cols() - 1); }
  Eigen::Index rows() const { return t_.rows() - 1; }
  Eigen::Index cols() const { return t_.cols() - 1; }
  std::vector<Eigen::Index>& basis() { return basis_; }

  void pivot(Eigen::Index r, Eigen::Index c) {
    const double pivot_value = t_(r, c);
    t_.row(r) /= pivot_value;
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      const double factor = t_(i, c);
      if (i != r && factor != 0.0) t_.row(i) -= factor * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  // Loads a maximization objective over columns and prices out the basis.
  void set_objective(const Vector& c) {
    t_.row(t_.rows() - 1).setZero();
    for (Eigen::Index j = 0; j < c.size(); ++j) cost(j) = -c[j];
    for (Eigen::Index i = 0; i < rows(); ++i) {
      const Eigen::Index b = basis_[static_cast<std::size_t>(i)];
      const double factor = b >= 0 ? cost(b) : 0.0;
      if (factor != 0.0) t_.row(t_.rows() - 1) -= factor * t_.row(i);
    }
  }

  // Bland's rule iterations over columns [0, allowed).
  void optimize(Eigen::Index allowed) {
    for (int it = 0; it < kMaxPivots; ++it) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < allowed; ++j) {
        if (cost(j) < -kCostTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return;
      Eigen::Index leave = -1;
      double best = 0.0;
      for (Eigen::Index i = 0; i < rows(); ++i) {
        if (basis_[static_cast<std::size_t>(i)] < 0) continue;
        const double a = at(i, enter);
        if (a <= kPivotTol) continue;
        const double ratio = std::max(rhs(i), 0.0) / a;
        if (leave < 0 || ratio < best - 1e-15 ||
            (ratio <= best + 1e-15 && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) throw LpError("linear program is unbounded");
      pivot(leave, enter);
      if (!t_.allFinite()) throw LpError("simplex tableau lost finiteness");
    }
    throw LpError("simplex exceeded its pivot budget");
  }

 private:
  Matrix t_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace

LpResult solve_lp(const LpProblem& problem) {
  const Eigen::Index m = problem.a_eq.rows();
  const Eigen::Index n = problem.a_eq.cols();
  if (problem.b_eq.size() != m || problem.objective.size() != n || problem.upper.size() != n) {
    throw ValidationError("linear program dimensions are inconsistent");
  }
  if ((problem.upper.array() < 0.0).any()) throw ValidationError("upper bounds must be nonnegative");
  if (!problem.a_eq.allFinite() || !problem.b_eq.allFinite() || !problem.objective.allFinite()) {
    throw LpError("linear program has non-finite data");
  }

  // Columns: x [0, n), upper slacks [n, 2n), artificials [2n, 2n + m).
  const Eigen::Index rows = m + n;
  const Eigen::Index cols = 2 * n + m;
  Tableau tab(rows, cols);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sign = problem.b_eq[i] < 0.0 ? -1.0 : 1.0;
    for (Eigen::Index j = 0; j < n; ++j) tab.at(i, j) = sign * problem.a_eq(i, j);
    tab.at(i, 2 * n + i) = 1.0;
    tab.rhs(i) = sign * problem.b_eq[i];
    tab.basis()[static_cast<std::size_t>(i)] = 2 * n + i;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    tab.at(m + k, k) = 1.0;
    tab.at(m + k, n + k) = 1.0;
    tab.rhs(m + k) = problem.upper[k];
    tab.basis()[static_cast<std::size_t>(m + k)] = n + k;
  }

  Vector phase_one = Vector::Zero(cols);
  phase_one.tail(m).setConstant(-1.0);
  tab.set_objective(phase_one);
  tab.optimize(cols);
  const double scale = 1.0 + problem.b_eq.cwiseAbs().sum();
  if (tab.value() < -1e-9 * scale) return LpResult{LpStatus::Infeasible, 0.0, Vector()};

  // Drive artificials out of the basis; rows where that is impossible are redundant.
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Eigen::Index b = tab.basis()[static_cast<std::size_t>(i)];
    if (b < 2 * n) continue;
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < 2 * n; ++j) {
      if (std::abs(tab.at(i, j)) > kPivotTol) {
        enter = j;
        break;
      }
    }
    if (enter >= 0) {
      tab.pivot(i, enter);
    } else {
      tab.basis()[static_cast<std::size_t>(i)] = -1;
    }
  }

  Vector phase_two = Vector::Zero(cols);
  phase_two.head(n) = problem.objective;
  tab.set_objective(phase_two);
  tab.optimize(2 * n);

  LpResult out{LpStatus::Optimal, tab.value(), Vector::Zero(n)};
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Eigen::Index b = tab.basis()[static_cast<std::size_t>(i)];
    if (b >= 0 && b < n) out.x[b] = std::clamp(tab.rhs(i), 0.0, problem.upper[b]);
  }
  return out;
}

}  // namespace sntp
