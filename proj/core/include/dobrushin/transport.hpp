#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dobrushin/finite_measure.hpp"
#include "dobrushin/simplex.hpp"

namespace dobrushin {

enum class TransportBackend {
  /// Transportation simplex on a spanning-tree basis (u-v potentials).
  kTree,
  /// Generic revised simplex on the explicit equality system. Quadratic
  /// memory in the number of cells, so only for small instances.
  kDense,
};

enum class InitialBasis { kNorthWestCorner, kLeastCost };

struct TransportOptions {
  TransportBackend backend = TransportBackend::kTree;
  /// Dantzig prices a rotating block of rows rather than every cell.
  PivotRule rule = PivotRule::kDantzig;
  /// Starting basis for the tree backend; the dense backend always starts
  /// from the north-west corner.
  InitialBasis initial = InitialBasis::kLeastCost;
  /// Zero picks a budget from the problem size.
  std::size_t max_iterations = 0;
};

struct TransportResult {
  double value = 0.0;
  Coupling coupling;
  /// 1-Lipschitz potentials f with sum_i (mu_i - nu_i) f_i equal to value.
  std::vector<double> potentials;
  double dual_value = 0.0;
  std::size_t iterations = 0;
};

/// Optimal flows of a balanced transportation problem.
struct TransportPlan {
  Eigen::MatrixXd flow;
  /// Row and column duals with u_i + v_j <= cost(i,j), equality on the basis.
  Eigen::VectorXd u;
  Eigen::VectorXd v;
  std::size_t iterations = 0;
};

/// North-west-corner rule. Returns m + n - 1 basic cells (row-major indices)
/// forming a spanning tree, possibly with zero flow on some of them.
std::vector<std::size_t> north_west_corner(std::span<const double> supply,
                                           std::span<const double> demand,
                                           Eigen::MatrixXd* flow = nullptr);

/// Least-cost rule: cells are visited by increasing cost (ties by index)
/// and each allocation closes one row or column. Also a spanning tree.
std::vector<std::size_t> least_cost_start(const Eigen::MatrixXd& cost,
                                          std::span<const double> supply,
                                          std::span<const double> demand,
                                          Eigen::MatrixXd* flow = nullptr);

/// min sum cost.flow subject to row sums = supply, column sums = demand.
/// Supply and demand totals must agree to 1e-9; the demand is rescaled to
/// match exactly.
TransportPlan solve_transport(const Eigen::MatrixXd& cost, std::span<const double> supply,
                              std::span<const double> demand, const TransportOptions& options = {});

/// Exact W1 between two measures on a common finite space.
///
/// Mass min(mu_s, nu_s) stays in place; the remaining transport runs between
/// the surplus and deficit supports only. Dual potentials are extended to the
/// whole space by f(x) = min_y (f(y) + d(x, y)) over deficit points y.
TransportResult wasserstein_lp(const ProbabilityVector& mu, const ProbabilityVector& nu,
                               const TransportOptions& options = {});

/// Same, with ground distances taken from a product space of matching size.
TransportResult wasserstein_lp(const ProductMetricSpace& space, const ProbabilityVector& mu,
                               const ProbabilityVector& nu, const TransportOptions& options = {});

/// Closed form 1/2 sum |mu - nu|; the space must carry the discrete metric.
double discrete_metric_w1(const ProbabilityVector& mu, const ProbabilityVector& nu);

/// Optimal coupling for the discrete metric: the diagonal holds
/// min(mu_s, nu_s) and the surplus is spread over the deficit points in a
/// staircase, so off-diagonal mass only moves from surplus to deficit states.
Coupling pottlem_coupling(const ProbabilityVector& mu, const ProbabilityVector& nu);

struct DualCertificate {
  std::vector<double> potentials;
  double value = 0.0;
};

DualCertificate kr_dual(const ProbabilityVector& mu, const ProbabilityVector& nu);

/// Trapezoidal integral of |F - G| over an increasing grid. Both CDFs must
/// be non-decreasing, lie in [0, 1], and run from about 0 to about 1.
double w1_cdf_1d(std::span<const double> F, std::span<const double> G,
                 std::span<const double> grid);

}  // namespace dobrushin
