#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace dobrushin {

/// minimize c.x subject to A x = b, x >= 0.
struct LinearProgram {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

enum class PivotRule {
  /// Smallest-index entering and leaving variables. Never cycles.
  kBland,
  /// Most negative reduced cost; falls back to Bland's rule during long runs
  /// of degenerate pivots, so it also terminates.
  kDantzig,
};

struct SimplexOptions {
  PivotRule rule = PivotRule::kBland;
  /// Pivot budget before reporting degenerate-cycling. Zero picks a bound
  /// from the problem size.
  std::size_t max_iterations = 0;
};

struct SimplexSolution {
  Eigen::VectorXd x;
  double value = 0.0;
  /// Basic column indices, one per independent equality row.
  std::vector<std::size_t> basis;
  /// Row duals y with c_j - y.A_j >= 0 at optimality; zero on dropped rows.
  Eigen::VectorXd duals;
  /// Indices of the rows kept after redundant-row elimination.
  std::vector<std::size_t> kept_rows;
  std::size_t iterations = 0;
};

/**
 * Revised primal simplex.
 *
 * Linearly dependent equality rows are removed first (an inconsistent
 * dependent row means the program is infeasible). Without an initial basis a
 * phase-one program with artificial columns finds one. A supplied basis must
 * be primal feasible. Terminates when every reduced cost c_j - z_j is at
 * least -1e-10.
 *
 * Throws infeasible-program, unbounded-program, degenerate-cycling, or
 * invalid-argument for malformed input.
 */
SimplexSolution simplex_solve(const LinearProgram& lp,
                              const std::optional<std::vector<std::size_t>>& initial_basis = {},
                              const SimplexOptions& options = {});

}  // namespace dobrushin
