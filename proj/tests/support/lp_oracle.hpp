#pragma once

// Brute-force LP optimum over every basic solution. Independent of the
// library's simplex: plain Gaussian elimination per column subset.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

struct BasisOptimum {
  double value = std::numeric_limits<double>::infinity();
  Eigen::VectorXd x;
  bool feasible = false;
};

namespace detail {

inline void next_subset(std::vector<std::size_t>& idx, std::size_t n, bool& done) {
  const std::size_t k = idx.size();
  std::size_t i = k;
  while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
  if (i == 0) {
    done = true;
    return;
  }
  ++idx[i - 1];
  for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
}

// Keeps a maximal set of linearly independent rows of [A | b].
inline std::vector<Eigen::Index> independent_rows(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  std::vector<Eigen::Index> kept;
  Eigen::MatrixXd basis(0, A.cols() + 1);
  for (Eigen::Index r = 0; r < A.rows(); ++r) {
    Eigen::MatrixXd trial(basis.rows() + 1, A.cols() + 1);
    trial << basis, A.row(r), b(r);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(trial);
    lu.setThreshold(1e-10);
    if (lu.rank() == trial.rows()) {
      basis = trial;
      kept.push_back(r);
    }
  }
  return kept;
}

}  // namespace detail

/// min c.x s.t. A x = b, x >= 0, by enumerating all rank-many column subsets.
inline BasisOptimum enumerate_bases(const Eigen::MatrixXd& A_in, const Eigen::VectorXd& b_in,
                                    const Eigen::VectorXd& c) {
  const auto rows = detail::independent_rows(A_in, b_in);
  Eigen::MatrixXd A(static_cast<Eigen::Index>(rows.size()), A_in.cols());
  Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    A.row(static_cast<Eigen::Index>(i)) = A_in.row(rows[i]);
    b(static_cast<Eigen::Index>(i)) = b_in(rows[i]);
  }
  const auto m = static_cast<std::size_t>(A.rows());
  const auto n = static_cast<std::size_t>(A.cols());
  BasisOptimum best;
  if (m == 0 || m > n) return best;

  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i) idx[i] = i;
  for (bool done = false; !done; detail::next_subset(idx, n, done)) {
    Eigen::MatrixXd B(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t j = 0; j < m; ++j) B.col(static_cast<Eigen::Index>(j)) = A.col(static_cast<Eigen::Index>(idx[j]));
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd xb = lu.solve(b);
    if (xb.minCoeff() < -1e-10) continue;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < m; ++j) x(static_cast<Eigen::Index>(idx[j])) = std::max(0.0, xb(static_cast<Eigen::Index>(j)));
    const double v = c.dot(x);
    if (v < best.value) {
      best.value = v;
      best.x = x;
      best.feasible = true;
    }
  }
  return best;
}

/// Equality system of a balanced transportation problem, row-major cells.
inline void transport_system(const Eigen::MatrixXd& cost, const std::vector<double>& supply,
                             const std::vector<double>& demand, Eigen::MatrixXd& A,
                             Eigen::VectorXd& b, Eigen::VectorXd& c) {
  const auto m = static_cast<Eigen::Index>(supply.size());
  const auto n = static_cast<Eigen::Index>(demand.size());
  A = Eigen::MatrixXd::Zero(m + n, m * n);
  b.resize(m + n);
  c.resize(m * n);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      A(i, i * n + j) = 1.0;
      A(m + j, i * n + j) = 1.0;
      c(i * n + j) = cost(i, j);
    }
    b(i) = supply[static_cast<std::size_t>(i)];
  }
  for (Eigen::Index j = 0; j < n; ++j) b(m + j) = demand[static_cast<std::size_t>(j)];
}

}  // namespace oracle
