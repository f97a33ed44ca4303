#include "dobrushin/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dobrushin/errors.hpp"
#include "dobrushin/tolerances.hpp"

namespace dobrushin {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr std::size_t kRefactorEvery = 64;
constexpr std::size_t kDegenerateRunBeforeBland = 50;

struct RowSelection {
  std::vector<std::size_t> kept;
  bool inconsistent = false;
};

// Reduced row echelon elimination over [A | b] to find a maximal set of
// independent equality rows.
RowSelection independent_rows(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  const double rank_tol = 1e-9 * scale;

  Eigen::MatrixXd echelon(0, n + 1);
  std::vector<Eigen::Index> pivots;
  RowSelection sel;
  for (Eigen::Index r = 0; r < m; ++r) {
    Eigen::RowVectorXd row(n + 1);
    row << A.row(r), b(r);
    for (Eigen::Index k = 0; k < echelon.rows(); ++k) {
      const double f = row(pivots[static_cast<std::size_t>(k)]);
      if (f != 0.0) row -= f * echelon.row(k);
    }
    Eigen::Index p = 0;
    const double peak = row.head(n).cwiseAbs().maxCoeff(&p);
    if (peak <= rank_tol) {
      if (std::abs(row(n)) > tol::kLpFeasibility * std::max(1.0, b.cwiseAbs().maxCoeff())) {
        sel.inconsistent = true;
      }
      continue;
    }
    row /= row(p);
    for (Eigen::Index k = 0; k < echelon.rows(); ++k) {
      const double f = echelon(k, p);
      if (f != 0.0) echelon.row(k) -= f * row;
    }
    echelon.conservativeResize(echelon.rows() + 1, Eigen::NoChange);
    echelon.row(echelon.rows() - 1) = row;
    pivots.push_back(p);
    sel.kept.push_back(static_cast<std::size_t>(r));
  }
  return sel;
}

enum class PhaseStatus { kOptimal, kUnbounded };

// Working state of the revised simplex: basis, explicit inverse, basic values.
class Tableau {
 public:
  Tableau(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, std::vector<std::size_t> basis)
      : A_(A), b_(b), basis_(std::move(basis)) {
    refactor();
  }

  bool refactor() {
    const auto m = static_cast<Eigen::Index>(basis_.size());
    Eigen::MatrixXd B(m, m);
    for (Eigen::Index i = 0; i < m; ++i) B.col(i) = A_.col(static_cast<Eigen::Index>(basis_[i]));
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    if (lu.rank() < m) return false;
    Binv_ = lu.inverse();
    xB_ = Binv_ * b_;
    return true;
  }

  PhaseStatus run(const Eigen::VectorXd& c, std::size_t allowed_cols, const SimplexOptions& opt,
                  std::size_t budget, std::size_t& iterations) {
    const auto n = static_cast<std::size_t>(A_.cols());
    const auto m = basis_.size();
    std::vector<char> is_basic(n, 0);
    for (auto j : basis_) is_basic[j] = 1;
    std::size_t degenerate_run = 0;
    std::size_t since_refactor = 0;

    while (true) {
      Eigen::VectorXd cB(static_cast<Eigen::Index>(m));
      for (std::size_t i = 0; i < m; ++i) cB(static_cast<Eigen::Index>(i)) = c(static_cast<Eigen::Index>(basis_[i]));
      const Eigen::VectorXd y = Binv_.transpose() * cB;

      const bool use_bland =
          opt.rule == PivotRule::kBland || degenerate_run >= kDegenerateRunBeforeBland;
      std::size_t entering = n;
      double best = -tol::kLpOptimality;
      for (std::size_t j = 0; j < allowed_cols; ++j) {
        if (is_basic[j]) continue;
        const double reduced = c(static_cast<Eigen::Index>(j)) - y.dot(A_.col(static_cast<Eigen::Index>(j)));
        if (reduced < best) {
          entering = j;
          if (use_bland) break;
          best = reduced;
        }
      }
      if (entering == n) return PhaseStatus::kOptimal;

      if (iterations >= budget) {
        fail(ErrorCode::kDegenerateCycling, "simplex pivot budget exhausted");
      }

      const Eigen::VectorXd alpha = Binv_ * A_.col(static_cast<Eigen::Index>(entering));
      std::size_t leave = m;
      double theta = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m; ++i) {
        const double a = alpha(static_cast<Eigen::Index>(i));
        if (a <= kPivotTol) continue;
        const double ratio = std::max(0.0, xB_(static_cast<Eigen::Index>(i))) / a;
        if (ratio < theta - 1e-14 ||
            (ratio <= theta + 1e-14 && leave < m && basis_[i] < basis_[leave])) {
          theta = std::min(theta, ratio);
          leave = i;
        }
      }
      if (leave == m) return PhaseStatus::kUnbounded;

      pivot(entering, leave, alpha, theta);
      is_basic[basis_[leave]] = 1;
      ++iterations;
      degenerate_run = theta <= 1e-14 ? degenerate_run + 1 : 0;
      if (++since_refactor >= kRefactorEvery) {
        since_refactor = 0;
        refactor();
      }
      std::fill(is_basic.begin(), is_basic.end(), 0);
      for (auto j : basis_) is_basic[j] = 1;
    }
  }

  void pivot(std::size_t entering, std::size_t leave, const Eigen::VectorXd& alpha, double theta) {
    const auto r = static_cast<Eigen::Index>(leave);
    xB_ -= theta * alpha;
    xB_(r) = theta;
    for (Eigen::Index i = 0; i < xB_.size(); ++i) {
      if (xB_(i) < 0.0 && xB_(i) > -tol::kLpFeasibility) xB_(i) = 0.0;
    }
    const double pr = alpha(r);
    Binv_.row(r) /= pr;
    for (Eigen::Index i = 0; i < Binv_.rows(); ++i) {
      if (i != r && alpha(i) != 0.0) Binv_.row(i) -= alpha(i) * Binv_.row(r);
    }
    basis_[leave] = entering;
  }

  // Pivots basic artificial columns (index >= first_artificial) out of the
  // basis. Requires full row rank so that a replacement always exists.
  void drive_out_artificials(std::size_t first_artificial) {
    for (std::size_t r = 0; r < basis_.size(); ++r) {
      if (basis_[r] < first_artificial) continue;
      const Eigen::RowVectorXd row = Binv_.row(static_cast<Eigen::Index>(r)) * A_;
      std::size_t best = first_artificial;
      double peak = 1e-9;
      for (std::size_t j = 0; j < first_artificial; ++j) {
        if (std::find(basis_.begin(), basis_.end(), j) != basis_.end()) continue;
        if (std::abs(row(static_cast<Eigen::Index>(j))) > peak) {
          peak = std::abs(row(static_cast<Eigen::Index>(j)));
          best = j;
        }
      }
      require(best < first_artificial, ErrorCode::kInfeasibleProgram,
              "artificial variable cannot leave the basis");
      const Eigen::VectorXd alpha = Binv_ * A_.col(static_cast<Eigen::Index>(best));
      pivot(best, r, alpha, 0.0);
      refactor();
    }
  }

  const std::vector<std::size_t>& basis() const { return basis_; }
  const Eigen::VectorXd& basic_values() const { return xB_; }
  const Eigen::MatrixXd& inverse() const { return Binv_; }

 private:
  const Eigen::MatrixXd& A_;
  const Eigen::VectorXd& b_;
  std::vector<std::size_t> basis_;
  Eigen::MatrixXd Binv_;
  Eigen::VectorXd xB_;
};

}  // namespace

SimplexSolution simplex_solve(const LinearProgram& lp,
                              const std::optional<std::vector<std::size_t>>& initial_basis,
                              const SimplexOptions& options) {
  const Eigen::Index m0 = lp.A.rows();
  const Eigen::Index n = lp.A.cols();
  require(n > 0, ErrorCode::kInvalidArgument, "linear program has no variables");
  require(lp.b.size() == m0 && lp.c.size() == n, ErrorCode::kInvalidArgument,
          "linear program dimensions disagree");
  require(lp.A.allFinite() && lp.b.allFinite() && lp.c.allFinite(),
          ErrorCode::kInvalidArgument, "linear program has non-finite data");

  const RowSelection rows = independent_rows(lp.A, lp.b);
  if (rows.inconsistent) fail(ErrorCode::kInfeasibleProgram, "equality rows are inconsistent");

  const auto m = static_cast<Eigen::Index>(rows.kept.size());
  Eigen::MatrixXd A(m, n);
  Eigen::VectorXd b(m);
  std::vector<double> row_sign(static_cast<std::size_t>(m), 1.0);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto src = static_cast<Eigen::Index>(rows.kept[static_cast<std::size_t>(i)]);
    A.row(i) = lp.A.row(src);
    b(i) = lp.b(src);
    if (b(i) < 0.0) {
      A.row(i) *= -1.0;
      b(i) *= -1.0;
      row_sign[static_cast<std::size_t>(i)] = -1.0;
    }
  }

  SimplexSolution sol;
  sol.kept_rows = rows.kept;
  const std::size_t budget =
      options.max_iterations ? options.max_iterations
                             : 200 * static_cast<std::size_t>(m + n) + 1000;
  const double feas_scale = std::max(1.0, b.size() ? b.cwiseAbs().maxCoeff() : 0.0);

  std::vector<std::size_t> basis;
  Eigen::MatrixXd A_work;
  std::size_t n_work = static_cast<std::size_t>(n);

  if (initial_basis) {
    require(initial_basis->size() == static_cast<std::size_t>(m), ErrorCode::kInvalidArgument,
            "initial basis size differs from the number of independent rows");
    for (auto j : *initial_basis) {
      require(j < static_cast<std::size_t>(n), ErrorCode::kInvalidArgument,
              "initial basis column out of range");
    }
    basis = *initial_basis;
    A_work = A;
  } else {
    A_work.resize(m, n + m);
    A_work << A, Eigen::MatrixXd::Identity(m, m);
    n_work = static_cast<std::size_t>(n + m);
    for (Eigen::Index i = 0; i < m; ++i) basis.push_back(static_cast<std::size_t>(n + i));
  }

  Tableau tab(A_work, b, basis);
  if (initial_basis) {
    require(tab.refactor(), ErrorCode::kInvalidArgument, "initial basis is singular");
    require(m == 0 || tab.basic_values().minCoeff() >= -tol::kLpFeasibility * feas_scale,
            ErrorCode::kInvalidArgument, "initial basis is not primal feasible");
  } else if (m > 0) {
    Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_work));
    phase1_cost.tail(m).setOnes();
    if (tab.run(phase1_cost, n_work, options, budget, sol.iterations) != PhaseStatus::kOptimal) {
      fail(ErrorCode::kInfeasibleProgram, "phase one did not converge");
    }
    double infeasibility = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (tab.basis()[static_cast<std::size_t>(i)] >= static_cast<std::size_t>(n)) {
        infeasibility += tab.basic_values()(i);
      }
    }
    if (infeasibility > tol::kLpFeasibility * feas_scale) {
      std::ostringstream msg;
      msg << "phase one residual " << infeasibility;
      fail(ErrorCode::kInfeasibleProgram, msg.str());
    }
    tab.drive_out_artificials(static_cast<std::size_t>(n));
  }

  Eigen::VectorXd cost = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_work));
  cost.head(n) = lp.c;
  if (m > 0 &&
      tab.run(cost, static_cast<std::size_t>(n), options, budget, sol.iterations) ==
          PhaseStatus::kUnbounded) {
    fail(ErrorCode::kUnboundedProgram, "objective is unbounded below");
  }

  sol.basis = tab.basis();
  sol.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    sol.x(static_cast<Eigen::Index>(sol.basis[static_cast<std::size_t>(i)])) =
        std::max(0.0, tab.basic_values()(i));
  }
  if (m == 0) {
    // No constraints: x = 0 is optimal iff c >= 0.
    require(lp.c.minCoeff() >= -tol::kLpOptimality, ErrorCode::kUnboundedProgram,
            "objective is unbounded below");
  }
  sol.value = lp.c.dot(sol.x);

  Eigen::VectorXd cB(m);
  for (Eigen::Index i = 0; i < m; ++i) cB(i) = lp.c(static_cast<Eigen::Index>(sol.basis[static_cast<std::size_t>(i)]));
  const Eigen::VectorXd y = tab.inverse().transpose() * cB;
  sol.duals = Eigen::VectorXd::Zero(m0);
  for (Eigen::Index i = 0; i < m; ++i) {
    sol.duals(static_cast<Eigen::Index>(rows.kept[static_cast<std::size_t>(i)])) =
        row_sign[static_cast<std::size_t>(i)] * y(i);
  }
  return sol;
}

}  // namespace dobrushin
