#include "dobrushin/transport.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "dobrushin/errors.hpp"
#include "dobrushin/tolerances.hpp"

namespace dobrushin {

namespace {

constexpr std::size_t kDegenerateRunBeforeBland = 50;
constexpr std::size_t kDenseCellLimit = 4096;

using DistanceFn = std::function<double(std::size_t, std::size_t)>;

struct BasicCell {
  std::size_t row;
  std::size_t col;
  double flow;
};

// Spanning-tree transportation simplex. Nodes 0..m-1 are rows, m..m+n-1
// are columns; every basic cell is a tree edge.
class TreeTransport {
 public:
  TreeTransport(const Eigen::MatrixXd& cost, std::vector<double> supply,
                std::vector<double> demand, const TransportOptions& options)
      : cost_(cost),
        m_(supply.size()),
        n_(demand.size()),
        options_(options),
        is_basic_(m_ * n_, 0),
        u_(m_),
        v_(n_),
        parent_edge_(m_ + n_),
        depth_(m_ + n_),
        adjacency_(m_ + n_) {
    cost_row_.resize(m_ * n_);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) cost_row_[i * n_ + j] = c(i, j);
    }
    Eigen::MatrixXd initial;
    const auto start = options_.initial == InitialBasis::kLeastCost
                           ? least_cost_start(cost_, supply, demand, &initial)
                           : north_west_corner(supply, demand, &initial);
    for (std::size_t cell : start) {
      const std::size_t i = cell / n_;
      const std::size_t j = cell % n_;
      basis_.push_back({i, j, initial(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
      is_basic_[cell] = 1;
    }
  }

  TransportPlan solve() {
    const std::size_t budget = options_.max_iterations
                                   ? options_.max_iterations
                                   : 50 * m_ * n_ + 10 * (m_ + n_) + 1000;
    std::size_t iterations = 0;
    std::size_t degenerate_run = 0;
    while (true) {
      compute_potentials();
      const bool bland =
          options_.rule == PivotRule::kBland || degenerate_run >= kDegenerateRunBeforeBland;
      const auto [ei, ej] = price(bland);
      if (ei == m_) break;
      if (iterations >= budget) {
        fail(ErrorCode::kDegenerateCycling, "transportation simplex pivot budget exhausted");
      }
      const double theta = pivot(ei, ej);
      ++iterations;
      degenerate_run = theta <= 1e-15 ? degenerate_run + 1 : 0;
    }

    TransportPlan plan;
    plan.flow = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m_), static_cast<Eigen::Index>(n_));
    for (const auto& e : basis_) {
      plan.flow(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) =
          std::max(0.0, e.flow);
    }
    plan.u = Eigen::Map<const Eigen::VectorXd>(u_.data(), static_cast<Eigen::Index>(m_));
    plan.v = Eigen::Map<const Eigen::VectorXd>(v_.data(), static_cast<Eigen::Index>(n_));
    plan.iterations = iterations;
    return plan;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  double c(std::size_t i, std::size_t j) const {
    return cost_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  // Potentials from u_0 = 0 by a tree traversal; also roots the tree at row 0.
  void compute_potentials() {
    for (auto& adj : adjacency_) adj.clear();
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      adjacency_[basis_[k].row].push_back(k);
      adjacency_[m_ + basis_[k].col].push_back(k);
    }
    std::fill(parent_edge_.begin(), parent_edge_.end(), kNone);
    stack_.assign(1, 0);
    u_[0] = 0.0;
    depth_[0] = 0;
    std::vector<char> seen(m_ + n_, 0);
    seen[0] = 1;
    while (!stack_.empty()) {
      const std::size_t node = stack_.back();
      stack_.pop_back();
      for (std::size_t k : adjacency_[node]) {
        const auto& e = basis_[k];
        const std::size_t other = node < m_ ? m_ + e.col : e.row;
        if (seen[other]) continue;
        seen[other] = 1;
        if (node < m_) {
          v_[e.col] = c(e.row, e.col) - u_[e.row];
        } else {
          u_[e.row] = c(e.row, e.col) - v_[e.col];
        }
        parent_edge_[other] = k;
        depth_[other] = depth_[node] + 1;
        stack_.push_back(other);
      }
    }
  }

  // Bland: first improving cell in row-major order. Otherwise partial
  // Dantzig: rows are scanned cyclically from where the last scan stopped,
  // and the most negative reduced cost wins once a block of at least
  // block_cells cells has been seen with some improving candidate.
  std::pair<std::size_t, std::size_t> price(bool bland) {
    double best = -tol::kLpOptimality;
    std::pair<std::size_t, std::size_t> pick{m_, n_};
    if (bland) {
      for (std::size_t i = 0; i < m_; ++i) {
        if (scan_row(i, best, pick, true)) return pick;
      }
      return pick;
    }
    const std::size_t block_cells = std::max<std::size_t>(n_, (m_ * n_) / 8);
    std::size_t seen = 0;
    for (std::size_t r = 0; r < m_; ++r) {
      const std::size_t i = (next_row_ + r) % m_;
      scan_row(i, best, pick, false);
      seen += n_;
      if (pick.first != m_ && seen >= block_cells) {
        next_row_ = (i + 1) % m_;
        return pick;
      }
    }
    return pick;
  }

  bool scan_row(std::size_t i, double& best, std::pair<std::size_t, std::size_t>& pick,
                bool first_hit) const {
    const double ui = u_[i];
    const std::size_t base = i * n_;
    const double* row_cost = cost_row_.data() + base;
    for (std::size_t j = 0; j < n_; ++j) {
      const double reduced = row_cost[j] - ui - v_[j];
      if (reduced < best && !is_basic_[base + j]) {
        pick = {i, j};
        if (first_hit) return true;
        best = reduced;
      }
    }
    return false;
  }

  std::size_t other_end(std::size_t node, std::size_t k) const {
    return node < m_ ? m_ + basis_[k].col : basis_[k].row;
  }

  // Adds cell (ei, ej), pushes theta around the unique cycle, and removes the
  // blocking cell with the smallest index among ties. Returns theta.
  double pivot(std::size_t ei, std::size_t ej) {
    // Tree path from column node ej to row node ei.
    std::vector<std::size_t> from_col;
    std::vector<std::size_t> from_row;
    std::size_t a = m_ + ej;
    std::size_t b = ei;
    while (a != b) {
      if (depth_[a] >= depth_[b]) {
        const std::size_t k = parent_edge_[a];
        from_col.push_back(k);
        a = other_end(a, k);
      } else {
        const std::size_t k = parent_edge_[b];
        from_row.push_back(k);
        b = other_end(b, k);
      }
    }
    from_col.insert(from_col.end(), from_row.rbegin(), from_row.rend());

    // Edges alternate: the first one touching column ej gives up flow.
    double theta = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < from_col.size(); p += 2) {
      theta = std::min(theta, basis_[from_col[p]].flow);
    }
    theta = std::max(theta, 0.0);
    std::size_t leave = kNone;
    std::size_t leave_index = kNone;
    for (std::size_t p = 0; p < from_col.size(); p += 2) {
      const auto& e = basis_[from_col[p]];
      if (e.flow <= theta + 1e-15) {
        const std::size_t idx = e.row * n_ + e.col;
        if (idx < leave_index) {
          leave_index = idx;
          leave = from_col[p];
        }
      }
    }
    for (std::size_t p = 0; p < from_col.size(); ++p) {
      basis_[from_col[p]].flow += (p % 2 == 0) ? -theta : theta;
    }
    is_basic_[leave_index] = 0;
    is_basic_[ei * n_ + ej] = 1;
    basis_[leave] = {ei, ej, theta};
    return theta;
  }

  const Eigen::MatrixXd& cost_;
  std::vector<double> cost_row_;
  std::size_t next_row_ = 0;
  std::size_t m_;
  std::size_t n_;
  TransportOptions options_;
  std::vector<BasicCell> basis_;
  std::vector<char> is_basic_;
  std::vector<double> u_;
  std::vector<double> v_;
  std::vector<std::size_t> parent_edge_;
  std::vector<std::size_t> depth_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<std::size_t> stack_;
};

TransportPlan solve_dense(const Eigen::MatrixXd& cost, const std::vector<double>& supply,
                          const std::vector<double>& demand, const TransportOptions& options) {
  const std::size_t m = supply.size();
  const std::size_t n = demand.size();
  require(m * n <= kDenseCellLimit, ErrorCode::kInvalidArgument,
          "dense transport backend is limited to 4096 cells");
  // Rows: m supply equations then n - 1 demand equations (the last one is
  // implied by the others).
  const auto rows = static_cast<Eigen::Index>(m + n - 1);
  LinearProgram lp{Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(m * n)),
                   Eigen::VectorXd(rows), Eigen::VectorXd(static_cast<Eigen::Index>(m * n))};
  for (std::size_t i = 0; i < m; ++i) {
    lp.b(static_cast<Eigen::Index>(i)) = supply[i];
    for (std::size_t j = 0; j < n; ++j) {
      const auto col = static_cast<Eigen::Index>(i * n + j);
      lp.c(col) = cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      lp.A(static_cast<Eigen::Index>(i), col) = 1.0;
      if (j + 1 < n) lp.A(static_cast<Eigen::Index>(m + j), col) = 1.0;
    }
  }
  for (std::size_t j = 0; j + 1 < n; ++j) lp.b(static_cast<Eigen::Index>(m + j)) = demand[j];

  const auto basis = north_west_corner(supply, demand);
  SimplexOptions sopt{options.rule, options.max_iterations};
  const SimplexSolution sol = simplex_solve(lp, basis, sopt);

  TransportPlan plan;
  plan.flow = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      plan.flow(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          sol.x(static_cast<Eigen::Index>(i * n + j));
    }
  }
  plan.u = sol.duals.head(static_cast<Eigen::Index>(m));
  plan.v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  plan.v.head(static_cast<Eigen::Index>(n - 1)) = sol.duals.tail(static_cast<Eigen::Index>(n - 1));
  plan.iterations = sol.iterations;
  return plan;
}

TransportResult hahn_reduced(const ProbabilityVector& mu, const ProbabilityVector& nu,
                             const DistanceFn& dist, const TransportOptions& options) {
  const std::size_t N = mu.size();
  std::vector<std::size_t> surplus;
  std::vector<std::size_t> deficit;
  std::vector<double> supply;
  std::vector<double> demand;
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  for (std::size_t s = 0; s < N; ++s) {
    sigma(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) = std::min(mu[s], nu[s]);
    const double excess = mu[s] - nu[s];
    if (excess > 0.0) {
      surplus.push_back(s);
      supply.push_back(excess);
    } else if (excess < 0.0) {
      deficit.push_back(s);
      demand.push_back(-excess);
    }
  }

  std::vector<double> f(N, 0.0);
  double value = 0.0;
  std::size_t iterations = 0;
  if (!surplus.empty() && !deficit.empty()) {
    Eigen::MatrixXd cost(static_cast<Eigen::Index>(surplus.size()),
                         static_cast<Eigen::Index>(deficit.size()));
    for (std::size_t i = 0; i < surplus.size(); ++i) {
      for (std::size_t j = 0; j < deficit.size(); ++j) {
        cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = dist(surplus[i], deficit[j]);
      }
    }
    const TransportPlan plan = solve_transport(cost, supply, demand, options);
    iterations = plan.iterations;
    for (std::size_t i = 0; i < surplus.size(); ++i) {
      for (std::size_t j = 0; j < deficit.size(); ++j) {
        const double x = plan.flow(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (x == 0.0) continue;
        sigma(static_cast<Eigen::Index>(surplus[i]), static_cast<Eigen::Index>(deficit[j])) = x;
        value += x * cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
    // f = u on the surplus side, -v on the deficit side, then the
    // c-transform over deficit points makes f 1-Lipschitz everywhere.
    std::vector<double> anchor(deficit.size());
    for (std::size_t j = 0; j < deficit.size(); ++j) anchor[j] = -plan.v(static_cast<Eigen::Index>(j));
    for (std::size_t x = 0; x < N; ++x) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < deficit.size(); ++j) {
        best = std::min(best, anchor[j] + dist(x, deficit[j]));
      }
      f[x] = best;
    }
  } else {
    require(surplus.empty() && deficit.empty(), ErrorCode::kInvalidArgument,
            "measures have different total mass");
  }

  double dual = 0.0;
  for (std::size_t s = 0; s < N; ++s) dual += (mu[s] - nu[s]) * f[s];
  return TransportResult{value, Coupling(mu, nu, std::move(sigma)), std::move(f), dual, iterations};
}

}  // namespace

std::vector<std::size_t> north_west_corner(std::span<const double> supply,
                                           std::span<const double> demand,
                                           Eigen::MatrixXd* flow) {
  const std::size_t m = supply.size();
  const std::size_t n = demand.size();
  require(m > 0 && n > 0, ErrorCode::kInvalidArgument, "transport problem needs rows and columns");
  std::vector<double> a(supply.begin(), supply.end());
  std::vector<double> b(demand.begin(), demand.end());
  if (flow) *flow = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  std::vector<std::size_t> cells;
  cells.reserve(m + n - 1);
  std::size_t i = 0;
  std::size_t j = 0;
  while (true) {
    const double x = std::max(0.0, std::min(a[i], b[j]));
    if (flow) (*flow)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x;
    cells.push_back(i * n + j);
    a[i] -= x;
    b[j] -= x;
    if (i + 1 == m && j + 1 == n) break;
    if (j + 1 == n || (i + 1 < m && a[i] <= b[j])) {
      ++i;
    } else {
      ++j;
    }
  }
  return cells;
}

std::vector<std::size_t> least_cost_start(const Eigen::MatrixXd& cost,
                                          std::span<const double> supply,
                                          std::span<const double> demand, Eigen::MatrixXd* flow) {
  const std::size_t m = supply.size();
  const std::size_t n = demand.size();
  require(m > 0 && n > 0, ErrorCode::kInvalidArgument, "transport problem needs rows and columns");
  std::vector<double> a(supply.begin(), supply.end());
  std::vector<double> b(demand.begin(), demand.end());
  std::vector<std::size_t> order(m * n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return cost(static_cast<Eigen::Index>(x / n), static_cast<Eigen::Index>(x % n)) <
           cost(static_cast<Eigen::Index>(y / n), static_cast<Eigen::Index>(y % n));
  });
  if (flow) *flow = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  std::vector<char> row_done(m, 0);
  std::vector<char> col_done(n, 0);
  std::size_t rows_left = m;
  std::size_t cols_left = n;
  std::vector<std::size_t> cells;
  cells.reserve(m + n - 1);
  // Each allocation closes exactly one line, so the cells form a tree.
  for (std::size_t cell : order) {
    if (cells.size() == m + n - 1) break;
    const std::size_t i = cell / n;
    const std::size_t j = cell % n;
    if (row_done[i] || col_done[j]) continue;
    const double x = std::max(0.0, std::min(a[i], b[j]));
    if (flow) (*flow)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x;
    cells.push_back(cell);
    a[i] -= x;
    b[j] -= x;
    if ((a[i] <= b[j] && rows_left > 1) || cols_left == 1) {
      row_done[i] = 1;
      --rows_left;
    } else {
      col_done[j] = 1;
      --cols_left;
    }
  }
  return cells;
}

TransportPlan solve_transport(const Eigen::MatrixXd& cost, std::span<const double> supply,
                              std::span<const double> demand, const TransportOptions& options) {
  require(static_cast<std::size_t>(cost.rows()) == supply.size() &&
              static_cast<std::size_t>(cost.cols()) == demand.size(),
          ErrorCode::kInvalidArgument, "cost matrix shape differs from supply and demand");
  require(!supply.empty() && !demand.empty(), ErrorCode::kInvalidArgument,
          "transport problem needs rows and columns");
  double total_supply = 0.0;
  double total_demand = 0.0;
  for (double s : supply) {
    require(std::isfinite(s) && s >= 0.0, ErrorCode::kInvalidArgument, "negative supply");
    total_supply += s;
  }
  for (double d : demand) {
    require(std::isfinite(d) && d >= 0.0, ErrorCode::kInvalidArgument, "negative demand");
    total_demand += d;
  }
  require(std::abs(total_supply - total_demand) <= tol::kLpFeasibility,
          ErrorCode::kInfeasibleProgram, "supply and demand totals differ");

  std::vector<double> a(supply.begin(), supply.end());
  std::vector<double> b(demand.begin(), demand.end());
  if (total_demand > 0.0) {
    for (double& d : b) d *= total_supply / total_demand;
  }
  if (options.backend == TransportBackend::kDense) return solve_dense(cost, a, b, options);
  return TreeTransport(cost, std::move(a), std::move(b), options).solve();
}

TransportResult wasserstein_lp(const ProbabilityVector& mu, const ProbabilityVector& nu,
                               const TransportOptions& options) {
  require(same_space(mu, nu), ErrorCode::kInvalidArgument,
          "measures live on different metric spaces");
  const Eigen::MatrixXd& d = mu.space().distances();
  return hahn_reduced(
      mu, nu,
      [&d](std::size_t x, std::size_t y) {
        return d(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
      },
      options);
}

TransportResult wasserstein_lp(const ProductMetricSpace& space, const ProbabilityVector& mu,
                               const ProbabilityVector& nu, const TransportOptions& options) {
  require(mu.size() == space.size() && nu.size() == space.size(), ErrorCode::kInvalidArgument,
          "measure length differs from the product space size");
  return hahn_reduced(
      mu, nu, [&space](std::size_t x, std::size_t y) { return space.distance(x, y); }, options);
}

double discrete_metric_w1(const ProbabilityVector& mu, const ProbabilityVector& nu) {
  require(mu.size() == nu.size(), ErrorCode::kInvalidArgument, "measures differ in length");
  require(mu.space().is_discrete() && nu.space().is_discrete(), ErrorCode::kInvalidArgument,
          "closed form needs the discrete metric");
  double total = 0.0;
  for (std::size_t s = 0; s < mu.size(); ++s) total += std::abs(mu[s] - nu[s]);
  return 0.5 * total;
}

Coupling pottlem_coupling(const ProbabilityVector& mu, const ProbabilityVector& nu) {
  require(mu.size() == nu.size(), ErrorCode::kInvalidArgument, "measures differ in length");
  require(mu.space().is_discrete(), ErrorCode::kInvalidArgument,
          "construction needs the discrete metric");
  const std::size_t q = mu.size();
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(q));
  std::vector<std::size_t> surplus;
  std::vector<std::size_t> deficit;
  std::vector<double> a;
  std::vector<double> b;
  for (std::size_t s = 0; s < q; ++s) {
    sigma(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) = std::min(mu[s], nu[s]);
    if (mu[s] > nu[s]) {
      surplus.push_back(s);
      a.push_back(mu[s] - nu[s]);
    } else if (mu[s] < nu[s]) {
      deficit.push_back(s);
      b.push_back(nu[s] - mu[s]);
    }
  }
  // Staircase fill: each surplus state hands its excess to the deficit
  // states in order, moving on once a deficit is covered.
  std::size_t j = 0;
  for (std::size_t i = 0; i < surplus.size(); ++i) {
    while (a[i] > 0.0 && j < deficit.size()) {
      const double x = std::min(a[i], b[j]);
      sigma(static_cast<Eigen::Index>(surplus[i]), static_cast<Eigen::Index>(deficit[j])) += x;
      a[i] -= x;
      b[j] -= x;
      if (b[j] <= 0.0) ++j;
    }
    // Rounding leftovers go to the last deficit state.
    if (a[i] > 0.0 && !deficit.empty()) {
      sigma(static_cast<Eigen::Index>(surplus[i]), static_cast<Eigen::Index>(deficit.back())) += a[i];
    }
  }
  return Coupling(mu, nu, std::move(sigma));
}

DualCertificate kr_dual(const ProbabilityVector& mu, const ProbabilityVector& nu) {
  TransportResult r = wasserstein_lp(mu, nu);
  return {std::move(r.potentials), r.dual_value};
}

double w1_cdf_1d(std::span<const double> F, std::span<const double> G,
                 std::span<const double> grid) {
  require(F.size() == grid.size() && G.size() == grid.size() && grid.size() >= 2,
          ErrorCode::kInvalidArgument, "CDFs and grid must share a length of at least two");
  constexpr double kSlack = 1e-12;
  constexpr double kEndpoint = 1e-6;
  auto check = [&](std::span<const double> H, const char* name) {
    for (std::size_t k = 0; k < H.size(); ++k) {
      if (!std::isfinite(H[k]) || H[k] < -kSlack || H[k] > 1.0 + kSlack ||
          (k > 0 && H[k] < H[k - 1] - kSlack)) {
        std::ostringstream msg;
        msg << name << " is not a distribution function at grid index " << k;
        fail(ErrorCode::kInvalidCdf, msg.str());
      }
    }
    if (H.front() > kEndpoint || H.back() < 1.0 - kEndpoint) {
      fail(ErrorCode::kInvalidCdf, std::string(name) + " does not run from 0 to 1 on the grid");
    }
  };
  check(F, "F");
  check(G, "G");
  double total = 0.0;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double h = grid[k] - grid[k - 1];
    require(h > 0.0, ErrorCode::kInvalidArgument, "grid must be strictly increasing");
    total += 0.5 * h * (std::abs(F[k] - G[k]) + std::abs(F[k - 1] - G[k - 1]));
  }
  return total;
}

}  // namespace dobrushin
