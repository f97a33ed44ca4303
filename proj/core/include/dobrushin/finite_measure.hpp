#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dobrushin {

/**
 * A finite set of labelled points with a metric.
 *
 * Construction validates the metric axioms by an exhaustive scan (symmetry,
 * zero diagonal, strictly positive off-diagonal, triangle inequality). Spaces
 * are immutable and meant to be shared through SpacePtr.
 */
class FiniteMetricSpace {
 public:
  FiniteMetricSpace(std::vector<std::string> labels, Eigen::MatrixXd dist);

  /// Skips the O(n^3) triangle scan; for metrics that hold by construction.
  struct Trusted {};
  FiniteMetricSpace(std::vector<std::string> labels, Eigen::MatrixXd dist, Trusted);

  std::size_t size() const noexcept { return labels_.size(); }
  double distance(std::size_t i, std::size_t j) const { return dist_(i, j); }
  const Eigen::MatrixXd& distances() const noexcept { return dist_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// True when every off-diagonal distance equals one.
  bool is_discrete() const noexcept { return discrete_; }

 private:
  void check_shape() const;

  std::vector<std::string> labels_;
  Eigen::MatrixXd dist_;
  bool discrete_ = false;
};

using SpacePtr = std::shared_ptr<const FiniteMetricSpace>;

/// q points labelled "1".."q" with rho(s,s') = 1 - delta(s,s').
SpacePtr make_discrete_space(int q);

/// Same metric with caller-supplied labels (e.g. "-1", "+1" for Ising spins).
SpacePtr make_discrete_space(std::vector<std::string> labels);

/// Exhaustive metric-axiom check; returns an empty string when all axioms hold.
std::string metric_axiom_violation(const Eigen::MatrixXd& dist, double tol);

/**
 * n copies of a factor space with the per-site sum metric.
 *
 * Configurations are indexed in mixed radix: site 0 is the least significant
 * digit. For a discrete factor the distance is the Hamming distance.
 */
class ProductMetricSpace {
 public:
  ProductMetricSpace(SpacePtr factor, int n_sites);

  const FiniteMetricSpace& factor() const noexcept { return *factor_; }
  const SpacePtr& factor_ptr() const noexcept { return factor_; }
  int n_sites() const noexcept { return n_sites_; }
  std::size_t size() const noexcept { return size_; }

  std::vector<int> decode(std::size_t index) const;
  std::size_t encode(std::span<const int> config) const;

  double distance(std::span<const int> a, std::span<const int> b) const;
  double distance(std::size_t a, std::size_t b) const;

  /// Dense FiniteMetricSpace over all configurations (at most 4096 points).
  SpacePtr materialize() const;

 private:
  SpacePtr factor_;
  int n_sites_;
  std::size_t size_;
};

ProductMetricSpace product_space(SpacePtr factor, int n_sites);

/// A probability distribution over the points of a FiniteMetricSpace.
class ProbabilityVector {
 public:
  ProbabilityVector(SpacePtr space, std::vector<double> p);

  /// Normalizes non-negative weights; throws if they are all zero.
  static ProbabilityVector from_weights(SpacePtr space, std::vector<double> weights);

  const FiniteMetricSpace& space() const noexcept { return *space_; }
  const SpacePtr& space_ptr() const noexcept { return space_; }
  std::size_t size() const noexcept { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  std::span<const double> values() const noexcept { return p_; }

 private:
  SpacePtr space_;
  std::vector<double> p_;
};

/// True when both vectors live on the same space object or on spaces with
/// identical distance matrices.
bool same_space(const ProbabilityVector& a, const ProbabilityVector& b);

/// Joint distribution on row_space x col_space with prescribed marginals.
class Coupling {
 public:
  /// Throws inconsistent-coupling if a marginal misses by more than 1e-10
  /// or an entry is negative.
  Coupling(ProbabilityVector first, ProbabilityVector second, Eigen::MatrixXd sigma);

  static Coupling product(const ProbabilityVector& first, const ProbabilityVector& second);
  static Coupling diagonal(const ProbabilityVector& mu);

  const ProbabilityVector& first_marginal() const noexcept { return first_; }
  const ProbabilityVector& second_marginal() const noexcept { return second_; }
  const FiniteMetricSpace& row_space() const noexcept { return first_.space(); }
  const FiniteMetricSpace& col_space() const noexcept { return second_.space(); }
  const Eigen::MatrixXd& sigma() const noexcept { return sigma_; }

  /// Largest absolute deviation of row/column sums from the declared marginals.
  double marginal_error() const;

 private:
  ProbabilityVector first_;
  ProbabilityVector second_;
  Eigen::MatrixXd sigma_;
};

/// Transport cost sum_ij dist(i,j) sigma(i,j). Requires both marginals on a
/// common space.
double coupling_cost(const Coupling& coupling);

}  // namespace dobrushin
