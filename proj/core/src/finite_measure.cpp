#include "dobrushin/finite_measure.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "dobrushin/errors.hpp"
#include "dobrushin/tolerances.hpp"

namespace dobrushin {

namespace {

constexpr std::size_t kMaxMaterializedPoints = 4096;

bool off_diagonal_all_one(const Eigen::MatrixXd& dist) {
  for (Eigen::Index i = 0; i < dist.rows(); ++i) {
    for (Eigen::Index j = 0; j < dist.cols(); ++j) {
      if (i != j && dist(i, j) != 1.0) return false;
    }
  }
  return true;
}

}  // namespace

std::string metric_axiom_violation(const Eigen::MatrixXd& dist, double tol) {
  const Eigen::Index n = dist.rows();
  std::ostringstream msg;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (dist(i, i) != 0.0) {
      msg << "dist[" << i << "][" << i << "] = " << dist(i, i) << " is not zero";
      return msg.str();
    }
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (!std::isfinite(dist(i, j)) || dist(i, j) <= 0.0) {
        msg << "dist[" << i << "][" << j << "] = " << dist(i, j) << " is not positive";
        return msg.str();
      }
      if (std::abs(dist(i, j) - dist(j, i)) > tol) {
        msg << "dist is not symmetric at (" << i << ", " << j << ")";
        return msg.str();
      }
    }
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double dij = dist(i, j);
      for (Eigen::Index k = 0; k < n; ++k) {
        if (dist(i, k) > dij + dist(j, k) + tol) {
          msg << "triangle inequality fails for (" << i << ", " << j << ", " << k << ")";
          return msg.str();
        }
      }
    }
  }
  return {};
}

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> labels, Eigen::MatrixXd dist)
    : labels_(std::move(labels)), dist_(std::move(dist)) {
  check_shape();
  if (auto bad = metric_axiom_violation(dist_, tol::kMetric); !bad.empty()) {
    fail(ErrorCode::kInvalidArgument, "not a metric: " + bad);
  }
  discrete_ = off_diagonal_all_one(dist_);
}

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> labels, Eigen::MatrixXd dist,
                                     Trusted)
    : labels_(std::move(labels)), dist_(std::move(dist)) {
  check_shape();
  discrete_ = off_diagonal_all_one(dist_);
}

void FiniteMetricSpace::check_shape() const {
  require(!labels_.empty(), ErrorCode::kInvalidArgument, "metric space must have a point");
  require(dist_.rows() == dist_.cols() &&
              static_cast<std::size_t>(dist_.rows()) == labels_.size(),
          ErrorCode::kInvalidArgument, "distance matrix must be square with one row per label");
}

SpacePtr make_discrete_space(int q) {
  require(q >= 1, ErrorCode::kInvalidArgument, "discrete space needs q >= 1");
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(q));
  for (int s = 1; s <= q; ++s) labels.push_back(std::to_string(s));
  return make_discrete_space(std::move(labels));
}

SpacePtr make_discrete_space(std::vector<std::string> labels) {
  const auto q = static_cast<Eigen::Index>(labels.size());
  require(q >= 1, ErrorCode::kInvalidArgument, "discrete space needs q >= 1");
  Eigen::MatrixXd dist = Eigen::MatrixXd::Ones(q, q);
  dist.diagonal().setZero();
  return std::make_shared<const FiniteMetricSpace>(std::move(labels), std::move(dist),
                                                   FiniteMetricSpace::Trusted{});
}

// ---------------------------------------------------------------------------

ProductMetricSpace::ProductMetricSpace(SpacePtr factor, int n_sites)
    : factor_(std::move(factor)), n_sites_(n_sites), size_(1) {
  require(factor_ != nullptr, ErrorCode::kInvalidArgument, "product space needs a factor");
  require(n_sites_ >= 1, ErrorCode::kInvalidArgument, "product space needs n >= 1");
  const std::size_t q = factor_->size();
  for (int i = 0; i < n_sites_; ++i) {
    require(size_ <= (std::size_t{1} << 40) / q, ErrorCode::kInvalidArgument,
            "product space too large to index");
    size_ *= q;
  }
}

std::vector<int> ProductMetricSpace::decode(std::size_t index) const {
  require(index < size_, ErrorCode::kInvalidArgument, "configuration index out of range");
  const std::size_t q = factor_->size();
  std::vector<int> config(static_cast<std::size_t>(n_sites_));
  for (auto& digit : config) {
    digit = static_cast<int>(index % q);
    index /= q;
  }
  return config;
}

std::size_t ProductMetricSpace::encode(std::span<const int> config) const {
  require(config.size() == static_cast<std::size_t>(n_sites_), ErrorCode::kInvalidArgument,
          "configuration has the wrong number of sites");
  const std::size_t q = factor_->size();
  std::size_t index = 0;
  for (std::size_t i = config.size(); i-- > 0;) {
    require(config[i] >= 0 && static_cast<std::size_t>(config[i]) < q,
            ErrorCode::kInvalidArgument, "site state out of range");
    index = index * q + static_cast<std::size_t>(config[i]);
  }
  return index;
}

double ProductMetricSpace::distance(std::span<const int> a, std::span<const int> b) const {
  require(a.size() == b.size() && a.size() == static_cast<std::size_t>(n_sites_),
          ErrorCode::kInvalidArgument, "configurations have the wrong number of sites");
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    total += factor_->distance(static_cast<std::size_t>(a[i]), static_cast<std::size_t>(b[i]));
  }
  return total;
}

double ProductMetricSpace::distance(std::size_t a, std::size_t b) const {
  const std::size_t q = factor_->size();
  double total = 0.0;
  for (int i = 0; i < n_sites_; ++i) {
    total += factor_->distance(a % q, b % q);
    a /= q;
    b /= q;
  }
  return total;
}

SpacePtr ProductMetricSpace::materialize() const {
  require(size_ <= kMaxMaterializedPoints, ErrorCode::kInvalidArgument,
          "product space has more than 4096 configurations");
  const auto n = static_cast<Eigen::Index>(size_);
  Eigen::MatrixXd dist(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    dist(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      dist(i, j) = dist(j, i) =
          distance(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
  }
  std::vector<std::string> labels;
  labels.reserve(size_);
  for (std::size_t idx = 0; idx < size_; ++idx) {
    std::string label = "(";
    const auto config = decode(idx);
    for (std::size_t s = 0; s < config.size(); ++s) {
      if (s) label += ' ';
      label += factor_->labels()[static_cast<std::size_t>(config[s])];
    }
    labels.push_back(label + ")");
  }
  // Sums of metrics over coordinates are metrics.
  return std::make_shared<const FiniteMetricSpace>(std::move(labels), std::move(dist),
                                                   FiniteMetricSpace::Trusted{});
}

ProductMetricSpace product_space(SpacePtr factor, int n_sites) {
  return ProductMetricSpace(std::move(factor), n_sites);
}

// ---------------------------------------------------------------------------

ProbabilityVector::ProbabilityVector(SpacePtr space, std::vector<double> p)
    : space_(std::move(space)), p_(std::move(p)) {
  require(space_ != nullptr, ErrorCode::kInvalidArgument, "probability vector needs a space");
  require(p_.size() == space_->size(), ErrorCode::kInvalidArgument,
          "probability vector length differs from the space size");
  double total = 0.0;
  for (double v : p_) {
    require(std::isfinite(v) && v >= 0.0, ErrorCode::kInvalidArgument,
            "probabilities must be finite and non-negative");
    total += v;
  }
  require(std::abs(total - 1.0) <= tol::kSumToOne, ErrorCode::kInvalidArgument,
          "probabilities must sum to one");
}

ProbabilityVector ProbabilityVector::from_weights(SpacePtr space, std::vector<double> weights) {
  double total = 0.0;
  for (double w : weights) {
    require(std::isfinite(w) && w >= 0.0, ErrorCode::kInvalidArgument,
            "weights must be finite and non-negative");
    total += w;
  }
  require(total > 0.0, ErrorCode::kInvalidArgument, "weights are all zero");
  for (double& w : weights) w /= total;
  return ProbabilityVector(std::move(space), std::move(weights));
}

bool same_space(const ProbabilityVector& a, const ProbabilityVector& b) {
  if (a.space_ptr() == b.space_ptr()) return true;
  return a.space().size() == b.space().size() &&
         a.space().distances() == b.space().distances();
}

// ---------------------------------------------------------------------------

Coupling::Coupling(ProbabilityVector first, ProbabilityVector second, Eigen::MatrixXd sigma)
    : first_(std::move(first)), second_(std::move(second)), sigma_(std::move(sigma)) {
  require(static_cast<std::size_t>(sigma_.rows()) == first_.size() &&
              static_cast<std::size_t>(sigma_.cols()) == second_.size(),
          ErrorCode::kInconsistentCoupling, "coupling matrix shape differs from the marginals");
  for (Eigen::Index i = 0; i < sigma_.rows(); ++i) {
    for (Eigen::Index j = 0; j < sigma_.cols(); ++j) {
      double& v = sigma_(i, j);
      require(std::isfinite(v) && v >= -tol::kMarginal, ErrorCode::kInconsistentCoupling,
              "coupling has a negative entry");
      if (v < 0.0) v = 0.0;
    }
  }
  if (const double err = marginal_error(); err > tol::kMarginal) {
    std::ostringstream msg;
    msg << "marginal mismatch " << err << " exceeds " << tol::kMarginal;
    fail(ErrorCode::kInconsistentCoupling, msg.str());
  }
}

Coupling Coupling::product(const ProbabilityVector& first, const ProbabilityVector& second) {
  Eigen::MatrixXd sigma(first.size(), second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    for (std::size_t j = 0; j < second.size(); ++j) {
      sigma(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = first[i] * second[j];
    }
  }
  return Coupling(first, second, std::move(sigma));
}

Coupling Coupling::diagonal(const ProbabilityVector& mu) {
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(mu.size(), mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    sigma(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = mu[i];
  }
  return Coupling(mu, mu, std::move(sigma));
}

double Coupling::marginal_error() const {
  double err = 0.0;
  const Eigen::VectorXd rows = sigma_.rowwise().sum();
  const Eigen::VectorXd cols = sigma_.colwise().sum();
  for (std::size_t i = 0; i < first_.size(); ++i) {
    err = std::max(err, std::abs(rows(static_cast<Eigen::Index>(i)) - first_[i]));
  }
  for (std::size_t j = 0; j < second_.size(); ++j) {
    err = std::max(err, std::abs(cols(static_cast<Eigen::Index>(j)) - second_[j]));
  }
  return err;
}

double coupling_cost(const Coupling& coupling) {
  require(same_space(coupling.first_marginal(), coupling.second_marginal()),
          ErrorCode::kInvalidArgument, "coupling marginals live on different metric spaces");
  require(coupling.marginal_error() <= tol::kMarginal, ErrorCode::kInconsistentCoupling,
          "marginal mismatch");
  return coupling.row_space().distances().cwiseProduct(coupling.sigma()).sum();
}

}  // namespace dobrushin
