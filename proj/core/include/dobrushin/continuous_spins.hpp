#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace dobrushin {

/// g(x) = sum_k c_k x^(2k) for k >= 1 with every c_k >= 0, hence even and
/// convex.
class ConvexPotential {
 public:
  ConvexPotential() = default;

  static ConvexPotential zero();
  static ConvexPotential quartic(double c = 1.0);
  /// coeffs[k-1] multiplies x^(2k).
  static ConvexPotential even_polynomial(std::vector<double> coeffs);

  /// Accepts "zero", "x4", "x2+x4", "quartic:<c>" or "poly:<c1>,<c2>,...".
  static ConvexPotential parse(std::string_view text);

  double operator()(double x) const;
  bool is_zero() const noexcept { return coeffs_.empty(); }
  const std::vector<double>& coefficients() const noexcept { return coeffs_; }
  std::string str() const;

 private:
  std::vector<double> coeffs_;
};

struct ConvexPotentialSpec {
  double alpha = 1.0;
  /// Lattice dimension. Zero gives a bare on-site term (alpha_d = alpha).
  int d = 1;
  ConvexPotential g;

  double alpha_d() const noexcept { return alpha + 4.0 * d; }
};

struct GridParams {
  std::size_t points = 20001;
  /// Half-width in units of 1/sqrt(beta alpha_d).
  double half_width_sigmas = 12.0;
  /// Overrides for the grid centre and half-width.
  std::optional<double> center;
  std::optional<double> half_width;
};

struct TabulatedDensity {
  std::vector<double> grid;
  std::vector<double> log_weight;
  std::vector<double> pdf;
  std::vector<double> cdf;
  /// Upper bound on the mass outside the grid.
  double tail_mass_bound = 0.0;

  double mean() const;
  double variance() const;
};

/// Density proportional to exp(-beta (alpha_d x^2 / 2 + g(x) - x y)) on a
/// uniform grid, by default centred at y / alpha_d. Throws grid-too-small if
/// the tail bound (from Gaussian domination) exceeds 1e-10.
TabulatedDensity gibbs_density_1d(const ConvexPotentialSpec& spec, double beta, double y,
                                  const GridParams& grid = {});

struct ContractionResult {
  double w1 = 0.0;
  double bound = 0.0;
  bool ok = false;
};

/// W1 of the single-site measures under fields y and y_prime against
/// |y - y_prime| / alpha_d. Both densities share a grid covering both.
ContractionResult contraction_check_1d(const ConvexPotentialSpec& spec, double beta, double y,
                                       double y_prime, const GridParams& grid = {});

/// Largest amount by which F_{y'}(z) exceeds F_y(z) on a shared grid
/// (requires y <= y'). Non-positive means first-order dominance holds.
double dominance_violation(const ConvexPotentialSpec& spec, double beta, double y, double y_prime);

/// Largest amount by which F_y(z) exceeds F_{y'}(z + (y' - y)/alpha_d) on the
/// default grids, which are translates of each other by exactly that shift.
double shifted_dominance_violation(const ConvexPotentialSpec& spec, double beta, double y,
                                   double y_prime);

/// Largest decrease of the running conditional mean
/// z -> (int_{x <= z} x dmu) / F(z) along the grid.
double running_mean_violation(const TabulatedDensity& density);

enum class VectorNorm { kEuclidean, kSum };

struct GaussianNdResult {
  double w1 = 0.0;
  double bound = 0.0;
  bool ok = false;
  double operator_norm = 0.0;
  /// alpha > 2 d ||L||
  bool alpha_condition = false;
};

/// Multi-site Gaussian case (g = 0): the one-point measures under fields y
/// and y' are translates by L (y - y') / alpha, so W1 is that shift's norm.
/// The bound uses the operator norm induced by the chosen vector norm.
GaussianNdResult gaussian_nd_bound_check(const Eigen::MatrixXd& L, double alpha, int d,
                                         double beta, const Eigen::VectorXd& y,
                                         const Eigen::VectorXd& y_prime,
                                         VectorNorm norm = VectorNorm::kEuclidean);

struct CoordinatewiseResult {
  double w1_upper = 0.0;
  double bound = 0.0;
  bool ok = false;
  std::vector<double> per_coordinate;
  bool alpha_condition = false;
};

/// Diagonal L with one convex potential per coordinate: the measure is a
/// product, so the sum-metric W1 is the sum of 1-D distances. Each
/// coordinate r has on-site coefficient alpha and field (L y)_r. Non-diagonal
/// L is unsupported.
CoordinatewiseResult convex2_coordinatewise_check(const Eigen::MatrixXd& L,
                                                  const std::vector<ConvexPotential>& g,
                                                  double alpha, int d, double beta,
                                                  const Eigen::VectorXd& y,
                                                  const Eigen::VectorXd& y_prime);

}  // namespace dobrushin
