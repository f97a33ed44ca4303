#include "dobrushin/continuous_spins.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "dobrushin/errors.hpp"
#include "dobrushin/transport.hpp"

namespace dobrushin {

namespace {

constexpr double kTailLimit = 1e-10;
constexpr double kContractionSlack = 1e-6;
constexpr std::size_t kMaxGridPoints = 400001;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorCode::kInvalidArgument, "not a number: '" + s + "'");
}

void check_beta(double beta) {
  require(std::isfinite(beta) && beta > 0.0, ErrorCode::kInvalidArgument,
          "beta must be positive and finite");
}

void check_spec(const ConvexPotentialSpec& spec) {
  require(std::isfinite(spec.alpha) && spec.alpha > 0.0, ErrorCode::kInvalidArgument,
          "alpha must be positive");
  require(spec.d >= 0, ErrorCode::kInvalidArgument, "d must be non-negative");
}

double sigma(const ConvexPotentialSpec& spec, double beta) {
  return 1.0 / std::sqrt(beta * spec.alpha_d());
}

// Tabulates on an explicit uniform grid [lo, hi].
TabulatedDensity tabulate(const ConvexPotentialSpec& spec, double beta, double y, double lo,
                          double hi, std::size_t points) {
  require(points >= 3, ErrorCode::kInvalidArgument, "grid needs at least 3 points");
  require(hi > lo, ErrorCode::kInvalidArgument, "grid must have positive width");
  const double ad = spec.alpha_d();
  const double h = (hi - lo) / static_cast<double>(points - 1);

  TabulatedDensity out;
  out.grid.resize(points);
  out.log_weight.resize(points);
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points; ++i) {
    const double x = lo + h * static_cast<double>(i);
    out.grid[i] = x;
    out.log_weight[i] = -beta * (0.5 * ad * x * x + spec.g(x) - x * y);
    peak = std::max(peak, out.log_weight[i]);
  }

  out.pdf.resize(points);
  out.cdf.assign(points, 0.0);
  for (std::size_t i = 0; i < points; ++i) out.pdf[i] = std::exp(out.log_weight[i] - peak);
  for (std::size_t i = 1; i < points; ++i)
    out.cdf[i] = out.cdf[i - 1] + 0.5 * h * (out.pdf[i - 1] + out.pdf[i]);
  const double mass = out.cdf.back();
  require(mass > 0.0 && std::isfinite(mass), ErrorCode::kGridTooSmall,
          "density vanishes on the grid");
  for (auto& p : out.pdf) p /= mass;
  for (auto& c : out.cdf) c /= mass;
  out.cdf.back() = 1.0;

  // exp(-beta g) <= 1, so the unnormalised weight is dominated by a Gaussian
  // with mean y/alpha_d and variance 1/(beta alpha_d). Its mass outside the
  // grid over the grid mass bounds the missing probability.
  const double s = sigma(spec, beta);
  const double c = y / ad;
  const double log_gauss_norm = 0.5 * std::log(2.0 * std::numbers::pi) + std::log(s) +
                                0.5 * beta * y * y / ad;
  const double log_grid_norm = peak + std::log(mass);
  const double tail = 0.5 * std::erfc((c - lo) / (s * std::numbers::sqrt2)) +
                      0.5 * std::erfc((hi - c) / (s * std::numbers::sqrt2));
  out.tail_mass_bound = std::min(1.0, tail * std::exp(log_gauss_norm - log_grid_norm));
  if (!(out.tail_mass_bound <= kTailLimit)) {
    std::ostringstream msg;
    msg << "grid [" << lo << ", " << hi << "] misses up to " << out.tail_mass_bound
        << " of the mass; try a half-width of at least " << (hi - lo);
    fail(ErrorCode::kGridTooSmall, msg.str());
  }
  return out;
}

// Grid covering the default windows of both fields, with the default spacing.
struct SharedGrid {
  double lo, hi;
  std::size_t points;
};

SharedGrid shared_grid(const ConvexPotentialSpec& spec, double beta, double y, double y_prime,
                       const GridParams& grid) {
  const double s = sigma(spec, beta);
  const double w = grid.half_width.value_or(grid.half_width_sigmas * s);
  const double c1 = grid.center.value_or(y / spec.alpha_d());
  const double c2 = grid.center.value_or(y_prime / spec.alpha_d());
  const double lo = std::min(c1, c2) - w;
  const double hi = std::max(c1, c2) + w;
  const double spacing = 2.0 * w / static_cast<double>(grid.points - 1);
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / spacing)) + 1;
  return {lo, hi, std::clamp(n, grid.points, kMaxGridPoints)};
}

}  // namespace

// ---------------------------------------------------------------------------

ConvexPotential ConvexPotential::zero() { return {}; }

ConvexPotential ConvexPotential::quartic(double c) { return even_polynomial({0.0, c}); }

ConvexPotential ConvexPotential::even_polynomial(std::vector<double> coeffs) {
  for (double c : coeffs)
    require(std::isfinite(c) && c >= 0.0, ErrorCode::kInvalidArgument,
            "potential coefficients must be non-negative");
  while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
  ConvexPotential g;
  g.coeffs_ = std::move(coeffs);
  return g;
}

ConvexPotential ConvexPotential::parse(std::string_view text) {
  const std::string t = trim(text);
  if (t == "zero" || t == "0" || t == "none") return zero();
  if (t == "x4" || t == "x^4") return quartic(1.0);
  if (t == "x2+x4" || t == "x^2+x^4") return even_polynomial({1.0, 1.0});
  if (t.rfind("quartic:", 0) == 0) return quartic(parse_number(trim(t.substr(8))));
  if (t.rfind("poly:", 0) == 0) {
    std::vector<double> coeffs;
    std::stringstream in(t.substr(5));
    for (std::string item; std::getline(in, item, ',');) coeffs.push_back(parse_number(trim(item)));
    require(!coeffs.empty(), ErrorCode::kInvalidArgument, "poly: needs coefficients");
    return even_polynomial(std::move(coeffs));
  }
  fail(ErrorCode::kInvalidArgument, "unknown potential '" + t + "'");
}

double ConvexPotential::operator()(double x) const {
  const double x2 = x * x;
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = (acc + *it) * x2;
  return acc;
}

std::string ConvexPotential::str() const {
  if (coeffs_.empty()) return "zero";
  std::ostringstream out;
  bool first = true;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k] == 0.0) continue;
    if (!first) out << " + ";
    first = false;
    if (coeffs_[k] != 1.0) out << coeffs_[k] << " ";
    out << "x^" << 2 * (k + 1);
  }
  return out.str();
}

double TabulatedDensity::mean() const {
  double acc = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    acc += 0.5 * (grid[i] - grid[i - 1]) * (grid[i - 1] * pdf[i - 1] + grid[i] * pdf[i]);
  return acc;
}

double TabulatedDensity::variance() const {
  const double m = mean();
  double acc = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double a = grid[i - 1] - m;
    const double b = grid[i] - m;
    acc += 0.5 * (grid[i] - grid[i - 1]) * (a * a * pdf[i - 1] + b * b * pdf[i]);
  }
  return acc;
}

TabulatedDensity gibbs_density_1d(const ConvexPotentialSpec& spec, double beta, double y,
                                  const GridParams& grid) {
  check_spec(spec);
  check_beta(beta);
  require(std::isfinite(y), ErrorCode::kInvalidArgument, "field must be finite");
  const double c = grid.center.value_or(y / spec.alpha_d());
  const double w = grid.half_width.value_or(grid.half_width_sigmas * sigma(spec, beta));
  return tabulate(spec, beta, y, c - w, c + w, grid.points);
}

ContractionResult contraction_check_1d(const ConvexPotentialSpec& spec, double beta, double y,
                                       double y_prime, const GridParams& grid) {
  check_spec(spec);
  check_beta(beta);
  const SharedGrid sg = shared_grid(spec, beta, y, y_prime, grid);
  const auto a = tabulate(spec, beta, y, sg.lo, sg.hi, sg.points);
  const auto b = tabulate(spec, beta, y_prime, sg.lo, sg.hi, sg.points);
  ContractionResult r;
  r.w1 = w1_cdf_1d(a.cdf, b.cdf, a.grid);
  r.bound = std::abs(y - y_prime) / spec.alpha_d();
  r.ok = r.w1 <= r.bound + kContractionSlack;
  return r;
}

double dominance_violation(const ConvexPotentialSpec& spec, double beta, double y,
                           double y_prime) {
  require(y <= y_prime, ErrorCode::kInvalidArgument, "dominance needs y <= y_prime");
  const SharedGrid sg = shared_grid(spec, beta, y, y_prime, {});
  const auto a = tabulate(spec, beta, y, sg.lo, sg.hi, sg.points);
  const auto b = tabulate(spec, beta, y_prime, sg.lo, sg.hi, sg.points);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.cdf.size(); ++i) worst = std::max(worst, b.cdf[i] - a.cdf[i]);
  return worst;
}

double shifted_dominance_violation(const ConvexPotentialSpec& spec, double beta, double y,
                                   double y_prime) {
  require(y <= y_prime, ErrorCode::kInvalidArgument, "dominance needs y <= y_prime");
  const auto a = gibbs_density_1d(spec, beta, y);
  const auto b = gibbs_density_1d(spec, beta, y_prime);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.cdf.size(); ++i) worst = std::max(worst, a.cdf[i] - b.cdf[i]);
  return worst;
}

double running_mean_violation(const TabulatedDensity& density) {
  const auto& x = density.grid;
  const auto& p = density.pdf;
  double mass = 0.0;
  double moment = 0.0;
  double previous = -std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double h = x[i] - x[i - 1];
    mass += 0.5 * h * (p[i - 1] + p[i]);
    moment += 0.5 * h * (x[i - 1] * p[i - 1] + x[i] * p[i]);
    // Subnormal partial sums carry no relative precision.
    if (mass < 1e-250) continue;
    const double m = moment / mass;
    if (std::isfinite(previous)) worst = std::max(worst, previous - m);
    previous = m;
  }
  return worst;
}

namespace {

void check_symmetric_psd(const Eigen::MatrixXd& L) {
  require(L.rows() == L.cols() && L.rows() > 0, ErrorCode::kInvalidArgument,
          "L must be a non-empty square matrix");
  const double scale = std::max(1.0, L.cwiseAbs().maxCoeff());
  require((L - L.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale,
          ErrorCode::kInvalidArgument, "L must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(L, Eigen::EigenvaluesOnly);
  require(eig.eigenvalues().minCoeff() >= -1e-12 * scale, ErrorCode::kInvalidArgument,
          "L must be positive semi-definite");
}

double induced_norm(const Eigen::MatrixXd& L, VectorNorm norm) {
  if (norm == VectorNorm::kSum) return L.cwiseAbs().colwise().sum().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(L, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

double vector_norm(const Eigen::VectorXd& v, VectorNorm norm) {
  return norm == VectorNorm::kSum ? v.lpNorm<1>() : v.norm();
}

}  // namespace

GaussianNdResult gaussian_nd_bound_check(const Eigen::MatrixXd& L, double alpha, int d,
                                         double beta, const Eigen::VectorXd& y,
                                         const Eigen::VectorXd& y_prime, VectorNorm norm) {
  check_symmetric_psd(L);
  check_beta(beta);
  require(alpha > 0.0, ErrorCode::kInvalidArgument, "alpha must be positive");
  require(y.size() == L.rows() && y_prime.size() == L.rows(), ErrorCode::kInvalidArgument,
          "field vectors must match L");
  // Translation is optimal: the linear functional dual to the shift attains
  // the same value, for any norm.
  const Eigen::VectorXd diff = y - y_prime;
  GaussianNdResult r;
  r.operator_norm = induced_norm(L, norm);
  r.w1 = vector_norm(L * diff, norm) / alpha;
  r.bound = r.operator_norm * vector_norm(diff, norm) / alpha;
  r.ok = r.w1 <= r.bound + 1e-9 * std::max(1.0, r.bound);
  r.alpha_condition = alpha > 2.0 * d * r.operator_norm;
  return r;
}

CoordinatewiseResult convex2_coordinatewise_check(const Eigen::MatrixXd& L,
                                                  const std::vector<ConvexPotential>& g,
                                                  double alpha, int d, double beta,
                                                  const Eigen::VectorXd& y,
                                                  const Eigen::VectorXd& y_prime) {
  check_symmetric_psd(L);
  const Eigen::MatrixXd off = L - Eigen::MatrixXd(L.diagonal().asDiagonal());
  require(off.cwiseAbs().maxCoeff() == 0.0, ErrorCode::kUnsupported,
          "coordinatewise check needs a diagonal L");
  require(g.size() == static_cast<std::size_t>(L.rows()), ErrorCode::kInvalidArgument,
          "one potential per coordinate is required");
  require(y.size() == L.rows() && y_prime.size() == L.rows(), ErrorCode::kInvalidArgument,
          "field vectors must match L");

  const Eigen::VectorXd f = L * y;
  const Eigen::VectorXd f_prime = L * y_prime;
  CoordinatewiseResult r;
  r.per_coordinate.resize(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const ConvexPotentialSpec spec{alpha, 0, g[k]};
    const auto i = static_cast<Eigen::Index>(k);
    r.per_coordinate[k] = contraction_check_1d(spec, beta, f(i), f_prime(i)).w1;
    r.w1_upper += r.per_coordinate[k];
  }
  const double op = induced_norm(L, VectorNorm::kSum);
  r.bound = op * (y - y_prime).lpNorm<1>() / alpha;
  r.ok = r.w1_upper <= r.bound + kContractionSlack;
  r.alpha_condition = alpha > 2.0 * d * op;
  return r;
}

}  // namespace dobrushin
