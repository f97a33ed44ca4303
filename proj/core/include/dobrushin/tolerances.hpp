#pragma once

// Numerical tolerances shared by every module. Reported numbers carry seven
// significant digits, so all of these sit well below reporting precision.
namespace dobrushin::tol {

inline constexpr double kSumToOne = 1e-12;
inline constexpr double kMarginal = 1e-10;
inline constexpr double kLpOptimality = 1e-10;
inline constexpr double kLpFeasibility = 1e-9;
inline constexpr double kDuality = 1e-8;
inline constexpr double kMetric = 1e-12;

}  // namespace dobrushin::tol
