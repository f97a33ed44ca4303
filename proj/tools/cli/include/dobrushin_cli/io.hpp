#pragma once

#include <istream>
#include <string>
#include <vector>

#include "dobrushin/criteria.hpp"

namespace dobrushin::cli {

/// Shortest decimal rendering with the given number of significant digits.
std::string format_number(double v, int precision);

/// Whitespace- or comma-separated numbers, '#' comments allowed.
std::vector<double> read_vector(std::istream& in, const std::string& name);
std::vector<double> read_vector_file(const std::string& path);

/// One row per non-empty line; every row must have the same length.
std::vector<std::vector<double>> read_matrix(std::istream& in, const std::string& name);
std::vector<std::vector<double>> read_matrix_file(const std::string& path);

/// "a,b,c" (commas or spaces) as numbers.
std::vector<double> parse_list(const std::string& text, const std::string& what);

/// Matrix rows separated by ';', entries by ',' or spaces.
std::vector<std::vector<double>> parse_inline_matrix(const std::string& text);

/// "start:stop:step" with stop included when reached within rounding.
std::vector<double> parse_range(const std::string& text);

/// "lo:hi", "lo:hi:step" or a comma list of integers.
std::vector<int> parse_int_range(const std::string& text);

struct KernelSpec {
  std::string text;
  RadialKernel kernel;
  /// Certified tail beyond r_max, or negative when none is available.
  double tail(int d, int r_max) const;

  enum class Kind { kNearest, kPower, kExponential } kind = Kind::kNearest;
  double a = 0.0;
  double b = 0.0;
};

/// "nn:J", "power:A,p", "exp:A,lambda" or "geometric:A,ratio" (A ratio^r).
KernelSpec parse_kernel(const std::string& text);

}  // namespace dobrushin::cli
