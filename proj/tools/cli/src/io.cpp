#include "dobrushin_cli/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "dobrushin_cli/config.hpp"

namespace dobrushin::cli {

namespace {

bool to_double(const std::string& token, double& v) {
  try {
    std::size_t used = 0;
    v = std::stod(token, &used);
    return used == token.size() && std::isfinite(v);
  } catch (const std::exception&) {
    return false;
  }
}

std::vector<std::string> tokens(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\t' || c == '\r') c = ' ';
  }
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

std::string strip_comment(std::string s) {
  if (const auto hash = s.find('#'); hash != std::string::npos) s.erase(hash);
  return s;
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  return in;
}

}  // namespace

std::string format_number(double v, int precision) {
  if (v == 0.0) return "0";
  std::ostringstream out;
  out << std::setprecision(precision) << v;
  return out.str();
}

std::vector<double> read_vector(std::istream& in, const std::string& name) {
  std::vector<double> out;
  int line = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line;
    for (const auto& t : tokens(strip_comment(raw))) {
      double v = 0.0;
      if (!to_double(t, v)) {
        throw InputError(name + ":" + std::to_string(line) + ": '" + t + "' is not a number");
      }
      out.push_back(v);
    }
  }
  if (out.empty()) throw InputError(name + ": no values found");
  return out;
}

std::vector<double> read_vector_file(const std::string& path) {
  auto in = open(path);
  return read_vector(in, path);
}

std::vector<std::vector<double>> read_matrix(std::istream& in, const std::string& name) {
  std::vector<std::vector<double>> rows;
  int line = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line;
    const auto ts = tokens(strip_comment(raw));
    if (ts.empty()) continue;
    std::vector<double> row;
    for (const auto& t : ts) {
      double v = 0.0;
      if (!to_double(t, v)) {
        throw InputError(name + ":" + std::to_string(line) + ": '" + t + "' is not a number");
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InputError(name + ":" + std::to_string(line) + ": expected " +
                       std::to_string(rows.front().size()) + " entries, found " +
                       std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError(name + ": no rows found");
  return rows;
}

std::vector<std::vector<double>> read_matrix_file(const std::string& path) {
  auto in = open(path);
  return read_matrix(in, path);
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& t : tokens(text)) {
    double v = 0.0;
    if (!to_double(t, v)) throw InputError(what + ": '" + t + "' is not a number");
    out.push_back(v);
  }
  if (out.empty()) throw InputError(what + ": empty list");
  return out;
}

std::vector<std::vector<double>> parse_inline_matrix(const std::string& text) {
  std::string s = text;
  for (char& c : s) {
    if (c == ';') c = '\n';
  }
  std::istringstream in(s);
  return read_matrix(in, "matrix");
}

std::vector<double> parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  for (std::string p; std::getline(in, p, ':');) parts.push_back(p);
  double v[3] = {0, 0, 0};
  if (parts.size() != 3 || !to_double(parts[0], v[0]) || !to_double(parts[1], v[1]) ||
      !to_double(parts[2], v[2])) {
    throw InputError("range '" + text + "' must be start:stop:step");
  }
  if (v[2] <= 0.0 || v[1] < v[0]) throw InputError("range '" + text + "' is empty or has step <= 0");
  const auto n = static_cast<std::size_t>(std::floor((v[1] - v[0]) / v[2] + 1e-9)) + 1;
  if (n > 10'000'000) throw InputError("range '" + text + "' has too many points");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = v[0] + v[2] * static_cast<double>(i);
  return out;
}

std::vector<int> parse_int_range(const std::string& text) {
  auto as_int = [&](const std::string& t) {
    double v = 0.0;
    if (!to_double(t, v) || v != std::floor(v) || std::abs(v) > 1e9) {
      throw InputError("'" + t + "' in '" + text + "' is not an integer");
    }
    return static_cast<int>(v);
  };
  std::vector<int> out;
  if (text.find(':') == std::string::npos) {
    for (const auto& t : tokens(text)) out.push_back(as_int(t));
  } else {
    std::vector<std::string> parts;
    std::stringstream in(text);
    for (std::string p; std::getline(in, p, ':');) parts.push_back(p);
    if (parts.size() < 2 || parts.size() > 3) throw InputError("range '" + text + "' must be lo:hi[:step]");
    const int lo = as_int(parts[0]);
    const int hi = as_int(parts[1]);
    const int step = parts.size() == 3 ? as_int(parts[2]) : 1;
    if (step <= 0 || hi < lo) throw InputError("range '" + text + "' is empty or has step <= 0");
    for (long long q = lo; q <= hi; q += step) out.push_back(static_cast<int>(q));
  }
  if (out.empty()) throw InputError("empty list '" + text + "'");
  return out;
}

double KernelSpec::tail(int d, int r_max) const {
  switch (kind) {
    case Kind::kNearest:
      return 0.0;
    case Kind::kPower:
      return power_law_tail_bound(a, b, d, r_max);
    case Kind::kExponential:
      return exponential_tail_bound(a, b, d, r_max);
  }
  return -1.0;
}

KernelSpec parse_kernel(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InputError("kernel '" + text + "' needs the form kind:params");
  const std::string kind = text.substr(0, colon);
  const auto params = parse_list(text.substr(colon + 1), "kernel '" + text + "'");
  KernelSpec k;
  k.text = text;
  auto need = [&](std::size_t n) {
    if (params.size() != n) {
      throw InputError("kernel '" + text + "' expects " + std::to_string(n) + " parameter(s)");
    }
  };
  if (kind == "nn") {
    need(1);
    k.kind = KernelSpec::Kind::kNearest;
    k.a = params[0];
    const double J = params[0];
    // Unit-distance neighbours only; the next lattice distance is sqrt(2).
    k.kernel = [J](double r) { return r < 1.2 ? J : 0.0; };
  } else if (kind == "power") {
    need(2);
    k.kind = KernelSpec::Kind::kPower;
    k.a = params[0];
    k.b = params[1];
    k.kernel = [A = k.a, p = k.b](double r) { return A * std::pow(r, -p); };
  } else if (kind == "exp" || kind == "geometric") {
    need(2);
    k.kind = KernelSpec::Kind::kExponential;
    k.a = params[0];
    if (kind == "geometric") {
      if (!(params[1] > 0.0 && params[1] < 1.0)) throw InputError("geometric ratio must lie in (0, 1)");
      k.b = -std::log(params[1]);
    } else {
      k.b = params[1];
    }
    k.kernel = [A = k.a, lambda = k.b](double r) { return A * std::exp(-lambda * r); };
  } else {
    throw InputError("unknown kernel kind '" + kind + "' (expected nn, power, exp or geometric)");
  }
  if (!(k.a >= 0.0)) throw InputError("kernel amplitude must be non-negative");
  return k;
}

}  // namespace dobrushin::cli
