#include "dobrushin/spin_models.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include "dobrushin/errors.hpp"

namespace dobrushin {

SpinModel SpinModel::ising(double J, double h) {
  require(J > 0.0, ErrorCode::kInvalidArgument, "coupling J must be positive");
  return {ModelKind::kIsing, 2, J, h};
}

SpinModel SpinModel::potts(int q, double J) {
  require(q >= 2, ErrorCode::kInvalidArgument, "Potts model needs q >= 2");
  require(J > 0.0, ErrorCode::kInvalidArgument, "coupling J must be positive");
  return {ModelKind::kPotts, q, J, 0.0};
}

std::string_view to_string(GroupKind kind) noexcept {
  switch (kind) {
    case GroupKind::kCorner: return "corner";
    case GroupKind::kMiddle: return "middle";
    case GroupKind::kTriplet: return "triplet";
    case GroupKind::kSingle: return "single";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------

namespace {

// Site permutations preserving the bond set and the boundary group size at
// every site, mapped to permutations of the groups. Brute force over n!.
std::vector<std::vector<int>> group_symmetries(int n, const std::vector<std::pair<int, int>>& bonds,
                                               const std::vector<BoundaryGroup>& groups) {
  std::vector<int> group_at(static_cast<std::size_t>(n), -1);
  std::vector<int> size_at(static_cast<std::size_t>(n), 0);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    group_at[static_cast<std::size_t>(groups[g].site)] = static_cast<int>(g);
    size_at[static_cast<std::size_t>(groups[g].site)] = groups[g].size;
  }
  std::vector<std::vector<char>> adjacent(static_cast<std::size_t>(n),
                                          std::vector<char>(static_cast<std::size_t>(n), 0));
  for (auto [a, b] : bonds) {
    adjacent[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = 1;
    adjacent[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = 1;
  }

  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::set<std::vector<int>> found;
  do {
    bool ok = true;
    for (int s = 0; s < n && ok; ++s) {
      ok = size_at[static_cast<std::size_t>(s)] == size_at[static_cast<std::size_t>(perm[static_cast<std::size_t>(s)])];
    }
    for (std::size_t k = 0; k < bonds.size() && ok; ++k) {
      const auto [a, b] = bonds[k];
      ok = adjacent[static_cast<std::size_t>(perm[static_cast<std::size_t>(a)])]
                   [static_cast<std::size_t>(perm[static_cast<std::size_t>(b)])] != 0;
    }
    if (!ok) continue;
    std::vector<int> gperm(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
      gperm[g] = group_at[static_cast<std::size_t>(perm[static_cast<std::size_t>(groups[g].site)])];
    }
    found.insert(gperm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {found.begin(), found.end()};
}

}  // namespace

LatticeBlock::LatticeBlock(std::string name, int n_interior, std::vector<std::pair<int, int>> bonds,
                           std::vector<BoundaryGroup> groups)
    : name_(std::move(name)), n_interior_(n_interior), bonds_(std::move(bonds)), groups_(std::move(groups)) {
  require(n_interior_ >= 1 && n_interior_ <= 12, ErrorCode::kInvalidArgument,
          "block interior must have 1 to 12 sites");
  std::vector<char> has_group(static_cast<std::size_t>(n_interior_), 0);
  for (const auto& g : groups_) {
    require(g.site >= 0 && g.site < n_interior_ && g.size >= 1, ErrorCode::kInvalidArgument,
            "boundary group must attach to an interior site");
    require(!has_group[static_cast<std::size_t>(g.site)], ErrorCode::kInvalidArgument,
            "at most one boundary group per interior site");
    has_group[static_cast<std::size_t>(g.site)] = 1;
    boundary_size_ += g.size;
  }
  for (auto [a, b] : bonds_) {
    require(a >= 0 && b >= 0 && a < n_interior_ && b < n_interior_ && a != b,
            ErrorCode::kInvalidArgument, "bond endpoints must be distinct interior sites");
  }
  symmetries_ = group_symmetries(n_interior_, bonds_, groups_);
}

LatticeBlock LatticeBlock::square2x2() {
  // Sites in cyclic order: top-left, bottom-left, bottom-right, top-right.
  std::vector<BoundaryGroup> groups;
  for (int s = 0; s < 4; ++s) groups.push_back({GroupKind::kCorner, s, 2});
  return LatticeBlock("square2x2", 4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, std::move(groups));
}

LatticeBlock LatticeBlock::square3x3() {
  // Site y*3 + x with y = 0 the bottom row.
  std::vector<std::pair<int, int>> bonds;
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < 3; ++x) {
      if (x + 1 < 3) bonds.emplace_back(y * 3 + x, y * 3 + x + 1);
      if (y + 1 < 3) bonds.emplace_back(y * 3 + x, (y + 1) * 3 + x);
    }
  }
  // Corners top-left, bottom-left, bottom-right, top-right; then the middle
  // spins top, left, bottom, right.
  std::vector<BoundaryGroup> groups = {
      {GroupKind::kCorner, 6, 2}, {GroupKind::kCorner, 0, 2}, {GroupKind::kCorner, 2, 2},
      {GroupKind::kCorner, 8, 2}, {GroupKind::kMiddle, 7, 1}, {GroupKind::kMiddle, 3, 1},
      {GroupKind::kMiddle, 1, 1}, {GroupKind::kMiddle, 5, 1},
  };
  return LatticeBlock("square3x3", 9, std::move(bonds), std::move(groups));
}

LatticeBlock LatticeBlock::cube2x2x2() {
  // Two stacked 4-cycles 0-1-2-3 and 4-5-6-7 joined vertically.
  std::vector<BoundaryGroup> groups;
  for (int s = 0; s < 8; ++s) groups.push_back({GroupKind::kTriplet, s, 3});
  return LatticeBlock("cube2x2x2", 8,
                      {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6}, {6, 7}, {7, 4},
                       {0, 4}, {1, 5}, {2, 6}, {3, 7}},
                      std::move(groups));
}

LatticeBlock LatticeBlock::single_site(int d) {
  require(d >= 1, ErrorCode::kInvalidArgument, "dimension must be at least 1");
  return LatticeBlock("single-site-d" + std::to_string(d), 1, {}, {{GroupKind::kSingle, 0, 2 * d}});
}

LatticeBlock LatticeBlock::by_name(std::string_view name) {
  if (name == "square2x2") return square2x2();
  if (name == "square3x3") return square3x3();
  if (name == "cube2x2x2") return cube2x2x2();
  constexpr std::string_view prefix = "single-site-d";
  if (name.starts_with(prefix)) {
    const std::string digits(name.substr(prefix.size()));
    if (!digits.empty() && std::all_of(digits.begin(), digits.end(), ::isdigit) && digits.size() < 4) {
      return single_site(std::stoi(digits));
    }
  }
  fail(ErrorCode::kInvalidArgument, "unknown block '" + std::string(name) + "'");
}

const SpacePtr& LatticeBlock::ising_space() const {
  static std::mutex guard;
  std::lock_guard lock(guard);
  if (!ising_space_) ising_space_ = product_space(ising_spin_space(), n_interior_).materialize();
  return ising_space_;
}

// ---------------------------------------------------------------------------

BoundaryConfig BoundaryConfig::parse(std::string_view text) {
  std::string s(text);
  const auto open = s.find_first_not_of(" \t");
  const auto close = s.find_last_not_of(" \t");
  require(open != std::string::npos && s[open] == '(' && s[close] == ')',
          ErrorCode::kInvalidArgument, "boundary must be written as (v1 v2 ...)");
  s = s.substr(open + 1, close - open - 1);
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  BoundaryConfig b;
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used == token.size(), ErrorCode::kInvalidArgument,
            "boundary entry '" + token + "' is not an integer");
    b.values.push_back(v);
  }
  require(!b.values.empty(), ErrorCode::kInvalidArgument, "boundary is empty");
  return b;
}

std::string BoundaryConfig::str() const {
  std::string out = "(";
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out += ' ';
    out += std::to_string(values[k]);
  }
  return out + ")";
}

void validate_boundary(const LatticeBlock& block, const BoundaryConfig& boundary) {
  const auto& groups = block.groups();
  require(boundary.values.size() == groups.size(), ErrorCode::kInvalidArgument,
          "boundary " + boundary.str() + " needs one value per group of block " + block.name());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const int v = boundary.values[g];
    const int n = groups[g].size;
    require(v >= -n && v <= n && (v + n) % 2 == 0, ErrorCode::kInvalidArgument,
            "boundary value " + std::to_string(v) + " is not a sum of " + std::to_string(n) +
                " spins");
  }
}

const SpacePtr& ising_spin_space() {
  static const SpacePtr space = make_discrete_space(std::vector<std::string>{"-1", "+1"});
  return space;
}

ProbabilityVector ising_one_point(double beta_J, double S, double h_over_J) {
  require(beta_J >= 0.0 && std::isfinite(beta_J), ErrorCode::kInvalidArgument,
          "beta_J must be finite and non-negative");
  // p(+) = e^{x} / (e^{x} + e^{-x}) = (1 + tanh x) / 2, written to stay
  // accurate when x is large.
  const double x = beta_J * (S + h_over_J);
  const double plus = 1.0 / (1.0 + std::exp(-2.0 * x));
  const double minus = 1.0 / (1.0 + std::exp(2.0 * x));
  return ProbabilityVector::from_weights(ising_spin_space(), {minus, plus});
}

ProbabilityVector potts_one_point(double beta_J, int q, const std::vector<int>& neighbors) {
  require(q >= 2 && q <= 4096, ErrorCode::kInvalidArgument,
          "explicit Potts measures need 2 <= q <= 4096");
  require(beta_J >= 0.0 && std::isfinite(beta_J), ErrorCode::kInvalidArgument,
          "beta_J must be finite and non-negative");
  std::vector<int> count(static_cast<std::size_t>(q), 0);
  for (int s : neighbors) {
    require(s >= 1 && s <= q, ErrorCode::kInvalidArgument,
            "Potts label " + std::to_string(s) + " outside 1.." + std::to_string(q));
    ++count[static_cast<std::size_t>(s - 1)];
  }
  const int top = *std::max_element(count.begin(), count.end());
  std::vector<double> w(static_cast<std::size_t>(q));
  for (int s = 0; s < q; ++s) w[static_cast<std::size_t>(s)] = std::exp(beta_J * (count[static_cast<std::size_t>(s)] - top));
  return ProbabilityVector::from_weights(make_discrete_space(q), std::move(w));
}

GibbsBlockMeasure block_gibbs(const LatticeBlock& block, const SpinModel& model, double beta_J,
                              const BoundaryConfig& boundary, SpacePtr space) {
  require(beta_J >= 0.0 && std::isfinite(beta_J), ErrorCode::kInvalidArgument,
          "beta_J must be finite and non-negative");
  const auto n = static_cast<std::size_t>(block.n_interior());
  const auto& groups = block.groups();
  const std::size_t q = model.kind == ModelKind::kIsing ? 2 : static_cast<std::size_t>(model.q);
  std::size_t states = 1;
  for (std::size_t s = 0; s < n; ++s) states *= q;

  // Energy in units of -J (larger is more likely) for every interior state.
  std::vector<double> energy(states, 0.0);
  if (model.kind == ModelKind::kIsing) {
    validate_boundary(block, boundary);
    std::vector<double> field(n, model.h / model.J);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      field[static_cast<std::size_t>(groups[g].site)] += boundary.values[g];
    }
    std::vector<int> spin(n);
    for (std::size_t idx = 0; idx < states; ++idx) {
      for (std::size_t s = 0; s < n; ++s) spin[s] = (idx >> s) & 1U ? 1 : -1;
      double e = 0.0;
      for (auto [a, b] : block.bonds()) e += spin[static_cast<std::size_t>(a)] * spin[static_cast<std::size_t>(b)];
      for (std::size_t s = 0; s < n; ++s) e += spin[s] * field[s];
      energy[idx] = e;
    }
  } else {
    require(boundary.values.size() == static_cast<std::size_t>(block.boundary_size()),
            ErrorCode::kInvalidArgument, "Potts boundary needs one label per boundary spin");
    // Per-site count of boundary neighbours holding each label.
    std::vector<std::vector<int>> match(n, std::vector<int>(q, 0));
    std::size_t pos = 0;
    for (const auto& g : groups) {
      for (int k = 0; k < g.size; ++k, ++pos) {
        const int label = boundary.values[pos];
        require(label >= 1 && static_cast<std::size_t>(label) <= q, ErrorCode::kInvalidArgument,
                "Potts boundary label out of range");
        ++match[static_cast<std::size_t>(g.site)][static_cast<std::size_t>(label - 1)];
      }
    }
    std::vector<std::size_t> digit(n);
    for (std::size_t idx = 0; idx < states; ++idx) {
      std::size_t rest = idx;
      for (std::size_t s = 0; s < n; ++s) {
        digit[s] = rest % q;
        rest /= q;
      }
      double e = 0.0;
      for (auto [a, b] : block.bonds()) e += digit[static_cast<std::size_t>(a)] == digit[static_cast<std::size_t>(b)] ? 1.0 : 0.0;
      for (std::size_t s = 0; s < n; ++s) e += match[s][digit[s]];
      energy[idx] = e;
    }
  }

  const double top = *std::max_element(energy.begin(), energy.end());
  for (double& e : energy) e = std::exp(beta_J * (e - top));
  if (!space) {
    space = model.kind == ModelKind::kIsing
                ? block.ising_space()
                : product_space(make_discrete_space(model.q), block.n_interior()).materialize();
  }
  require(space->size() == states, ErrorCode::kInvalidArgument,
          "interior space size differs from the configuration count");
  return {beta_J, boundary, ProbabilityVector::from_weights(std::move(space), std::move(energy))};
}

// ---------------------------------------------------------------------------

std::string PottsPairing::id() const {
  auto tuple = [](const std::vector<int>& v) {
    std::string out = "(";
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (k) out += ' ';
      out += std::to_string(v[k]);
    }
    return out + ")";
  };
  return tuple(first) + "/" + tuple(second);
}

namespace {

// Per-label (count on first side, count on second side), sorted. Invariant
// under relabelling and neighbour order.
using LabelProfile = std::vector<std::pair<int, int>>;

LabelProfile profile_of(const std::vector<int>& a, const std::vector<int>& b, int labels) {
  LabelProfile p(static_cast<std::size_t>(labels), {0, 0});
  for (int s : a) ++p[static_cast<std::size_t>(s - 1)].first;
  for (int s : b) ++p[static_cast<std::size_t>(s - 1)].second;
  std::erase(p, std::pair<int, int>{0, 0});
  std::sort(p.begin(), p.end());
  return p;
}

// Sorted label sequences for one assignment of labels 1, 2, ... to the
// profile entries in the given order.
std::pair<std::vector<int>, std::vector<int>> realize(const LabelProfile& p) {
  std::vector<int> a;
  std::vector<int> b;
  for (std::size_t k = 0; k < p.size(); ++k) {
    a.insert(a.end(), static_cast<std::size_t>(p[k].first), static_cast<int>(k + 1));
    b.insert(b.end(), static_cast<std::size_t>(p[k].second), static_cast<int>(k + 1));
  }
  return {a, b};
}

// Lexicographically smallest (first, second) over label orders and sides.
PottsPairing display_form(LabelProfile p) {
  std::vector<int> best;
  PottsPairing out;
  for (int swap = 0; swap < 2; ++swap) {
    LabelProfile order = p;
    if (swap) {
      for (auto& e : order) std::swap(e.first, e.second);
    }
    std::sort(order.begin(), order.end());
    do {
      auto [a, b] = realize(order);
      std::vector<int> key = a;
      key.insert(key.end(), b.begin(), b.end());
      if (best.empty() || key < best) {
        best = key;
        out.first = a;
        out.second = b;
      }
    } while (std::next_permutation(order.begin(), order.end()));
  }
  out.labels_used = static_cast<int>(p.size());
  return out;
}

}  // namespace

std::vector<PottsPairing> enumerate_potts_pairings(int q, int d) {
  require(q >= 2, ErrorCode::kInvalidArgument, "Potts model needs q >= 2");
  require(d >= 1 && d <= 4, ErrorCode::kInvalidArgument, "pairings are enumerated for 1 <= d <= 4");
  const int n = 2 * d;
  const int max_labels = n + 1;
  std::set<LabelProfile> classes;

  // Non-decreasing sequences whose labels first appear in order 1, 2, ...
  std::vector<int> seq(static_cast<std::size_t>(n), 1);
  std::function<void(int, int)> grow = [&](int pos, int used) {
    if (pos == n) {
      for (int site = 0; site < n; ++site) {
        for (int label = 1; label <= used + 1; ++label) {
          if (label == seq[static_cast<std::size_t>(site)]) continue;
          std::vector<int> other = seq;
          other[static_cast<std::size_t>(site)] = label;
          std::sort(other.begin(), other.end());
          LabelProfile p = profile_of(seq, other, max_labels);
          LabelProfile swapped = p;
          for (auto& e : swapped) std::swap(e.first, e.second);
          std::sort(swapped.begin(), swapped.end());
          classes.insert(std::min(p, swapped));
        }
      }
      return;
    }
    const int lo = pos == 0 ? 1 : seq[static_cast<std::size_t>(pos - 1)];
    for (int label = lo; label <= used + 1; ++label) {
      seq[static_cast<std::size_t>(pos)] = label;
      grow(pos + 1, std::max(used, label));
    }
  };
  grow(0, 0);

  std::vector<PottsPairing> out;
  for (const auto& p : classes) {
    if (static_cast<int>(p.size()) > q) continue;
    out.push_back(display_form(p));
  }
  std::sort(out.begin(), out.end(), [](const PottsPairing& x, const PottsPairing& y) {
    return std::tie(x.first, x.second) < std::tie(y.first, y.second);
  });
  return out;
}

double potts_pairing_w1(const PottsPairing& pairing, int q, double beta_J) {
  require(pairing.labels_used <= q, ErrorCode::kInvalidArgument,
          "pairing uses more labels than the model has");
  const LabelProfile p = profile_of(pairing.first, pairing.second,
                                    std::max(*std::max_element(pairing.first.begin(), pairing.first.end()),
                                             *std::max_element(pairing.second.begin(), pairing.second.end())));
  // Weights relative to the unused labels, which sit at exp(0) = 1 on both
  // sides. Shift by the largest count so nothing overflows.
  int top = 0;
  for (const auto& [a, b] : p) top = std::max({top, a, b});
  const double unused = static_cast<double>(q) - static_cast<double>(p.size());
  const double base = std::exp(-beta_J * top);
  double za = unused * base;
  double zb = unused * base;
  for (const auto& [a, b] : p) {
    za += std::exp(beta_J * (a - top));
    zb += std::exp(beta_J * (b - top));
  }
  double total = unused * std::abs(base / za - base / zb);
  for (const auto& [a, b] : p) {
    total += std::abs(std::exp(beta_J * (a - top)) / za - std::exp(beta_J * (b - top)) / zb);
  }
  return 0.5 * total;
}

std::vector<IsingPairing> enumerate_ising_pairings(int d) {
  require(d >= 1, ErrorCode::kInvalidArgument, "dimension must be at least 1");
  std::vector<IsingPairing> out;
  for (int S = -2 * d; S <= 2 * d - 2; S += 2) out.push_back({S, S + 2});
  return out;
}

// ---------------------------------------------------------------------------

std::vector<BoundaryConfig> all_block_boundaries(const LatticeBlock& block) {
  std::vector<BoundaryConfig> out;
  BoundaryConfig cur;
  for (const auto& g : block.groups()) cur.values.push_back(-g.size);
  while (true) {
    out.push_back(cur);
    std::size_t k = 0;
    for (; k < cur.values.size(); ++k) {
      const int size = block.groups()[k].size;
      if (cur.values[k] < size) {
        cur.values[k] += 2;
        break;
      }
      cur.values[k] = -size;
    }
    if (k == cur.values.size()) break;
  }
  return out;
}

BoundaryConfig apply_symmetry(const LatticeBlock& block, const BoundaryConfig& b, std::size_t k,
                              bool flip) {
  const auto& perm = block.symmetries().at(k);
  BoundaryConfig out;
  out.values.resize(b.values.size());
  for (std::size_t g = 0; g < perm.size(); ++g) {
    out.values[static_cast<std::size_t>(perm[g])] = flip ? -b.values[g] : b.values[g];
  }
  return out;
}

BoundaryConfig canonical_boundary(const LatticeBlock& block, const BoundaryConfig& b,
                                  bool allow_flip) {
  BoundaryConfig best = b;
  for (std::size_t k = 0; k < block.symmetries().size(); ++k) {
    for (int f = 0; f < (allow_flip ? 2 : 1); ++f) {
      BoundaryConfig img = apply_symmetry(block, b, k, f == 1);
      if (img < best) best = std::move(img);
    }
  }
  return best;
}

namespace {

std::vector<BoundaryConfig> curated(const LatticeBlock& block) {
  auto make = [](std::vector<std::vector<int>> rows) {
    std::vector<BoundaryConfig> out;
    for (auto& r : rows) out.push_back({std::move(r)});
    return out;
  };
  if (block.name() == "square2x2") {
    return make({{0, 0, 0, 0}, {2, -2, 2, -2}});
  }
  if (block.name() == "square3x3") {
    return make({{0, 0, 0, 0, 1, -1, 1, -1}, {0, 0, 0, 0, 1, 1, -1, -1}});
  }
  if (block.name() == "cube2x2x2") {
    return make({
        {1, 1, -1, 1, 1, -1, 1, -1},    {-1, 1, -1, 1, 1, -1, 1, -1},
        {-1, 1, -1, 1, 1, -1, -1, -1},  {1, -1, 1, -1, 1, 1, -1, 1},
        {1, -1, 1, -1, -1, 1, -1, 1},   {1, -1, 1, -1, -1, 1, -1, -1},
        {1, 1, 1, -1, -1, 1, -1, 1},    {1, 1, 1, -1, -1, -1, -1, 1},
        {1, -1, -1, -1, 1, 1, -1, 1},   {1, -1, -1, -1, -1, 1, -1, 1},
        {1, -1, -1, -1, -1, 1, 1, 1},   {1, -3, 1, -1, -1, 1, -1, 1},
        {1, -1, 1, -1, -1, 1, -1, 3},   {1, 1, -1, -1, -1, 1, 1, 1},
        {1, 1, -1, -1, -1, 1, 1, -1},   {-1, -1, -1, -1, 1, 1, 1, -1},
        {-1, -1, -1, -1, 1, 1, 1, 1},   {1, 1, -1, 1, 1, 1, -1, -1},
        {1, 1, -1, -1, 1, 1, -1, -1},   {1, 1, 1, 1, -1, 1, -1, 1},
        {1, -1, 1, 1, -1, 1, -1, 1},    {-1, -1, -1, -1, -1, 1, -1, 1},
    });
  }
  fail(ErrorCode::kUnsupported, "no curated boundary list for block " + block.name());
}

}  // namespace

std::vector<BoundaryConfig> enumerate_block_boundaries(const LatticeBlock& block,
                                                       BoundaryMode mode, bool allow_flip) {
  if (mode == BoundaryMode::kCurated) return curated(block);
  std::set<BoundaryConfig> reps;
  for (const auto& b : all_block_boundaries(block)) reps.insert(canonical_boundary(block, b, allow_flip));
  return {reps.begin(), reps.end()};
}

std::vector<Flip> enumerate_flips(const LatticeBlock& block, const BoundaryConfig& boundary) {
  validate_boundary(block, boundary);
  std::vector<Flip> out;
  for (std::size_t g = 0; g < block.groups().size(); ++g) {
    const auto& group = block.groups()[g];
    const int v = boundary.values[g];
    const int plus = (v + group.size) / 2;
    const int minus = group.size - plus;
    if (plus > 0) {
      BoundaryConfig b = boundary;
      b.values[g] -= 2;
      out.push_back({std::move(b), static_cast<int>(g), group.kind, plus});
    }
    if (minus > 0) {
      BoundaryConfig b = boundary;
      b.values[g] += 2;
      out.push_back({std::move(b), static_cast<int>(g), group.kind, minus});
    }
  }
  return out;
}

}  // namespace dobrushin
