#include "dobrushin/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "dobrushin/errors.hpp"
#include "dobrushin/parallel.hpp"
#include "dobrushin/transport.hpp"

namespace dobrushin {

namespace {

constexpr int kPottsLpCrossCheckMaxQ = 64;
constexpr double kMonotoneSlack = 1e-12;

std::string sum_id(int S, int S_prime) {
  return "(" + std::to_string(S) + ")/(" + std::to_string(S_prime) + ")";
}

void require_beta(double beta_J) {
  require(std::isfinite(beta_J) && beta_J >= 0.0, ErrorCode::kInvalidArgument,
          "beta_J must be finite and non-negative");
}

int block_dimension(const LatticeBlock& block) {
  if (block.name().starts_with("square")) return 2;
  if (block.name().starts_with("cube")) return 3;
  if (block.groups().size() == 1 && block.groups()[0].kind == GroupKind::kSingle) {
    return block.groups()[0].size / 2;
  }
  return 2;
}

}  // namespace

DobrushinReport dobrushin_sup(const SpinModel& model, int d, double beta_J,
                              const DobrushinOptions& options) {
  require(d >= 1, ErrorCode::kInvalidArgument, "dimension must be at least 1");
  require_beta(beta_J);
  DobrushinReport report;
  report.beta_J = beta_J;
  report.d = d;
  report.threshold = 1.0 / (2.0 * d);

  if (model.kind == ModelKind::kIsing) {
    const double h = model.h / model.J;
    for (const auto& [S, Sp] : enumerate_ising_pairings(d)) {
      const double w1 = 0.5 * std::abs(std::tanh(beta_J * (Sp + h)) - std::tanh(beta_J * (S + h)));
      if (options.cross_check) {
        const double direct =
            discrete_metric_w1(ising_one_point(beta_J, S, h), ising_one_point(beta_J, Sp, h));
        report.cross_check_error = std::max(report.cross_check_error, std::abs(direct - w1));
      }
      report.values.push_back({sum_id(S, Sp), w1});
    }
  } else {
    for (const auto& pairing : enumerate_potts_pairings(model.q, d)) {
      const double w1 = potts_pairing_w1(pairing, model.q, beta_J);
      if (options.cross_check && model.q <= kPottsLpCrossCheckMaxQ) {
        const auto mu = potts_one_point(beta_J, model.q, pairing.first);
        const auto nu = potts_one_point(beta_J, model.q, pairing.second);
        const double closed = discrete_metric_w1(mu, nu);
        const double lp = wasserstein_lp(mu, nu).value;
        report.cross_check_error =
            std::max({report.cross_check_error, std::abs(closed - w1), std::abs(lp - w1)});
      }
      report.values.push_back({pairing.id(), w1});
    }
  }

  // Ties go to the earliest pairing in enumeration order.
  for (const auto& v : report.values) {
    if (report.witness.empty() || v.w1 > report.sup_distance) {
      report.sup_distance = v.w1;
      report.witness = v.pairing_id;
    }
  }
  report.satisfied = report.sup_distance < report.threshold;
  return report;
}

double ising_dobrushin_closed_form(int d) {
  if (d <= 1) {
    fail(ErrorCode::kNoFiniteBound, "the single-site criterion holds at every beta for d <= 1");
  }
  return 0.25 * std::log((d + 1.0) / (d - 1.0));
}

// ---------------------------------------------------------------------------

CriticalBound bisect_criterion(const std::function<CriterionValue(double)>& criterion,
                               double threshold, const BisectionOptions& options) {
  require(options.tol > 0.0 && options.scan_step > 0.0 && options.bracket_hi > 0.0 &&
              options.bracket_max >= options.bracket_hi,
          ErrorCode::kInvalidArgument, "bisection needs positive tol, step and bracket");
  CriticalBound out;
  out.tol = options.tol;
  auto eval = [&](double beta) {
    ++out.evaluations;
    return criterion(beta);
  };

  CriterionValue prev = eval(0.0);
  if (prev.value >= threshold) {
    fail(ErrorCode::kBracketFailure, "criterion already fails at beta_J = 0");
  }
  double lo = 0.0;
  double hi = 0.0;
  CriterionValue at_hi{0.0, {}};
  for (int k = 1;; ++k) {
    // Fine steps inside the default bracket, ten times coarser beyond it.
    const double fine_steps = std::floor(options.bracket_hi / options.scan_step + 0.5);
    const double beta = k <= fine_steps
                            ? k * options.scan_step
                            : options.bracket_hi + (k - fine_steps) * 10.0 * options.scan_step;
    if (beta > options.bracket_max * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "criterion stays below " << threshold << " on [0, " << options.bracket_max << "]";
      fail(ErrorCode::kBracketFailure, msg.str());
    }
    CriterionValue cur = eval(beta);
    if (cur.value < prev.value - kMonotoneSlack) {
      std::ostringstream msg;
      msg << "criterion decreases from " << prev.value << " to " << cur.value
          << " between beta_J = " << lo << " and " << beta;
      fail(ErrorCode::kMonotonicityViolation, msg.str());
    }
    if (cur.value >= threshold) {
      hi = beta;
      at_hi = std::move(cur);
      break;
    }
    lo = beta;
    prev = std::move(cur);
  }

  while (hi - lo > options.tol) {
    const double mid = 0.5 * (lo + hi);
    CriterionValue v = eval(mid);
    if (v.value < threshold) {
      lo = mid;
      prev = std::move(v);
    } else {
      hi = mid;
      at_hi = std::move(v);
    }
  }
  out.lo = lo;
  out.hi = hi;
  out.beta_J_star = lo;
  out.value_at_lo = prev.value;
  out.value_at_hi = at_hi.value;
  out.witness = at_hi.witness;
  return out;
}

CriticalBound dobrushin_critical_bound(const SpinModel& model, int d,
                                       const BisectionOptions& options) {
  if (model.kind == ModelKind::kIsing && d <= 1) {
    fail(ErrorCode::kNoFiniteBound, "the single-site criterion holds at every beta for d <= 1");
  }
  DobrushinOptions dopt;
  dopt.cross_check = false;
  return bisect_criterion(
      [&](double beta) {
        const DobrushinReport r = dobrushin_sup(model, d, beta, dopt);
        return CriterionValue{r.sup_distance, r.witness};
      },
      1.0 / (2.0 * d), options);
}

std::vector<PottsScanRow> potts_scan(int d, const std::vector<int>& qs,
                                     const BisectionOptions& options) {
  for (std::size_t k = 0; k < qs.size(); ++k) {
    require(qs[k] >= 2 && qs[k] <= 1'000'000, ErrorCode::kInvalidArgument,
            "q must lie in [2, 10^6]");
    require(k == 0 || qs[k] > qs[k - 1], ErrorCode::kInvalidArgument, "q values must increase");
  }
  std::vector<PottsScanRow> rows(qs.size());
  parallel_for(qs.size(), [&](std::size_t k) {
    const CriticalBound b = dobrushin_critical_bound(SpinModel::potts(qs[k]), d, options);
    rows[k] = {qs[k], b, b.witness};
  });
  for (std::size_t k = 1; k < rows.size(); ++k) {
    rows[k].below_previous =
        rows[k].bound.beta_J_star < rows[k - 1].bound.beta_J_star - options.tol;
  }
  return rows;
}

std::vector<PottsScanRow> potts_scan(int d, int q_lo, int q_hi, const BisectionOptions& options) {
  require(q_lo >= 2 && q_hi >= q_lo, ErrorCode::kInvalidArgument, "q range must satisfy 2 <= lo <= hi");
  std::vector<int> qs(static_cast<std::size_t>(q_hi - q_lo + 1));
  std::iota(qs.begin(), qs.end(), q_lo);
  return potts_scan(d, qs, options);
}

// ---------------------------------------------------------------------------

DsEvaluator::DsEvaluator(const LatticeBlock& block, const SpinModel& model, double beta_J)
    : block_(block), model_(model), beta_J_(beta_J), allow_flip_(model.h == 0.0) {
  require(model.kind == ModelKind::kIsing, ErrorCode::kUnsupported,
          "block criterion is implemented for the Ising model");
  require_beta(beta_J);
}

DsEvaluator::Key DsEvaluator::canonical_pair(const BoundaryConfig& a, const BoundaryConfig& b) const {
  Key best{std::min(a, b), std::max(a, b)};
  for (std::size_t k = 0; k < block_.symmetries().size(); ++k) {
    for (int f = 0; f < (allow_flip_ ? 2 : 1); ++f) {
      BoundaryConfig ga = apply_symmetry(block_, a, k, f == 1);
      BoundaryConfig gb = apply_symmetry(block_, b, k, f == 1);
      Key cand = ga < gb ? Key{std::move(ga), std::move(gb)} : Key{std::move(gb), std::move(ga)};
      if (cand < best) best = std::move(cand);
    }
  }
  return best;
}

double DsEvaluator::compute(const Key& key) const {
  const auto mu = block_gibbs(block_, model_, beta_J_, key.first);
  const auto nu = block_gibbs(block_, model_, beta_J_, key.second);
  return wasserstein_lp(mu.p, nu.p).value;
}

double DsEvaluator::w1(const BoundaryConfig& a, const BoundaryConfig& b) {
  const Key key = canonical_pair(a, b);
  {
    std::lock_guard lock(guard_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  const double value = compute(key);
  std::lock_guard lock(guard_);
  cache_.emplace(key, value);
  return value;
}

void DsEvaluator::prefetch(const std::vector<BoundaryConfig>& bases) {
  std::vector<Key> missing;
  {
    std::lock_guard lock(guard_);
    std::map<Key, char> wanted;
    for (const auto& base : bases) {
      for (const auto& flip : enumerate_flips(block_, base)) {
        Key key = canonical_pair(base, flip.flipped);
        if (!cache_.contains(key)) wanted.emplace(std::move(key), 0);
      }
    }
    for (auto& [key, unused] : wanted) missing.push_back(key);
  }
  std::vector<double> values(missing.size());
  parallel_for(missing.size(), [&](std::size_t i) { values[i] = compute(missing[i]); });
  std::lock_guard lock(guard_);
  for (std::size_t i = 0; i < missing.size(); ++i) cache_.emplace(missing[i], values[i]);
}

std::size_t DsEvaluator::cache_size() const {
  std::lock_guard lock(guard_);
  return cache_.size();
}

DsCase DsEvaluator::evaluate(const BoundaryConfig& base) {
  const std::vector<Flip> flips = enumerate_flips(block_, base);
  prefetch({base});

  // Stabilizer of the base inside the block symmetries (with spin flip).
  std::vector<std::pair<std::size_t, bool>> stabilizer;
  for (std::size_t k = 0; k < block_.symmetries().size(); ++k) {
    for (int f = 0; f < (allow_flip_ ? 2 : 1); ++f) {
      if (apply_symmetry(block_, base, k, f == 1) == base) stabilizer.emplace_back(k, f == 1);
    }
  }
  std::vector<std::size_t> cls(flips.size());
  std::iota(cls.begin(), cls.end(), 0);
  for (std::size_t i = 0; i < flips.size(); ++i) {
    for (const auto& [k, f] : stabilizer) {
      const BoundaryConfig img = apply_symmetry(block_, flips[i].flipped, k, f);
      for (std::size_t j = 0; j < flips.size(); ++j) {
        if (flips[j].flipped == img) cls[j] = std::min(cls[j], cls[i]);
      }
    }
  }
  // Orbits are closed under the group, so one pass of min-propagation from
  // every element settles each orbit on its smallest member.
  for (std::size_t i = 0; i < flips.size(); ++i) cls[i] = cls[cls[i]];

  DsCase out;
  out.base = base;
  const double total = block_.boundary_size();
  for (std::size_t i = 0; i < flips.size(); ++i) {
    if (cls[i] != i) continue;
    int mult = 0;
    for (std::size_t j = 0; j < flips.size(); ++j) {
      if (cls[j] == i) mult += flips[j].multiplicity;
    }
    out.classes.push_back({"", flips[i].flipped, flips[i].kind, flips[i].group, mult,
                           mult / total, w1(base, flips[i].flipped)});
  }
  std::stable_sort(out.classes.begin(), out.classes.end(),
                   [](const DsClassEntry& x, const DsClassEntry& y) { return x.w1 > y.w1; });
  // Multiplicities are integers, so the sum is formed before the single
  // division by the boundary size.
  double weighted = 0.0;
  for (std::size_t c = 0; c < out.classes.size(); ++c) {
    out.classes[c].class_id = std::string(1, static_cast<char>('a' + c % 26));
    weighted += out.classes[c].multiplicity * out.classes[c].w1;
  }
  out.resulting = weighted / total;
  return out;
}

double ds_threshold(const LatticeBlock& block) {
  return static_cast<double>(block.n_interior()) / block.boundary_size();
}

DsReport ds_report(const LatticeBlock& block, const SpinModel& model, double beta_J,
                   const std::vector<BoundaryConfig>& bases) {
  require(!bases.empty(), ErrorCode::kInvalidArgument, "no base boundaries given");
  for (const auto& b : bases) validate_boundary(block, b);
  DsEvaluator ev(block, model, beta_J);
  ev.prefetch(bases);
  DsReport report;
  report.beta_J = beta_J;
  report.block = block.name();
  report.threshold = ds_threshold(block);
  for (std::size_t c = 0; c < bases.size(); ++c) {
    DsCase dc = ev.evaluate(bases[c]);
    for (auto& cls : dc.classes) cls.class_id = std::to_string(c + 1) + cls.class_id;
    if (c == 0 || dc.resulting > report.resulting_distance) {
      report.resulting_distance = dc.resulting;
      report.worst_case = c;
    }
    report.cases.push_back(std::move(dc));
  }
  report.satisfied = report.resulting_distance < report.threshold;
  return report;
}

CriticalBound ds_critical_bound(const LatticeBlock& block, const SpinModel& model,
                                const std::vector<BoundaryConfig>& bases,
                                const DsBoundOptions& options) {
  require(!bases.empty(), ErrorCode::kInvalidArgument, "no base boundaries given");
  require(options.candidates >= 1, ErrorCode::kInvalidArgument, "need at least one candidate");
  const double threshold = ds_threshold(block);
  const int dim = block_dimension(block);
  const double probe = options.probe_beta >= 0.0
                           ? options.probe_beta
                           : (dim >= 2 ? ising_dobrushin_closed_form(dim) : 0.25);

  auto full = [&](double beta) {
    DsEvaluator ev(block, model, beta);
    ev.prefetch(bases);
    std::vector<double> values(bases.size());
    for (std::size_t i = 0; i < bases.size(); ++i) values[i] = ev.evaluate(bases[i]).resulting;
    return values;
  };

  std::vector<std::size_t> order(bases.size());
  std::iota(order.begin(), order.end(), 0);
  {
    const auto at_probe = full(probe);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return at_probe[x] > at_probe[y]; });
  }
  std::vector<std::size_t> candidates(order.begin(),
                                      order.begin() + static_cast<std::ptrdiff_t>(
                                                          std::min(options.candidates, bases.size())));
  std::size_t evaluations = 1;

  while (true) {
    std::vector<BoundaryConfig> cand_bases;
    for (auto i : candidates) cand_bases.push_back(bases[i]);
    CriticalBound cb = bisect_criterion(
        [&](double beta) {
          DsEvaluator ev(block, model, beta);
          ev.prefetch(cand_bases);
          CriterionValue best{-1.0, {}};
          for (const auto& b : cand_bases) {
            const double r = ev.evaluate(b).resulting;
            if (r > best.value) best = {r, b.str()};
          }
          return best;
        },
        threshold, options.bisection);

    const auto at_lo = full(cb.lo);
    ++evaluations;
    std::vector<std::size_t> failing;
    for (std::size_t i = 0; i < bases.size(); ++i) {
      if (at_lo[i] >= threshold &&
          std::find(candidates.begin(), candidates.end(), i) == candidates.end()) {
        failing.push_back(i);
      }
    }
    if (failing.empty()) {
      cb.evaluations += evaluations;
      cb.value_at_lo = *std::max_element(at_lo.begin(), at_lo.end());
      return cb;
    }
    evaluations += cb.evaluations;
    candidates.insert(candidates.end(), failing.begin(), failing.end());
  }
}

// ---------------------------------------------------------------------------

double high_temp_bound(int d, double C0, double C1) {
  require(d >= 1, ErrorCode::kInvalidArgument, "dimension must be at least 1");
  require(C0 > 0.0 && C1 > 0.0 && std::isfinite(C0) && std::isfinite(C1),
          ErrorCode::kInvalidArgument, "constants C0 and C1 must be positive");
  return 1.0 / (12.0 * d * C0 * C1);
}

double heisenberg_bound(int d, double J) { return high_temp_bound(d, J, std::numbers::pi); }

double heisenberg_improved_bound(int d, double J) {
  require(d >= 1, ErrorCode::kInvalidArgument, "dimension must be at least 1");
  require(J > 0.0 && std::isfinite(J), ErrorCode::kInvalidArgument, "J must be positive");
  return 1.0 / (24.0 * d * J);
}

LongRangeResult long_range_ising_threshold(const RadialKernel& kernel, int d, int r_max,
                                           double tail_bound) {
  require(d >= 1 && r_max >= 1, ErrorCode::kInvalidArgument, "need d >= 1 and r_max >= 1");
  require(tail_bound >= 0.0 && std::isfinite(tail_bound), ErrorCode::kInvalidArgument,
          "tail bound must be finite and non-negative");
  const double side = 2.0 * r_max + 1.0;
  require(std::pow(side, d) <= 1e8, ErrorCode::kInvalidArgument,
          "lattice ball too large to sum explicitly");

  LongRangeResult out;
  out.tail_bound = tail_bound;
  const long long r2max = static_cast<long long>(r_max) * r_max;
  std::vector<int> j(static_cast<std::size_t>(d), -r_max);
  while (true) {
    long long r2 = 0;
    for (int c : j) r2 += static_cast<long long>(c) * c;
    if (r2 > 0 && r2 <= r2max) {
      const double v = kernel(std::sqrt(static_cast<double>(r2)));
      require(std::isfinite(v) && v >= 0.0, ErrorCode::kInvalidArgument,
              "kernel must be finite and non-negative");
      out.partial_sum += v;
      ++out.terms;
    }
    std::size_t k = 0;
    for (; k < j.size(); ++k) {
      if (j[k] < r_max) {
        ++j[k];
        break;
      }
      j[k] = -r_max;
    }
    if (k == j.size()) break;
  }

  const double total = out.partial_sum + tail_bound;
  if (total == 0.0) {
    out.no_interaction = true;
    out.threshold = std::numeric_limits<double>::infinity();
    return out;
  }
  if (tail_bound > 0.1 * out.partial_sum) {
    std::ostringstream msg;
    msg << "tail bound " << tail_bound << " exceeds 10% of the partial sum " << out.partial_sum;
    fail(ErrorCode::kInsufficientTruncation, msg.str());
  }
  out.threshold = 1.0 / total;
  return out;
}

namespace {

// S_d A sum_k C(d-1,k) c^(d-1-k) I_k with I_k = int_T^inf t^k g(t) dt,
// T = r_max - 2c and c = sqrt(d)/2.
template <typename Moment>
double shell_tail(double A, int d, int r_max, const Moment& moment) {
  require(d >= 1 && A >= 0.0 && std::isfinite(A), ErrorCode::kInvalidArgument,
          "tail bound needs d >= 1 and A >= 0");
  const double c = 0.5 * std::sqrt(static_cast<double>(d));
  const double T = r_max - 2.0 * c;
  require(T > 0.0, ErrorCode::kInvalidArgument, "tail bound needs r_max > sqrt(d)");
  const double sphere = 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
  double acc = 0.0;
  double binom = 1.0;
  for (int k = 0; k <= d - 1; ++k) {
    acc += binom * std::pow(c, d - 1 - k) * moment(k, T);
    binom = binom * (d - 1 - k) / (k + 1);
  }
  return sphere * A * acc;
}

}  // namespace

double power_law_tail_bound(double A, double p, int d, int r_max) {
  require(p > d, ErrorCode::kInvalidArgument, "power-law tail needs p > d");
  return shell_tail(A, d, r_max,
                    [p](int k, double T) { return std::pow(T, k + 1 - p) / (p - k - 1); });
}

double exponential_tail_bound(double A, double lambda, int d, int r_max) {
  require(lambda > 0.0, ErrorCode::kInvalidArgument, "exponential tail needs lambda > 0");
  return shell_tail(A, d, r_max, [lambda](int k, double T) {
    // int_T^inf t^k e^(-lambda t) dt = e^(-lambda T) sum_m k!/m! T^m / lambda^(k-m+1)
    double sum = 0.0;
    double term = 1.0 / lambda;  // m = k
    for (int m = k; m >= 0; --m) {
      sum += term * std::pow(T, m);
      term *= m / lambda;
    }
    return std::exp(-lambda * T) * sum;
  });
}

bool field_uniqueness_check(const RadialKernel& kernel, double h, int d, int r_max,
                            double tail_bound) {
  require(std::isfinite(h), ErrorCode::kInvalidArgument, "field must be finite");
  const LongRangeResult r = long_range_ising_threshold(kernel, d, r_max, tail_bound);
  return h > r.partial_sum + r.tail_bound;
}

}  // namespace dobrushin
