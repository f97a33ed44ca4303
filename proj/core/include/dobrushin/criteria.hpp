#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "dobrushin/spin_models.hpp"

namespace dobrushin {

// ---------------------------------------------------------------------------
// Single-site criterion

struct PairingValue {
  std::string pairing_id;
  double w1;
};

struct DobrushinReport {
  double beta_J = 0.0;
  int d = 0;
  std::vector<PairingValue> values;
  double sup_distance = 0.0;
  /// 1 / (2d)
  double threshold = 0.0;
  bool satisfied = false;
  std::string witness;
  /// Largest disagreement between the closed form and the explicit
  /// measure route; zero when no cross-check ran.
  double cross_check_error = 0.0;
};

struct DobrushinOptions {
  /// Recompute every W1 from explicit one-point measures (and, for Potts with
  /// q <= 64, by the LP) and record the largest disagreement.
  bool cross_check = true;
};

/// Sup over single-site boundary pairs that differ in one neighbour of the W1
/// distance between the two one-point measures.
DobrushinReport dobrushin_sup(const SpinModel& model, int d, double beta_J,
                              const DobrushinOptions& options = {});

/// 1/4 ln((d+1)/(d-1)); throws no-finite-bound for d <= 1.
double ising_dobrushin_closed_form(int d);

// ---------------------------------------------------------------------------
// Bisection

struct CriticalBound {
  /// Largest probed value at which the criterion holds (equals lo).
  double beta_J_star = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double tol = 0.0;
  std::size_t evaluations = 0;
  double value_at_lo = 0.0;
  double value_at_hi = 0.0;
  /// What attains the criterion value at hi.
  std::string witness;
};

struct BisectionOptions {
  double tol = 1e-6;
  double bracket_hi = 5.0;
  double bracket_max = 50.0;
  double scan_step = 0.05;
};

struct CriterionValue {
  double value;
  std::string witness;
};

/// Finds where a criterion crosses the threshold. The scan grid is walked
/// from 0 until the value reaches the threshold, checking that it never
/// decreases (monotonicity-violation otherwise); the bracket widens past
/// bracket_hi up to bracket_max (bracket-failure beyond). Then bisects to tol.
CriticalBound bisect_criterion(const std::function<CriterionValue(double)>& criterion,
                               double threshold, const BisectionOptions& options = {});

/// Bisection of dobrushin_sup against 1/(2d). Ising with d = 1 has no
/// finite bound.
CriticalBound dobrushin_critical_bound(const SpinModel& model, int d,
                                       const BisectionOptions& options = {});

struct PottsScanRow {
  int q;
  CriticalBound bound;
  std::string dominating_pairing;
  /// Set when the bound is smaller than the previous row's by more than tol.
  /// This happens for d = 2 just after the large-q pairing takes over.
  bool below_previous = false;
};

/// Critical bounds for q in [q_lo, q_hi], one per q, in order.
std::vector<PottsScanRow> potts_scan(int d, int q_lo, int q_hi,
                                     const BisectionOptions& options = {});

/// Same for an explicit list of q values (increasing).
std::vector<PottsScanRow> potts_scan(int d, const std::vector<int>& qs,
                                     const BisectionOptions& options = {});

// ---------------------------------------------------------------------------
// Block criterion

struct DsClassEntry {
  std::string class_id;
  BoundaryConfig flipped;
  GroupKind kind;
  int group;
  /// Raw boundary flips in the class.
  int multiplicity;
  double weight;
  double w1;
};

struct DsCase {
  BoundaryConfig base;
  std::vector<DsClassEntry> classes;
  double resulting = 0.0;
};

struct DsReport {
  double beta_J = 0.0;
  std::string block;
  std::vector<DsCase> cases;
  /// Maximum over cases.
  double resulting_distance = 0.0;
  std::size_t worst_case = 0;
  /// |interior| / |boundary|
  double threshold = 0.0;
  bool satisfied = false;
};

/// Block W1 values at one beta_J, memoized per symmetry class of the
/// unordered boundary pair. Thread-safe.
class DsEvaluator {
 public:
  DsEvaluator(const LatticeBlock& block, const SpinModel& model, double beta_J);

  /// W1 between the block measures under two aggregate boundaries.
  double w1(const BoundaryConfig& a, const BoundaryConfig& b);

  /// Weighted case for one base boundary; flips are grouped into orbits of
  /// the base's stabilizer. Class W1 values are computed in parallel.
  DsCase evaluate(const BoundaryConfig& base);

  /// Computes all pairs needed for these bases in parallel.
  void prefetch(const std::vector<BoundaryConfig>& bases);

  double beta_J() const noexcept { return beta_J_; }
  std::size_t cache_size() const;

 private:
  using Key = std::pair<BoundaryConfig, BoundaryConfig>;
  Key canonical_pair(const BoundaryConfig& a, const BoundaryConfig& b) const;
  double compute(const Key& key) const;

  const LatticeBlock& block_;
  SpinModel model_;
  double beta_J_;
  bool allow_flip_;
  mutable std::mutex guard_;
  std::map<Key, double> cache_;
};

double ds_threshold(const LatticeBlock& block);

DsReport ds_report(const LatticeBlock& block, const SpinModel& model, double beta_J,
                   const std::vector<BoundaryConfig>& bases);

struct DsBoundOptions {
  BisectionOptions bisection;
  /// Bases carried through the bisection after a full evaluation at the
  /// probe value.
  std::size_t candidates = 3;
  /// Full-evaluation probe; a negative value picks the single-site Ising
  /// bound for the block's dimension.
  double probe_beta = -1.0;
};

/// Bisection of the largest weighted block distance against the threshold.
/// Only the strongest bases at the probe are tracked during bisection; at
/// the final lo every base is re-evaluated and any base that reaches the
/// threshold joins the candidates before bisecting again.
CriticalBound ds_critical_bound(const LatticeBlock& block, const SpinModel& model,
                                const std::vector<BoundaryConfig>& bases,
                                const DsBoundOptions& options = {});

// ---------------------------------------------------------------------------
// Closed-form conditions

/// 1 / (12 d C0 C1): uniqueness holds for beta below it.
double high_temp_bound(int d, double C0, double C1);

/// Classical Heisenberg spins with C0 = J and C1 = pi.
double heisenberg_bound(int d, double J);

/// Improved Heisenberg estimate 1 / (24 d J).
double heisenberg_improved_bound(int d, double J);

using RadialKernel = std::function<double(double)>;

struct LongRangeResult {
  /// 1 / (partial_sum + tail_bound); +inf when there is no interaction.
  double threshold = 0.0;
  double partial_sum = 0.0;
  double tail_bound = 0.0;
  std::size_t terms = 0;
  bool no_interaction = false;
};

/// Sum of J(|j|) over lattice points 0 < |j| <= r_max (Euclidean norm) in
/// Z^d. tail_bound certifies the remainder beyond r_max; it may not exceed
/// 10% of the partial sum (insufficient-truncation).
LongRangeResult long_range_ising_threshold(const RadialKernel& kernel, int d, int r_max,
                                           double tail_bound = 0.0);

/// Certified bounds on sum_{|j| > r_max} J(|j|) over Z^d for A r^-p (p > d)
/// and A exp(-lambda r). Each lattice term is dominated by an integral of
/// J(|x| - sqrt(d)/2) over its unit cell. Requires r_max > sqrt(d).
double power_law_tail_bound(double A, double p, int d, int r_max);
double exponential_tail_bound(double A, double lambda, int d, int r_max);

/// h > sum_{j != 0} J(|j|), with the tail bound added to the partial sum.
bool field_uniqueness_check(const RadialKernel& kernel, double h, int d, int r_max,
                            double tail_bound = 0.0);

}  // namespace dobrushin
