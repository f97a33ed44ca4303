#include "dobrushin_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "dobrushin/continuous_spins.hpp"
#include "dobrushin/criteria.hpp"
#include "dobrushin/errors.hpp"
#include "dobrushin/parallel.hpp"
#include "dobrushin/spin_models.hpp"
#include "dobrushin/transport.hpp"
#include "dobrushin_cli/config.hpp"
#include "dobrushin_cli/io.hpp"

namespace dobrushin::cli {

namespace {

// ---------------------------------------------------------------------------
// Option storage

struct WassersteinArgs {
  int discrete = 0;
  std::string mu, nu, mu_file, nu_file, metric_file;
  std::string block, boundary_1, boundary_2;
  double beta_j = -1.0, J = 1.0, h = 0.0;
  std::string coupling_out;
  std::string backend = "tree";
};

struct DobrushinArgs {
  std::string model = "ising";
  int d = 2, q = 3;
  double J = 1.0, h = 0.0, tol = 1e-6;
  std::optional<double> beta_j;
  std::string scan_beta, scan_q, out;
  bool no_cross_check = false;
};

struct DsArgs {
  std::string block = "square2x2";
  std::string mode = "curated";
  double J = 1.0, h = 0.0, tol = 1e-6;
  std::optional<double> beta_j;
  std::vector<std::string> bases;
  std::string out, resulting_out;
  std::size_t candidates = 3;
};

struct ContinuousArgs {
  std::string g = "zero";
  double alpha = 1.0;
  int d = 1;
  std::optional<double> beta, y, y_prime;
  std::optional<double> half_width;
  std::size_t points = 20001;
  unsigned seed = 2024;
  std::string matrix, y_vec, y_prime_vec, norm = "euclidean", out;
  bool coordinatewise = false;
};

struct HighTempArgs {
  int d = 2;
  std::optional<double> C0, C1;
  bool heisenberg = false;
  double J = 1.0;
};

struct LongRangeArgs {
  std::string kernel;
  int d = 1;
  int r_max = 20;
  std::string tail = "auto";
  double h = 0.0;
};

struct Args {
  int precision = 7;
  std::string config;
  WassersteinArgs w;
  DobrushinArgs dob;
  DsArgs ds;
  ContinuousArgs cont;
  HighTempArgs ht;
  LongRangeArgs lr;
};

struct Out {
  std::ostream& out;
  std::ostream& err;
  int precision;
  std::string num(double v) const { return format_number(v, precision); }
};

// Stream for "-" / empty (stdout) or a file.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw InputError(path + ": cannot open for writing");
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }
  bool is_file() const { return file_ != nullptr; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

SpinModel make_model(const std::string& name, int q, double J, double h) {
  if (name == "ising") return SpinModel::ising(J, h);
  if (h != 0.0) throw InputError("an external field is only supported for the Ising model");
  return SpinModel::potts(q, J);
}

std::string model_label(const SpinModel& m) {
  if (m.kind == ModelKind::kIsing) return "ising";
  return "potts(q=" + std::to_string(m.q) + ")";
}

void print_bound(const Out& o, const CriticalBound& b) {
  o.out << "beta_j_star = " << o.num(b.beta_J_star) << "\n"
        << "bracket = [" << o.num(b.lo) << ", " << o.num(b.hi) << "]\n"
        << "value_at_lo = " << o.num(b.value_at_lo) << "\n"
        << "value_at_hi = " << o.num(b.value_at_hi) << "\n"
        << "witness = " << b.witness << "\n"
        << "evaluations = " << b.evaluations << "\n";
}

// ---------------------------------------------------------------------------
// wasserstein

ProbabilityVector measure_from(const SpacePtr& space, const std::vector<double>& p,
                               const std::string& source) {
  if (p.size() != space->size()) {
    throw InputError(source + ": " + std::to_string(p.size()) + " values for a space of " +
                     std::to_string(space->size()) + " points");
  }
  try {
    return ProbabilityVector(space, p);
  } catch (const Error& e) {
    throw InputError(source + ": " + e.what());
  }
}

int cmd_wasserstein(const WassersteinArgs& a, const Out& o) {
  std::optional<ProbabilityVector> mu, nu;
  if (!a.block.empty()) {
    if (a.beta_j < 0.0 || a.boundary_1.empty() || a.boundary_2.empty()) {
      throw InputError("--block needs --beta-j, --boundary-1 and --boundary-2");
    }
    const LatticeBlock block = LatticeBlock::by_name(a.block);
    const SpinModel model = SpinModel::ising(a.J, a.h);
    mu = block_gibbs(block, model, a.beta_j, BoundaryConfig::parse(a.boundary_1)).p;
    nu = block_gibbs(block, model, a.beta_j, BoundaryConfig::parse(a.boundary_2)).p;
  } else {
    if (a.mu.empty() == a.mu_file.empty() || a.nu.empty() == a.nu_file.empty()) {
      throw InputError("give exactly one of --mu/--mu-file and one of --nu/--nu-file");
    }
    const auto pm = a.mu.empty() ? read_vector_file(a.mu_file) : parse_list(a.mu, "--mu");
    const auto pn = a.nu.empty() ? read_vector_file(a.nu_file) : parse_list(a.nu, "--nu");
    SpacePtr space;
    if (!a.metric_file.empty()) {
      if (a.discrete > 0) throw InputError("--discrete and --metric-file are exclusive");
      const auto rows = read_matrix_file(a.metric_file);
      const auto n = static_cast<Eigen::Index>(rows.size());
      if (rows.front().size() != rows.size()) {
        throw InputError(a.metric_file + ": metric must be square");
      }
      Eigen::MatrixXd dist(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) dist(i, j) = rows[i][j];
      }
      std::vector<std::string> labels;
      for (Eigen::Index i = 0; i < n; ++i) labels.push_back(std::to_string(i));
      try {
        space = std::make_shared<const FiniteMetricSpace>(std::move(labels), std::move(dist));
      } catch (const Error& e) {
        throw InputError(a.metric_file + ": " + e.what());
      }
    } else if (a.discrete > 0) {
      space = make_discrete_space(a.discrete);
    } else {
      throw InputError("give --discrete Q, --metric-file or --block");
    }
    mu = measure_from(space, pm, a.mu.empty() ? a.mu_file : "--mu");
    nu = measure_from(space, pn, a.nu.empty() ? a.nu_file : "--nu");
  }

  TransportOptions opts;
  opts.backend = a.backend == "dense" ? TransportBackend::kDense : TransportBackend::kTree;
  const TransportResult r = wasserstein_lp(*mu, *nu, opts);
  o.out << "primal = " << o.num(r.value) << "\n"
        << "dual = " << o.num(r.dual_value) << "\n"
        << "gap = " << o.num(std::abs(r.value - r.dual_value)) << "\n"
        << "iterations = " << r.iterations << "\n";
  if (!a.coupling_out.empty()) {
    Sink sink(a.coupling_out, o.out);
    *sink << "row,col,mass\n";
    const auto& s = r.coupling.sigma();
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      for (Eigen::Index j = 0; j < s.cols(); ++j) {
        if (s(i, j) > 0.0) *sink << i << "," << j << "," << o.num(s(i, j)) << "\n";
      }
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// dobrushin

int cmd_dobrushin(const DobrushinArgs& a, const Out& o) {
  const SpinModel model = make_model(a.model, a.q, a.J, a.h);
  BisectionOptions bis;
  bis.tol = a.tol;

  if (!a.scan_q.empty()) {
    if (model.kind != ModelKind::kPotts) throw InputError("--scan-q needs the potts model");
    const auto qs = parse_int_range(a.scan_q);
    const auto rows = potts_scan(a.d, qs, bis);
    Sink sink(a.out, o.out);
    *sink << "q,bound_beta_j,dominating_pairing\n";
    for (const auto& r : rows) {
      *sink << r.q << "," << o.num(r.bound.beta_J_star) << "," << r.dominating_pairing << "\n";
    }
    for (const auto& r : rows) {
      if (r.below_previous) {
        o.err << "note: bound at q=" << r.q << " is below the previous q\n";
      }
    }
    return kExitOk;
  }

  if (!a.scan_beta.empty()) {
    const auto betas = parse_range(a.scan_beta);
    std::vector<DobrushinReport> reports(betas.size());
    parallel_for(betas.size(), [&](std::size_t k) {
      reports[k] = dobrushin_sup(model, a.d, betas[k], {.cross_check = false});
    });
    Sink sink(a.out, o.out);
    *sink << "beta_j,pairing_id,w1\n";
    for (const auto& r : reports) {
      for (const auto& v : r.values) {
        *sink << o.num(r.beta_J) << "," << v.pairing_id << "," << o.num(v.w1) << "\n";
      }
    }
    return kExitOk;
  }

  o.out << "model = " << model_label(model) << "\n" << "d = " << a.d << "\n";
  if (a.beta_j) {
    const DobrushinReport r = dobrushin_sup(model, a.d, *a.beta_j, {.cross_check = !a.no_cross_check});
    o.out << "beta_j = " << o.num(r.beta_J) << "\n";
    for (const auto& v : r.values) o.out << "  " << v.pairing_id << "  " << o.num(v.w1) << "\n";
    o.out << "sup = " << o.num(r.sup_distance) << "\n"
          << "threshold = " << o.num(r.threshold) << "\n"
          << "witness = " << r.witness << "\n"
          << "satisfied = " << (r.satisfied ? "true" : "false") << "\n";
    if (!a.no_cross_check) o.out << "cross_check_error = " << o.num(r.cross_check_error) << "\n";
    if (!a.out.empty()) {
      Sink sink(a.out, o.out);
      *sink << "beta_j,pairing_id,w1\n";
      for (const auto& v : r.values) {
        *sink << o.num(r.beta_J) << "," << v.pairing_id << "," << o.num(v.w1) << "\n";
      }
    }
    return kExitOk;
  }
  print_bound(o, dobrushin_critical_bound(model, a.d, bis));
  if (model.kind == ModelKind::kIsing && model.h == 0.0 && a.d >= 2) {
    o.out << "closed_form = " << o.num(ising_dobrushin_closed_form(a.d)) << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// ds

int cmd_ds(const DsArgs& a, const Out& o) {
  const LatticeBlock block = LatticeBlock::by_name(a.block);
  const SpinModel model = SpinModel::ising(a.J, a.h);
  std::vector<BoundaryConfig> bases;
  for (const auto& b : a.bases) bases.push_back(BoundaryConfig::parse(b));
  if (bases.empty()) {
    const auto mode = a.mode == "exhaustive" ? BoundaryMode::kExhaustive : BoundaryMode::kCurated;
    bases = enumerate_block_boundaries(block, mode, a.h == 0.0);
  }
  for (const auto& b : bases) validate_boundary(block, b);

  o.out << "block = " << block.name() << "\n"
        << "bases = " << bases.size() << "\n"
        << "threshold = " << o.num(ds_threshold(block)) << "\n";

  if (!a.beta_j) {
    DsBoundOptions opts;
    opts.bisection.tol = a.tol;
    opts.candidates = a.candidates;
    print_bound(o, ds_critical_bound(block, model, bases, opts));
    return kExitOk;
  }

  const DsReport r = ds_report(block, model, *a.beta_j, bases);
  o.out << "beta_j = " << o.num(r.beta_J) << "\n";
  for (std::size_t c = 0; c < r.cases.size(); ++c) {
    const DsCase& dc = r.cases[c];
    o.out << "case " << c + 1 << "  base " << dc.base.str() << "\n";
    for (const auto& cls : dc.classes) {
      o.out << "  " << cls.class_id << "  " << cls.flipped.str() << "  " << to_string(cls.kind)
            << " " << cls.group << "  weight " << o.num(cls.weight) << "  w1 " << o.num(cls.w1)
            << "\n";
    }
    o.out << "  resulting " << o.num(dc.resulting) << "\n";
  }
  o.out << "resulting_distance = " << o.num(r.resulting_distance) << "\n"
        << "worst_case = " << r.worst_case + 1 << "\n"
        << "satisfied = " << (r.satisfied ? "true" : "false") << "\n";

  if (!a.out.empty()) {
    Sink sink(a.out, o.out);
    *sink << "case_id,boundary_1,boundary_2,w1_unweighted\n";
    for (const auto& dc : r.cases) {
      for (const auto& cls : dc.classes) {
        *sink << cls.class_id << "," << dc.base.str() << "," << cls.flipped.str() << ","
              << o.num(cls.w1) << "\n";
      }
    }
  }
  if (!a.resulting_out.empty()) {
    Sink sink(a.resulting_out, o.out);
    *sink << "case_id,weight,w1_resulting\n";
    for (std::size_t c = 0; c < r.cases.size(); ++c) {
      for (const auto& cls : r.cases[c].classes) {
        *sink << cls.class_id << "," << o.num(cls.weight) << "," << o.num(cls.weight * cls.w1)
              << "\n";
      }
      *sink << c + 1 << ",1," << o.num(r.cases[c].resulting) << "\n";
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// continuous

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

int cmd_continuous_nd(const ContinuousArgs& a, const Out& o) {
  const auto rows = parse_inline_matrix(a.matrix);
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd L(n, static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < L.rows(); ++i) {
    for (Eigen::Index j = 0; j < L.cols(); ++j) L(i, j) = rows[i][j];
  }
  if (a.y_vec.empty() || a.y_prime_vec.empty()) throw InputError("--matrix needs --y-vec and --yprime-vec");
  const Eigen::VectorXd y = to_eigen(parse_list(a.y_vec, "--y-vec"));
  const Eigen::VectorXd yp = to_eigen(parse_list(a.y_prime_vec, "--yprime-vec"));
  const double beta = a.beta.value_or(1.0);

  if (a.coordinatewise) {
    std::vector<ConvexPotential> gs(static_cast<std::size_t>(L.rows()), ConvexPotential::parse(a.g));
    const auto r = convex2_coordinatewise_check(L, gs, a.alpha, a.d, beta, y, yp);
    for (std::size_t k = 0; k < r.per_coordinate.size(); ++k) {
      o.out << "  coordinate " << k << "  w1 " << o.num(r.per_coordinate[k]) << "\n";
    }
    o.out << "w1_upper = " << o.num(r.w1_upper) << "\n"
          << "bound = " << o.num(r.bound) << "\n"
          << "ok = " << (r.ok ? "true" : "false") << "\n"
          << "alpha_condition = " << (r.alpha_condition ? "true" : "false") << "\n";
    return kExitOk;
  }
  if (ConvexPotential::parse(a.g).coefficients().size() > 0) {
    throw InputError("the matrix check without --coordinatewise needs --g zero");
  }
  const auto norm = a.norm == "sum" ? VectorNorm::kSum : VectorNorm::kEuclidean;
  const auto r = gaussian_nd_bound_check(L, a.alpha, a.d, beta, y, yp, norm);
  o.out << "w1 = " << o.num(r.w1) << "\n"
        << "bound = " << o.num(r.bound) << "\n"
        << "ok = " << (r.ok ? "true" : "false") << "\n"
        << "operator_norm = " << o.num(r.operator_norm) << "\n"
        << "alpha_condition = " << (r.alpha_condition ? "true" : "false") << "\n";
  return kExitOk;
}

int cmd_continuous(const ContinuousArgs& a, const Out& o) {
  if (!a.matrix.empty()) return cmd_continuous_nd(a, o);

  struct Case {
    std::string g;
    double alpha, beta, y, y_prime;
  };
  std::vector<Case> cases;
  if (a.y || a.y_prime) {
    if (!a.y || !a.y_prime) throw InputError("give both --y and --yprime");
    cases.push_back({a.g, a.alpha, a.beta.value_or(1.0), *a.y, *a.y_prime});
  } else {
    // Default sweep: fields drawn from a seeded generator, fixed gaps.
    std::mt19937_64 rng(a.seed);
    std::uniform_real_distribution<double> base(-2.0, 2.0);
    for (const char* g : {"zero", "x4", "x2+x4"}) {
      for (double alpha : {0.5, 1.0, 2.0}) {
        for (double beta : {0.5, 1.0, 4.0}) {
          for (double gap : {0.1, 1.0, 5.0}) {
            const double y = base(rng);
            cases.push_back({g, alpha, beta, y, y + gap});
          }
        }
      }
    }
  }

  struct Row {
    double w1 = 0, bound = 0, dom = 0, shifted = 0, mean_gap = 0;
    bool ok = false;
  };
  std::vector<Row> rows(cases.size());
  GridParams grid;
  grid.points = a.points;
  grid.half_width = a.half_width;
  parallel_for(cases.size(), [&](std::size_t k) {
    const Case& c = cases[k];
    const ConvexPotentialSpec spec{c.alpha, a.d, ConvexPotential::parse(c.g)};
    const auto r = contraction_check_1d(spec, c.beta, c.y, c.y_prime, grid);
    const double lo = std::min(c.y, c.y_prime);
    const double hi = std::max(c.y, c.y_prime);
    rows[k] = {r.w1,
               r.bound,
               dominance_violation(spec, c.beta, lo, hi),
               shifted_dominance_violation(spec, c.beta, lo, hi),
               running_mean_violation(gibbs_density_1d(spec, c.beta, c.y, grid)),
               r.ok};
  });

  Sink sink(a.out, o.out);
  *sink << "g,alpha,d,beta,y,y_prime,w1,bound,ok,dominance_violation,shifted_violation,"
           "running_mean_violation\n";
  std::size_t passed = 0;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const Case& c = cases[k];
    const Row& r = rows[k];
    const bool ok = r.ok && r.dom <= 1e-9 && r.shifted <= 1e-9 && r.mean_gap <= 1e-9;
    passed += ok ? 1 : 0;
    *sink << c.g << "," << o.num(c.alpha) << "," << a.d << "," << o.num(c.beta) << ","
          << o.num(c.y) << "," << o.num(c.y_prime) << "," << o.num(r.w1) << "," << o.num(r.bound)
          << "," << (r.ok ? "true" : "false") << "," << o.num(r.dom) << "," << o.num(r.shifted)
          << "," << o.num(r.mean_gap) << "\n";
  }
  (sink.is_file() ? o.out : o.err) << "summary: " << passed << "/" << cases.size() << " ok, "
                                   << (passed == cases.size() ? "PASS" : "FAIL") << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// closed-form conditions

int cmd_high_temp(const HighTempArgs& a, const Out& o) {
  if (a.heisenberg) {
    o.out << "beta_bound = " << o.num(heisenberg_bound(a.d, a.J)) << "\n"
          << "beta_bound_improved = " << o.num(heisenberg_improved_bound(a.d, a.J)) << "\n";
    return kExitOk;
  }
  if (!a.C0 || !a.C1) throw InputError("high-temp needs --C0 and --C1 (or --heisenberg)");
  o.out << "beta_bound = " << o.num(high_temp_bound(a.d, *a.C0, *a.C1)) << "\n";
  return kExitOk;
}

double resolve_tail(const LongRangeArgs& a, const KernelSpec& k) {
  if (a.tail == "auto") return k.tail(a.d, a.r_max);
  return parse_list(a.tail, "--tail").at(0);
}

int cmd_long_range(const LongRangeArgs& a, const Out& o) {
  const KernelSpec k = parse_kernel(a.kernel);
  const auto r = long_range_ising_threshold(k.kernel, a.d, a.r_max, resolve_tail(a, k));
  o.out << "partial_sum = " << o.num(r.partial_sum) << "\n"
        << "tail_bound = " << o.num(r.tail_bound) << "\n"
        << "terms = " << r.terms << "\n"
        << "beta_bound = " << (r.no_interaction ? std::string("inf") : o.num(r.threshold)) << "\n";
  if (r.no_interaction) o.out << "no_interaction = true\n";
  return kExitOk;
}

int cmd_field_check(const LongRangeArgs& a, const Out& o) {
  const KernelSpec k = parse_kernel(a.kernel);
  const double tail = resolve_tail(a, k);
  const auto r = long_range_ising_threshold(k.kernel, a.d, a.r_max, tail);
  const bool unique = field_uniqueness_check(k.kernel, a.h, a.d, a.r_max, tail);
  o.out << "coupling_sum = " << o.num(r.partial_sum + r.tail_bound) << "\n"
        << "h = " << o.num(a.h) << "\n"
        << "unique = " << (unique ? "true" : "false") << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Application

void build(CLI::App& app, Args& a) {
  app.name("dobrushin");
  app.description("Uniqueness criteria for lattice spin systems via Wasserstein distances");
  app.require_subcommand(1);
  // "-h" stays free for the field option; subcommands inherit this.
  app.set_help_flag("--help", "Print this help message and exit");
  // Global options may also follow the subcommand.
  app.fallthrough();
  app.add_option("--precision", a.precision, "Significant digits in printed numbers")
      ->check(CLI::Range(1, 17));
  app.add_option("--config", a.config, "key = value configuration file");

  auto* w = app.add_subcommand("wasserstein", "W1 distance between two finite measures");
  w->add_option("--discrete", a.w.discrete, "Discrete metric on Q points")->check(CLI::Range(1, 1 << 20));
  w->add_option("--metric-file", a.w.metric_file, "Distance matrix file");
  w->add_option("--mu", a.w.mu, "First measure, comma separated");
  w->add_option("--nu", a.w.nu, "Second measure, comma separated");
  w->add_option("--mu-file", a.w.mu_file, "First measure file");
  w->add_option("--nu-file", a.w.nu_file, "Second measure file");
  w->add_option("--block", a.w.block, "Block Gibbs measures instead of explicit vectors");
  w->add_option("--beta-j", a.w.beta_j, "Inverse temperature times coupling");
  w->add_option("--boundary-1", a.w.boundary_1, "First block boundary, e.g. \"(0 0 0 -2)\"");
  w->add_option("--boundary-2", a.w.boundary_2, "Second block boundary");
  w->add_option("--J", a.w.J, "Coupling");
  w->add_option("--h", a.w.h, "External field");
  w->add_option("--coupling", a.w.coupling_out, "Write the optimal coupling as CSV ('-' for stdout)");
  w->add_option("--backend", a.w.backend, "LP backend")->check(CLI::IsMember({"tree", "dense"}));

  auto* d = app.add_subcommand("dobrushin", "Single-site criterion: bound, report or scans");
  d->add_option("model,--model", a.dob.model, "ising or potts")
      ->check(CLI::IsMember({"ising", "potts"}));
  d->add_option("--d", a.dob.d, "Lattice dimension")->check(CLI::Range(1, 16));
  d->add_option("--q", a.dob.q, "Potts states")->check(CLI::Range(2, 100000000));
  d->add_option("--J", a.dob.J, "Coupling");
  d->add_option("--h", a.dob.h, "External field (Ising)");
  d->add_option("--tol", a.dob.tol, "Bisection tolerance")->check(CLI::PositiveNumber);
  d->add_option("--beta-j", a.dob.beta_j, "Report every pairing at this value");
  d->add_option("--scan-beta", a.dob.scan_beta, "CSV of W1 per pairing over start:stop:step");
  d->add_option("--scan-q", a.dob.scan_q, "CSV of Potts bounds over lo:hi[:step] or a list");
  d->add_option("--out", a.dob.out, "CSV destination");
  d->add_flag("--no-cross-check", a.dob.no_cross_check, "Skip the explicit-measure cross-check");

  auto* s = app.add_subcommand("ds", "Block criterion: bound or tables at a fixed value");
  s->add_option("--block", a.ds.block, "square2x2, square3x3 or cube2x2x2");
  s->add_option("--mode", a.ds.mode, "Boundary set")->check(CLI::IsMember({"curated", "exhaustive"}));
  s->add_option("--J", a.ds.J, "Coupling");
  s->add_option("--h", a.ds.h, "External field");
  s->add_option("--tol", a.ds.tol, "Bisection tolerance")->check(CLI::PositiveNumber);
  s->add_option("--at-beta,--beta-j", a.ds.beta_j, "Tables at this value instead of bisection");
  s->add_option("--bases", a.ds.bases, "Explicit base boundaries");
  s->add_option("--out", a.ds.out, "CSV of unweighted class distances");
  s->add_option("--resulting-out", a.ds.resulting_out, "CSV of weighted contributions");
  s->add_option("--candidates", a.ds.candidates, "Bases tracked during bisection")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));

  auto* c = app.add_subcommand("continuous", "Contraction checks for continuous spins");
  c->add_option("--g", a.cont.g, "zero, x4, x2+x4, quartic:c or poly:c1,c2,...");
  c->add_option("--alpha", a.cont.alpha, "On-site quadratic coefficient")->check(CLI::PositiveNumber);
  c->add_option("--d", a.cont.d, "Lattice dimension")->check(CLI::Range(0, 64));
  c->add_option("--beta", a.cont.beta, "Inverse temperature")->check(CLI::PositiveNumber);
  c->add_option("--y", a.cont.y, "First field");
  c->add_option("--yprime", a.cont.y_prime, "Second field");
  c->add_option("--half-width", a.cont.half_width, "Grid half-width")->check(CLI::PositiveNumber);
  c->add_option("--points", a.cont.points, "Grid points")->check(CLI::Range(std::size_t{3}, std::size_t{4000001}));
  c->add_option("--seed", a.cont.seed, "Seed for the default sweep");
  c->add_option("--matrix", a.cont.matrix, "Coupling matrix L, rows separated by ';'");
  c->add_option("--y-vec", a.cont.y_vec, "First field vector");
  c->add_option("--yprime-vec", a.cont.y_prime_vec, "Second field vector");
  c->add_option("--norm", a.cont.norm, "Vector norm")->check(CLI::IsMember({"euclidean", "sum"}));
  c->add_flag("--coordinatewise", a.cont.coordinatewise, "Diagonal L with convex potentials");
  c->add_option("--out", a.cont.out, "CSV destination");

  auto* h = app.add_subcommand("high-temp", "High-temperature bound 1/(12 d C0 C1)");
  h->add_option("--d", a.ht.d, "Lattice dimension")->check(CLI::Range(1, 64));
  h->add_option("--C0", a.ht.C0, "Interaction bound")->check(CLI::PositiveNumber);
  h->add_option("--C1", a.ht.C1, "Spin-space diameter bound")->check(CLI::PositiveNumber);
  h->add_flag("--heisenberg", a.ht.heisenberg, "Classical Heisenberg spins");
  h->add_option("--J", a.ht.J, "Heisenberg coupling")->check(CLI::PositiveNumber);

  for (const char* name : {"long-range", "field-check"}) {
    auto* l = app.add_subcommand(name, std::string(name) == "long-range"
                                           ? "Long-range Ising bound 1 / sum J(|j|)"
                                           : "Uniqueness in a strong field h > sum J(|j|)");
    l->add_option("--kernel", a.lr.kernel, "nn:J, power:A,p, exp:A,lambda or geometric:A,ratio")
        ->required();
    l->add_option("--d", a.lr.d, "Lattice dimension")->check(CLI::Range(1, 8));
    l->add_option("--r-max", a.lr.r_max, "Truncation radius")->check(CLI::Range(1, 100000));
    l->add_option("--tail", a.lr.tail, "Tail bound beyond r-max, or auto");
    if (std::string(name) == "field-check") l->add_option("--h", a.lr.h, "External field")->required();
  }
}

std::string option_flag(const std::string& key) {
  static const std::map<std::string, std::string> aliases = {{"beta_scan", "scan-beta"},
                                                             {"scan_beta", "scan-beta"}};
  if (const auto it = aliases.find(key); it != aliases.end()) return "--" + it->second;
  std::string flag = key;
  std::replace(flag.begin(), flag.end(), '_', '-');
  return "--" + flag;
}

bool given(const std::vector<std::string>& args, const CLI::Option* opt) {
  for (const auto& a : args) {
    if (!a.starts_with("--")) continue;
    const std::string name = a.substr(0, a.find('='));
    if (opt->check_name(name)) return true;
  }
  return false;
}

// Expands --config into explicit options; command-line values win.
std::vector<std::string> apply_config(CLI::App& app, std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      break;
    }
    if (args[i].starts_with("--config=")) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;

  const auto entries = load_config(path);
  const auto subs = app.get_subcommands([](const CLI::App*) { return true; });
  std::ptrdiff_t sub_pos = -1;
  CLI::App* sub = nullptr;
  for (std::size_t i = 0; i < args.size() && !sub; ++i) {
    for (auto* s : subs) {
      if (s->get_name() == args[i]) {
        sub = s;
        sub_pos = static_cast<std::ptrdiff_t>(i);
      }
    }
  }
  if (!sub) throw InputError(path + ": a subcommand is required on the command line");

  std::vector<std::string> injected;
  for (const auto& e : entries) {
    const auto where = path + ":" + std::to_string(e.line) + ": ";
    bool section_known = e.section.empty();
    for (auto* s : subs) section_known = section_known || s->get_name() == e.section;
    if (!section_known) throw InputError(where + "unknown section '" + e.section + "'");
    if (!e.section.empty() && e.section != sub->get_name()) continue;

    const std::string flag = option_flag(e.key);
    if (e.key == "precision") {
      if (!given(args, app.get_option("--precision"))) {
        injected.insert(injected.begin(), {"--precision", e.value});
      }
      continue;
    }
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    if (!opt) {
      bool anywhere = false;
      for (auto* s : subs) anywhere = anywhere || s->get_option_no_throw(flag) != nullptr;
      if (!e.section.empty() || !anywhere) {
        throw InputError(where + "unknown key '" + e.key + "' for '" + sub->get_name() + "'");
      }
      continue;
    }
    if (given(args, opt)) continue;
    if (opt->get_expected_max() == 0) {
      if (e.value == "true") {
        injected.push_back(flag);
      } else if (e.value != "false") {
        throw InputError(where + "'" + e.key + "' expects true or false");
      }
    } else if (opt->get_items_expected_max() > 1) {
      // Lists separated by ';' in the file.
      injected.push_back(flag);
      std::stringstream in(e.value);
      for (std::string item; std::getline(in, item, ';');) injected.push_back(item);
    } else {
      injected.push_back(flag);
      injected.push_back(e.value);
    }
  }
  args.insert(args.begin() + sub_pos + 1, injected.begin(), injected.end());
  return args;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kInvalidCdf:
      return kExitInput;
    default:
      return kExitSolver;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app;
  Args a;
  build(app, a);
  try {
    std::vector<std::string> args = apply_config(app, raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }

  const Out o{out, err, a.precision};
  try {
    if (app.got_subcommand("wasserstein")) return cmd_wasserstein(a.w, o);
    if (app.got_subcommand("dobrushin")) return cmd_dobrushin(a.dob, o);
    if (app.got_subcommand("ds")) return cmd_ds(a.ds, o);
    if (app.got_subcommand("continuous")) return cmd_continuous(a.cont, o);
    if (app.got_subcommand("high-temp")) return cmd_high_temp(a.ht, o);
    if (app.got_subcommand("long-range")) return cmd_long_range(a.lr, o);
    if (app.got_subcommand("field-check")) return cmd_field_check(a.lr, o);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitInput;
}

}  // namespace dobrushin::cli
