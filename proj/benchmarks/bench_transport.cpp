#include <benchmark/benchmark.h>

#include <random>

#include "dobrushin/spin_models.hpp"
#include "dobrushin/transport.hpp"

using namespace dobrushin;

namespace {

std::vector<double> random_weights(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(n);
  for (auto& x : w) x = u(rng);
  return w;
}

// Euclidean distances between random points of the unit square.
SpacePtr random_space(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::pair<double, double>> pts(n);
  for (auto& p : pts) p = {u(rng), u(rng)};
  Eigen::MatrixXd d(n, n);
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = std::to_string(i);
    for (std::size_t j = 0; j < n; ++j) {
      d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second);
    }
  }
  return std::make_shared<const FiniteMetricSpace>(labels, d);
}

void run_backend(benchmark::State& state, TransportBackend backend) {
  std::mt19937_64 rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  auto space = random_space(n, rng);
  const auto mu = ProbabilityVector::from_weights(space, random_weights(n, rng));
  const auto nu = ProbabilityVector::from_weights(space, random_weights(n, rng));
  TransportOptions options;
  options.backend = backend;
  for (auto _ : state) benchmark::DoNotOptimize(wasserstein_lp(mu, nu, options).value);
  state.SetComplexityN(state.range(0));
}

void BM_TreeSimplex(benchmark::State& state) { run_backend(state, TransportBackend::kTree); }
void BM_DenseSimplex(benchmark::State& state) { run_backend(state, TransportBackend::kDense); }

BENCHMARK(BM_TreeSimplex)->RangeMultiplier(2)->Range(8, 512)->Complexity();
BENCHMARK(BM_DenseSimplex)->RangeMultiplier(2)->Range(8, 64)->Complexity();

// One block W1 as used by the block criterion: 512 cube configurations.
void BM_CubeBlockW1(benchmark::State& state) {
  const auto block = LatticeBlock::cube2x2x2();
  const auto model = SpinModel::ising();
  const auto a = block_gibbs(block, model, 0.18727, BoundaryConfig::parse("(-1 1 -1 1 1 -1 1 -1)"));
  const auto b = block_gibbs(block, model, 0.18727, BoundaryConfig::parse("(-3 1 -1 1 1 -1 1 -1)"));
  for (auto _ : state) benchmark::DoNotOptimize(wasserstein_lp(a.p, b.p).value);
}
BENCHMARK(BM_CubeBlockW1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
