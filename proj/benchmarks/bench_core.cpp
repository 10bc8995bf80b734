#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <vector>

#include "permsel/forecast.hpp"
#include "permsel/linear_model.hpp"
#include "permsel/permutation_test.hpp"
#include "permsel/rng.hpp"
#include "permsel/scoring.hpp"

namespace {

using namespace permsel;

Eigen::MatrixXd make_design(int n, int p, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Eigen::MatrixXd x(n, p);
  x.col(0).setOnes();
  for (int c = 1; c < p; ++c) {
    for (int r = 0; r < n; ++r) x(r, c) = rng.next_gaussian();
  }
  return x;
}

Eigen::VectorXd make_response(int n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Eigen::VectorXd y(n);
  for (int r = 0; r < n; ++r) y(r) = rng.next_gaussian();
  return y;
}

void BM_FitLinearGaussian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DesignMatrix design(make_design(n, 4, 1));
  const Eigen::VectorXd y = make_response(n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_linear_gaussian(design, y));
  }
}
BENCHMARK(BM_FitLinearGaussian)->Arg(20)->Arg(45)->Arg(200);

void BM_LooCvMeanIgnorance(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DesignMatrix design(make_design(n, 4, 3));
  const Eigen::VectorXd y = make_response(n, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(loo_cv_mean_ignorance(design, y));
  }
}
BENCHMARK(BM_LooCvMeanIgnorance)->Arg(20)->Arg(45);

void BM_SingleModelPermTest(benchmark::State& state) {
  const int n = 20;
  const PreparedModel model{"m", DesignMatrix(make_design(n, 2, 5)), {}};
  const Eigen::VectorXd y = make_response(n, 6);
  const auto plan = PermutationPlan::sampled(static_cast<int>(state.range(0)), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        single_model_perm_test(model, y, StatKind::Aic, plan));
  }
}
BENCHMARK(BM_SingleModelPermTest)->Arg(128)->Arg(512);

void BM_SelectionPermTest(benchmark::State& state) {
  const int n = 45;
  const int m = static_cast<int>(state.range(0));
  std::vector<PreparedModel> models;
  for (int i = 0; i < m; ++i) {
    models.push_back(
        PreparedModel{"m" + std::to_string(i),
                      DesignMatrix(make_design(n, 3, 100 + i)), {}});
  }
  const Eigen::VectorXd y = make_response(n, 8);
  const auto plan = PermutationPlan::sampled(256, 9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        selection_perm_test(std::span<const PreparedModel>(models), y,
                            StatKind::Aic, plan));
  }
}
BENCHMARK(BM_SelectionPermTest)->Arg(5)->Arg(20);

void BM_KdeDensity(benchmark::State& state) {
  FittedModel fitted;
  fitted.coefficients = Eigen::VectorXd::Constant(1, 0.05);
  fitted.sigma2 = 0.04;
  const PopulationForecast forecast = monte_carlo_forecast(
      fitted, Eigen::VectorXd::Ones(1), 100.0,
      static_cast<int>(state.range(0)), 11);
  double x = 95.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kde_density(forecast, x));
    x += 0.01;
  }
}
BENCHMARK(BM_KdeDensity)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
