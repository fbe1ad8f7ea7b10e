#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "lacunar/error.hpp"
#include "lacunar/gaussian.hpp"
#include "lacunar/parallel.hpp"

using namespace lacunar;

TEST_CASE("sample paths are reproducible") {
  GaussianSpec spec{1.5, FrequencySequence::double_exponential(), 4, 42, PathMode::Complex};
  set_worker_count(1);
  const auto a = sample_path(spec, 1021, 7);
  set_worker_count(4);
  const auto b = sample_path(spec, 1021, 7);
  set_worker_count(1);
  CHECK(a.draws == b.draws);
  CHECK(a.grid.values == b.grid.values);
  CHECK(a.derived_seed == b.derived_seed);
  const auto c = sample_path(spec, 1021, 8);
  CHECK(c.draws != a.draws);
}

TEST_CASE("draws for a smaller truncation are a prefix") {
  const auto long_draws = path_draws(3, 11, 6);
  const auto short_draws = path_draws(3, 11, 2);
  for (std::size_t i = 0; i < short_draws.size(); ++i) CHECK(short_draws[i] == long_draws[i]);
}

TEST_CASE("two-term path") {
  GaussianSpec spec{1.5, FrequencySequence::double_exponential(), 1, 5, PathMode::Complex};
  const auto path = sample_path(spec, 257, 0);
  double k_plus = 0.0, k_minus = 0.0;
  for (const auto& [k, v] : path.draws) (k > 0 ? k_plus : k_minus) = v;
  for (std::uint64_t j = 0; j < path.grid.size; ++j) {
    const double t = path.grid.t(j);
    const Complex expected = k_plus * std::polar(1.0, 4 * t) + k_minus * std::polar(1.0, -4 * t);
    CHECK(std::abs(path.grid.values[j] - expected) <= 1e-12);
    CHECK(std::abs(path.grid.values[j]) <= std::fabs(k_plus) + std::fabs(k_minus) + 1e-12);
  }
}

TEST_CASE("re-evaluating the recorded draws reproduces the path") {
  GaussianSpec spec{1.25, FrequencySequence::double_exponential(), 3, 9, PathMode::Complex};
  const auto path = sample_path(spec, 509, 4);
  const auto again = sample_grid(path_series(spec, path.draws), 509);
  CHECK(again.values == path.grid.values);
}

TEST_CASE("ensemble mean is zero") {
  GaussianSpec spec{1.5, FrequencySequence::double_exponential(), 4, 2024, PathMode::Complex};
  const std::uint64_t paths = 10000;
  const std::uint64_t m = 7;
  Complex sum{};
  for (std::uint64_t p = 0; p < paths; ++p) sum += sample_path(spec, m, p).grid.values[3];
  const Complex mean = sum / static_cast<double>(paths);
  const double r0 = covariance_exact(CovarianceFunction::of(spec), Angle::radians(0.0)).value;
  CHECK(std::abs(mean) <= 4 * std::sqrt(r0 / paths));
}

TEST_CASE("covariance at zero") {
  CovarianceFunction cov{1.0, FrequencySequence::double_exponential(), 100000};
  const auto r = covariance_exact(cov, Angle::radians(0.0));
  CHECK(std::fabs(r.value - std::numbers::pi * std::numbers::pi / 3) <= r.tail_bound + 1e-12);
  for (double delta : {0.75, 1.5, 2.0}) {
    CovarianceFunction c{delta, FrequencySequence::double_exponential(), 6};
    double partial = 0.0;
    for (int k = 6; k >= 1; --k) partial += std::pow(k, -2 * delta);
    CHECK(covariance_exact(c, Angle::radians(0.0)).value == doctest::Approx(2 * partial).epsilon(1e-15));
  }
}

TEST_CASE("covariance is even and bounded") {
  CovarianceFunction cov{1.5, FrequencySequence::double_exponential(), 5};
  const double r0 = covariance_exact(cov, Angle::radians(0.0)).value;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double t = u(rng);
    const auto a = covariance_exact(cov, Angle::radians(t));
    const auto b = covariance_exact(cov, Angle::radians(-t));
    CHECK(std::fabs(a.value - b.value) <= a.rounding_bound + b.rounding_bound);
    CHECK(std::fabs(a.value) <= r0 + a.rounding_bound);
  }
}

TEST_CASE("covariance equals the expectation over the draws") {
  // E[nu(t+s) conj(nu(s))] = sum_k |k|^-2Delta exp(i sign(k) n(|k|) t) once the
  // cross terms vanish; the imaginary parts of +k and -k cancel.
  const auto freqs = FrequencySequence::double_exponential();
  const double delta = 1.5;
  const std::int64_t n = 4;
  CovarianceFunction cov{delta, freqs, n};
  for (double t : {0.3, 1.7, -2.2}) {
    for (double s : {0.0, 0.7}) {
      Complex expectation{};
      double err = 0.0;
      for (std::int64_t k = 1; k <= n; ++k) {
        const double w = std::pow(static_cast<double>(k), -2 * delta);
        for (int sign : {1, -1}) {
          const BigInt nk = sign * freqs.at(k);
          const auto a = reduce_phase(nk, Angle::radians(t + s));
          const auto b = reduce_phase(nk, Angle::radians(s));
          expectation += w * std::polar(1.0, a.angle) * std::conj(std::polar(1.0, b.angle));
          err += w * (a.error_bound + b.error_bound);
        }
      }
      const auto r = covariance_exact(cov, Angle::radians(t));
      // t + s is rounded, so n(k) * ulp(t + s) enters the comparison.
      const double shift = std::ldexp(1.0, 1 << n) * 1e-15;
      CHECK(std::fabs(expectation.real() - r.value) <= err + r.rounding_bound + 2 * shift + 1e-13);
      CHECK(std::fabs(expectation.imag()) <= err + 2 * shift + 1e-13);
    }
  }
}

TEST_CASE("Monte Carlo covariance") {
  GaussianSpec spec{1.5, FrequencySequence::double_exponential(), 4, 77, PathMode::Complex};
  const auto exact = covariance_exact(CovarianceFunction::of(spec), Angle::radians(0.0)).value;
  const auto est = covariance_mc(spec, 0.0, 0.0, 20000);
  CHECK(std::fabs(est.estimate - exact) <= 4 * est.standard_error);
  const auto lagged = covariance_mc(spec, 0.4, 0.7, 20000);
  const auto base = covariance_mc(spec, 0.4, 0.0, 20000);
  CHECK(std::fabs(lagged.estimate - base.estimate) <=
        4 * std::hypot(lagged.standard_error, base.standard_error));
  const auto small = covariance_mc(spec, 1.0, 0.0, 100);
  CHECK(small.standard_error > 0.0);
  CHECK_THROWS_AS(covariance_mc(spec, 0.0, 0.0, 99), ValidationError);
}

TEST_CASE("Monte Carlo covariance is independent of worker count") {
  GaussianSpec spec{2.0, FrequencySequence::double_exponential(), 3, 5, PathMode::Complex};
  set_worker_count(1);
  const auto a = covariance_mc(spec, 0.3, 0.1, 3000);
  set_worker_count(3);
  const auto b = covariance_mc(spec, 0.3, 0.1, 3000);
  set_worker_count(1);
  CHECK(a.estimate == b.estimate);
  CHECK(a.standard_error == b.standard_error);
}

TEST_CASE("roughness table shape") {
  const std::vector<std::int64_t> one{3};
  const auto t = roughness_diagnostic(1.5, FrequencySequence::double_exponential(), one, 0.01, 1021, 5, 1);
  CHECK(t.rows.size() == 1);
  CHECK(t.rows[0].median > 0.0);
  const std::vector<std::int64_t> bad{4, 3};
  CHECK_THROWS_AS(roughness_diagnostic(1.5, FrequencySequence::double_exponential(), bad, 0.01, 1021, 5, 1),
                  ValidationError);
}

TEST_CASE("gaussian spec JSON") {
  GaussianSpec spec{1.25, FrequencySequence::double_exponential(), 5, 123, PathMode::RealPart};
  const auto j = spec.to_json();
  CHECK(j.at("family") == "double_exponential");
  CHECK(j.at("delta") == 1.25);
  const auto back = GaussianSpec::from_json(j);
  CHECK(back.to_json() == j);
  CHECK_THROWS_AS(GaussianSpec::from_json({{"delta", -1.0}}), ValidationError);
}
