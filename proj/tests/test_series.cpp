#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "lacunar/error.hpp"
#include "lacunar/series.hpp"

using namespace lacunar;

namespace {

constexpr double kEps = 0x1p-52;

}  // namespace

TEST_CASE("eval_truncated single term") {
  const auto spec = single_term(BigInt(3), {1.0, 0.0});
  const auto r = eval_truncated(spec, Angle::radians(0.0));
  CHECK(r.value.real() == 1.0);
  CHECK(r.value.imag() == 0.0);
}

TEST_CASE("eval_truncated geometric example at t = 0") {
  const auto spec = example_geometric(1.0, 50);
  const auto r = eval_truncated(spec, Angle::radians(0.0));
  double partial = 0.0;
  for (int k = 50; k >= 1; --k) partial += 1.0 / (static_cast<double>(k) * k);
  CHECK(std::fabs(r.value.real() - partial) <= 1e-14);
  CHECK(std::fabs(r.value.imag()) <= 1e-14);
  // The full series sits within T(50) of the partial sum.
  CHECK(std::fabs(r.value.real() - std::numbers::pi * std::numbers::pi / 6) <= r.truncation_bound);
}

TEST_CASE("eval_truncated double-exponential example at an exact third of the period") {
  // 2^(2^k) = 1 mod 3 for every k >= 1.
  const auto spec = example_double_exponential(1.0, 4);
  const auto r = eval_truncated(spec, Angle::turns(1, 3));
  const double mag = 1.0 + 1.0 / 4 + 1.0 / 9 + 1.0 / 16;
  const std::complex<double> expected = std::polar(mag, 2 * std::numbers::pi / 3);
  CHECK(std::abs(r.value - expected) <= r.rounding_bound + 1e-15);
}

TEST_CASE("sample_grid small exact cases") {
  const auto constant = sample_grid(single_term(BigInt(0), {1.0, 0.0}), 4);
  for (const auto& v : constant.values) CHECK(v == std::complex<double>(1.0, 0.0));
  const auto unit = sample_grid(single_term(BigInt(1), {1.0, 0.0}), 4);
  const std::complex<double> expected[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int j = 0; j < 4; ++j) CHECK(std::abs(unit.values[j] - expected[j]) <= 4 * kEps);
  CHECK_THROWS_AS(sample_grid(single_term(BigInt(1), {1.0, 0.0}), 1), ValidationError);
}

TEST_CASE("sample_grid agrees with eval_truncated") {
  const auto spec = example_double_exponential(1.0, 4);
  const auto grid = sample_grid(spec, 1021);
  CHECK(grid.collisions.empty());
  for (std::uint64_t j = 0; j < grid.size; j += 7) {
    const auto r = eval_truncated(spec, Angle::turns(static_cast<std::int64_t>(j), grid.size));
    CHECK(std::abs(grid.values[j] - r.value) <= grid.rounding_bound + r.rounding_bound);
  }
}

TEST_CASE("residue collisions are reported") {
  const auto spec = example_geometric(1.0, 12);
  const auto grid = sample_grid(spec, 1024);
  CHECK_FALSE(grid.collisions.empty());
  CHECK(sample_grid(spec, 1021).collisions.empty());
}

TEST_CASE("fourier_coefficient orthogonality") {
  const auto grid = sample_grid(single_term(BigInt(3), {1.0, 0.0}), 16);
  CHECK(std::abs(fourier_coefficient(grid, BigInt(3)).value - std::complex<double>(1.0, 0.0)) <= 1e-15);
  CHECK(std::abs(fourier_coefficient(grid, BigInt(5)).value) <= 1e-15);
}

TEST_CASE("fourier_coefficient recovers geometric example coefficients") {
  const auto spec = example_geometric(1.0, 8);
  const auto grid = sample_grid(spec, 65521);
  const double l1 = spec.coefficients.l1_upper();
  for (std::int64_t k = 1; k <= 8; ++k) {
    const auto est = fourier_coefficient(grid, spec.frequencies.at(k));
    CHECK_FALSE(est.aliased);
    CHECK(std::abs(est.value - spec.coefficients.at(k)) <= 2 * grid.truncation_bound + 10 * kEps * l1);
  }
  const auto c2 = fourier_coefficient(grid, BigInt(4));
  CHECK(std::fabs(c2.value.real() - 0.25) <= 2 * grid.truncation_bound + 10 * kEps * l1);
}

TEST_CASE("sampling is linear") {
  std::map<std::int64_t, BigInt> freqs{{1, 3}, {2, 10}, {3, 1000003}};
  std::map<std::int64_t, std::complex<double>> a{{1, {0.5, 0.25}}, {2, {-1.0, 0.0}}, {3, {0.0, 2.0}}};
  std::map<std::int64_t, std::complex<double>> b{{1, {1.0, 0.0}}, {2, {0.125, 0.5}}, {3, {0.0, 0.0}}};
  const double alpha = 0.75;
  std::map<std::int64_t, std::complex<double>> combo;
  for (const auto& [k, v] : a) combo[k] = alpha * v + b[k];
  const auto fs = FrequencySequence::explicit_values(freqs);
  const auto ga = sample_grid({fs, CoefficientSequence::explicit_values(a), 3, "a", {}}, 257);
  const auto gb = sample_grid({fs, CoefficientSequence::explicit_values(b), 3, "b", {}}, 257);
  const auto gc = sample_grid({fs, CoefficientSequence::explicit_values(combo), 3, "c", {}}, 257);
  for (std::uint64_t j = 0; j < 257; ++j) {
    CHECK(std::abs(gc.values[j] - (alpha * ga.values[j] + gb.values[j])) <= 16 * kEps * 4.0);
  }
}

TEST_CASE("samples are bounded by the l1 norm") {
  for (double delta : {0.75, 1.0, 2.0}) {
    const auto spec = example_geometric(delta, 10);
    const auto grid = sample_grid(spec, 4093);
    for (const auto& v : grid.values) CHECK(std::abs(v) <= spec.coefficients.l1_upper() + grid.rounding_bound);
  }
}

TEST_CASE("coefficient sequence tail and norm sandwich") {
  for (double s : {1.5, 2.0, 4.0}) {
    const auto c = CoefficientSequence::power(s, true);
    double prev = INFINITY;
    double partial = 0.0;
    for (std::int64_t n = 1; n <= 4096; n *= 2) {
      for (std::int64_t k = n / 2 + 1; k <= n; ++k) partial += c.abs_at(k);
      const double t = c.tail_majorant(n);
      CHECK(t <= prev);
      CHECK(t >= 0.0);
      prev = t;
      CHECK(partial <= c.l1_upper());
      CHECK(partial + t >= c.l1_lower());
    }
    CHECK(c.tail_majorant(1 << 20) < c.tail_majorant(1 << 10) / 10);
  }
}

TEST_CASE("series JSON round trip") {
  const auto spec = example_double_exponential(1.25, 5);
  const auto back = SeriesSpec::from_json(spec.to_json());
  CHECK(back.to_json() == spec.to_json());
  const auto shorthand = SeriesSpec::from_json({{"example", "2.1"}, {"delta", 1.0}, {"truncation", 8}});
  CHECK(shorthand.truncation == 8);
  CHECK(shorthand.frequencies.at(3) == 8);
  CHECK_THROWS_AS(SeriesSpec::from_json({{"example", "9.9"}, {"delta", 1.0}, {"truncation", 8}}), ValidationError);
}
