#include <cmath>
#include <numbers>

#include <doctest.h>

#include "lacunar/bounds.hpp"
#include "lacunar/error.hpp"

using namespace lacunar;

TEST_CASE("sigma1 single term") {
  const auto spec = single_term(BigInt(1), {1.0, 0.0});
  CHECK(sigma1(spec, 2, Sigma1Variant::PaperLiteral) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(sigma1(spec, 2, Sigma1Variant::Tight) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sigma1 geometric example hand sum") {
  const auto spec = example_geometric(1.0, 8);
  const double expected = 2.0 + 1.0 + 8.0 / 9.0;
  const double got = sigma1(spec, 3, Sigma1Variant::Tight);
  CHECK(got >= expected);
  CHECK(got <= expected * (1 + 1e-13));
}

TEST_CASE("sigma1 variant ordering") {
  for (double delta : {0.75, 1.0, 2.0}) {
    for (const auto& spec : {example_geometric(delta, 8), example_double_exponential(delta, 4)}) {
      for (std::int64_t n = 2; n <= 12; ++n) {
        CHECK(sigma1(spec, n, Sigma1Variant::Tight) <= sigma1(spec, n, Sigma1Variant::PaperLiteral));
      }
    }
  }
  CHECK_THROWS_AS(sigma1(example_geometric(1.0, 8), 1), ValidationError);
}

TEST_CASE("sigma2 tail") {
  const auto finite = CoefficientSequence::explicit_values({{1, {1.0, 0.0}}, {2, {0.5, 0.0}}});
  CHECK(sigma2(finite, 3) == 0.0);
  const auto c = CoefficientSequence::power(2.0, true);
  // 2 * (zeta(2) - sum_{k<=10} k^-2), 200-bit value.
  const double exact = 0.19033267136337149224;
  const double got = sigma2(c, 10);
  CHECK(got >= exact);
  CHECK(got <= exact * (1 + 1e-12));
  double prev = INFINITY;
  for (std::int64_t n = 2; n <= 200; ++n) {
    const double s = sigma2(c, n);
    CHECK(s <= prev);
    prev = s;
  }
}

TEST_CASE("upper bound basics") {
  const auto single = single_term(BigInt(1), {1.0, 0.0});
  const auto b = upper_bound(single, 0.1);
  CHECK(b.total == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(b.sigma2 == 0.0);

  const auto spec = example_geometric(1.0, 8);
  const auto zero = upper_bound(spec, 0.0, 40);
  CHECK(zero.total == sigma2(spec.coefficients, 40));
  CHECK_THROWS_AS(upper_bound(spec, -0.1), ValidationError);
  CHECK_THROWS_AS(upper_bound(spec, 7.0), ValidationError);
}

TEST_CASE("upper bound is the minimum over the scan range") {
  const auto spec = example_geometric(1.0, 8);
  for (double delta : {1e-6, 1e-3, 0.1, 1.0}) {
    const auto b = upper_bound(spec, delta, 30);
    CHECK(b.total == delta * b.sigma1 + b.sigma2);
    for (std::int64_t n = 2; n <= 30; ++n) {
      CHECK(b.total <= delta * sigma1(spec, n) + sigma2(spec.coefficients, n));
    }
  }
}

TEST_CASE("upper bound monotone in delta and ordered by variant") {
  for (const auto& spec : {example_geometric(1.0, 8), example_double_exponential(1.0, 4)}) {
    const auto deltas = log_ladder(1e-9, 3.0, 10);
    const auto tight = upper_bound_curve(spec, deltas, 60, Sigma1Variant::Tight);
    const auto literal = upper_bound_curve(spec, deltas, 60, Sigma1Variant::PaperLiteral);
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      CHECK(tight[i].total <= literal[i].total);
      if (i > 0) CHECK(tight[i].total >= tight[i - 1].total);
    }
    const auto curve = as_modulus_curve(tight);
    CHECK(curve.provenance == Provenance::AnalyticUpper);
  }
}

TEST_CASE("coefficient lower bound") {
  const auto unit = single_term(BigInt(1), {1.0, 0.0});
  const auto lb = coefficient_lower_bound(unit, 1);
  CHECK(lb.delta == doctest::Approx(std::numbers::pi));
  CHECK(lb.classical == 2.0);
  CHECK(lb.paper_literal == doctest::Approx(4 * std::numbers::pi));
  // The literal constant exceeds the true modulus 2 sin(pi/2) = 2.
  CHECK(lb.paper_literal > 2.0);

  const auto ex = coefficient_lower_bound(example_geometric(1.0, 8), 3);
  CHECK(ex.delta == doctest::Approx(std::numbers::pi / 8));
  CHECK(ex.classical == doctest::Approx(2.0 / 9.0));
  CHECK_THROWS_AS(coefficient_lower_bound(single_term(BigInt(0), {1.0, 0.0}), 1), ValidationError);
}

TEST_CASE("classical lower bound below the upper bound") {
  for (const auto& spec : {example_geometric(1.0, 8), example_double_exponential(1.0, 4)}) {
    for (std::int64_t k = 1; k <= 8; ++k) {
      const auto lb = coefficient_lower_bound(spec, k);
      if (lb.delta >= 2 * std::numbers::pi) continue;
      CHECK(lb.classical <= upper_bound(spec, lb.delta).total);
    }
  }
}

TEST_CASE("envelopes") {
  const auto g_lo = envelope(EnvelopeExample::Geometric, EnvelopeSide::Lower, 1.0, 1.0);
  CHECK(g_lo(std::exp(-10.0)) == doctest::Approx(0.01));
  const auto d_lo = envelope(EnvelopeExample::DoubleExponential, EnvelopeSide::Lower, 1.0, 1.0);
  CHECK(d_lo(std::exp(-std::exp(3.0))) == doctest::Approx(1.0 / 9.0));
  const auto g_up = envelope(EnvelopeExample::Geometric, EnvelopeSide::Upper, 1.0, 1.0);
  CHECK(g_up(std::exp(-10.0)) == doctest::Approx(0.1));
  CHECK_THROWS_AS(g_lo(0.5), ValidationError);
  CHECK_THROWS_AS(envelope(EnvelopeExample::Geometric, EnvelopeSide::Lower, 0.5, 1.0), ValidationError);
  for (const auto& env : {g_lo, d_lo, g_up}) {
    double prev = 0.0;
    for (double u = 6.0; u > 1.05; u -= 0.25) {
      const double delta = env.example() == EnvelopeExample::Geometric ? std::exp(-u) : std::exp(-std::exp(u));
      const double v = env(delta);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("fit_envelope self fit") {
  ModulusCurve curve;
  for (double u = 20.0; u >= 2.0; u -= 0.5) {
    const double delta = std::exp(-u);
    curve.points.push_back({delta, 0.5 * std::pow(u, -2.0)});
  }
  const auto fit = fit_envelope(curve, EnvelopeExample::Geometric, EnvelopeSide::Lower, 1.0, 1e-9, 0.2);
  CHECK(fit.constant == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fit.residual < 1e-12);
  CHECK(fit.symbol == "C1");
  CHECK_THROWS_AS(fit_envelope(curve, EnvelopeExample::Geometric, EnvelopeSide::Lower, 1.0, 0.01, 0.02),
                  ValidationError);
}

TEST_CASE("fit_envelope on the double-exponential example upper bound") {
  const auto spec = example_double_exponential(1.0, 4);
  const auto deltas = doubly_log_ladder(1.0, 4.0, 32);
  const auto curve = as_modulus_curve(upper_bound_curve(spec, deltas));
  const auto fit = fit_envelope(curve, EnvelopeExample::DoubleExponential, EnvelopeSide::Upper, 1.0,
                                deltas.front(), deltas.back());
  CHECK(fit.constant > 0.0);
  CHECK(std::isfinite(fit.constant));
  CHECK(fit.symbol == "C4");
}
