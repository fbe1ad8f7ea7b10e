#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lacunar/modulus.hpp"
#include "lacunar/series.hpp"

namespace lacunar {

// PaperLiteral: ||c||_1 * sum_{|k|<=N} |k| |n(k)|.
// Tight:        sum_{|k|<=N} |c(k)| |n(k)|, from |exp(i n h) - 1| <= |n| h.
// Both sums run over the indices carrying a nonzero coefficient.
enum class Sigma1Variant { PaperLiteral, Tight };
std::string to_string(Sigma1Variant v);
Sigma1Variant sigma1_variant_from_string(const std::string& s);

inline constexpr std::int64_t kDefaultMaxTruncation = 60;

double sigma1(const SeriesSpec& spec, std::int64_t n, Sigma1Variant variant = Sigma1Variant::Tight);

// 2 * sum_{|k|>N} |c(k)|, certified high: explicit terms up to the
// coefficient sequence's explicit range, then 2 * T(range).
double sigma2(const CoefficientSequence& coeffs, std::int64_t n);

struct BoundEvaluation {
  double delta = 0.0;
  std::int64_t n_star = 0;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double total = 0.0;
  Sigma1Variant variant = Sigma1Variant::Tight;
  std::int64_t n_min = 2;
  std::int64_t n_max = kDefaultMaxTruncation;
};

// inf over N in [2, n_max] of delta * Sigma1(N) + Sigma2(N), exhaustive scan.
// delta = 0 returns Sigma2(n_max).
BoundEvaluation upper_bound(const SeriesSpec& spec, double delta,
                            std::int64_t n_max = kDefaultMaxTruncation,
                            Sigma1Variant variant = Sigma1Variant::Tight);

// Same bound over a list of deltas, sharing the Sigma tables.
std::vector<BoundEvaluation> upper_bound_curve(const SeriesSpec& spec,
                                               std::span<const double> deltas,
                                               std::int64_t n_max = kDefaultMaxTruncation,
                                               Sigma1Variant variant = Sigma1Variant::Tight);

ModulusCurve as_modulus_curve(const std::vector<BoundEvaluation>& bounds);

// Lower bound on omega(pi / n(|k|)) from a single coefficient.
//   Classical:    omega >= 2 |c(k)|
//   PaperLiteral: omega >= 4*pi |c(k)|  (fails already for f = exp(it))
enum class ConstantVariant { Classical, PaperLiteral };
std::string to_string(ConstantVariant v);

struct CoefficientLowerBound {
  std::int64_t k = 0;
  double delta = 0.0;
  double classical = 0.0;
  double paper_literal = 0.0;
  ConstantVariant variant = ConstantVariant::Classical;
  double omega_lb() const { return variant == ConstantVariant::Classical ? classical : paper_literal; }
};

CoefficientLowerBound coefficient_lower_bound(const SeriesSpec& spec, std::int64_t k,
                                              ConstantVariant variant = ConstantVariant::Classical);

// Logarithmic envelopes for the geometric (|ln delta|) and double-exponential
// (ln|ln delta|) examples; lower exponent -2*Delta, upper 1 - 2*Delta.
enum class EnvelopeExample { Geometric, DoubleExponential };
enum class EnvelopeSide { Lower, Upper };
std::string to_string(EnvelopeExample e);
std::string to_string(EnvelopeSide s);

class Envelope {
 public:
  Envelope(EnvelopeExample example, EnvelopeSide side, double delta_exponent, double constant);

  double operator()(double delta) const;
  double shape(double delta) const;  // constant = 1
  bool in_domain(double delta) const;
  double domain_limit() const;       // 1/e or e^-e, exclusive
  double exponent() const;
  double constant() const { return constant_; }
  EnvelopeExample example() const { return example_; }
  EnvelopeSide side() const { return side_; }
  double delta_exponent() const { return delta_exponent_; }

 private:
  EnvelopeExample example_;
  EnvelopeSide side_;
  double delta_exponent_;
  double constant_;
};

Envelope envelope(EnvelopeExample example, EnvelopeSide side, double delta_exponent,
                  double constant);

struct FittedConstant {
  double constant = 0.0;         // max admissible (lower) / min admissible (upper)
  double least_squares = 0.0;    // exp(mean(log omega - log shape))
  double exponent = 0.0;
  double fit_lo = 0.0;
  double fit_hi = 0.0;
  double residual = 0.0;         // max |C*shape - omega| / omega over the fit range
  std::size_t points = 0;
  std::string symbol;            // C1..C4

  nlohmann::json to_json() const;
};

FittedConstant fit_envelope(const ModulusCurve& reference, EnvelopeExample example,
                            EnvelopeSide side, double delta_exponent, double fit_lo,
                            double fit_hi);

// Least-squares line through (log L(delta), log omega) with L = |ln delta|
// (geometric) or ln|ln delta| (double exponential).
struct LogScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
  double max_residual = 0.0;
  std::size_t points = 0;
};

LogScalingFit fit_log_scaling(const ModulusCurve& curve, EnvelopeExample example, double fit_lo,
                              double fit_hi);

}  // namespace lacunar
