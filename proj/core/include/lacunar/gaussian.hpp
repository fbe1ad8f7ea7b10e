#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "lacunar/series.hpp"

namespace lacunar {

// Complex: nu(t) = sum_{1<=|k|<=N} |k|^-Delta kappa_k exp(i sign(k) n(|k|) t).
// RealPart: Re nu(t). The real part is not stationary (its covariance depends
// on the base point), so covariance checks use the complex mode.
enum class PathMode { Complex, RealPart };
std::string to_string(PathMode m);

struct GaussianSpec {
  double delta = 1.5;
  FrequencySequence frequencies = FrequencySequence::double_exponential();
  std::int64_t truncation = 4;
  std::uint64_t seed = 0;
  PathMode mode = PathMode::Complex;

  void validate() const;
  nlohmann::json to_json() const;
  static GaussianSpec from_json(const nlohmann::json& j);
};

// Standard normal draws for one path: kappa_1, kappa_-1, kappa_2, kappa_-2, ...
// from the substream derived from (seed, path_index). Truncating at a smaller N
// yields a prefix of the same draws.
std::vector<std::pair<std::int64_t, double>> path_draws(std::uint64_t seed,
                                                        std::uint64_t path_index,
                                                        std::int64_t truncation);

// Series with c(k) = |k|^-Delta kappa_k and frequencies sign(k) n(|k|).
SeriesSpec path_series(const GaussianSpec& spec,
                       const std::vector<std::pair<std::int64_t, double>>& draws);

struct SamplePath {
  GridFunction grid;
  std::vector<std::pair<std::int64_t, double>> draws;
  std::uint64_t path_index = 0;
  std::uint64_t derived_seed = 0;
  double covariance_tail_bound = 0.0;
};

SamplePath sample_path(const GaussianSpec& spec, std::uint64_t m, std::uint64_t path_index);

// r(t) = 2 sum_{k=1}^N k^-2Delta cos(n(k) t) for the truncated process.
struct CovarianceFunction {
  double delta = 1.5;
  FrequencySequence frequencies = FrequencySequence::double_exponential();
  std::int64_t truncation = 4;

  // 2 sum_{k>N} k^-2Delta (infinite when Delta <= 1/2).
  double tail_bound() const;
  static CovarianceFunction of(const GaussianSpec& spec);
};

struct CovarianceValue {
  double value = 0.0;
  double tail_bound = 0.0;
  double rounding_bound = 0.0;
};

CovarianceValue covariance_exact(const CovarianceFunction& cov, const Angle& t);

struct CovarianceEstimate {
  double estimate = 0.0;     // real part of the sample mean of nu(t+s) conj(nu(s))
  double imaginary = 0.0;    // expected 0 within its error
  double standard_error = 0.0;
  double imaginary_standard_error = 0.0;
  std::uint64_t paths = 0;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
};

// Monte-Carlo covariance over paths 0..paths-1 of spec.seed; path i uses the
// same draws as sample_path(spec, *, i).
CovarianceEstimate covariance_mc(const GaussianSpec& spec, double t, double s,
                                 std::uint64_t paths);

struct RoughnessRow {
  std::int64_t truncation = 0;
  double median = 0.0;
  double ratio_to_previous = 0.0;  // 0 for the first row
};

struct RoughnessTable {
  double delta = 0.0;
  double delta_probe = 0.0;
  std::uint64_t grid = 0;
  std::uint64_t paths = 0;
  std::uint64_t seed = 0;
  std::vector<RoughnessRow> rows;

  nlohmann::json to_json() const;
};

// Median over paths of the grid modulus at delta_probe, for each truncation
// in n_list. The same paths (draws) are reused across truncations.
RoughnessTable roughness_diagnostic(double delta, const FrequencySequence& family,
                                    std::span<const std::int64_t> n_list, double delta_probe,
                                    std::uint64_t m, std::uint64_t paths, std::uint64_t seed,
                                    PathMode mode = PathMode::Complex);

}  // namespace lacunar
