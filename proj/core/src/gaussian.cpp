#include "lacunar/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "lacunar/error.hpp"
#include "lacunar/modulus.hpp"
#include "lacunar/parallel.hpp"
#include "lacunar/rng.hpp"

namespace lacunar {
namespace {

constexpr double kUnitRoundoff = 0x1p-53;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::string to_string(PathMode m) { return m == PathMode::Complex ? "complex" : "real_part"; }

void GaussianSpec::validate() const {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ValidationError("Delta must be > 0");
  if (truncation < 1) throw ValidationError("truncation must be >= 1");
  for (std::int64_t k = 1; k <= truncation; ++k) {
    if (!frequencies.defined(k)) {
      throw ValidationError("frequency undefined at k = " + std::to_string(k));
    }
  }
}

nlohmann::json GaussianSpec::to_json() const {
  nlohmann::json j = frequencies.to_json();
  j["delta"] = delta;
  j["truncation"] = truncation;
  j["seed"] = seed;
  j["mode"] = to_string(mode);
  return j;
}

GaussianSpec GaussianSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("process spec must be a JSON object");
  GaussianSpec spec;
  if (j.contains("family")) spec.frequencies = FrequencySequence::from_json(j);
  spec.delta = j.at("delta").get<double>();
  spec.truncation = j.value("truncation", std::int64_t{4});
  spec.seed = j.value("seed", std::uint64_t{0});
  const std::string mode = j.value("mode", std::string("complex"));
  if (mode == "complex") {
    spec.mode = PathMode::Complex;
  } else if (mode == "real_part") {
    spec.mode = PathMode::RealPart;
  } else {
    throw ValidationError("unknown path mode: " + mode);
  }
  spec.validate();
  return spec;
}

std::vector<std::pair<std::int64_t, double>> path_draws(std::uint64_t seed,
                                                        std::uint64_t path_index,
                                                        std::int64_t truncation) {
  std::mt19937_64 rng(substream_seed(seed, path_index));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::pair<std::int64_t, double>> draws;
  draws.reserve(static_cast<std::size_t>(2 * truncation));
  for (std::int64_t k = 1; k <= truncation; ++k) {
    const double plus = normal(rng);
    const double minus = normal(rng);
    draws.emplace_back(k, plus);
    draws.emplace_back(-k, minus);
  }
  return draws;
}

SeriesSpec path_series(const GaussianSpec& spec,
                       const std::vector<std::pair<std::int64_t, double>>& draws) {
  std::map<std::int64_t, BigInt> freqs;
  std::map<std::int64_t, Complex> coeffs;
  std::int64_t truncation = 0;
  for (const auto& [k, kappa] : draws) {
    const std::int64_t a = k < 0 ? -k : k;
    const BigInt n = spec.frequencies.at(a);
    freqs.emplace(k, k < 0 ? BigInt(-n) : n);
    coeffs.emplace(k, Complex{std::pow(static_cast<double>(a), -spec.delta) * kappa, 0.0});
    truncation = std::max(truncation, a);
  }
  SeriesSpec series{FrequencySequence::explicit_values(std::move(freqs), "process"),
                    CoefficientSequence::explicit_values(std::move(coeffs)), truncation,
                    "gaussian path", {}};
  return series;
}

SamplePath sample_path(const GaussianSpec& spec, std::uint64_t m, std::uint64_t path_index) {
  spec.validate();
  SamplePath path;
  path.path_index = path_index;
  path.derived_seed = substream_seed(spec.seed, path_index);
  path.draws = path_draws(spec.seed, path_index, spec.truncation);
  path.grid = sample_grid(path_series(spec, path.draws), m);
  if (spec.mode == PathMode::RealPart) {
    for (auto& v : path.grid.values) v = {v.real(), 0.0};
  }
  path.covariance_tail_bound = CovarianceFunction::of(spec).tail_bound();
  return path;
}

double CovarianceFunction::tail_bound() const {
  const double s = 2.0 * delta;
  if (s <= 1.0) return std::numeric_limits<double>::infinity();
  return 2.0 * std::pow(static_cast<double>(truncation) + 0.5, 1.0 - s) / (s - 1.0) * (1.0 + 1e-12);
}

CovarianceFunction CovarianceFunction::of(const GaussianSpec& spec) {
  return CovarianceFunction{spec.delta, spec.frequencies, spec.truncation};
}

CovarianceValue covariance_exact(const CovarianceFunction& cov, const Angle& t) {
  if (cov.truncation < 1) throw ValidationError("truncation must be >= 1");
  CovarianceValue out;
  double sum = 0.0;
  double weight = 0.0;
  double phase_error = 0.0;
  // At t = 0 every cosine is 1 and the frequencies need not be materialized.
  const bool zero = t.exact() ? t.numerator() == 0 : t.radians_value() == 0.0;
  for (std::int64_t k = cov.truncation; k >= 1; --k) {
    const double w = std::pow(static_cast<double>(k), -2.0 * cov.delta);
    const ReducedPhase phase = zero ? ReducedPhase{} : reduce_phase(cov.frequencies.at(k), t);
    sum += w * std::cos(phase.angle);
    weight += w;
    phase_error += w * phase.error_bound;
  }
  out.value = 2.0 * sum;
  out.tail_bound = cov.tail_bound();
  out.rounding_bound = 2.0 * (phase_error + (4.0 + static_cast<double>(cov.truncation)) *
                                                kUnitRoundoff * weight);
  return out;
}

nlohmann::json CovarianceEstimate::to_json() const {
  return {{"estimate", estimate},
          {"imaginary", imaginary},
          {"stderr", standard_error},
          {"imaginary_stderr", imaginary_standard_error},
          {"paths", paths},
          {"seed", seed}};
}

CovarianceEstimate covariance_mc(const GaussianSpec& spec, double t, double s,
                                 std::uint64_t paths) {
  spec.validate();
  if (paths < 100) throw ValidationError("covariance estimate needs >= 100 paths");
  if (!std::isfinite(t) || !std::isfinite(s)) throw ValidationError("lag must be finite");

  // Phases of every term at t+s and s are shared by all paths.
  std::vector<Complex> at_shifted, at_base;
  std::vector<double> weights;
  for (std::int64_t a = 1; a <= spec.truncation; ++a) {
    const PhaseReducer reducer(spec.frequencies.at(a));
    const double ts = reducer.reduce(Angle::radians(t + s)).angle;
    const double ss = reducer.reduce(Angle::radians(s)).angle;
    for (int sign : {1, -1}) {
      at_shifted.push_back(std::polar(1.0, sign * ts));
      at_base.push_back(std::polar(1.0, sign * ss));
      weights.push_back(std::pow(static_cast<double>(a), -spec.delta));
    }
  }

  std::vector<double> re(paths), im(paths);
  parallel_for(paths, [&](std::size_t p) {
    const auto draws = path_draws(spec.seed, p, spec.truncation);
    Complex a{}, b{};
    for (std::size_t i = 0; i < draws.size(); ++i) {
      const double c = weights[i] * draws[i].second;
      a += c * at_shifted[i];
      b += c * at_base[i];
    }
    if (spec.mode == PathMode::RealPart) {
      a = {a.real(), 0.0};
      b = {b.real(), 0.0};
    }
    const Complex x = a * std::conj(b);
    re[p] = x.real();
    im[p] = x.imag();
  });

  const auto n = static_cast<double>(paths);
  auto mean_and_se = [n](std::vector<double>& v) {
    const double mean = pairwise_sum(v) / n;
    for (double& x : v) x = (x - mean) * (x - mean);
    const double var = pairwise_sum(v) / (n - 1.0);
    return std::pair{mean, std::sqrt(var / n)};
  };
  CovarianceEstimate out;
  std::tie(out.estimate, out.standard_error) = mean_and_se(re);
  std::tie(out.imaginary, out.imaginary_standard_error) = mean_and_se(im);
  out.paths = paths;
  out.seed = spec.seed;
  return out;
}

nlohmann::json RoughnessTable::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    rows_json.push_back(
        {{"truncation", r.truncation}, {"median", r.median}, {"ratio", r.ratio_to_previous}});
  }
  return {{"delta", delta}, {"delta_probe", delta_probe}, {"grid", grid},
          {"paths", paths}, {"seed", seed},               {"rows", rows_json}};
}

RoughnessTable roughness_diagnostic(double delta, const FrequencySequence& family,
                                    std::span<const std::int64_t> n_list, double delta_probe,
                                    std::uint64_t m, std::uint64_t paths, std::uint64_t seed,
                                    PathMode mode) {
  if (n_list.empty()) throw ValidationError("truncation list is empty");
  for (std::size_t i = 1; i < n_list.size(); ++i) {
    if (!(n_list[i] > n_list[i - 1])) throw ValidationError("truncation list must increase");
  }
  if (!(delta_probe > 0.0)) throw ValidationError("delta_probe must be > 0");
  if (paths < 1) throw ValidationError("need at least one path");

  RoughnessTable table;
  table.delta = delta;
  table.delta_probe = delta_probe;
  table.grid = m;
  table.paths = paths;
  table.seed = seed;
  const std::uint64_t window = grid_window(delta_probe, m);
  for (std::int64_t n : n_list) {
    GaussianSpec spec{delta, family, n, seed, mode};
    spec.validate();
    std::vector<double> moduli(paths, 0.0);
    // Inner loops run serially; paths are the parallel axis.
    parallel_for(paths, [&](std::size_t p) {
      const auto draws = path_draws(seed, p, n);
      GridFunction grid = sample_grid(path_series(spec, draws), m);
      if (mode == PathMode::RealPart) {
        for (auto& v : grid.values) v = {v.real(), 0.0};
      }
      moduli[p] = window == 0 ? 0.0 : grid_modulus_by_offset(grid, window).back();
    });
    RoughnessRow row;
    row.truncation = n;
    row.median = median(moduli);
    if (!table.rows.empty() && table.rows.back().median > 0.0) {
      row.ratio_to_previous = row.median / table.rows.back().median;
    }
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace lacunar
