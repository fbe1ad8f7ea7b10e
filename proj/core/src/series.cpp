#include "lacunar/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

#include "lacunar/error.hpp"
#include "lacunar/parallel.hpp"

namespace lacunar {
namespace {

constexpr double kUnitRoundoff = 0x1p-53;
// Error of a table root exp(2*pi*i*m/M) built with double cos/sin.
constexpr double kRootError = 16.0 * kUnitRoundoff;
// Relative slack on floating partial sums used as certified upper bounds.
constexpr double kSumSlack = 1e-11;

std::int64_t abs_index(std::int64_t k) { return k < 0 ? -k : k; }

}  // namespace

CoefficientSequence CoefficientSequence::power(double exponent, bool one_sided, double scale) {
  if (!(exponent > 0.0) || !std::isfinite(exponent)) {
    throw ValidationError("power-law exponent must be positive and finite");
  }
  if (!std::isfinite(scale)) throw ValidationError("power-law scale must be finite");
  CoefficientSequence c;
  c.family_ = Family::Power;
  c.exponent_ = exponent;
  c.one_sided_ = one_sided;
  c.scale_ = scale;
  double partial = 0.0;
  for (std::int64_t k = kExplicitRange; k >= 1; --k) {
    partial += std::pow(static_cast<double>(k), -exponent);
  }
  c.l1_partial_ = partial * std::fabs(scale) * (one_sided ? 1.0 : 2.0);
  return c;
}

CoefficientSequence CoefficientSequence::explicit_values(std::map<std::int64_t, Complex> values) {
  if (values.contains(0)) throw ValidationError("index k = 0 is not part of the index set");
  CoefficientSequence c;
  c.family_ = Family::Explicit;
  for (auto& [k, v] : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw ValidationError("coefficient c(" + std::to_string(k) + ") is not finite");
    }
    if (v != Complex{}) c.table_.emplace(k, v);
  }
  c.one_sided_ = c.table_.empty() || c.table_.begin()->first > 0;
  for (const auto& [k, v] : c.table_) c.l1_partial_ += std::abs(v);
  return c;
}

Complex CoefficientSequence::at(std::int64_t k) const {
  if (k == 0) return {};
  if (family_ == Family::Explicit) {
    auto it = table_.find(k);
    return it == table_.end() ? Complex{} : it->second;
  }
  if (k < 0 && one_sided_) return {};
  return scale_ * std::pow(static_cast<double>(abs_index(k)), -exponent_);
}

bool CoefficientSequence::nonzero(std::int64_t k) const {
  if (k == 0) return false;
  if (family_ == Family::Explicit) return table_.contains(k);
  return scale_ != 0.0 && (k > 0 || !one_sided_);
}

std::optional<std::int64_t> CoefficientSequence::support_limit() const {
  if (family_ == Family::Power) return std::nullopt;
  std::int64_t limit = 0;
  for (const auto& [k, _] : table_) limit = std::max(limit, abs_index(k));
  return limit;
}

double CoefficientSequence::tail_majorant(std::int64_t n) const {
  if (n < 1) return l1_upper();
  if (family_ == Family::Explicit) {
    double tail = 0.0;
    for (const auto& [k, v] : table_) {
      if (abs_index(k) > n) tail += std::abs(v);
    }
    return tail * (1.0 + kSumSlack);
  }
  if (exponent_ <= 1.0) return std::numeric_limits<double>::infinity();
  // x^-s is convex, so k^-s <= integral_{k-1/2}^{k+1/2} x^-s dx and
  // sum_{k>n} k^-s <= integral_{n+1/2}^inf x^-s dx.
  const double one_side =
      std::pow(static_cast<double>(n) + 0.5, 1.0 - exponent_) / (exponent_ - 1.0);
  return one_side * std::fabs(scale_) * (one_sided_ ? 1.0 : 2.0) * (1.0 + kSumSlack);
}

double CoefficientSequence::l1_lower() const { return l1_partial_ * (1.0 - kSumSlack); }

double CoefficientSequence::l1_upper() const {
  if (family_ == Family::Explicit) return l1_partial_ * (1.0 + kSumSlack);
  return l1_partial_ * (1.0 + kSumSlack) + tail_majorant(kExplicitRange);
}

nlohmann::json CoefficientSequence::to_json() const {
  if (family_ == Family::Power) {
    return {{"family", "power"},
            {"exponent", exponent_},
            {"one_sided", one_sided_},
            {"scale", scale_}};
  }
  nlohmann::json values = nlohmann::json::array();
  for (const auto& [k, v] : table_) values.push_back({k, v.real(), v.imag()});
  return {{"family", "explicit"}, {"values", values}};
}

CoefficientSequence CoefficientSequence::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("family")) {
    throw ValidationError("coefficients must be an object with a \"family\" field");
  }
  const std::string family = j.at("family").get<std::string>();
  if (family == "power") {
    return power(j.at("exponent").get<double>(), j.value("one_sided", true),
                 j.value("scale", 1.0));
  }
  if (family == "explicit") {
    std::map<std::int64_t, Complex> values;
    for (const auto& entry : j.at("values")) {
      if (!entry.is_array() || entry.size() < 2 || entry.size() > 3) {
        throw ValidationError("explicit coefficients are [k, re] or [k, re, im]");
      }
      const auto k = entry[0].get<std::int64_t>();
      const double im = entry.size() == 3 ? entry[2].get<double>() : 0.0;
      if (!values.emplace(k, Complex{entry[1].get<double>(), im}).second) {
        throw ValidationError("duplicate coefficient index " + std::to_string(k));
      }
    }
    return explicit_values(std::move(values));
  }
  throw ValidationError("unknown coefficient family: " + family);
}

void SeriesSpec::validate() const {
  if (truncation < 1) throw ValidationError("truncation order must be >= 1");
  const std::int64_t limit = std::min(truncation, coefficients.support_limit().value_or(truncation));
  for (std::int64_t a = 1; a <= limit; ++a) {
    for (std::int64_t k : {a, -a}) {
      if (coefficients.nonzero(k) && !frequencies.defined(k)) {
        throw ValidationError("coefficient c(" + std::to_string(k) +
                              ") is nonzero but n(k) is undefined");
      }
    }
  }
}

nlohmann::json SeriesSpec::to_json() const {
  return {{"frequencies", frequencies.to_json()},
          {"coefficients", coefficients.to_json()},
          {"truncation", truncation},
          {"label", label},
          {"offset", {offset.real(), offset.imag()}}};
}

SeriesSpec SeriesSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("series spec must be a JSON object");
  SeriesSpec spec;
  if (j.contains("example")) {
    const std::string example = j.at("example").get<std::string>();
    const double delta = j.at("delta").get<double>();
    const std::int64_t n = j.value("truncation", std::int64_t{8});
    if (example == "2.1" || example == "geometric") {
      spec = example_geometric(delta, n);
    } else if (example == "2.2" || example == "double_exponential") {
      spec = example_double_exponential(delta, n);
    } else {
      throw ValidationError("unknown example: " + example);
    }
  } else {
    spec = SeriesSpec{FrequencySequence::from_json(j.at("frequencies")),
                      CoefficientSequence::from_json(j.at("coefficients")),
                      j.value("truncation", std::int64_t{1}),
                      j.value("label", std::string("series")),
                      {}};
    if (j.contains("offset")) {
      const auto& o = j.at("offset");
      spec.offset = {o.at(0).get<double>(), o.at(1).get<double>()};
    }
  }
  spec.validate();
  return spec;
}

SeriesSpec example_geometric(double delta, std::int64_t truncation) {
  if (!(delta > 0.5)) throw ValidationError("Delta must exceed 1/2");
  SeriesSpec spec{FrequencySequence::geometric(2, true),
                  CoefficientSequence::power(2.0 * delta, true), truncation,
                  "geometric lacunar, Delta=" + std::to_string(delta), {}};
  spec.validate();
  return spec;
}

SeriesSpec example_double_exponential(double delta, std::int64_t truncation) {
  if (!(delta > 0.5)) throw ValidationError("Delta must exceed 1/2");
  SeriesSpec spec{FrequencySequence::double_exponential(),
                  CoefficientSequence::power(2.0 * delta, true), truncation,
                  "double-exponential superlacunar, Delta=" + std::to_string(delta), {}};
  spec.validate();
  return spec;
}

SeriesSpec single_term(const BigInt& n, Complex c) {
  return SeriesSpec{FrequencySequence::explicit_values({{1, n}}, "single"),
                    CoefficientSequence::explicit_values({{1, c}}), 1, "single term", {}};
}

std::vector<Term> active_terms(const SeriesSpec& spec, std::int64_t n) {
  std::vector<Term> out;
  const std::int64_t limit = std::min(n, spec.coefficients.support_limit().value_or(n));
  for (std::int64_t a = 1; a <= limit; ++a) {
    for (std::int64_t k : {a, -a}) {
      if (!spec.coefficients.nonzero(k)) continue;
      out.push_back(Term{k, spec.frequencies.at(k), spec.coefficients.at(k)});
    }
  }
  return out;
}

SeriesEvaluator::SeriesEvaluator(const SeriesSpec& spec, std::int64_t truncation)
    : offset_(spec.offset), truncation_(truncation) {
  if (truncation < 1) throw ValidationError("truncation order must be >= 1");
  for (auto& term : active_terms(spec, truncation)) {
    reducers_.emplace_back(std::move(term.n));
    coefficients_.push_back(term.c);
    l1_active_ += std::abs(term.c);
  }
  tail_ = spec.coefficients.tail_majorant(truncation);
}

EvalResult SeriesEvaluator::operator()(const Angle& t) const {
  EvalResult out;
  Complex sum = offset_;
  double phase_error = 0.0;
  for (std::size_t i = 0; i < reducers_.size(); ++i) {
    const ReducedPhase phase = reducers_[i].reduce(t);
    sum += coefficients_[i] * Complex{std::cos(phase.angle), std::sin(phase.angle)};
    phase_error += std::abs(coefficients_[i]) * phase.error_bound;
  }
  out.value = sum;
  out.truncation_bound = tail_;
  out.rounding_bound =
      phase_error + (4.0 + static_cast<double>(reducers_.size())) * kUnitRoundoff * l1_active_;
  return out;
}

EvalResult eval_truncated(const SeriesSpec& spec, const Angle& t,
                          std::optional<std::int64_t> truncation) {
  return SeriesEvaluator(spec, truncation.value_or(spec.truncation))(t);
}

double GridFunction::t(std::uint64_t j) const {
  return 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(size);
}

bool GridFunction::is_real() const {
  return std::all_of(values.begin(), values.end(),
                     [](const Complex& v) { return v.imag() == 0.0; });
}

std::vector<ResidueCollision> residue_collisions(const std::vector<Term>& terms,
                                                 std::uint64_t m) {
  std::vector<ResidueCollision> out;
  std::unordered_map<std::uint64_t, std::int64_t> seen;
  for (const auto& term : terms) {
    const std::uint64_t r = mod_u64(term.n, m);
    auto [it, inserted] = seen.emplace(r, term.k);
    if (!inserted) out.push_back({it->second, term.k, r});
  }
  return out;
}

namespace {

std::vector<Complex> roots_of_unity(std::uint64_t m) {
  std::vector<Complex> roots(m);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(m);
  for (std::uint64_t i = 0; i < m; ++i) {
    const double x = step * static_cast<double>(i);
    roots[i] = {std::cos(x), std::sin(x)};
  }
  return roots;
}

}  // namespace

GridFunction sample_grid(const SeriesSpec& spec, std::uint64_t m,
                         std::optional<std::int64_t> truncation) {
  if (m < 2) throw ValidationError("grid size must be >= 2");
  const std::int64_t n = truncation.value_or(spec.truncation);
  if (n < 1) throw ValidationError("truncation order must be >= 1");
  const auto terms = active_terms(spec, n);

  GridFunction grid;
  grid.size = m;
  grid.truncation = n;
  grid.truncation_bound = spec.coefficients.tail_majorant(n);
  grid.collisions = residue_collisions(terms, m);
  grid.values.assign(m, spec.offset);

  std::vector<std::uint64_t> strides;
  std::vector<Complex> coeffs;
  double l1 = 0.0;
  for (const auto& term : terms) {
    strides.push_back(mod_u64(term.n, m));
    coeffs.push_back(term.c);
    l1 += std::abs(term.c);
  }
  grid.rounding_bound =
      l1 * (kRootError + (2.0 + static_cast<double>(terms.size())) * kUnitRoundoff);

  const auto roots = roots_of_unity(m);
  constexpr std::uint64_t kBlock = 4096;
  const std::uint64_t blocks = (m + kBlock - 1) / kBlock;
  parallel_for(blocks, [&](std::size_t b) {
    const std::uint64_t begin = b * kBlock;
    const std::uint64_t end = std::min(m, begin + kBlock);
    for (std::size_t i = 0; i < strides.size(); ++i) {
      auto idx = static_cast<std::uint64_t>(
          static_cast<unsigned __int128>(strides[i]) * begin % m);
      for (std::uint64_t j = begin; j < end; ++j) {
        grid.values[j] += coeffs[i] * roots[idx];
        idx += strides[i];
        if (idx >= m) idx -= m;
      }
    }
  });
  return grid;
}

CoefficientEstimate fourier_coefficient(const GridFunction& grid, const BigInt& n) {
  if (grid.size == 0 || grid.values.size() != grid.size) {
    throw ValidationError("grid function is empty or inconsistent");
  }
  const std::uint64_t m = grid.size;
  const std::uint64_t stride = mod_u64(n, m);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(m);
  Complex sum{};
  std::uint64_t idx = 0;
  for (std::uint64_t j = 0; j < m; ++j) {
    const double x = step * static_cast<double>(idx);
    sum += grid.values[j] * Complex{std::cos(x), -std::sin(x)};
    idx += stride;
    if (idx >= m) idx -= m;
  }
  return {sum / static_cast<double>(m), !grid.collisions.empty()};
}

}  // namespace lacunar
