#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lacunar/frequencies.hpp"
#include "lacunar/phase.hpp"

namespace lacunar {

using Complex = std::complex<double>;

// Coefficients c(k) over the nonzero indices, with a certified tail majorant
// T(N) >= sum_{|k|>N} |c(k)|. Indices outside the support hold c(k) = 0.
class CoefficientSequence {
 public:
  enum class Family { Power, Explicit };

  // c(k) = scale * |k|^-exponent for k >= 1 (and k <= -1 unless one_sided).
  // exponent > 1 keeps the sequence in l1.
  static CoefficientSequence power(double exponent, bool one_sided, double scale = 1.0);
  static CoefficientSequence explicit_values(std::map<std::int64_t, Complex> values);

  Family family() const { return family_; }
  double exponent() const { return exponent_; }
  bool one_sided() const { return one_sided_; }
  double scale() const { return scale_; }

  Complex at(std::int64_t k) const;
  double abs_at(std::int64_t k) const { return std::abs(at(k)); }
  bool nonzero(std::int64_t k) const;
  // Largest |k| with c(k) != 0; nullopt for infinite support.
  std::optional<std::int64_t> support_limit() const;

  // Certified upper bound on sum_{|k|>n} |c(k)|; nonincreasing, -> 0.
  double tail_majorant(std::int64_t n) const;
  // Certified sandwich for the l1 norm.
  double l1_lower() const;
  double l1_upper() const;

  // Terms summed explicitly before the analytic tail takes over.
  static constexpr std::int64_t kExplicitRange = 1 << 16;

  nlohmann::json to_json() const;
  static CoefficientSequence from_json(const nlohmann::json& j);

 private:
  Family family_ = Family::Explicit;
  double exponent_ = 0.0;
  bool one_sided_ = true;
  double scale_ = 1.0;
  std::map<std::int64_t, Complex> table_;
  double l1_partial_ = 0.0;
};

struct SeriesSpec {
  FrequencySequence frequencies;
  CoefficientSequence coefficients;
  std::int64_t truncation = 1;
  std::string label;
  Complex offset{0.0, 0.0};  // constant term, kept apart from c(k)

  void validate() const;
  nlohmann::json to_json() const;
  static SeriesSpec from_json(const nlohmann::json& j);
};

// g_Delta: c(k) = k^(-2*Delta), n(k) = 2^k, k >= 1.
SeriesSpec example_geometric(double delta, std::int64_t truncation);
// s_Delta: c(k) = k^(-2*Delta), n(k) = 2^(2^k), k >= 1.
SeriesSpec example_double_exponential(double delta, std::int64_t truncation);
SeriesSpec single_term(const BigInt& n, Complex c);

struct Term {
  std::int64_t k = 0;
  BigInt n;
  Complex c;
};

// Nonzero terms with |k| <= n.
std::vector<Term> active_terms(const SeriesSpec& spec, std::int64_t n);

struct EvalResult {
  Complex value;
  double truncation_bound = 0.0;  // T(N)
  double rounding_bound = 0.0;    // phase reduction + arithmetic
  double error_bound() const { return truncation_bound + rounding_bound; }
};

// Repeated evaluation of the truncated series at arbitrary angles.
class SeriesEvaluator {
 public:
  SeriesEvaluator(const SeriesSpec& spec, std::int64_t truncation);
  EvalResult operator()(const Angle& t) const;
  std::int64_t truncation() const { return truncation_; }
  double l1_active() const { return l1_active_; }

 private:
  std::vector<PhaseReducer> reducers_;
  std::vector<Complex> coefficients_;
  Complex offset_;
  std::int64_t truncation_;
  double tail_;
  double l1_active_ = 0.0;
};

EvalResult eval_truncated(const SeriesSpec& spec, const Angle& t,
                          std::optional<std::int64_t> truncation = std::nullopt);

struct ResidueCollision {
  std::int64_t k_first = 0;
  std::int64_t k_second = 0;
  std::uint64_t residue = 0;
};

// Samples v_j = f_N(2*pi*j/M), j = 0..M-1.
struct GridFunction {
  std::uint64_t size = 0;
  std::vector<Complex> values;
  std::int64_t truncation = 0;
  double truncation_bound = 0.0;
  double rounding_bound = 0.0;
  std::vector<ResidueCollision> collisions;

  double t(std::uint64_t j) const;
  bool is_real() const;
};

// Residue collisions among the active frequencies mod m.
std::vector<ResidueCollision> residue_collisions(const std::vector<Term>& terms, std::uint64_t m);

GridFunction sample_grid(const SeriesSpec& spec, std::uint64_t m,
                         std::optional<std::int64_t> truncation = std::nullopt);

struct CoefficientEstimate {
  Complex value;
  // Set when the grid carries residue collisions; value may then be the sum
  // of every coefficient aliased onto n's residue class.
  bool aliased = false;
};

// (1/M) * sum_j v_j * exp(-2*pi*i*(n*j mod M)/M).
CoefficientEstimate fourier_coefficient(const GridFunction& grid, const BigInt& n);

}  // namespace lacunar
