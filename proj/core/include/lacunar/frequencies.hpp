#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lacunar/bigint.hpp"

namespace lacunar {

// Signed integer frequencies n(k), k = +/-1, +/-2, ..., stored exactly.
//
// A sequence is either produced by a generator rule (geometric, double
// exponential) and defined for every index, or is an explicit finite table.
// n(k) is never held in floating point; callers that only need magnitudes
// should use bit_length / log2_abs, which do not materialize huge values.
class FrequencySequence {
 public:
  enum class Family { Geometric, DoubleExponential, Explicit };

  // Largest |k| the double-exponential family will materialize: n(30) has
  // 2^30 + 1 bits (128 MiB). bit_length and log2_abs work for any k.
  static constexpr std::int64_t kDoubleExponentialCeiling = 30;

  static FrequencySequence geometric(std::int64_t base, bool one_sided);
  static FrequencySequence double_exponential();
  // Explicit table; validated against the separation invariants.
  static FrequencySequence explicit_values(std::map<std::int64_t, BigInt> values,
                                           std::string label = "explicit");

  Family family() const { return family_; }
  const std::string& label() const { return label_; }
  std::int64_t base() const { return base_; }
  bool one_sided() const { return one_sided_; }
  bool has_negative_side() const;
  // Largest |k| with a defined value; nullopt for generator rules.
  std::optional<std::int64_t> max_index() const;

  bool defined(std::int64_t k) const;
  // Throws ValidationError when k is undefined (or k == 0).
  BigInt at(std::int64_t k) const;
  std::size_t bit_length(std::int64_t k) const;
  double log2_abs(std::int64_t k) const;
  // Smallest double >= |n(k)|; +inf past the double range.
  double abs_upper(std::int64_t k) const;

  // Defined indices with |k| <= limit, ordered by |k| then sign (+ first).
  std::vector<std::int64_t> indices_up_to(std::int64_t limit) const;

  // Checks n(1) >= 0, n(-1) <= 0 and strict separation on |k| <= limit.
  void validate(std::int64_t limit) const;

  nlohmann::json to_json() const;
  static FrequencySequence from_json(const nlohmann::json& j);

 private:
  Family family_ = Family::Explicit;
  std::string label_;
  std::int64_t base_ = 0;
  bool one_sided_ = true;
  std::map<std::int64_t, BigInt> table_;
};

enum class Lacunarity { NonLacunar, Lacunar, Superlacunar };
std::string to_string(Lacunarity c);

struct ClassifierConfig {
  double super_ratio = 8.0;  // R_super
  double margin = 0.1;       // q: lacunar iff min tail ratio > 1 + q
};

struct SideReport {
  bool present = false;
  std::vector<double> ratios;  // ratio for k = 1..K (inf when it overflows)
  double min_tail_ratio = 0.0;
  bool tail_nondecreasing = false;
  Lacunarity verdict = Lacunarity::NonLacunar;
};

struct LacunarityClass {
  Lacunarity verdict = Lacunarity::NonLacunar;
  double observed_min_ratio = 0.0;  // over the tail windows of both sides
  std::int64_t window = 0;
  std::int64_t tail = 0;
  ClassifierConfig config;
  SideReport positive;
  SideReport negative;
  std::string note;

  nlohmann::json to_json() const;
};

// Finite-window heuristic for the liminf conditions on n(k+1)/n(k). Ratios
// for k = 1..window are inspected; the decision uses the last ceil(window/2).
LacunarityClass classify(const FrequencySequence& freqs, std::int64_t window,
                         const ClassifierConfig& config = {});

}  // namespace lacunar
