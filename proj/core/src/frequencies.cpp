#include "lacunar/frequencies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lacunar/error.hpp"

namespace lacunar {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::int64_t abs_index(std::int64_t k) { return k < 0 ? -k : k; }

// |num| / |den| > threshold, exactly (threshold is a dyadic rational).
bool ratio_exceeds(const BigInt& num, const BigInt& den, double threshold) {
  mpq_class lhs(abs(num), abs(den));
  lhs.canonicalize();
  return cmp(lhs, mpq_class(threshold)) > 0;
}

double ratio_value(const BigInt& num, const BigInt& den) {
  if (sgn(den) == 0) return kInf;
  const double l = lacunar::log2_abs(num) - lacunar::log2_abs(den);
  if (l >= 1024.0) return kInf;
  return std::exp2(l);
}

}  // namespace

FrequencySequence FrequencySequence::geometric(std::int64_t base, bool one_sided) {
  if (base < 2) throw ValidationError("geometric family needs base >= 2");
  FrequencySequence f;
  f.family_ = Family::Geometric;
  f.base_ = base;
  f.one_sided_ = one_sided;
  f.label_ = "geometric(" + std::to_string(base) + (one_sided ? ")" : ",two-sided)");
  return f;
}

FrequencySequence FrequencySequence::double_exponential() {
  FrequencySequence f;
  f.family_ = Family::DoubleExponential;
  f.one_sided_ = false;
  f.label_ = "double_exponential";
  return f;
}

FrequencySequence FrequencySequence::explicit_values(std::map<std::int64_t, BigInt> values,
                                                     std::string label) {
  if (values.empty()) throw ValidationError("explicit frequency table is empty");
  if (values.contains(0)) throw ValidationError("index k = 0 is not part of the index set");
  FrequencySequence f;
  f.family_ = Family::Explicit;
  f.label_ = std::move(label);
  f.table_ = std::move(values);
  f.one_sided_ = f.table_.begin()->first > 0;
  std::int64_t limit = 0;
  for (const auto& [k, _] : f.table_) limit = std::max(limit, abs_index(k));
  f.validate(limit);
  return f;
}

bool FrequencySequence::has_negative_side() const {
  switch (family_) {
    case Family::Geometric: return !one_sided_;
    case Family::DoubleExponential: return true;
    case Family::Explicit: return table_.begin()->first < 0;
  }
  return false;
}

std::optional<std::int64_t> FrequencySequence::max_index() const {
  if (family_ != Family::Explicit) return std::nullopt;
  std::int64_t limit = 0;
  for (const auto& [k, _] : table_) limit = std::max(limit, abs_index(k));
  return limit;
}

bool FrequencySequence::defined(std::int64_t k) const {
  if (k == 0) return false;
  if (family_ == Family::Explicit) return table_.contains(k);
  return k > 0 || has_negative_side();
}

BigInt FrequencySequence::at(std::int64_t k) const {
  if (!defined(k)) {
    throw ValidationError("frequency undefined at k = " + std::to_string(k) + " (" + label_ + ")");
  }
  const std::int64_t a = abs_index(k);
  BigInt out;
  switch (family_) {
    case Family::Geometric:
      mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base_),
                    static_cast<unsigned long>(a));
      break;
    case Family::DoubleExponential:
      if (a > kDoubleExponentialCeiling) {
        throw ValidationError("2^(2^k) for k = " + std::to_string(a) +
                              " exceeds the materialization ceiling");
      }
      out = pow2(std::uint64_t{1} << a);
      break;
    case Family::Explicit:
      return table_.at(k);
  }
  return k < 0 ? BigInt(-out) : out;
}

std::size_t FrequencySequence::bit_length(std::int64_t k) const {
  if (!defined(k)) throw ValidationError("frequency undefined at k = " + std::to_string(k));
  const std::int64_t a = abs_index(k);
  if (family_ == Family::DoubleExponential) {
    if (a >= 63) throw ValidationError("bit length of 2^(2^k) overflows for k >= 63");
    return (std::size_t{1} << a) + 1;
  }
  if (family_ == Family::Geometric && a > 4096) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(a) * std::log2(base_))) + 1;
  }
  return lacunar::bit_length(at(k));
}

double FrequencySequence::log2_abs(std::int64_t k) const {
  if (!defined(k)) throw ValidationError("frequency undefined at k = " + std::to_string(k));
  const std::int64_t a = abs_index(k);
  switch (family_) {
    case Family::Geometric: return static_cast<double>(a) * std::log2(static_cast<double>(base_));
    case Family::DoubleExponential: return std::exp2(static_cast<double>(a));
    case Family::Explicit: return lacunar::log2_abs(table_.at(k));
  }
  return 0.0;
}

double FrequencySequence::abs_upper(std::int64_t k) const {
  if (!defined(k)) throw ValidationError("frequency undefined at k = " + std::to_string(k));
  // Values past 2^1024 saturate without being materialized.
  if (family_ != Family::Explicit && log2_abs(k) > 1025.0) return kInf;
  return abs_to_double_upper(at(k));
}

std::vector<std::int64_t> FrequencySequence::indices_up_to(std::int64_t limit) const {
  std::vector<std::int64_t> out;
  for (std::int64_t a = 1; a <= limit; ++a) {
    if (defined(a)) out.push_back(a);
    if (defined(-a)) out.push_back(-a);
    if (family_ == Family::Explicit && a >= *max_index()) break;
  }
  return out;
}

void FrequencySequence::validate(std::int64_t limit) const {
  if (defined(1) && sgn(at(1)) < 0) throw ValidationError("n(1) must be >= 0");
  if (defined(-1) && sgn(at(-1)) > 0) throw ValidationError("n(-1) must be <= 0");
  for (std::int64_t a = 1; a < limit; ++a) {
    if (defined(a) && defined(a + 1) && at(a + 1) < at(a) + 1) {
      throw ValidationError("separation violated: n(" + std::to_string(a + 1) +
                            ") < n(" + std::to_string(a) + ") + 1");
    }
    if (defined(-a) && defined(-a - 1) && at(-a - 1) > at(-a) - 1) {
      throw ValidationError("separation violated: n(" + std::to_string(-a - 1) +
                            ") > n(" + std::to_string(-a) + ") - 1");
    }
  }
}

nlohmann::json FrequencySequence::to_json() const {
  switch (family_) {
    case Family::Geometric:
      return {{"family", "geometric"}, {"base", base_}, {"one_sided", one_sided_}};
    case Family::DoubleExponential:
      return {{"family", "double_exponential"}};
    case Family::Explicit: {
      nlohmann::json values = nlohmann::json::array();
      for (const auto& [k, n] : table_) values.push_back({k, to_decimal(n)});
      return {{"family", "explicit"}, {"values", values}, {"label", label_}};
    }
  }
  return {};
}

FrequencySequence FrequencySequence::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("family")) {
    throw ValidationError("frequency family must be an object with a \"family\" field");
  }
  const std::string family = j.at("family").get<std::string>();
  if (family == "geometric") {
    return geometric(j.at("base").get<std::int64_t>(), j.value("one_sided", true));
  }
  if (family == "double_exponential") return double_exponential();
  if (family == "explicit") {
    std::map<std::int64_t, BigInt> values;
    for (const auto& entry : j.at("values")) {
      if (!entry.is_array() || entry.size() != 2 || !entry[1].is_string()) {
        throw ValidationError("explicit frequencies are [k, \"decimal string\"] pairs");
      }
      const auto k = entry[0].get<std::int64_t>();
      if (!values.emplace(k, parse_bigint(entry[1].get<std::string>())).second) {
        throw ValidationError("duplicate frequency index " + std::to_string(k));
      }
    }
    return explicit_values(std::move(values), j.value("label", std::string("explicit")));
  }
  throw ValidationError("unknown frequency family: " + family);
}

std::string to_string(Lacunarity c) {
  switch (c) {
    case Lacunarity::NonLacunar: return "NonLacunar";
    case Lacunarity::Lacunar: return "Lacunar";
    case Lacunarity::Superlacunar: return "Superlacunar";
  }
  return "?";
}

namespace {

SideReport classify_side(const FrequencySequence& freqs, int sign, std::int64_t window,
                         std::int64_t tail, const ClassifierConfig& config) {
  SideReport side;
  side.present = true;
  std::vector<BigInt> values;
  values.reserve(static_cast<std::size_t>(window) + 1);
  for (std::int64_t a = 1; a <= window + 1; ++a) {
    if (!freqs.defined(sign * a)) {
      throw ValidationError("index gap: frequency undefined at k = " + std::to_string(sign * a));
    }
    values.push_back(freqs.at(sign * a));
  }
  for (std::int64_t a = 2; a <= window; ++a) {
    if (sgn(values[a - 1]) == 0) {
      throw ValidationError("n(" + std::to_string(sign * a) +
                            ") = 0 violates the separation invariant");
    }
  }
  for (std::int64_t a = 1; a <= window; ++a) {
    side.ratios.push_back(ratio_value(values[a], values[a - 1]));
  }

  const std::int64_t first = window - tail + 1;  // 1-based ratio index
  bool above_super = true;
  bool above_margin = true;
  side.tail_nondecreasing = true;
  side.min_tail_ratio = kInf;
  for (std::int64_t a = first; a <= window; ++a) {
    const BigInt& num = values[a];
    const BigInt& den = values[a - 1];
    side.min_tail_ratio = std::min(side.min_tail_ratio, side.ratios[a - 1]);
    if (sgn(den) != 0) {
      above_super = above_super && ratio_exceeds(num, den, config.super_ratio);
      above_margin = above_margin && ratio_exceeds(num, den, 1.0 + config.margin);
    }
    if (a > first) {
      // r(a) >= r(a-1)  <=>  |n(a+1)|*|n(a-1)| >= |n(a)|^2 (for nonzero n(a-1)).
      const BigInt& prev_den = values[a - 2];
      if (sgn(prev_den) != 0 && abs(num) * abs(prev_den) < abs(den) * abs(den)) {
        side.tail_nondecreasing = false;
      }
    }
  }
  if (above_super && side.tail_nondecreasing) {
    side.verdict = Lacunarity::Superlacunar;
  } else if (above_margin) {
    side.verdict = Lacunarity::Lacunar;
  } else {
    side.verdict = Lacunarity::NonLacunar;
  }
  return side;
}

}  // namespace

LacunarityClass classify(const FrequencySequence& freqs, std::int64_t window,
                         const ClassifierConfig& config) {
  if (window < 2) throw ValidationError("classification window must be >= 2");
  LacunarityClass out;
  out.window = window;
  out.tail = (window + 1) / 2;
  out.config = config;
  out.positive = classify_side(freqs, 1, window, out.tail, config);
  out.verdict = out.positive.verdict;
  out.observed_min_ratio = out.positive.min_tail_ratio;
  if (freqs.has_negative_side()) {
    out.negative = classify_side(freqs, -1, window, out.tail, config);
    out.verdict = std::min(out.verdict, out.negative.verdict);
    out.observed_min_ratio = std::min(out.observed_min_ratio, out.negative.min_tail_ratio);
    out.note = "both sides inspected";
  } else {
    out.note = "negative side absent; its lacunarity condition holds vacuously";
  }
  return out;
}

namespace {

nlohmann::json ratio_json(double r) {
  if (std::isinf(r)) return "inf";
  return r;
}

nlohmann::json side_json(const SideReport& s) {
  if (!s.present) return nullptr;
  nlohmann::json ratios = nlohmann::json::array();
  for (double r : s.ratios) ratios.push_back(ratio_json(r));
  return {{"ratios", ratios},
          {"min_tail_ratio", ratio_json(s.min_tail_ratio)},
          {"tail_nondecreasing", s.tail_nondecreasing},
          {"verdict", to_string(s.verdict)}};
}

}  // namespace

nlohmann::json LacunarityClass::to_json() const {
  return {{"verdict", to_string(verdict)},
          {"observed_min_ratio", ratio_json(observed_min_ratio)},
          {"window", window},
          {"tail", tail},
          {"super_ratio", config.super_ratio},
          {"margin", config.margin},
          {"positive", side_json(positive)},
          {"negative", side_json(negative)},
          {"note", note}};
}

}  // namespace lacunar
