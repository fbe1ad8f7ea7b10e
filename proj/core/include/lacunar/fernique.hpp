#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lacunar/bounds.hpp"
#include "lacunar/modulus.hpp"

namespace lacunar {

// A modulus of continuity evaluated through log(delta), so that
// delta = exp(-x^2/2) stays representable far past the double underflow.
struct ModulusFunction {
  std::string source;
  std::function<double(double log_delta)> eval;
  // log(delta) positions where the function has a kink or a regime change.
  std::vector<double> kinks;
  bool extrapolated_below = false;
  std::string note;

  double operator()(double log_delta) const { return eval(log_delta); }
};

// Envelope inside its domain, extended by its constant C above the domain
// (where the logarithmic base reaches 1).
ModulusFunction modulus_from_envelope(const Envelope& env);
// omega(delta) = min(delta, 1).
ModulusFunction lipschitz_modulus();
ModulusFunction constant_modulus(double value);
// Monotone, piecewise linear in log(delta). Beyond the largest delta: the last
// value. Below the smallest: `below` if given, otherwise linear extrapolation
// in log(delta) clamped at 0 (flagged in the report).
ModulusFunction modulus_from_curve(const ModulusCurve& curve,
                                   std::optional<Envelope> below = std::nullopt);

// sqrt(omega(exp(-x^2/2))).
double fernique_integrand(const ModulusFunction& modulus, double x);

struct PartialIntegral {
  double upper = 0.0;  // X
  double value = 0.0;  // I(X)
  double error = 0.0;
};

// Adaptive Gauss-Kronrod on [0, X] to absolute `tolerance`, split at kinks.
PartialIntegral fernique_partial(const ModulusFunction& modulus, double upper, double tolerance);

enum class FerniqueVerdict { Convergent, Divergent, Inconclusive };
std::string to_string(FerniqueVerdict v);

// Tail model a * x^-p * (ln x)^-q, p, q >= 0, fitted in log space.
struct TailModel {
  double a = 0.0;
  double p = 0.0;
  double q = 0.0;
  double residual = 0.0;  // rms in log space
  bool vanishing = false; // integrand identically zero on the fit window
};

struct FerniqueReport {
  std::string source;
  std::vector<PartialIntegral> ladder;
  TailModel tail;
  FerniqueVerdict verdict = FerniqueVerdict::Inconclusive;
  std::optional<double> limit_estimate;
  std::optional<double> remainder_bound;
  bool extrapolated = false;
  std::string note;

  nlohmann::json to_json() const;
};

struct FerniqueConfig {
  double residual_limit = 0.05;   // max rms log residual for a Divergent verdict
  double exponent_band = 0.05;    // |p - 1| (or |q - 1|) treated as borderline
  int tail_samples = 41;
};

// Numerical heuristic: partial integrals on the ladder plus a fitted tail on
// the last decade [X_max/10, X_max].
FerniqueReport classify_convergence(const ModulusFunction& modulus,
                                    std::span<const double> ladder, double tolerance,
                                    const FerniqueConfig& config = {});

}  // namespace lacunar
