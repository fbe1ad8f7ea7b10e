#include "lacunar/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lacunar/error.hpp"

namespace lacunar {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Widening applied to every Sigma sum so floating rounding never makes the
// bound certified-low.
constexpr double kBoundSlack = 1.0 + 64.0 * 0x1p-53;

// tail[N] = sum_{|k|>N} |c(k)| for N = 0..n_max, certified high.
std::vector<double> tail_table(const CoefficientSequence& coeffs, std::int64_t n_max) {
  std::vector<double> tail(static_cast<std::size_t>(n_max) + 1, 0.0);
  double acc = 0.0;
  if (coeffs.family() == CoefficientSequence::Family::Power) {
    const std::int64_t range = std::max(CoefficientSequence::kExplicitRange, n_max + 1);
    acc = coeffs.tail_majorant(range);
    for (std::int64_t a = range; a > n_max; --a) acc += coeffs.abs_at(a) + coeffs.abs_at(-a);
  } else {
    acc = coeffs.tail_majorant(std::max<std::int64_t>(n_max, 0));
  }
  tail[static_cast<std::size_t>(n_max)] = acc;
  for (std::int64_t a = n_max; a >= 1; --a) {
    acc += coeffs.abs_at(a) + coeffs.abs_at(-a);
    tail[static_cast<std::size_t>(a - 1)] = acc;
  }
  return tail;
}

struct SigmaTables {
  std::vector<double> sigma1;  // indexed by N
  std::vector<double> sigma2;
};

SigmaTables build_tables(const SeriesSpec& spec, std::int64_t n_max, Sigma1Variant variant) {
  SigmaTables t;
  t.sigma1.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  const double l1 = spec.coefficients.l1_upper();
  double tight = 0.0;
  double literal = 0.0;
  for (std::int64_t a = 1; a <= n_max; ++a) {
    for (std::int64_t k : {a, -a}) {
      if (!spec.coefficients.nonzero(k)) continue;
      if (!spec.frequencies.defined(k)) {
        throw ValidationError("frequency undefined at k = " + std::to_string(k));
      }
      const double n = spec.frequencies.abs_upper(k);
      tight += spec.coefficients.abs_at(k) * n;
      literal += static_cast<double>(a) * n;
    }
    t.sigma1[static_cast<std::size_t>(a)] =
        (variant == Sigma1Variant::Tight ? tight : l1 * literal) * kBoundSlack;
  }
  t.sigma2 = tail_table(spec.coefficients, n_max);
  for (double& v : t.sigma2) v *= 2.0 * kBoundSlack;
  return t;
}

BoundEvaluation evaluate(const SigmaTables& t, double delta, std::int64_t n_max,
                         Sigma1Variant variant) {
  if (!(delta >= 0.0) || !(delta < 2.0 * std::numbers::pi)) {
    throw ValidationError("delta out of range [0, 2*pi): " + std::to_string(delta));
  }
  BoundEvaluation out;
  out.delta = delta;
  out.variant = variant;
  out.n_max = n_max;
  if (delta == 0.0) {
    out.n_star = n_max;
    out.sigma1 = t.sigma1[static_cast<std::size_t>(n_max)];
    out.sigma2 = t.sigma2[static_cast<std::size_t>(n_max)];
    out.total = out.sigma2;
    return out;
  }
  out.total = kInf;
  for (std::int64_t n = 2; n <= n_max; ++n) {
    const double s1 = t.sigma1[static_cast<std::size_t>(n)];
    const double s2 = t.sigma2[static_cast<std::size_t>(n)];
    const double value = delta * s1 + s2;
    if (value < out.total || out.n_star == 0) {
      out.total = value;
      out.n_star = n;
      out.sigma1 = s1;
      out.sigma2 = s2;
    }
  }
  return out;
}

void check_range(std::int64_t n_max) {
  if (n_max < 2) throw ValidationError("truncation search range needs N_max >= 2");
}

}  // namespace

std::string to_string(Sigma1Variant v) {
  return v == Sigma1Variant::Tight ? "Tight" : "PaperLiteral";
}

Sigma1Variant sigma1_variant_from_string(const std::string& s) {
  if (s == "Tight" || s == "tight") return Sigma1Variant::Tight;
  if (s == "PaperLiteral" || s == "paper_literal" || s == "literal") {
    return Sigma1Variant::PaperLiteral;
  }
  throw ValidationError("unknown Sigma1 variant: " + s);
}

double sigma1(const SeriesSpec& spec, std::int64_t n, Sigma1Variant variant) {
  check_range(n);
  return build_tables(spec, n, variant).sigma1[static_cast<std::size_t>(n)];
}

double sigma2(const CoefficientSequence& coeffs, std::int64_t n) {
  check_range(n);
  return 2.0 * kBoundSlack * tail_table(coeffs, n)[static_cast<std::size_t>(n)];
}

BoundEvaluation upper_bound(const SeriesSpec& spec, double delta, std::int64_t n_max,
                            Sigma1Variant variant) {
  check_range(n_max);
  return evaluate(build_tables(spec, n_max, variant), delta, n_max, variant);
}

std::vector<BoundEvaluation> upper_bound_curve(const SeriesSpec& spec,
                                               std::span<const double> deltas,
                                               std::int64_t n_max, Sigma1Variant variant) {
  check_range(n_max);
  const auto tables = build_tables(spec, n_max, variant);
  std::vector<BoundEvaluation> out;
  out.reserve(deltas.size());
  for (double d : deltas) out.push_back(evaluate(tables, d, n_max, variant));
  return out;
}

ModulusCurve as_modulus_curve(const std::vector<BoundEvaluation>& bounds) {
  ModulusCurve curve;
  curve.provenance = Provenance::AnalyticUpper;
  if (!bounds.empty()) {
    curve.parameters = {{"variant", to_string(bounds.front().variant)},
                        {"n_max", bounds.front().n_max}};
  }
  for (const auto& b : bounds) curve.points.push_back({b.delta, b.total});
  return curve;
}

std::string to_string(ConstantVariant v) {
  return v == ConstantVariant::Classical ? "Classical" : "PaperLiteral";
}

CoefficientLowerBound coefficient_lower_bound(const SeriesSpec& spec, std::int64_t k,
                                              ConstantVariant variant) {
  if (k == 0) throw ValidationError("|k| must be >= 1");
  const std::int64_t a = k < 0 ? -k : k;
  if (sgn(spec.frequencies.at(a)) == 0) throw ValidationError("n(|k|) = 0");
  CoefficientLowerBound out;
  out.k = k;
  out.delta = std::numbers::pi / spec.frequencies.abs_upper(a);
  const double c = spec.coefficients.abs_at(k);
  out.classical = 2.0 * c;
  out.paper_literal = 4.0 * std::numbers::pi * c;
  out.variant = variant;
  return out;
}

std::string to_string(EnvelopeExample e) {
  return e == EnvelopeExample::Geometric ? "geometric" : "double_exponential";
}

std::string to_string(EnvelopeSide s) { return s == EnvelopeSide::Lower ? "lower" : "upper"; }

Envelope::Envelope(EnvelopeExample example, EnvelopeSide side, double delta_exponent,
                   double constant)
    : example_(example), side_(side), delta_exponent_(delta_exponent), constant_(constant) {
  if (!(delta_exponent > 0.5)) throw ValidationError("envelope needs Delta > 1/2");
  if (!(constant >= 0.0) || !std::isfinite(constant)) {
    throw ValidationError("envelope constant must be finite and >= 0");
  }
}

double Envelope::domain_limit() const {
  return example_ == EnvelopeExample::Geometric ? std::exp(-1.0) : std::exp(-std::exp(1.0));
}

bool Envelope::in_domain(double delta) const { return delta > 0.0 && delta < domain_limit(); }

double Envelope::exponent() const {
  return side_ == EnvelopeSide::Lower ? -2.0 * delta_exponent_ : 1.0 - 2.0 * delta_exponent_;
}

double Envelope::shape(double delta) const {
  if (!in_domain(delta)) {
    throw ValidationError("delta outside envelope domain: " + std::to_string(delta));
  }
  const double log_term = std::fabs(std::log(delta));
  const double base = example_ == EnvelopeExample::Geometric ? log_term : std::log(log_term);
  return std::pow(base, exponent());
}

double Envelope::operator()(double delta) const { return constant_ * shape(delta); }

Envelope envelope(EnvelopeExample example, EnvelopeSide side, double delta_exponent,
                  double constant) {
  return Envelope(example, side, delta_exponent, constant);
}

nlohmann::json FittedConstant::to_json() const {
  return {{"constant", constant},
          {"least_squares", least_squares},
          {"exponent", exponent},
          {"fit_range", {fit_lo, fit_hi}},
          {"residual", residual},
          {"points", points},
          {"symbol", symbol}};
}

FittedConstant fit_envelope(const ModulusCurve& reference, EnvelopeExample example,
                            EnvelopeSide side, double delta_exponent, double fit_lo,
                            double fit_hi) {
  const Envelope shape(example, side, delta_exponent, 1.0);
  std::vector<std::pair<double, double>> pts;  // (shape, omega)
  for (const auto& p : reference.points) {
    if (p.delta < fit_lo || p.delta > fit_hi || !shape.in_domain(p.delta)) continue;
    pts.emplace_back(shape.shape(p.delta), p.omega);
  }
  if (pts.size() < 10) {
    throw ValidationError("envelope fit needs >= 10 points in range, have " +
                          std::to_string(pts.size()));
  }
  FittedConstant out;
  out.exponent = shape.exponent();
  out.fit_lo = fit_lo;
  out.fit_hi = fit_hi;
  out.points = pts.size();
  const bool lower = side == EnvelopeSide::Lower;
  if (example == EnvelopeExample::Geometric) {
    out.symbol = lower ? "C1" : "C2";
  } else {
    out.symbol = lower ? "C3" : "C4";
  }
  double c = lower ? kInf : 0.0;
  double log_sum = 0.0;
  for (const auto& [s, w] : pts) {
    if (!(s > 0.0) || !std::isfinite(s) || !(w > 0.0) || !std::isfinite(w)) {
      throw NumericalError("envelope shape degenerate on the fit range");
    }
    c = lower ? std::min(c, w / s) : std::max(c, w / s);
    log_sum += std::log(w) - std::log(s);
  }
  out.constant = c;
  out.least_squares = std::exp(log_sum / static_cast<double>(pts.size()));
  for (const auto& [s, w] : pts) {
    out.residual = std::max(out.residual, std::fabs(c * s - w) / w);
  }
  return out;
}

LogScalingFit fit_log_scaling(const ModulusCurve& curve, EnvelopeExample example, double fit_lo,
                              double fit_hi) {
  std::vector<double> xs, ys;
  for (const auto& p : curve.points) {
    if (p.delta < fit_lo || p.delta > fit_hi || !(p.omega > 0.0)) continue;
    const double l = std::fabs(std::log(p.delta));
    const double base = example == EnvelopeExample::Geometric ? l : std::log(l);
    if (!(base > 0.0)) continue;
    xs.push_back(std::log(base));
    ys.push_back(std::log(p.omega));
  }
  if (xs.size() < 3) throw ValidationError("scaling fit needs >= 3 positive points in range");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw NumericalError("scaling fit is degenerate (constant abscissa)");
  LogScalingFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points = xs.size();
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss += r * r;
    fit.max_residual = std::max(fit.max_residual, std::fabs(r));
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace lacunar
