#include "lacunar/fernique.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lacunar/error.hpp"

namespace lacunar {
namespace {

constexpr std::size_t kIntervalBudget = 20000;

// Envelope value from log(delta), without forming delta.
double envelope_at_log(const Envelope& env, double log_delta) {
  const double magnitude = -log_delta;  // |ln delta|
  const double base =
      env.example() == EnvelopeExample::Geometric ? magnitude : std::log(magnitude);
  return env.constant() * std::pow(base, env.exponent());
}

struct Interval {
  double a, b, value, error;
  bool operator<(const Interval& o) const { return error < o.error; }
};

Interval gk15(const std::function<double(double)>& f, double a, double b) {
  double err = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err);
  return {a, b, v, err};
}

// Globally adaptive: bisect the interval with the largest error estimate until
// the summed estimate meets `tolerance`.
PartialIntegral integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                   double tolerance) {
  if (b <= a) return {b, 0.0, 0.0};
  std::priority_queue<Interval> heap;
  heap.push(gk15(f, a, b));
  double total_error = heap.top().error;
  while (total_error > tolerance) {
    if (heap.size() >= kIntervalBudget) {
      throw NumericalError("quadrature tolerance " + std::to_string(tolerance) +
                           " not reached within the evaluation budget");
    }
    const Interval worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Interval left = gk15(f, worst.a, mid);
    const Interval right = gk15(f, mid, worst.b);
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    // Recompute occasionally to shed accumulated cancellation in the running sum.
    if (heap.size() % 256 == 0) {
      total_error = 0.0;
      auto copy = heap;
      while (!copy.empty()) {
        total_error += copy.top().error;
        copy.pop();
      }
    }
  }
  std::vector<Interval> parts;
  while (!heap.empty()) {
    parts.push_back(heap.top());
    heap.pop();
  }
  std::sort(parts.begin(), parts.end(), [](const Interval& l, const Interval& r) { return l.a < r.a; });
  PartialIntegral out{b, 0.0, 0.0};
  for (const auto& p : parts) {
    out.value += p.value;
    out.error += p.error;
  }
  return out;
}

std::vector<double> kink_positions(const ModulusFunction& modulus) {
  std::vector<double> xs;
  for (double l : modulus.kinks) {
    if (l < 0.0 && std::isfinite(l)) xs.push_back(std::sqrt(-2.0 * l));
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

struct LinearFit {
  double log_a = 0.0, p = 0.0, q = 0.0, sse = std::numeric_limits<double>::infinity();
};

// Least squares of y = log_a - p*u - q*v with the selected parameters free.
LinearFit fit_tail(const std::vector<double>& u, const std::vector<double>& v,
                   const std::vector<double>& y, bool free_p, bool free_q) {
  const std::size_t n = y.size();
  std::vector<std::vector<double>> cols;
  cols.emplace_back(n, 1.0);
  if (free_p) {
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = -u[i];
    cols.push_back(std::move(c));
  }
  if (free_q) {
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = -v[i];
    cols.push_back(std::move(c));
  }
  const std::size_t m = cols.size();
  // Normal equations, solved by Gaussian elimination with partial pivoting.
  std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      for (std::size_t i = 0; i < n; ++i) a[r][c] += cols[r][i] * cols[c][i];
    }
    for (std::size_t i = 0; i < n; ++i) a[r][m] += cols[r][i] * y[i];
  }
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < m; ++r) {
      if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
    }
    std::swap(a[c], a[piv]);
    if (std::fabs(a[c][c]) < 1e-300) return {};
    for (std::size_t r = 0; r < m; ++r) {
      if (r == c) continue;
      const double factor = a[r][c] / a[c][c];
      for (std::size_t k = c; k <= m; ++k) a[r][k] -= factor * a[c][k];
    }
  }
  std::vector<double> beta(m);
  for (std::size_t r = 0; r < m; ++r) beta[r] = a[r][m] / a[r][r];
  LinearFit fit;
  fit.log_a = beta[0];
  std::size_t idx = 1;
  if (free_p) fit.p = beta[idx++];
  if (free_q) fit.q = beta[idx++];
  fit.sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.log_a - fit.p * u[i] - fit.q * v[i]);
    fit.sse += r * r;
  }
  return fit;
}

}  // namespace

ModulusFunction modulus_from_envelope(const Envelope& env) {
  ModulusFunction m;
  m.source = "envelope:" + to_string(env.example()) + ":" + to_string(env.side());
  const double limit = std::log(env.domain_limit());
  m.eval = [env, limit](double log_delta) {
    if (log_delta >= limit) return env.constant();
    return envelope_at_log(env, log_delta);
  };
  m.kinks = {limit};
  return m;
}

ModulusFunction lipschitz_modulus() {
  ModulusFunction m;
  m.source = "lipschitz:min(delta,1)";
  m.eval = [](double log_delta) { return log_delta >= 0.0 ? 1.0 : std::exp(log_delta); };
  m.kinks = {0.0};
  return m;
}

ModulusFunction constant_modulus(double value) {
  if (!(value >= 0.0)) throw ValidationError("constant modulus must be >= 0");
  ModulusFunction m;
  m.source = "constant:" + std::to_string(value);
  m.eval = [value](double) { return value; };
  return m;
}

ModulusFunction modulus_from_curve(const ModulusCurve& curve, std::optional<Envelope> below) {
  if (curve.points.empty()) throw ValidationError("modulus curve is empty");
  curve.validate();
  const ModulusCurve mono = monotone_envelope(curve);
  std::vector<double> logs, values;
  for (const auto& p : mono.points) {
    logs.push_back(std::log(p.delta));
    values.push_back(p.omega);
  }
  ModulusFunction m;
  m.source = "curve:" + to_string(curve.provenance);
  m.kinks = logs;
  if (below) {
    m.note = "below the smallest delta the supplied envelope is used";
  } else {
    m.extrapolated_below = true;
    m.note = "below the smallest delta the curve is extrapolated linearly in log(delta)";
  }
  m.eval = [logs, values, below](double log_delta) {
    if (log_delta >= logs.back()) return values.back();
    if (log_delta <= logs.front()) {
      if (below && log_delta < std::log(below->domain_limit())) {
        return envelope_at_log(*below, log_delta);
      }
      if (logs.size() < 2) return values.front();
      const double slope = (values[1] - values[0]) / (logs[1] - logs[0]);
      return std::max(0.0, values[0] + slope * (log_delta - logs[0]));
    }
    const auto it = std::upper_bound(logs.begin(), logs.end(), log_delta);
    const std::size_t i = static_cast<std::size_t>(it - logs.begin());
    const double w = (log_delta - logs[i - 1]) / (logs[i] - logs[i - 1]);
    return values[i - 1] + w * (values[i] - values[i - 1]);
  };
  return m;
}

double fernique_integrand(const ModulusFunction& modulus, double x) {
  if (!(x >= 0.0)) throw ValidationError("Fernique integrand needs x >= 0");
  const double w = modulus(-0.5 * x * x);
  if (!(w >= 0.0)) throw ValidationError("modulus is negative (corrupt curve)");
  return std::sqrt(w);
}

PartialIntegral fernique_partial(const ModulusFunction& modulus, double upper, double tolerance) {
  if (!(upper > 0.0)) throw ValidationError("upper limit must be > 0");
  if (!(tolerance > 0.0)) throw ValidationError("tolerance must be > 0");
  std::vector<double> cuts{0.0};
  for (double x : kink_positions(modulus)) {
    if (x > 0.0 && x < upper) cuts.push_back(x);
  }
  cuts.push_back(upper);
  const auto f = [&](double x) { return fernique_integrand(modulus, x); };
  const double per = tolerance / static_cast<double>(cuts.size() - 1);
  PartialIntegral out{upper, 0.0, 0.0};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const auto part = integrate_adaptive(f, cuts[i], cuts[i + 1], per);
    out.value += part.value;
    out.error += part.error;
  }
  return out;
}

std::string to_string(FerniqueVerdict v) {
  switch (v) {
    case FerniqueVerdict::Convergent: return "Convergent";
    case FerniqueVerdict::Divergent: return "Divergent";
    case FerniqueVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

FerniqueReport classify_convergence(const ModulusFunction& modulus,
                                    std::span<const double> ladder, double tolerance,
                                    const FerniqueConfig& config) {
  if (ladder.size() < 4) throw ValidationError("X ladder needs at least 4 points");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (!(ladder[i] > 0.0) || (i > 0 && !(ladder[i] > ladder[i - 1]))) {
      throw ValidationError("X ladder must be positive and increasing");
    }
  }
  if (!(tolerance > 0.0)) throw ValidationError("tolerance must be > 0");

  FerniqueReport report;
  report.source = modulus.source;
  report.extrapolated = modulus.extrapolated_below;

  // Segments between 0, kinks and ladder points, integrated once each.
  std::vector<double> cuts{0.0};
  for (double x : kink_positions(modulus)) {
    if (x < ladder.back()) cuts.push_back(x);
  }
  cuts.insert(cuts.end(), ladder.begin(), ladder.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const auto f = [&](double x) { return fernique_integrand(modulus, x); };
  const double per = tolerance / static_cast<double>(cuts.size() - 1);
  double value = 0.0, error = 0.0;
  std::size_t next = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const auto part = integrate_adaptive(f, cuts[i], cuts[i + 1], per);
    value += part.value;
    error += part.error;
    while (next < ladder.size() && ladder[next] <= cuts[i + 1]) {
      report.ladder.push_back({ladder[next], value, error});
      ++next;
    }
  }

  const double x_hi = ladder.back();
  const double x_lo = std::max(x_hi / 10.0, std::exp(1.0) * 1.01);
  const double i_last = report.ladder.back().value;
  if (!(x_hi > x_lo)) {
    report.note = "ladder too short for a tail fit";
    return report;
  }
  std::vector<double> u, v, y;
  bool tail_zero = false;
  for (int s = 0; s < config.tail_samples; ++s) {
    const double x = x_lo * std::pow(x_hi / x_lo, static_cast<double>(s) / (config.tail_samples - 1));
    const double fx = f(x);
    if (s == config.tail_samples - 1 && fx == 0.0) tail_zero = true;
    if (fx > 0.0) {
      u.push_back(std::log(x));
      v.push_back(std::log(std::log(x)));
      y.push_back(std::log(fx));
    }
  }
  if (tail_zero || y.size() < 5) {
    report.tail.vanishing = true;
    report.verdict = FerniqueVerdict::Convergent;
    report.limit_estimate = i_last;
    report.remainder_bound = 0.0;
    report.note = "integrand vanishes on the tail window; numerical heuristic";
    return report;
  }

  LinearFit best;
  for (auto [fp, fq] : {std::pair{true, true}, {true, false}, {false, true}, {false, false}}) {
    const LinearFit fit = fit_tail(u, v, y, fp, fq);
    if (fit.p < 0.0 || fit.q < 0.0) continue;
    if (fit.sse < best.sse) best = fit;
  }
  report.tail.a = std::exp(best.log_a);
  report.tail.p = best.p;
  report.tail.q = best.q;
  report.tail.residual = std::sqrt(best.sse / static_cast<double>(y.size()));

  const double eps = config.exponent_band;
  const double p = best.p, q = best.q;
  const bool integrable = p > 1.0 + eps || (std::fabs(p - 1.0) <= eps && q > 1.0 + eps);
  const bool non_integrable = p < 1.0 - eps || (std::fabs(p - 1.0) <= eps && q < 1.0 - eps);
  const bool good_fit = report.tail.residual <= config.residual_limit;

  if (non_integrable && good_fit) {
    report.verdict = FerniqueVerdict::Divergent;
    report.note = "fitted tail is not integrable; numerical heuristic";
  } else if (integrable && good_fit) {
    const double a = report.tail.a;
    const double lx = std::log(x_hi);
    double remainder = std::numeric_limits<double>::infinity();
    if (p > 1.0) remainder = a * std::pow(x_hi, 1.0 - p) / ((p - 1.0) * std::pow(lx, q));
    if (p >= 1.0 && q > 1.0) remainder = std::min(remainder, a * std::pow(lx, 1.0 - q) / (q - 1.0));
    report.remainder_bound = remainder;
    if (remainder < tolerance) {
      report.verdict = FerniqueVerdict::Convergent;
      report.limit_estimate = i_last + remainder;
      report.note = "fitted tail is integrable and the remainder is below tolerance; "
                    "numerical heuristic";
    } else {
      report.note = "fitted tail is integrable but the remainder exceeds tolerance";
    }
  } else {
    report.note = good_fit ? "tail exponents are borderline" : "tail model fits poorly";
  }
  return report;
}

nlohmann::json FerniqueReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& p : ladder) rows.push_back({p.upper, p.value, p.error});
  nlohmann::json j = {{"source", source},
                      {"ladder", rows},
                      {"tail_model",
                       {{"a", tail.a},
                        {"p", tail.p},
                        {"q", tail.q},
                        {"residual", tail.residual},
                        {"vanishing", tail.vanishing}}},
                      {"verdict", to_string(verdict)},
                      {"extrapolated", extrapolated},
                      {"note", note}};
  if (limit_estimate) j["limit_estimate"] = *limit_estimate;
  if (remainder_bound) j["remainder_bound"] = *remainder_bound;
  return j;
}

}  // namespace lacunar
