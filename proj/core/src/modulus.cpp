#include "lacunar/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <random>

#include "lacunar/error.hpp"
#include "lacunar/parallel.hpp"
#include "lacunar/rng.hpp"

namespace lacunar {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::EmpiricalGrid: return "EmpiricalGrid";
    case Provenance::EmpiricalRandomPair: return "EmpiricalRandomPair";
    case Provenance::AnalyticLower: return "AnalyticLower";
    case Provenance::AnalyticUpper: return "AnalyticUpper";
    case Provenance::Envelope: return "Envelope";
  }
  return "?";
}

Provenance provenance_from_string(const std::string& s) {
  for (auto p : {Provenance::EmpiricalGrid, Provenance::EmpiricalRandomPair,
                 Provenance::AnalyticLower, Provenance::AnalyticUpper, Provenance::Envelope}) {
    if (to_string(p) == s) return p;
  }
  throw ValidationError("unknown provenance: " + s);
}

void ModulusCurve::validate() const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].omega >= 0.0)) throw ValidationError("modulus value must be >= 0");
    if (i > 0 && !(points[i].delta > points[i - 1].delta)) {
      throw ValidationError("modulus curve deltas must be strictly increasing");
    }
  }
}

std::vector<double> ModulusCurve::deltas() const {
  std::vector<double> out;
  for (const auto& p : points) out.push_back(p.delta);
  return out;
}

std::vector<double> ModulusCurve::omegas() const {
  std::vector<double> out;
  for (const auto& p : points) out.push_back(p.omega);
  return out;
}

namespace {

void check_deltas(std::span<const double> deltas, double upper) {
  if (deltas.empty()) throw ValidationError("delta list is empty");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0) || !(deltas[i] <= upper)) {
      throw ValidationError("delta out of range (0, 2*pi]: " + std::to_string(deltas[i]));
    }
    if (i > 0 && !(deltas[i] > deltas[i - 1])) {
      throw ValidationError("deltas must be strictly increasing");
    }
  }
}

constexpr long double kTwoPiLong = 6.283185307179586476925286766559005768L;

// Real-valued grid: max over the circular window [j-w, j+w] via monotone deques.
double real_window_modulus(const std::vector<double>& v, std::uint64_t w) {
  const auto m = static_cast<std::int64_t>(v.size());
  const auto width = static_cast<std::int64_t>(w);
  if (width == 0) return 0.0;
  if (2 * width + 1 >= m) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
  }
  auto at = [&](std::int64_t i) { return v[static_cast<std::size_t>(((i % m) + m) % m)]; };
  std::deque<std::int64_t> maxq, minq;
  double best = 0.0;
  // Window for center j covers indices j-width .. j+width (unwrapped).
  std::int64_t next = -width;
  for (std::int64_t j = 0; j < m; ++j) {
    for (; next <= j + width; ++next) {
      const double x = at(next);
      while (!maxq.empty() && at(maxq.back()) <= x) maxq.pop_back();
      maxq.push_back(next);
      while (!minq.empty() && at(minq.back()) >= x) minq.pop_back();
      minq.push_back(next);
    }
    while (maxq.front() < j - width) maxq.pop_front();
    while (minq.front() < j - width) minq.pop_front();
    const double vj = v[static_cast<std::size_t>(j)];
    best = std::max(best, std::max(at(maxq.front()) - vj, vj - at(minq.front())));
  }
  return best;
}

double real_brute_modulus(const std::vector<double>& v, std::uint64_t w) {
  const std::uint64_t m = v.size();
  double best = 0.0;
  for (std::uint64_t d = 1; d <= w; ++d) {
    for (std::uint64_t j = 0; j < m; ++j) {
      const std::uint64_t i = j + d < m ? j + d : j + d - m;
      best = std::max(best, std::fabs(v[i] - v[j]));
    }
  }
  return best;
}

}  // namespace

std::uint64_t grid_window(double delta, std::uint64_t m) {
  const long double step = kTwoPiLong / static_cast<long double>(m);
  auto d = static_cast<std::uint64_t>(std::floor(static_cast<long double>(delta) / step));
  while (static_cast<long double>(d + 1) * step <= delta) ++d;
  while (d > 0 && static_cast<long double>(d) * step > delta) --d;
  return std::min<std::uint64_t>(d, m / 2);
}

std::vector<double> grid_modulus_by_offset(const GridFunction& grid, std::uint64_t max_offset) {
  const std::uint64_t m = grid.size;
  max_offset = std::min<std::uint64_t>(max_offset, m / 2);
  std::vector<double> re(m), im(m);
  for (std::uint64_t j = 0; j < m; ++j) {
    re[j] = grid.values[j].real();
    im[j] = grid.values[j].imag();
  }
  std::vector<double> squared(max_offset, 0.0);
  constexpr std::uint64_t kChunk = 64;
  const std::uint64_t chunks = (max_offset + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t c) {
    const std::uint64_t first = c * kChunk + 1;
    const std::uint64_t last = std::min(max_offset, first + kChunk - 1);
    for (std::uint64_t d = first; d <= last; ++d) {
      double best = 0.0;
      const std::uint64_t split = m - d;
      for (std::uint64_t j = 0; j < split; ++j) {
        const double dx = re[j + d] - re[j];
        const double dy = im[j + d] - im[j];
        best = std::max(best, dx * dx + dy * dy);
      }
      for (std::uint64_t j = split; j < m; ++j) {
        const double dx = re[j + d - m] - re[j];
        const double dy = im[j + d - m] - im[j];
        best = std::max(best, dx * dx + dy * dy);
      }
      squared[d - 1] = best;
    }
  });
  std::vector<double> out(max_offset);
  double running = 0.0;
  for (std::uint64_t d = 0; d < max_offset; ++d) {
    running = std::max(running, std::sqrt(squared[d]));
    out[d] = running;
  }
  return out;
}

ModulusCurve empirical_modulus_grid(const GridFunction& grid, std::span<const double> deltas,
                                    GridModulusAlgorithm algorithm) {
  if (grid.size < 2 || grid.values.size() != grid.size) {
    throw ValidationError("grid must have at least 2 samples");
  }
  check_deltas(deltas, 2.0 * std::numbers::pi);
  const std::uint64_t m = grid.size;

  ModulusCurve curve;
  curve.provenance = Provenance::EmpiricalGrid;
  curve.parameters = {{"grid", m}, {"truncation", grid.truncation}};
  curve.note = "exact on grid points; may fall short of the true modulus by omega(2*pi/M)";

  std::vector<std::uint64_t> windows;
  for (double delta : deltas) windows.push_back(grid_window(delta, m));

  const bool real = grid.is_real();
  if (algorithm == GridModulusAlgorithm::Deque && !real) {
    throw ValidationError("deque modulus scan needs a real-valued grid");
  }
  std::vector<double> omegas(deltas.size(), 0.0);
  if (real && algorithm != GridModulusAlgorithm::Auto) {
    std::vector<double> v(m);
    for (std::uint64_t j = 0; j < m; ++j) v[j] = grid.values[j].real();
    parallel_for(deltas.size(), [&](std::size_t i) {
      omegas[i] = algorithm == GridModulusAlgorithm::Deque ? real_window_modulus(v, windows[i])
                                                           : real_brute_modulus(v, windows[i]);
    });
    curve.parameters["algorithm"] =
        algorithm == GridModulusAlgorithm::Deque ? "deque" : "brute_force";
  } else if (real) {
    std::vector<double> v(m);
    for (std::uint64_t j = 0; j < m; ++j) v[j] = grid.values[j].real();
    parallel_for(deltas.size(),
                 [&](std::size_t i) { omegas[i] = real_window_modulus(v, windows[i]); });
    curve.parameters["algorithm"] = "deque";
  } else {
    const std::uint64_t max_window = *std::max_element(windows.begin(), windows.end());
    const auto by_offset = grid_modulus_by_offset(grid, max_window);
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      omegas[i] = windows[i] == 0 ? 0.0 : by_offset[windows[i] - 1];
    }
    curve.parameters["algorithm"] = "all_offsets";
  }
  for (std::size_t i = 0; i < deltas.size(); ++i) curve.points.push_back({deltas[i], omegas[i]});
  return curve;
}

ModulusCurve empirical_modulus_pairs(const SeriesSpec& spec, std::span<const double> deltas,
                                     std::uint64_t pairs_per_delta, std::uint64_t seed) {
  if (pairs_per_delta < 1) throw ValidationError("pairs_per_delta must be >= 1");
  check_deltas(deltas, 2.0 * std::numbers::pi);
  // f(t+h) - f(t) = sum c(k) e^{i n t} (e^{i n h} - 1), with n*h reduced
  // separately so that the pair (t, t+h) is exact even when h is far below
  // the spacing of doubles near t.
  const std::vector<Term> terms = active_terms(spec, spec.truncation);
  std::vector<PhaseReducer> reducers;
  std::vector<int> signs;
  std::vector<Complex> coeffs;
  for (const auto& term : terms) {
    reducers.emplace_back(abs(term.n));
    signs.push_back(sgn(term.n));
    coeffs.push_back(term.c);
  }

  std::vector<double> omegas(deltas.size(), 0.0);
  parallel_for(deltas.size(), [&](std::size_t i) {
    std::mt19937_64 rng(substream_seed(seed, i));
    const double delta = deltas[i];
    double best = 0.0;
    for (std::uint64_t p = 0; p < pairs_per_delta; ++p) {
      const double t = 2.0 * std::numbers::pi * unit_uniform(rng);
      const double h = delta * (2.0 * unit_uniform(rng) - 1.0);
      Complex sum{};
      for (std::size_t k = 0; k < reducers.size(); ++k) {
        if (signs[k] == 0) continue;
        const double phi = signs[k] * reducers[k].reduce(Angle::radians(t)).angle;
        const double psi = (h < 0 ? -signs[k] : signs[k]) *
                           reducers[k].reduce(Angle::radians(std::fabs(h))).angle;
        // e^{i psi} - 1 = 2i sin(psi/2) e^{i psi/2}
        const Complex step = Complex(0.0, 2.0 * std::sin(0.5 * psi)) * std::polar(1.0, 0.5 * psi);
        sum += coeffs[k] * std::polar(1.0, phi) * step;
      }
      best = std::max(best, std::abs(sum));
    }
    omegas[i] = best;
  });

  ModulusCurve curve;
  curve.provenance = Provenance::EmpiricalRandomPair;
  curve.parameters = {{"pairs", pairs_per_delta}, {"seed", seed}, {"truncation", spec.truncation}};
  curve.note = "Monte-Carlo lower estimate of the modulus of the truncated series";
  for (std::size_t i = 0; i < deltas.size(); ++i) curve.points.push_back({deltas[i], omegas[i]});
  return curve;
}

ModulusCurve monotone_envelope(const ModulusCurve& curve) {
  if (curve.points.empty()) throw ValidationError("modulus curve is empty");
  ModulusCurve out = curve;
  double running = 0.0;
  for (auto& p : out.points) {
    running = std::max(running, p.omega);
    p.omega = running;
  }
  if (curve.provenance != Provenance::Envelope) {
    out.parameters["source"] = to_string(curve.provenance);
    out.provenance = Provenance::Envelope;
  }
  return out;
}

std::vector<double> log_ladder(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || !(hi >= lo) || per_decade < 1) {
    throw ValidationError("log ladder needs 0 < lo <= hi and per_decade >= 1");
  }
  const double span = std::log10(hi / lo);
  const int steps = std::max(1, static_cast<int>(std::ceil(span * per_decade - 1e-9)));
  std::vector<double> out;
  for (int i = 0; i <= steps; ++i) {
    out.push_back(i == steps ? hi : lo * std::pow(10.0, span * i / steps));
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> doubly_log_ladder(double u_lo, double u_hi, int count) {
  if (!(u_hi >= u_lo) || count < 1) throw ValidationError("doubly-log ladder needs u_lo <= u_hi");
  std::vector<double> out;
  for (int i = count - 1; i >= 0; --i) {
    const double u = count == 1 ? u_lo : u_lo + (u_hi - u_lo) * i / (count - 1);
    out.push_back(std::exp(-std::exp(u)));
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace lacunar
