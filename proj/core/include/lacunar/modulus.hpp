#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lacunar/series.hpp"

namespace lacunar {

enum class Provenance { EmpiricalGrid, EmpiricalRandomPair, AnalyticLower, AnalyticUpper, Envelope };
std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

struct ModulusPoint {
  double delta = 0.0;
  double omega = 0.0;
};

// delta -> omega samples of a modulus of continuity, tagged with where they
// came from. Empirical curves are one-sided low estimates of the true sup.
struct ModulusCurve {
  std::vector<ModulusPoint> points;
  Provenance provenance = Provenance::EmpiricalGrid;
  nlohmann::json parameters = nlohmann::json::object();
  std::string note;

  // delta strictly increasing, omega >= 0.
  void validate() const;
  std::vector<double> deltas() const;
  std::vector<double> omegas() const;
};

enum class GridModulusAlgorithm { Auto, BruteForce, Deque };

// Largest d with 2*pi*d/M <= delta, capped at floor(M/2).
std::uint64_t grid_window(double delta, std::uint64_t m);

// Exact modulus of the grid restriction: for each delta, the max of
// |v_j - v_j'| over pairs at circular distance <= delta. Auto uses the
// monotone-deque scan for real-valued grids and the all-offsets scan otherwise.
// The grid estimate can fall short of the true modulus by at most
// omega(2*pi/M).
ModulusCurve empirical_modulus_grid(const GridFunction& grid, std::span<const double> deltas,
                                    GridModulusAlgorithm algorithm = GridModulusAlgorithm::Auto);

// max_j |v_{j+d} - v_j| for every offset d = 1..max_offset, then running max:
// entry d-1 is the grid modulus at delta = 2*pi*d/M.
std::vector<double> grid_modulus_by_offset(const GridFunction& grid, std::uint64_t max_offset);

// Monte-Carlo estimate: for each delta draws t ~ U[0, 2*pi), h ~ U[-delta, delta]
// and keeps the largest |f_N(t+h) - f_N(t)|. Each delta uses its own substream
// derived from (seed, delta index), so results do not depend on scheduling.
ModulusCurve empirical_modulus_pairs(const SeriesSpec& spec, std::span<const double> deltas,
                                     std::uint64_t pairs_per_delta, std::uint64_t seed);

// Running maximum in delta. Idempotent.
ModulusCurve monotone_envelope(const ModulusCurve& curve);

// Logarithmically spaced ladder, per_decade points per decade, lo..hi inclusive.
std::vector<double> log_ladder(double lo, double hi, int per_decade);
// delta = exp(-exp(u)) for `count` values of u evenly spaced in [u_lo, u_hi],
// returned in increasing delta.
std::vector<double> doubly_log_ladder(double u_lo, double u_hi, int count);

}  // namespace lacunar
