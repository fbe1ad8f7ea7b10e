#include "lacunar/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace lacunar {

std::string format_shortest(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string grid_csv(const GridFunction& grid) {
  std::string out = "j,t,re,im\n";
  for (std::uint64_t j = 0; j < grid.size; ++j) {
    out += std::to_string(j);
    out += ',';
    out += format_17(grid.t(j));
    out += ',';
    out += format_shortest(grid.values[j].real());
    out += ',';
    out += format_shortest(grid.values[j].imag());
    out += '\n';
  }
  return out;
}

std::string modulus_csv(const ModulusCurve& curve) {
  std::string out = "delta,omega,provenance\n";
  const std::string tag = to_string(curve.provenance);
  for (const auto& p : curve.points) {
    out += format_17(p.delta) + ',' + format_shortest(p.omega) + ',' + tag + '\n';
  }
  return out;
}

std::string bounds_csv(const std::vector<BoundEvaluation>& rows) {
  std::string out = "delta,N_star,sigma1,sigma2,total,variant\n";
  for (const auto& r : rows) {
    out += format_17(r.delta) + ',' + std::to_string(r.n_star) + ',' + format_shortest(r.sigma1) +
           ',' + format_shortest(r.sigma2) + ',' + format_shortest(r.total) + ',' +
           to_string(r.variant) + '\n';
  }
  return out;
}

std::string path_csv(const SamplePath& path) { return grid_csv(path.grid); }

nlohmann::json grid_json(const GridFunction& grid) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (const auto& v : grid.values) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  nlohmann::json collisions = nlohmann::json::array();
  for (const auto& c : grid.collisions) {
    collisions.push_back({{"residue", c.residue}, {"k", {c.k_first, c.k_second}}});
  }
  return {{"size", grid.size},
          {"truncation", grid.truncation},
          {"truncation_bound", grid.truncation_bound},
          {"rounding_bound", grid.rounding_bound},
          {"collisions", collisions},
          {"re", re},
          {"im", im}};
}

nlohmann::json modulus_json(const ModulusCurve& curve) {
  nlohmann::json delta = nlohmann::json::array(), omega = nlohmann::json::array();
  for (const auto& p : curve.points) {
    delta.push_back(p.delta);
    omega.push_back(p.omega);
  }
  return {{"provenance", to_string(curve.provenance)},
          {"parameters", curve.parameters},
          {"note", curve.note},
          {"delta", delta},
          {"omega", omega}};
}

nlohmann::json bounds_json(const std::vector<BoundEvaluation>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"delta", r.delta},
                   {"N_star", r.n_star},
                   {"sigma1", r.sigma1},
                   {"sigma2", r.sigma2},
                   {"total", r.total},
                   {"variant", to_string(r.variant)},
                   {"N_range", {r.n_min, r.n_max}}});
  }
  return out;
}

}  // namespace lacunar
