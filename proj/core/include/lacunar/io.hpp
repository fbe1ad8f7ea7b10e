#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lacunar/bounds.hpp"
#include "lacunar/gaussian.hpp"
#include "lacunar/modulus.hpp"
#include "lacunar/series.hpp"

namespace lacunar {

// Shortest decimal that round-trips to the same double.
std::string format_shortest(double x);
// 17 significant digits.
std::string format_17(double x);

std::string grid_csv(const GridFunction& grid);
std::string modulus_csv(const ModulusCurve& curve);
std::string bounds_csv(const std::vector<BoundEvaluation>& rows);
std::string path_csv(const SamplePath& path);

nlohmann::json grid_json(const GridFunction& grid);
nlohmann::json modulus_json(const ModulusCurve& curve);
nlohmann::json bounds_json(const std::vector<BoundEvaluation>& rows);

}  // namespace lacunar
