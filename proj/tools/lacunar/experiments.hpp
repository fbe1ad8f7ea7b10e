#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "config.hpp"

namespace lacunar::cli {

struct Artifacts {
  // (name, csv); the first table is written as <kind>-<hash>.csv, the others
  // as <kind>-<hash>-<name>.csv.
  std::vector<std::pair<std::string, std::string>> tables;
  Json result = Json::object();
  std::vector<std::string> warnings;
  // Set when an exact inequality the experiment certifies did not hold.
  std::optional<std::string> contract_failure;
};

struct Experiment {
  std::string kind;
  std::string summary;
  // Fills defaults into the config in place and validates it.
  std::function<void(Json&)> resolve;
  std::function<Artifacts(const Json&)> run;
};

const std::vector<Experiment>& experiments();
const Experiment* find_experiment(std::string_view kind);

}  // namespace lacunar::cli
