#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace lacunar::cli {

using Json = nlohmann::json;

// Reads cfg[key], inserting `fallback` first when the key is absent, so the
// resolved config records every default it ran with.
template <class T>
T take(Json& cfg, const char* key, const T& fallback) {
  if (!cfg.contains(key)) cfg[key] = fallback;
  return cfg.at(key).get<T>();
}

std::uint64_t require_seed(const Json& cfg);

// A delta list is either an explicit array or a ladder description:
//   {"ladder": "log", "lo": .., "hi": .., "per_decade": ..}
//   {"ladder": "doubly_log", "u_lo": .., "u_hi": .., "count": ..}
std::vector<double> ladder_from(const Json& spec);
std::vector<double> resolve_deltas(Json& cfg, const char* key, const Json& fallback);

Json log_ladder_spec(double lo, double hi, int per_decade);
Json doubly_log_ladder_spec(double u_lo, double u_hi, int count);

std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t value);

}  // namespace lacunar::cli
