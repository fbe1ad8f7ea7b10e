#include "config.hpp"

#include <cstdio>

#include "lacunar/error.hpp"
#include "lacunar/modulus.hpp"

namespace lacunar::cli {

std::uint64_t require_seed(const Json& cfg) {
  if (!cfg.contains("seed")) {
    throw ValidationError("stochastic experiment needs a \"seed\" (config field or --seed)");
  }
  return cfg.at("seed").get<std::uint64_t>();
}

std::vector<double> ladder_from(const Json& spec) {
  if (spec.is_array()) {
    auto deltas = spec.get<std::vector<double>>();
    if (deltas.empty()) throw ValidationError("delta list is empty");
    return deltas;
  }
  if (!spec.is_object() || !spec.contains("ladder")) {
    throw ValidationError("deltas must be an array or a ladder object");
  }
  const std::string kind = spec.at("ladder").get<std::string>();
  if (kind == "log") {
    return log_ladder(spec.at("lo").get<double>(), spec.at("hi").get<double>(),
                      spec.at("per_decade").get<int>());
  }
  if (kind == "doubly_log") {
    return doubly_log_ladder(spec.at("u_lo").get<double>(), spec.at("u_hi").get<double>(),
                             spec.at("count").get<int>());
  }
  throw ValidationError("unknown ladder: " + kind);
}

std::vector<double> resolve_deltas(Json& cfg, const char* key, const Json& fallback) {
  if (!cfg.contains(key)) cfg[key] = fallback;
  return ladder_from(cfg.at(key));
}

Json log_ladder_spec(double lo, double hi, int per_decade) {
  return {{"ladder", "log"}, {"lo", lo}, {"hi", hi}, {"per_decade", per_decade}};
}

Json doubly_log_ladder_spec(double u_lo, double u_hi, int count) {
  return {{"ladder", "doubly_log"}, {"u_lo", u_lo}, {"u_hi", u_hi}, {"count", count}};
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace lacunar::cli
