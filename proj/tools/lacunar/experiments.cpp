#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lacunar/bounds.hpp"
#include "lacunar/error.hpp"
#include "lacunar/fernique.hpp"
#include "lacunar/frequencies.hpp"
#include "lacunar/gaussian.hpp"
#include "lacunar/io.hpp"
#include "lacunar/modulus.hpp"
#include "lacunar/series.hpp"

namespace lacunar::cli {
namespace {

constexpr double kPi = std::numbers::pi;

const std::vector<double> kDefaultXLadder{1, 2, 5, 10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000};

std::string num(double x) { return format_shortest(x); }

SeriesSpec resolve_series(Json& cfg, const char* key = "series") {
  if (!cfg.contains(key)) throw ValidationError(std::string("config needs a \"") + key + "\" object");
  SeriesSpec spec = SeriesSpec::from_json(cfg.at(key));
  if (cfg.contains("truncation") && std::string(key) == "series") {
    spec.truncation = cfg.at("truncation").get<std::int64_t>();
    cfg.erase("truncation");
  }
  spec.validate();
  cfg[key] = spec.to_json();
  return spec;
}

std::uint64_t resolve_grid(Json& cfg, std::uint64_t fallback) {
  const auto m = take<std::uint64_t>(cfg, "grid", fallback);
  if (m < 2) throw ValidationError("grid size must be >= 2");
  return m;
}

std::vector<std::string> collision_warnings(const GridFunction& grid) {
  std::vector<std::string> out;
  for (const auto& c : grid.collisions) {
    out.push_back("residue collision mod " + std::to_string(grid.size) + ": k=" +
                  std::to_string(c.k_first) + " and k=" + std::to_string(c.k_second) +
                  " share residue " + std::to_string(c.residue));
  }
  return out;
}

EnvelopeExample example_from(const std::string& s) {
  if (s == "2.1" || s == "geometric") return EnvelopeExample::Geometric;
  if (s == "2.2" || s == "double_exponential") return EnvelopeExample::DoubleExponential;
  throw ValidationError("unknown envelope example: " + s);
}

EnvelopeSide side_from(const std::string& s) {
  if (s == "lower") return EnvelopeSide::Lower;
  if (s == "upper") return EnvelopeSide::Upper;
  throw ValidationError("envelope side must be \"lower\" or \"upper\"");
}

PathMode mode_from(const std::string& s) {
  if (s == "complex") return PathMode::Complex;
  if (s == "real_part") return PathMode::RealPart;
  throw ValidationError("unknown path mode: " + s);
}

// ---------------------------------------------------------------- sandwich

struct SandwichRow {
  double delta, empirical, tight, literal;
};

struct SandwichResult {
  std::vector<SandwichRow> rows;
  ModulusCurve grid_curve, pair_curve;
  std::size_t violations = 0;
};

SandwichResult sandwich(const SeriesSpec& spec, std::uint64_t m, const std::vector<double>& deltas,
                        std::uint64_t pairs, std::uint64_t seed, std::int64_t n_max) {
  SandwichResult out;
  const GridFunction grid = sample_grid(spec, m);
  out.grid_curve = empirical_modulus_grid(grid, deltas);
  if (pairs > 0) out.pair_curve = empirical_modulus_pairs(spec, deltas, pairs, seed);
  const auto tight = upper_bound_curve(spec, deltas, n_max, Sigma1Variant::Tight);
  const auto literal = upper_bound_curve(spec, deltas, n_max, Sigma1Variant::PaperLiteral);
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    double emp = out.grid_curve.points[i].omega;
    if (pairs > 0) emp = std::max(emp, out.pair_curve.points[i].omega);
    out.rows.push_back({deltas[i], emp, tight[i].total, literal[i].total});
    if (!(emp <= tight[i].total) || !(tight[i].total <= literal[i].total)) ++out.violations;
  }
  return out;
}

std::string sandwich_csv(const std::vector<SandwichRow>& rows) {
  std::string csv = "delta,empirical,upper_tight,upper_literal\n";
  for (const auto& r : rows) {
    csv += format_17(r.delta) + ',' + num(r.empirical) + ',' + num(r.tight) + ',' + num(r.literal) + '\n';
  }
  return csv;
}

Json coefficient_checks(const SeriesSpec& spec, std::int64_t k_max, std::int64_t n_max,
                        std::size_t& failures) {
  Json rows = Json::array();
  for (std::int64_t k = -k_max; k <= k_max; ++k) {
    if (k == 0 || !spec.coefficients.nonzero(k)) continue;
    if (!spec.frequencies.defined(k < 0 ? -k : k) || sgn(spec.frequencies.at(k < 0 ? -k : k)) == 0) continue;
    const auto lb = coefficient_lower_bound(spec, k);
    if (!(lb.delta < 2 * kPi)) continue;
    const double ub = upper_bound(spec, lb.delta, n_max).total;
    const bool ok = lb.classical <= ub;
    if (!ok) ++failures;
    rows.push_back({{"k", k},
                    {"delta", lb.delta},
                    {"classical", lb.classical},
                    {"paper_literal", lb.paper_literal},
                    {"upper_tight", ub},
                    {"classical_holds", ok}});
  }
  return rows;
}

// ---------------------------------------------------------------- kinds

void resolve_classify(Json& cfg) {
  if (!cfg.contains("frequencies")) throw ValidationError("config needs a \"frequencies\" object");
  cfg["frequencies"] = FrequencySequence::from_json(cfg.at("frequencies")).to_json();
  if (take<std::int64_t>(cfg, "window", 8) < 2) throw ValidationError("window must be >= 2");
  take<double>(cfg, "super_ratio", 8.0);
  take<double>(cfg, "margin", 0.1);
}

Artifacts run_classify(const Json& cfg) {
  const auto freqs = FrequencySequence::from_json(cfg.at("frequencies"));
  const ClassifierConfig cc{cfg.at("super_ratio").get<double>(), cfg.at("margin").get<double>()};
  const auto result = classify(freqs, cfg.at("window").get<std::int64_t>(), cc);
  std::string csv = "side,k,ratio\n";
  for (const auto* side : {&result.positive, &result.negative}) {
    if (!side->present) continue;
    const std::string name = side == &result.positive ? "positive" : "negative";
    for (std::size_t i = 0; i < side->ratios.size(); ++i) {
      csv += name + ',' + std::to_string(i + 1) + ',' + num(side->ratios[i]) + '\n';
    }
  }
  Artifacts a;
  a.tables.emplace_back("", csv);
  a.result = result.to_json();
  return a;
}

void resolve_eval(Json& cfg) {
  resolve_series(cfg);
  resolve_grid(cfg, 1021);
}

Artifacts run_eval(const Json& cfg) {
  const auto spec = SeriesSpec::from_json(cfg.at("series"));
  const auto grid = sample_grid(spec, cfg.at("grid").get<std::uint64_t>());
  Artifacts a;
  a.tables.emplace_back("", grid_csv(grid));
  a.result = {{"grid", grid_json(grid)}};
  a.warnings = collision_warnings(grid);
  return a;
}

void resolve_modulus(Json& cfg) {
  resolve_series(cfg);
  const auto m = resolve_grid(cfg, 65521);
  resolve_deltas(cfg, "deltas", log_ladder_spec(2 * kPi / static_cast<double>(m), kPi, 20));
  const auto est = take<std::string>(cfg, "estimator", "grid");
  if (est != "grid" && est != "pairs" && est != "both") {
    throw ValidationError("estimator must be \"grid\", \"pairs\" or \"both\"");
  }
  if (est != "grid") {
    if (take<std::uint64_t>(cfg, "pairs", 100000) < 1) throw ValidationError("pairs must be >= 1");
    require_seed(cfg);
  }
}

Artifacts run_modulus(const Json& cfg) {
  const auto spec = SeriesSpec::from_json(cfg.at("series"));
  const auto deltas = ladder_from(cfg.at("deltas"));
  const auto est = cfg.at("estimator").get<std::string>();
  std::vector<ModulusCurve> curves;
  Artifacts a;
  if (est != "pairs") {
    const auto grid = sample_grid(spec, cfg.at("grid").get<std::uint64_t>());
    a.warnings = collision_warnings(grid);
    curves.push_back(empirical_modulus_grid(grid, deltas));
  }
  if (est != "grid") {
    curves.push_back(empirical_modulus_pairs(spec, deltas, cfg.at("pairs").get<std::uint64_t>(),
                                             cfg.at("seed").get<std::uint64_t>()));
  }
  std::string csv = "delta,omega,provenance\n";
  Json list = Json::array();
  for (const auto& c : curves) {
    const std::string body = modulus_csv(c);
    csv += body.substr(body.find('\n') + 1);
    list.push_back(modulus_json(c));
  }
  a.tables.emplace_back("", csv);
  a.result = {{"curves", list}};
  return a;
}

void resolve_bounds(Json& cfg) {
  resolve_series(cfg);
  resolve_deltas(cfg, "deltas", log_ladder_spec(1e-12, 3.0, 10));
  if (take<std::int64_t>(cfg, "n_max", kDefaultMaxTruncation) < 2) {
    throw ValidationError("n_max must be >= 2");
  }
  const auto v = take<std::string>(cfg, "variant", "both");
  if (v != "both") sigma1_variant_from_string(v);
}

Artifacts run_bounds(const Json& cfg) {
  const auto spec = SeriesSpec::from_json(cfg.at("series"));
  const auto deltas = ladder_from(cfg.at("deltas"));
  const auto n_max = cfg.at("n_max").get<std::int64_t>();
  const auto v = cfg.at("variant").get<std::string>();
  std::vector<Sigma1Variant> variants;
  if (v == "both") {
    variants = {Sigma1Variant::Tight, Sigma1Variant::PaperLiteral};
  } else {
    variants = {sigma1_variant_from_string(v)};
  }
  std::vector<BoundEvaluation> rows;
  Json by_variant = Json::object();
  for (auto var : variants) {
    auto curve = upper_bound_curve(spec, deltas, n_max, var);
    by_variant[to_string(var)] = bounds_json(curve);
    rows.insert(rows.end(), curve.begin(), curve.end());
  }
  std::size_t failures = 0;
  Artifacts a;
  a.tables.emplace_back("", bounds_csv(rows));
  a.result = {{"bounds", by_variant},
              {"coefficient_lower_bounds", coefficient_checks(spec, spec.truncation, n_max, failures)}};
  if (failures > 0) a.contract_failure = std::to_string(failures) + " coefficient lower bounds exceed the upper bound";
  return a;
}

void resolve_sandwich(Json& cfg) {
  resolve_series(cfg);
  const auto m = resolve_grid(cfg, 65521);
  resolve_deltas(cfg, "deltas", log_ladder_spec(2 * kPi / static_cast<double>(m), kPi, 10));
  if (take<std::uint64_t>(cfg, "pairs", 100000) > 0) require_seed(cfg);
  if (take<std::int64_t>(cfg, "n_max", kDefaultMaxTruncation) < 2) {
    throw ValidationError("n_max must be >= 2");
  }
}

Artifacts run_sandwich(const Json& cfg) {
  const auto spec = SeriesSpec::from_json(cfg.at("series"));
  const auto deltas = ladder_from(cfg.at("deltas"));
  const auto pairs = cfg.at("pairs").get<std::uint64_t>();
  const auto s = sandwich(spec, cfg.at("grid").get<std::uint64_t>(), deltas, pairs,
                          pairs > 0 ? cfg.at("seed").get<std::uint64_t>() : 0,
                          cfg.at("n_max").get<std::int64_t>());
  Artifacts a;
  a.tables.emplace_back("", sandwich_csv(s.rows));
  a.result = {{"violations", s.violations}, {"grid_curve", modulus_json(s.grid_curve)}};
  if (pairs > 0) a.result["pair_curve"] = modulus_json(s.pair_curve);
  if (s.violations > 0) a.contract_failure = std::to_string(s.violations) + " sandwich violations";
  return a;
}

Json default_lags() {
  Json lags = Json::array();
  for (int i = 0; i < 16; ++i) lags.push_back(i * kPi / 15.0);
  return lags;
}

GaussianSpec resolve_process(Json& cfg, const Json& fallback, std::uint64_t seed) {
  if (!cfg.contains("process")) cfg["process"] = fallback;
  Json p = cfg.at("process");
  p["seed"] = seed;
  const auto spec = GaussianSpec::from_json(p);
  cfg["process"] = spec.to_json();
  cfg["process"].erase("seed");
  return spec;
}

GaussianSpec process_from(const Json& cfg) {
  Json p = cfg.at("process");
  p["seed"] = cfg.at("seed");
  return GaussianSpec::from_json(p);
}

struct CovarianceRow {
  double t, s;
  CovarianceEstimate est;
  double exact;
};

struct CovarianceStudy {
  std::vector<CovarianceRow> rows;
  double max_abs_z = 0.0;
  double max_stationarity_z = 0.0;
};

CovarianceStudy covariance_study(const GaussianSpec& spec, const std::vector<double>& lags,
                                 const std::vector<double>& base_lags, std::uint64_t paths) {
  CovarianceStudy out;
  const auto cov = CovarianceFunction::of(spec);
  for (double t : lags) {
    const double exact = covariance_exact(cov, Angle::radians(t)).value;
    const CovarianceEstimate* first = nullptr;
    for (double s : base_lags) {
      out.rows.push_back({t, s, covariance_mc(spec, t, s, paths), exact});
    }
    for (std::size_t i = out.rows.size() - base_lags.size(); i < out.rows.size(); ++i) {
      const auto& est = out.rows[i].est;
      out.max_abs_z = std::max(out.max_abs_z, std::fabs(est.estimate - exact) / est.standard_error);
      if (first == nullptr) {
        first = &est;
      } else {
        const double z = std::fabs(est.estimate - first->estimate) /
                         std::hypot(est.standard_error, first->standard_error);
        out.max_stationarity_z = std::max(out.max_stationarity_z, z);
      }
    }
  }
  return out;
}

std::string covariance_csv(const CovarianceStudy& study) {
  std::string csv = "t,s,estimate,stderr,imaginary,imaginary_stderr,exact,z\n";
  for (const auto& r : study.rows) {
    csv += format_17(r.t) + ',' + format_17(r.s) + ',' + num(r.est.estimate) + ',' +
           num(r.est.standard_error) + ',' + num(r.est.imaginary) + ',' +
           num(r.est.imaginary_standard_error) + ',' + num(r.exact) + ',' +
           num((r.est.estimate - r.exact) / r.est.standard_error) + '\n';
  }
  return csv;
}

const Json kDefaultProcess = {{"family", "double_exponential"}, {"delta", 1.5}, {"truncation", 4}};

void resolve_gaussian_cov(Json& cfg) {
  resolve_process(cfg, kDefaultProcess, require_seed(cfg));
  if (!cfg.contains("lags")) cfg["lags"] = default_lags();
  cfg.at("lags").get<std::vector<double>>();
  if (take<std::vector<double>>(cfg, "base_lags", {0.0, 0.7}).empty()) {
    throw ValidationError("base_lags is empty");
  }
  if (take<std::uint64_t>(cfg, "paths", 20000) < 100) throw ValidationError("paths must be >= 100");
}

Artifacts run_gaussian_cov(const Json& cfg) {
  const auto spec = process_from(cfg);
  const auto study = covariance_study(spec, cfg.at("lags").get<std::vector<double>>(),
                                      cfg.at("base_lags").get<std::vector<double>>(),
                                      cfg.at("paths").get<std::uint64_t>());
  Json rows = Json::array();
  for (const auto& r : study.rows) {
    Json e = r.est.to_json();
    e["t"] = r.t;
    e["s"] = r.s;
    e["exact"] = r.exact;
    rows.push_back(e);
  }
  Artifacts a;
  a.tables.emplace_back("", covariance_csv(study));
  a.result = {{"rows", rows},
              {"max_abs_z", study.max_abs_z},
              {"max_stationarity_z", study.max_stationarity_z},
              {"within_4_stderr", study.max_abs_z <= 4.0},
              {"stationarity_within_4_stderr", study.max_stationarity_z <= 4.0}};
  return a;
}

struct RoughnessParams {
  FrequencySequence family = FrequencySequence::double_exponential();
  std::vector<std::int64_t> truncations;
  double probe = 0.01;
  std::uint64_t grid = 26183;
  std::uint64_t paths = 801;
  PathMode mode = PathMode::Complex;
};

RoughnessParams resolve_roughness(Json& r) {
  RoughnessParams p;
  if (!r.contains("frequencies")) r["frequencies"] = {{"family", "double_exponential"}};
  p.family = FrequencySequence::from_json(r.at("frequencies"));
  r["frequencies"] = p.family.to_json();
  p.truncations = take<std::vector<std::int64_t>>(r, "truncations", {3, 4, 5});
  p.probe = take<double>(r, "delta_probe", 0.01);
  // A prime whose residues of 2^16 and 2^32 are far from 0 and M, so the
  // high frequencies do not alias onto slowly varying ones.
  p.grid = take<std::uint64_t>(r, "grid", 26183);
  p.paths = take<std::uint64_t>(r, "paths", 801);
  p.mode = mode_from(take<std::string>(r, "mode", "complex"));
  if (p.truncations.empty()) throw ValidationError("truncations is empty");
  if (!(p.probe > 0.0)) throw ValidationError("delta_probe must be > 0");
  if (p.grid < 2) throw ValidationError("grid size must be >= 2");
  if (p.paths < 1) throw ValidationError("paths must be >= 1");
  return p;
}

std::string roughness_csv(const std::vector<RoughnessTable>& tables) {
  std::string csv = "Delta,truncation,median,ratio\n";
  for (const auto& t : tables) {
    for (const auto& row : t.rows) {
      csv += num(t.delta) + ',' + std::to_string(row.truncation) + ',' + num(row.median) + ',' +
             num(row.ratio_to_previous) + '\n';
    }
  }
  return csv;
}

void resolve_gaussian_rough(Json& cfg) {
  require_seed(cfg);
  if (!(take<double>(cfg, "delta", 1.25) > 0.0)) throw ValidationError("Delta must be > 0");
  resolve_roughness(cfg);
}

Artifacts run_gaussian_rough(const Json& cfg) {
  Json copy = cfg;
  const auto p = resolve_roughness(copy);
  const auto table = roughness_diagnostic(cfg.at("delta").get<double>(), p.family, p.truncations, p.probe,
                                          p.grid, p.paths, cfg.at("seed").get<std::uint64_t>(), p.mode);
  Artifacts a;
  a.tables.emplace_back("", roughness_csv({table}));
  a.result = table.to_json();
  return a;
}

// ---------------------------------------------------------------- fernique

struct BuiltModulus {
  ModulusFunction modulus;
  Json details = Json::object();
};

void resolve_modulus_spec(Json& m) {
  if (!m.is_object() || !m.contains("type")) throw ValidationError("modulus needs a \"type\"");
  const auto type = m.at("type").get<std::string>();
  if (type == "lipschitz") return;
  if (type == "constant") {
    if (!(m.at("value").get<double>() >= 0.0)) throw ValidationError("constant modulus must be >= 0");
    return;
  }
  if (type == "envelope") {
    example_from(take<std::string>(m, "example", "double_exponential"));
    side_from(take<std::string>(m, "side", "upper"));
    if (!(m.at("delta").get<double>() > 0.5)) throw ValidationError("envelope needs Delta > 1/2");
    take<double>(m, "constant", 1.0);
    return;
  }
  if (type == "upper_bound" || type == "empirical") {
    resolve_series(m);
    if (type == "upper_bound") {
      resolve_deltas(m, "deltas", doubly_log_ladder_spec(1.0, 4.0, 32));
      take<std::int64_t>(m, "n_max", kDefaultMaxTruncation);
      sigma1_variant_from_string(take<std::string>(m, "variant", "Tight"));
    } else {
      const auto grid = resolve_grid(m, 65521);
      resolve_deltas(m, "deltas", log_ladder_spec(2 * kPi / static_cast<double>(grid), kPi, 10));
    }
    if (m.contains("below_envelope")) {
      Json& e = m.at("below_envelope");
      example_from(e.at("example").get<std::string>());
      if (!(e.at("delta").get<double>() > 0.5)) throw ValidationError("envelope needs Delta > 1/2");
    }
    return;
  }
  throw ValidationError("unknown modulus type: " + type);
}

BuiltModulus build_modulus(const Json& m) {
  const auto type = m.at("type").get<std::string>();
  BuiltModulus out;
  if (type == "lipschitz") {
    out.modulus = lipschitz_modulus();
  } else if (type == "constant") {
    out.modulus = constant_modulus(m.at("value").get<double>());
  } else if (type == "envelope") {
    out.modulus = modulus_from_envelope(envelope(example_from(m.at("example").get<std::string>()),
                                                 side_from(m.at("side").get<std::string>()),
                                                 m.at("delta").get<double>(), m.at("constant").get<double>()));
  } else {
    const auto spec = SeriesSpec::from_json(m.at("series"));
    const auto deltas = ladder_from(m.at("deltas"));
    ModulusCurve curve;
    if (type == "upper_bound") {
      curve = as_modulus_curve(upper_bound_curve(spec, deltas, m.at("n_max").get<std::int64_t>(),
                                                 sigma1_variant_from_string(m.at("variant").get<std::string>())));
    } else {
      curve = empirical_modulus_grid(sample_grid(spec, m.at("grid").get<std::uint64_t>()), deltas);
    }
    std::optional<Envelope> below;
    if (m.contains("below_envelope")) {
      const Json& e = m.at("below_envelope");
      const auto ex = example_from(e.at("example").get<std::string>());
      const double d = e.at("delta").get<double>();
      std::vector<double> in_domain;
      const double limit = envelope(ex, EnvelopeSide::Upper, d, 1.0).domain_limit();
      for (double x : deltas) {
        if (x < limit) in_domain.push_back(x);
      }
      if (in_domain.empty()) throw ValidationError("no curve points inside the envelope domain");
      const auto fit = fit_envelope(curve, ex, EnvelopeSide::Upper, d, in_domain.front(), in_domain.back());
      below = envelope(ex, EnvelopeSide::Upper, d, fit.constant);
      out.details["below_envelope_fit"] = fit.to_json();
    }
    out.modulus = modulus_from_curve(curve, below);
    out.details["curve"] = modulus_json(curve);
  }
  return out;
}

std::string fernique_csv(const FerniqueReport& r) {
  std::string csv = "X,I,error\n";
  for (const auto& p : r.ladder) csv += num(p.upper) + ',' + num(p.value) + ',' + num(p.error) + '\n';
  return csv;
}

void resolve_fernique(Json& cfg) {
  if (!cfg.contains("modulus")) throw ValidationError("config needs a \"modulus\" object");
  resolve_modulus_spec(cfg.at("modulus"));
  if (take<std::vector<double>>(cfg, "ladder", kDefaultXLadder).size() < 4) {
    throw ValidationError("X ladder needs at least 4 points");
  }
  if (!(take<double>(cfg, "tolerance", 1e-6) > 0.0)) throw ValidationError("tolerance must be > 0");
}

Artifacts run_fernique(const Json& cfg) {
  const auto built = build_modulus(cfg.at("modulus"));
  const auto ladder = cfg.at("ladder").get<std::vector<double>>();
  const auto report = classify_convergence(built.modulus, ladder, cfg.at("tolerance").get<double>());
  Artifacts a;
  a.tables.emplace_back("", fernique_csv(report));
  a.result = report.to_json();
  a.result["modulus_details"] = built.details;
  return a;
}

// ---------------------------------------------------------------- reproductions

void resolve_example_common(Json& cfg, std::vector<double> deltas_param, std::int64_t truncation) {
  require_seed(cfg);
  for (double d : take<std::vector<double>>(cfg, "Delta", deltas_param)) {
    if (!(d > 0.5)) throw ValidationError("Delta must exceed 1/2");
  }
  resolve_grid(cfg, 65521);
  if (take<std::int64_t>(cfg, "truncation", truncation) < 1) throw ValidationError("truncation must be >= 1");
  take<std::uint64_t>(cfg, "pairs", 100000);
  take<std::int64_t>(cfg, "n_max", kDefaultMaxTruncation);
  take<int>(cfg, "per_decade", 10);
  take<std::int64_t>(cfg, "coefficient_k_max", 8);
}

struct ExampleSandwich {
  std::string csv = "Delta,delta,empirical,upper_tight,upper_literal\n";
  Json per_delta = Json::array();
  std::size_t violations = 0;
  std::size_t coefficient_failures = 0;
};

ExampleSandwich example_sandwiches(const Json& cfg, SeriesSpec (*factory)(double, std::int64_t),
                                   EnvelopeExample example) {
  ExampleSandwich out;
  const auto m = cfg.at("grid").get<std::uint64_t>();
  const auto n = cfg.at("truncation").get<std::int64_t>();
  const auto n_max = cfg.at("n_max").get<std::int64_t>();
  const auto seed = cfg.at("seed").get<std::uint64_t>();
  const auto deltas = log_ladder(2 * kPi / static_cast<double>(m), kPi, cfg.at("per_decade").get<int>());
  for (double d : cfg.at("Delta").get<std::vector<double>>()) {
    const auto spec = factory(d, n);
    const auto s = sandwich(spec, m, deltas, cfg.at("pairs").get<std::uint64_t>(), seed, n_max);
    for (const auto& r : s.rows) {
      out.csv += num(d) + ',' + format_17(r.delta) + ',' + num(r.empirical) + ',' + num(r.tight) + ',' +
                 num(r.literal) + '\n';
    }
    out.violations += s.violations;
    std::size_t failures = 0;
    const Json coeffs = coefficient_checks(spec, cfg.at("coefficient_k_max").get<std::int64_t>(), n_max, failures);
    out.coefficient_failures += failures;

    ModulusCurve empirical;
    empirical.provenance = Provenance::EmpiricalGrid;
    ModulusCurve upper;
    upper.provenance = Provenance::AnalyticUpper;
    const double limit = envelope(example, EnvelopeSide::Lower, d, 1.0).domain_limit();
    for (const auto& r : s.rows) {
      if (r.delta >= limit) continue;
      empirical.points.push_back({r.delta, r.empirical});
      upper.points.push_back({r.delta, r.tight});
    }
    Json fits = Json::object();
    if (empirical.points.size() >= 10) {
      const double lo = empirical.points.front().delta, hi = empirical.points.back().delta;
      fits["lower"] = fit_envelope(empirical, example, EnvelopeSide::Lower, d, lo, hi).to_json();
      fits["upper"] = fit_envelope(upper, example, EnvelopeSide::Upper, d, lo, hi).to_json();
    }
    out.per_delta.push_back({{"Delta", d},
                             {"violations", s.violations},
                             {"coefficient_checks", coeffs},
                             {"fits", fits}});
  }
  return out;
}

Json falsification_note() {
  const auto lb = coefficient_lower_bound(single_term(BigInt(1), {1.0, 0.0}), 1);
  return {{"function", "exp(it)"},
          {"true_modulus_at_pi", 2.0},
          {"classical", lb.classical},
          {"paper_literal", lb.paper_literal},
          {"paper_literal_exceeds_truth", lb.paper_literal > 2.0}};
}

void finish_example(Artifacts& a, const ExampleSandwich& s) {
  a.result["sandwich"] = s.per_delta;
  a.result["violations"] = s.violations;
  a.result["coefficient_failures"] = s.coefficient_failures;
  a.result["constant_falsification"] = falsification_note();
  if (s.violations > 0 || s.coefficient_failures > 0) {
    a.contract_failure = std::to_string(s.violations) + " sandwich violations, " +
                         std::to_string(s.coefficient_failures) + " coefficient bound failures";
  }
}

void resolve_example_21(Json& cfg) {
  resolve_example_common(cfg, {0.75, 1.0, 2.0}, 8);
  if (!cfg.contains("scaling")) cfg["scaling"] = Json::object();
  Json& s = cfg.at("scaling");
  take<double>(s, "Delta", 1.0);
  take<std::int64_t>(s, "truncation", 60);
  take<std::uint64_t>(s, "pairs", 100000);
  take<double>(s, "lo", 1e-8);
  take<double>(s, "hi", 1e-2);
  take<int>(s, "per_decade", 4);
}

struct ScalingStudy {
  ModulusCurve curve;
  LogScalingFit fit;
};

ScalingStudy scaling_study(const Json& s, std::uint64_t seed) {
  const double d = s.at("Delta").get<double>();
  const double lo = s.at("lo").get<double>(), hi = s.at("hi").get<double>();
  const auto spec = example_geometric(d, s.at("truncation").get<std::int64_t>());
  const auto deltas = log_ladder(lo, hi, s.at("per_decade").get<int>());
  ScalingStudy out;
  out.curve = monotone_envelope(empirical_modulus_pairs(spec, deltas, s.at("pairs").get<std::uint64_t>(), seed));
  out.fit = fit_log_scaling(out.curve, EnvelopeExample::Geometric, lo, hi);
  return out;
}

Artifacts run_example_21(const Json& cfg) {
  const auto s = example_sandwiches(cfg, &example_geometric, EnvelopeExample::Geometric);
  const Json& sc = cfg.at("scaling");
  const auto study = scaling_study(sc, cfg.at("seed").get<std::uint64_t>());
  const double d = sc.at("Delta").get<double>();
  Artifacts a;
  a.tables.emplace_back("", s.csv);
  a.tables.emplace_back("scaling", modulus_csv(study.curve));
  finish_example(a, s);
  a.result["scaling"] = {{"Delta", d},
                         {"slope", study.fit.slope},
                         {"intercept", study.fit.intercept},
                         {"rms_residual", study.fit.rms_residual},
                         {"max_residual", study.fit.max_residual},
                         {"points", study.fit.points},
                         {"lower_exponent", -2 * d},
                         {"upper_exponent", 1 - 2 * d},
                         {"slope_between_exponents", study.fit.slope >= -2 * d && study.fit.slope <= 1 - 2 * d}};
  return a;
}

void resolve_example_22(Json& cfg) {
  resolve_example_common(cfg, {1.0, 2.0}, 4);
  if (!cfg.contains("envelopes")) cfg["envelopes"] = Json::object();
  Json& e = cfg.at("envelopes");
  take<double>(e, "Delta", 1.0);
  take<std::int64_t>(e, "truncation", 10);
  take<std::uint64_t>(e, "pairs", 100000);
  take<double>(e, "u_lo", 1.0);
  take<double>(e, "u_hi", 4.0);
  take<int>(e, "count", 32);
}

struct EnvelopeStudy {
  std::vector<double> deltas;
  ModulusCurve empirical, upper;
  FittedConstant c3, c4;
  std::size_t ordering_failures = 0;
  std::vector<double> lower_env, upper_env;
};

EnvelopeStudy envelope_study(const Json& e, std::uint64_t seed, std::int64_t n_max) {
  EnvelopeStudy out;
  const double d = e.at("Delta").get<double>();
  const auto spec = example_double_exponential(d, e.at("truncation").get<std::int64_t>());
  out.deltas = doubly_log_ladder(e.at("u_lo").get<double>(), e.at("u_hi").get<double>(), e.at("count").get<int>());
  out.empirical =
      monotone_envelope(empirical_modulus_pairs(spec, out.deltas, e.at("pairs").get<std::uint64_t>(), seed));
  out.upper = as_modulus_curve(upper_bound_curve(spec, out.deltas, n_max, Sigma1Variant::Tight));
  const double lo = out.deltas.front(), hi = out.deltas.back();
  out.c3 = fit_envelope(out.empirical, EnvelopeExample::DoubleExponential, EnvelopeSide::Lower, d, lo, hi);
  out.c4 = fit_envelope(out.upper, EnvelopeExample::DoubleExponential, EnvelopeSide::Upper, d, lo, hi);
  const auto lower = envelope(EnvelopeExample::DoubleExponential, EnvelopeSide::Lower, d, out.c3.constant);
  const auto upper = envelope(EnvelopeExample::DoubleExponential, EnvelopeSide::Upper, d, out.c4.constant);
  for (std::size_t i = 0; i < out.deltas.size(); ++i) {
    if (!lower.in_domain(out.deltas[i])) {
      out.lower_env.push_back(std::nan(""));
      out.upper_env.push_back(std::nan(""));
      continue;
    }
    const double l = lower(out.deltas[i]), u = upper(out.deltas[i]);
    out.lower_env.push_back(l);
    out.upper_env.push_back(u);
    const double w = out.empirical.points[i].omega, s = out.upper.points[i].omega;
    if (!(l <= w && w <= s && s <= u)) ++out.ordering_failures;
  }
  return out;
}

Artifacts run_example_22(const Json& cfg) {
  const auto s = example_sandwiches(cfg, &example_double_exponential, EnvelopeExample::DoubleExponential);
  const Json& e = cfg.at("envelopes");
  const auto study = envelope_study(e, cfg.at("seed").get<std::uint64_t>(), cfg.at("n_max").get<std::int64_t>());
  std::string csv = "delta,lower_envelope,empirical,upper_tight,upper_envelope\n";
  for (std::size_t i = 0; i < study.deltas.size(); ++i) {
    csv += format_17(study.deltas[i]) + ',' + num(study.lower_env[i]) + ',' + num(study.empirical.points[i].omega) +
           ',' + num(study.upper.points[i].omega) + ',' + num(study.upper_env[i]) + '\n';
  }
  Artifacts a;
  a.tables.emplace_back("", s.csv);
  a.tables.emplace_back("envelopes", csv);
  finish_example(a, s);
  a.result["envelopes"] = {{"Delta", e.at("Delta")},
                           {"C3", study.c3.to_json()},
                           {"C4", study.c4.to_json()},
                           {"ordering_failures", study.ordering_failures}};
  if (study.ordering_failures > 0) {
    a.contract_failure = a.contract_failure.value_or("") + std::to_string(study.ordering_failures) +
                         " envelope ordering failures";
  }
  return a;
}

void resolve_section_3(Json& cfg) {
  require_seed(cfg);
  if (!cfg.contains("covariance")) cfg["covariance"] = Json::object();
  Json& c = cfg.at("covariance");
  resolve_process(c, kDefaultProcess, cfg.at("seed").get<std::uint64_t>());
  if (!c.contains("lags")) c["lags"] = default_lags();
  take<std::vector<double>>(c, "base_lags", {0.0, 0.7});
  take<std::uint64_t>(c, "paths", 20000);

  if (!cfg.contains("roughness")) cfg["roughness"] = Json::object();
  Json& r = cfg.at("roughness");
  take<std::vector<double>>(r, "Delta", {1.25, 0.75});
  resolve_roughness(r);

  if (!cfg.contains("fernique")) cfg["fernique"] = Json::object();
  Json& f = cfg.at("fernique");
  if (!(take<double>(f, "Delta", 1.25) > 0.5)) throw ValidationError("Delta must exceed 1/2");
  take<std::int64_t>(f, "truncation", 10);
  take<double>(f, "u_lo", 1.0);
  take<double>(f, "u_hi", 4.0);
  take<int>(f, "count", 32);
  take<std::vector<double>>(f, "ladder", kDefaultXLadder);
  take<double>(f, "tolerance", 1e-6);
}

Artifacts run_section_3(const Json& cfg) {
  const auto seed = cfg.at("seed").get<std::uint64_t>();
  Artifacts a;

  Json c = cfg.at("covariance");
  Json p = c.at("process");
  p["seed"] = seed;
  const auto spec = GaussianSpec::from_json(p);
  const auto cov = covariance_study(spec, c.at("lags").get<std::vector<double>>(),
                                    c.at("base_lags").get<std::vector<double>>(), c.at("paths").get<std::uint64_t>());

  Json r = cfg.at("roughness");
  const auto rp = resolve_roughness(r);
  std::vector<RoughnessTable> tables;
  Json rough = Json::array();
  for (double d : r.at("Delta").get<std::vector<double>>()) {
    tables.push_back(roughness_diagnostic(d, rp.family, rp.truncations, rp.probe, rp.grid, rp.paths, seed, rp.mode));
    rough.push_back(tables.back().to_json());
  }

  const Json& f = cfg.at("fernique");
  const double d = f.at("Delta").get<double>();
  const auto series = example_double_exponential(d, f.at("truncation").get<std::int64_t>());
  const auto deltas = doubly_log_ladder(f.at("u_lo").get<double>(), f.at("u_hi").get<double>(), f.at("count").get<int>());
  const auto upper = as_modulus_curve(upper_bound_curve(series, deltas));
  const auto c4 = fit_envelope(upper, EnvelopeExample::DoubleExponential, EnvelopeSide::Upper, d, deltas.front(),
                               deltas.back());
  const auto report = classify_convergence(
      modulus_from_envelope(envelope(EnvelopeExample::DoubleExponential, EnvelopeSide::Upper, d, c4.constant)),
      f.at("ladder").get<std::vector<double>>(), f.at("tolerance").get<double>());

  a.tables.emplace_back("", roughness_csv(tables));
  a.tables.emplace_back("covariance", covariance_csv(cov));
  a.tables.emplace_back("fernique", fernique_csv(report));
  a.result = {{"covariance",
               {{"max_abs_z", cov.max_abs_z},
                {"max_stationarity_z", cov.max_stationarity_z},
                {"within_4_stderr", cov.max_abs_z <= 4.0},
                {"stationarity_within_4_stderr", cov.max_stationarity_z <= 4.0}}},
              {"roughness", rough},
              {"fernique", {{"C4", c4.to_json()}, {"report", report.to_json()}}}};
  return a;
}

}  // namespace

const std::vector<Experiment>& experiments() {
  static const std::vector<Experiment> list{
      {"classify", "finite-window lacunarity classification of a frequency family", resolve_classify, run_classify},
      {"eval", "sample a truncated series on a periodic grid", resolve_eval, run_eval},
      {"modulus", "empirical modulus of continuity (grid and/or random pairs)", resolve_modulus, run_modulus},
      {"bounds", "analytic upper bound Sigma(delta) and coefficient lower bounds", resolve_bounds, run_bounds},
      {"sandwich", "empirical modulus against the Tight and PaperLiteral bounds", resolve_sandwich, run_sandwich},
      {"gaussian-cov", "Monte-Carlo covariance of the Gaussian process against the exact sum", resolve_gaussian_cov,
       run_gaussian_cov},
      {"gaussian-rough", "median path modulus across truncations", resolve_gaussian_rough, run_gaussian_rough},
      {"fernique", "Fernique integral partial sums and convergence verdict", resolve_fernique, run_fernique},
      {"reproduce-example-2.1", "geometric example: sandwich, constants and log scaling", resolve_example_21,
       run_example_21},
      {"reproduce-example-2.2", "double-exponential example: sandwich and envelope constants", resolve_example_22,
       run_example_22},
      {"reproduce-section-3", "Gaussian process: covariance, roughness and the Fernique verdict", resolve_section_3,
       run_section_3},
  };
  return list;
}

const Experiment* find_experiment(std::string_view kind) {
  for (const auto& e : experiments()) {
    if (e.kind == kind) return &e;
  }
  return nullptr;
}

}  // namespace lacunar::cli
