#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "config.hpp"
#include "experiments.hpp"
#include "lacunar/error.hpp"
#include "lacunar/parallel.hpp"
#include "lacunar/version.hpp"

namespace fs = std::filesystem;
using lacunar::cli::Json;

namespace {

enum Exit { kOk = 0, kFailure = 1, kInvalid = 2, kNumerical = 3 };

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> grid;
  unsigned workers = 0;
  std::string format = "both";
};

Json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw lacunar::ValidationError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw lacunar::ValidationError("config file is empty: " + path.string());
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw lacunar::ValidationError(path.string() + ": " + e.what());
  }
}

// Series, process, frequency and modulus fields may name a JSON file instead; inline them so the resolved
// config (and the manifest) stands alone.
void inline_spec_files(Json& node, const fs::path& base) {
  if (!node.is_object()) return;
  for (auto& [key, value] : node.items()) {
    if (value.is_string() &&
        (key == "series" || key == "process" || key == "frequencies" || key == "modulus")) {
      fs::path p = value.get<std::string>();
      if (p.is_relative()) p = base / p;
      value = read_json_file(p);
    }
    inline_spec_files(value, base);
  }
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

void collect_seeds(const Json& node, Json& seeds) {
  if (!node.is_object()) return;
  for (const auto& [key, value] : node.items()) {
    if (key == "seed") seeds.push_back(value);
    collect_seeds(value, seeds);
  }
}

int run(const std::string& kind_hint, const Options& opt) {
  const fs::path config_path = opt.config_path;
  Json doc = read_json_file(config_path);
  if (!doc.is_object()) throw lacunar::ValidationError("config must be a JSON object");
  // A manifest from an earlier run carries the resolved config verbatim.
  if (doc.contains("config") && doc.contains("kind") && doc.at("config").is_object()) {
    const std::string kind = doc.at("kind").get<std::string>();
    doc = doc.at("config");
    doc["kind"] = kind;
  }
  inline_spec_files(doc, config_path.parent_path());

  std::string kind = kind_hint;
  if (doc.contains("kind")) {
    const std::string declared = doc.at("kind").get<std::string>();
    if (!kind.empty() && declared != kind) {
      throw lacunar::ValidationError("config kind \"" + declared + "\" does not match subcommand \"" + kind + "\"");
    }
    kind = declared;
    doc.erase("kind");
  }
  if (kind.empty()) throw lacunar::ValidationError("config has no \"kind\"");
  const auto* experiment = lacunar::cli::find_experiment(kind);
  if (experiment == nullptr) throw lacunar::ValidationError("unknown experiment kind: " + kind);

  if (opt.seed) doc["seed"] = *opt.seed;
  if (opt.grid) doc["grid"] = *opt.grid;
  experiment->resolve(doc);

  std::error_code ec;
  fs::create_directories(opt.out_dir, ec);
  const fs::path out = opt.out_dir;
  {
    const fs::path probe = out / ".lacunar-write-test";
    std::ofstream test(probe);
    if (!test) throw lacunar::ValidationError("output directory is not writable: " + out.string());
    test.close();
    fs::remove(probe, ec);
  }

  const std::string hash = lacunar::cli::hex64(lacunar::cli::fnv1a(doc.dump()));
  const std::string stem = kind + "-" + hash;
  lacunar::set_worker_count(opt.workers);

  const auto start = std::chrono::steady_clock::now();
  const std::string started_at = utc_now();
  std::string status = "ok";
  int code = kOk;
  lacunar::cli::Artifacts artifacts;
  Json outputs = Json::array();
  try {
    artifacts = experiment->run(doc);
    if (artifacts.contract_failure) {
      status = "contract_failure: " + *artifacts.contract_failure;
      code = kNumerical;
    }
  } catch (const lacunar::NumericalError& e) {
    status = std::string("numerical_error: ") + e.what();
    code = kNumerical;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (code == kOk || artifacts.contract_failure) {
    if (opt.format != "json") {
      for (const auto& [name, csv] : artifacts.tables) {
        const std::string file = name.empty() ? stem + ".csv" : stem + "-" + name + ".csv";
        write_file(out / file, csv);
        outputs.push_back(file);
      }
    }
    if (opt.format != "csv") {
      const Json payload = {{"kind", kind}, {"config_hash", hash}, {"config", doc}, {"result", artifacts.result}};
      write_file(out / (stem + ".json"), payload.dump(2) + "\n");
      outputs.push_back(stem + ".json");
    }
  }

  Json seeds = Json::array();
  collect_seeds(doc, seeds);
  Json warnings = artifacts.warnings;
  const Json manifest = {{"kind", kind},
                         {"config", doc},
                         {"config_hash", hash},
                         {"library", {{"name", "lacunar"}, {"version", lacunar::kVersion}}},
                         {"seeds", seeds},
                         {"started_at", started_at},
                         {"wall_time_seconds", wall},
                         {"workers", lacunar::worker_count()},
                         {"format", opt.format},
                         {"outputs", outputs},
                         {"warnings", warnings},
                         {"status", status}};
  write_file(out / "manifest.json", manifest.dump(2) + "\n");

  for (const auto& w : artifacts.warnings) std::cerr << "warning: " << w << '\n';
  if (code != kOk) std::cerr << "error: " << status << '\n';
  for (const auto& f : outputs) std::cout << (out / f.get<std::string>()).string() << '\n';
  return code;
}

void add_options(CLI::App* app, Options& opt) {
  app->add_option("--config", opt.config_path, "experiment config (JSON) or an earlier manifest.json")
      ->required();
  app->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
  app->add_option("--seed", opt.seed, "override the config seed");
  app->add_option("--grid", opt.grid, "override the grid size M");
  app->add_option("--workers", opt.workers, "worker threads (0 = hardware concurrency)");
  app->add_option("--format", opt.format, "artifact format")
      ->check(CLI::IsMember({"csv", "json", "both"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lacunar: moduli of continuity of lacunar Fourier series"};
  app.set_version_flag("--version", std::string(lacunar::kVersion));
  app.require_subcommand(1);

  Options opt;
  std::string chosen;
  for (const auto& e : lacunar::cli::experiments()) {
    auto* sub = app.add_subcommand(e.kind, e.summary);
    add_options(sub, opt);
    sub->callback([&chosen, kind = e.kind] { chosen = kind; });
  }
  auto* generic = app.add_subcommand("run", "run the experiment named by the config's \"kind\"");
  add_options(generic, opt);
  generic->callback([&chosen] { chosen.clear(); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInvalid;
  }

  try {
    return run(chosen, opt);
  } catch (const lacunar::ValidationError& e) {
    std::cerr << "invalid: " << e.what() << '\n';
    return kInvalid;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "invalid: " << e.what() << '\n';
    return kInvalid;
  } catch (const lacunar::NumericalError& e) {
    std::cerr << "numerical: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
