// jto: run the journey-to-overdose analysis pipeline, whole or stage by stage.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "jto/jto.h"

namespace {

using nlohmann::json;

struct Flags {
  std::string config_path, out;
  std::optional<unsigned long long> seed;
  std::optional<double> bandwidth, cell_size, padding, bin_width;
  std::optional<int> min_drug_arrests, min_violent_priors;
  bool strict = false;
  std::optional<std::size_t> n;
  std::string fixture;
};

bool read_json_file(const std::string& path, json& out, std::string& error) {
  std::ifstream in(path);
  if (!in) {
    error = "cannot open " + path;
    return false;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    out = json::parse(ss.str());
  } catch (const json::exception& e) {
    error = path + ": " + e.what();
    return false;
  }
  if (!out.is_object()) {
    error = path + ": configuration must be a JSON object";
    return false;
  }
  return true;
}

int exit_code(jto_status s) {
  switch (s) {
    case JTO_OK: return 0;
    case JTO_ERR_CONFIG:
    case JTO_ERR_INVALID_ARGUMENT: return 1;
    case JTO_ERR_NUMERIC: return 3;
    default: return 2;
  }
}

// Layers: <out>/config.json from an earlier invocation, then --config, then flags.
int run(const std::string& command, const Flags& f) {
  json config = json::object();
  std::string error;
  json file;
  if (!f.config_path.empty()) {
    if (!read_json_file(f.config_path, file, error)) {
      std::fprintf(stderr, "jto: %s\n", error.c_str());
      return 1;
    }
  }
  std::string out = f.out;
  if (out.empty() && file.contains("out") && file["out"].is_string()) out = file["out"].get<std::string>();
  if (out.empty()) {
    std::fprintf(stderr, "jto: an output directory is required (--out or \"out\" in the config)\n");
    return 1;
  }
  const auto previous = std::filesystem::path(out) / "config.json";
  if (std::filesystem::exists(previous)) {
    if (!read_json_file(previous.string(), config, error)) {
      std::fprintf(stderr, "jto: %s\n", error.c_str());
      return 1;
    }
  }
  if (file.is_object()) {
    // A file naming one data source replaces the other.
    if (file.contains("inputs")) config.erase("synthetic");
    if (file.contains("synthetic")) config.erase("inputs");
    config.merge_patch(file);
  }
  config.erase("out");

  if (command == "synth" && !config.contains("synthetic")) {
    config.erase("inputs");
    config["synthetic"] = json::object();
  }
  if (f.n) config["synthetic"]["n_cases"] = *f.n;
  if (!f.fixture.empty()) config["synthetic"]["fixture"] = f.fixture;
  if (f.seed) config["seed"] = *f.seed;
  if (f.bandwidth) config["bandwidth"] = *f.bandwidth;
  if (f.cell_size) config["cell_size"] = *f.cell_size;
  if (f.padding) config["padding"] = *f.padding;
  if (f.bin_width) config["bin_width"] = *f.bin_width;
  if (f.min_drug_arrests) config["min_drug_arrests"] = *f.min_drug_arrests;
  if (f.min_violent_priors) config["min_violent_priors"] = *f.min_violent_priors;
  if (f.strict) config["strict"] = true;

  jto_pipeline* p = nullptr;
  jto_status s = jto_pipeline_create(config.dump().c_str(), out.c_str(), &p);
  if (s != JTO_OK) {
    std::fprintf(stderr, "jto: %s\n", jto_last_error());
    return exit_code(s);
  }
  s = command == "run" ? jto_pipeline_run(p) : jto_pipeline_run_stage(p, command.c_str());
  if (s != JTO_OK) std::fprintf(stderr, "jto: %s\n", jto_last_error());
  for (size_t i = 0; i < jto_pipeline_warning_count(p); ++i)
    std::fprintf(stderr, "jto: warning: %s\n", jto_pipeline_warning(p, i));
  jto_pipeline_destroy(p);
  return exit_code(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Journey-to-overdose analysis pipeline"};
  app.require_subcommand(1);
  Flags f;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", f.config_path, "JSON configuration file");
    sub->add_option("--out", f.out, "Output directory");
    sub->add_option("--seed", f.seed, "Random seed for synthetic data");
    sub->add_option("--bandwidth", f.bandwidth, "KDE bandwidth in miles");
    sub->add_option("--cell-size", f.cell_size, "KDE grid cell size in miles");
    sub->add_option("--padding", f.padding, "KDE grid padding in miles");
    sub->add_option("--bin-width", f.bin_width, "Distance-decay bin width in miles");
    sub->add_option("--min-drug-arrests", f.min_drug_arrests, "Prolific threshold on drug arrests");
    sub->add_option("--min-violent-priors", f.min_violent_priors, "Prolific threshold on violent priors");
    sub->add_flag("--strict", f.strict, "Treat non-convergence as a failure");
  };

  std::string command;
  const std::pair<const char*, const char*> commands[] = {
      {"run", "Run every stage"},
      {"synth", "Generate synthetic inputs"},
      {"ingest", "Parse and validate input files"},
      {"network", "Build the co-offending network and select prolific sellers"},
      {"geo", "Compute journeys, sales distances and density surfaces"},
      {"fit", "Fit the regression and distance-decay profile"},
      {"report", "Render tables and report.json from stage outputs"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub);
    if (std::string(name) == "synth" || std::string(name) == "run") {
      sub->add_option("--n", f.n, "Number of synthetic overdose cases");
      sub->add_option("--fixture", f.fixture, "random or calibrated")->check(CLI::IsMember({"random", "calibrated"}));
    }
    sub->callback([&command, name = std::string(name)] { command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  return run(command, f);
}
