#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "jto/conet.hpp"
#include "jto/geo.hpp"
#include "jto/synth.hpp"

namespace jto::pipeline {

enum class Stage { synth, ingest, network, geo, fit, report };

std::optional<Stage> parse_stage(std::string_view name);
std::string_view stage_name(Stage stage);

struct InputPaths {
  std::filesystem::path persons, co_events, overdose_cases, gazetteer;
};

struct SyntheticBlock {
  std::string fixture = "random";  // "random" or "calibrated"
  synth::SyntheticConfig config;
};

struct PipelineConfig {
  std::optional<InputPaths> inputs;
  std::optional<SyntheticBlock> synthetic;
  std::filesystem::path out_dir;
  geo::KdeParams kde;
  double bin_width = 1.0;
  conet::ProlificThresholds thresholds;
  std::size_t max_degree = 3;
  bool strict = false;

  // Throws ConfigError on unknown keys, bad values, or a missing data source.
  static PipelineConfig from_json(const nlohmann::json& j);
  // Every parameter except the output directory.
  nlohmann::json to_json() const;
  void validate() const;
};

// Output directory layout, relative to out_dir.
namespace paths {
inline constexpr const char* kConfig = "config.json";
inline constexpr const char* kInputDir = "input";
inline constexpr const char* kStageDir = "stage";
}  // namespace paths

class Pipeline {
 public:
  // Validates the configuration; throws ConfigError before any work.
  explicit Pipeline(PipelineConfig config);

  // synth (when synthetic) -> ingest -> network -> geo -> fit -> report.
  void run();
  // Runs one stage against artifacts already in the output directory.
  void run_stage(Stage stage);

  const PipelineConfig& config() const { return config_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  void execute(Stage stage);
  void write(const std::filesystem::path& relative, std::string_view content);
  void write_json(const std::filesystem::path& relative, const nlohmann::json& j);
  nlohmann::json read_json(const std::filesystem::path& relative) const;
  std::filesystem::path artifact(const std::filesystem::path& relative) const;
  InputPaths input_paths() const;
  void rollback();

  void stage_synth();
  void stage_ingest();
  void stage_network();
  void stage_geo();
  void stage_fit();
  void stage_report();

  PipelineConfig config_;
  std::vector<std::string> warnings_;
  std::vector<std::filesystem::path> written_;
};

}  // namespace jto::pipeline
