#include "jto/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "jto/csv.hpp"
#include "jto/error.hpp"
#include "jto/glm.hpp"
#include "jto/ingest.hpp"
#include "jto/report.hpp"

namespace jto::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr Stage kAllStages[] = {Stage::synth, Stage::ingest, Stage::network, Stage::geo, Stage::fit, Stage::report};

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw ConfigError("unknown configuration key " + where + "." + key);
  }
}

template <class T>
void read_into(const json& j, const char* key, T& target) {
  if (!j.contains(key)) return;
  try {
    target = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("configuration key ") + key + ": " + e.what());
  }
}

synth::SyntheticConfig synthetic_from_json(const json& j, std::string& fixture) {
  reject_unknown_keys(j,
                      {"fixture", "n_cases", "beta", "theta", "seed", "exact_marginals", "max_journey_miles",
                       "address_only_share", "marginals", "network"},
                      "synthetic");
  synth::SyntheticConfig c;
  read_into(j, "fixture", fixture);
  read_into(j, "n_cases", c.n_cases);
  if (j.contains("beta")) {
    auto beta = j.at("beta").get<std::vector<double>>();
    if (beta.size() != synth::kCoefficientCount) throw ConfigError("synthetic beta must have 7 entries");
    std::copy(beta.begin(), beta.end(), c.beta.begin());
  }
  read_into(j, "theta", c.theta);
  read_into(j, "seed", c.seed);
  read_into(j, "exact_marginals", c.exact_marginals);
  if (j.contains("max_journey_miles") && !j.at("max_journey_miles").is_null())
    c.max_journey_miles = j.at("max_journey_miles").get<int>();
  read_into(j, "address_only_share", c.address_only_share);
  if (j.contains("marginals")) {
    const auto& m = j.at("marginals");
    reject_unknown_keys(m,
                        {"male", "black", "married", "age_mean", "age_sd", "age_min", "age_max", "education_weights",
                         "sales_mean", "sales_max"},
                        "synthetic.marginals");
    auto& t = c.marginals;
    read_into(m, "male", t.male);
    read_into(m, "black", t.black);
    read_into(m, "married", t.married);
    read_into(m, "age_mean", t.age_mean);
    read_into(m, "age_sd", t.age_sd);
    read_into(m, "age_min", t.age_min);
    read_into(m, "age_max", t.age_max);
    if (m.contains("education_weights")) {
      auto w = m.at("education_weights").get<std::vector<double>>();
      if (w.size() != 7) throw ConfigError("education_weights must have 7 entries");
      std::copy(w.begin(), w.end(), t.education_weights.begin());
    }
    read_into(m, "sales_mean", t.sales_mean);
    read_into(m, "sales_max", t.sales_max);
  }
  if (j.contains("network")) {
    const auto& n = j.at("network");
    reject_unknown_keys(n,
                        {"n_persons", "n_prolific", "prolific_gang_share", "other_gang_share", "n_events", "fir_share",
                         "drug_share", "n_hotspots", "hotspot_spread_miles", "region_center", "region_radius_miles"},
                        "synthetic.network");
    auto& t = c.network;
    read_into(n, "n_persons", t.n_persons);
    read_into(n, "n_prolific", t.n_prolific);
    read_into(n, "prolific_gang_share", t.prolific_gang_share);
    read_into(n, "other_gang_share", t.other_gang_share);
    read_into(n, "n_events", t.n_events);
    read_into(n, "fir_share", t.fir_share);
    read_into(n, "drug_share", t.drug_share);
    read_into(n, "n_hotspots", t.n_hotspots);
    read_into(n, "hotspot_spread_miles", t.hotspot_spread_miles);
    if (n.contains("region_center")) {
      auto v = n.at("region_center").get<std::vector<double>>();
      if (v.size() != 2) throw ConfigError("region_center must be [lat, lon]");
      t.region_center = {v[0], v[1]};
    }
    read_into(n, "region_radius_miles", t.region_radius_miles);
  }
  return c;
}

json synthetic_to_json(const SyntheticBlock& block) {
  const auto& c = block.config;
  const auto& m = c.marginals;
  const auto& n = c.network;
  return {{"fixture", block.fixture},
          {"n_cases", c.n_cases},
          {"beta", c.beta},
          {"theta", c.theta},
          {"seed", c.seed},
          {"exact_marginals", c.exact_marginals},
          {"max_journey_miles", c.max_journey_miles ? json(*c.max_journey_miles) : json(nullptr)},
          {"address_only_share", c.address_only_share},
          {"marginals",
           {{"male", m.male},
            {"black", m.black},
            {"married", m.married},
            {"age_mean", m.age_mean},
            {"age_sd", m.age_sd},
            {"age_min", m.age_min},
            {"age_max", m.age_max},
            {"education_weights", m.education_weights},
            {"sales_mean", m.sales_mean},
            {"sales_max", m.sales_max}}},
          {"network",
           {{"n_persons", n.n_persons},
            {"n_prolific", n.n_prolific},
            {"prolific_gang_share", n.prolific_gang_share},
            {"other_gang_share", n.other_gang_share},
            {"n_events", n.n_events},
            {"fir_share", n.fir_share},
            {"drug_share", n.drug_share},
            {"n_hotspots", n.n_hotspots},
            {"hotspot_spread_miles", n.hotspot_spread_miles},
            {"region_center", {n.region_center.lat, n.region_center.lon}},
            {"region_radius_miles", n.region_radius_miles}}}};
}

// Re-raises a library error with the stage name prefixed, keeping its kind.
[[noreturn]] void rethrow_in_stage(Stage stage, ErrorKind kind, const std::string& what) {
  const std::string msg = std::string(stage_name(stage)) + ": " + what;
  switch (kind) {
    case ErrorKind::config: throw ConfigError(msg);
    case ErrorKind::numeric: throw NumericError(msg);
    case ErrorKind::data: break;
  }
  throw DataError(msg);
}

template <class Record>
std::vector<Record> require_clean(ingest::ParseResult<Record> parsed, const fs::path& path) {
  if (!parsed.rejections.empty())
    throw DataError(path.string() + ": " + ingest::format_rejections(parsed.rejections));
  return std::move(parsed.records);
}

json parse_counts(std::size_t rows, std::size_t accepted, std::size_t rejected) {
  return {{"rows", rows}, {"accepted", accepted}, {"rejected", rejected}};
}

std::vector<GeoPoint> seller_locations(std::span<const CoEventRecord> events, const std::set<std::string>& prolific) {
  std::vector<GeoPoint> out;
  for (const auto& e : events) {
    if (!e.location) continue;
    if (std::any_of(e.participants.begin(), e.participants.end(),
                    [&](const std::string& id) { return prolific.count(id) > 0; }))
      out.push_back(*e.location);
  }
  return out;
}

}  // namespace

std::optional<Stage> parse_stage(std::string_view name) {
  for (auto s : kAllStages)
    if (stage_name(s) == name) return s;
  return std::nullopt;
}

std::string_view stage_name(Stage stage) {
  switch (stage) {
    case Stage::synth: return "synth";
    case Stage::ingest: return "ingest";
    case Stage::network: return "network";
    case Stage::geo: return "geo";
    case Stage::fit: return "fit";
    case Stage::report: return "report";
  }
  return "unknown";
}

PipelineConfig PipelineConfig::from_json(const json& j) {
  reject_unknown_keys(j,
                      {"inputs", "synthetic", "out", "seed", "bandwidth", "cell_size", "padding", "bin_width",
                       "min_drug_arrests", "min_violent_priors", "max_degree", "strict"},
                      "config");
  PipelineConfig c;
  if (j.contains("inputs") && !j.at("inputs").is_null()) {
    const auto& in = j.at("inputs");
    reject_unknown_keys(in, {"persons", "co_events", "overdose_cases", "gazetteer"}, "inputs");
    InputPaths p;
    auto path_of = [&](const char* key) {
      if (!in.contains(key) || !in.at(key).is_string() || in.at(key).get<std::string>().empty())
        throw ConfigError(std::string("inputs.") + key + " is required when inputs are given");
      return fs::path(in.at(key).get<std::string>());
    };
    p.persons = path_of("persons");
    p.co_events = path_of("co_events");
    p.overdose_cases = path_of("overdose_cases");
    p.gazetteer = path_of("gazetteer");
    c.inputs = p;
  }
  if (j.contains("synthetic") && !j.at("synthetic").is_null()) {
    SyntheticBlock block;
    block.config = synthetic_from_json(j.at("synthetic"), block.fixture);
    c.synthetic = block;
  }
  if (j.contains("seed")) {
    if (!c.synthetic) throw ConfigError("seed given without a synthetic block");
    read_into(j, "seed", c.synthetic->config.seed);
  }
  std::string out;
  read_into(j, "out", out);
  c.out_dir = out;
  read_into(j, "bandwidth", c.kde.bandwidth_miles);
  read_into(j, "cell_size", c.kde.cell_size_miles);
  read_into(j, "padding", c.kde.padding_miles);
  read_into(j, "bin_width", c.bin_width);
  read_into(j, "min_drug_arrests", c.thresholds.min_drug_arrests);
  read_into(j, "min_violent_priors", c.thresholds.min_violent_priors);
  read_into(j, "max_degree", c.max_degree);
  read_into(j, "strict", c.strict);
  c.validate();
  return c;
}

json PipelineConfig::to_json() const {
  json j;
  if (inputs)
    j["inputs"] = {{"persons", inputs->persons.string()},
                   {"co_events", inputs->co_events.string()},
                   {"overdose_cases", inputs->overdose_cases.string()},
                   {"gazetteer", inputs->gazetteer.string()}};
  if (synthetic) j["synthetic"] = synthetic_to_json(*synthetic);
  j["bandwidth"] = kde.bandwidth_miles;
  j["cell_size"] = kde.cell_size_miles;
  j["padding"] = kde.padding_miles;
  j["bin_width"] = bin_width;
  j["min_drug_arrests"] = thresholds.min_drug_arrests;
  j["min_violent_priors"] = thresholds.min_violent_priors;
  j["max_degree"] = max_degree;
  j["strict"] = strict;
  return j;
}

void PipelineConfig::validate() const {
  if (!inputs && !synthetic) throw ConfigError("configuration needs input paths or a synthetic block");
  if (inputs && synthetic) throw ConfigError("configuration has both input paths and a synthetic block");
  if (out_dir.empty()) throw ConfigError("output directory is required");
  if (synthetic) {
    if (synthetic->fixture != "random" && synthetic->fixture != "calibrated")
      throw ConfigError("synthetic.fixture must be \"random\" or \"calibrated\"");
    synth::validate(synthetic->config);
  }
  if (!(kde.bandwidth_miles > 0) || !(kde.cell_size_miles > 0) || !(kde.padding_miles > 0))
    throw ConfigError("bandwidth, cell_size and padding must be positive");
  if (!(bin_width > 0)) throw ConfigError("bin_width must be positive");
  if (thresholds.min_drug_arrests < 0 || thresholds.min_violent_priors < 0)
    throw ConfigError("prolific thresholds must be nonnegative");
  if (max_degree < 1) throw ConfigError("max_degree must be at least 1");
}

Pipeline::Pipeline(PipelineConfig config) : config_(std::move(config)) {
  config_.validate();
  std::error_code ec;
  fs::create_directories(config_.out_dir / paths::kStageDir, ec);
  if (ec) throw ConfigError("cannot create output directory " + config_.out_dir.string() + ": " + ec.message());
  const auto probe = config_.out_dir / ".write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw ConfigError("output directory " + config_.out_dir.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

void Pipeline::run() {
  written_.clear();
  try {
    for (auto s : kAllStages) {
      if (s == Stage::synth && !config_.synthetic) continue;
      execute(s);
    }
  } catch (...) {
    rollback();
    throw;
  }
}

void Pipeline::run_stage(Stage stage) {
  written_.clear();
  try {
    execute(stage);
  } catch (...) {
    rollback();
    throw;
  }
}

void Pipeline::execute(Stage stage) {
  try {
    write_json(paths::kConfig, config_.to_json());
    switch (stage) {
      case Stage::synth: stage_synth(); break;
      case Stage::ingest: stage_ingest(); break;
      case Stage::network: stage_network(); break;
      case Stage::geo: stage_geo(); break;
      case Stage::fit: stage_fit(); break;
      case Stage::report: stage_report(); break;
    }
  } catch (const Error& e) {
    rethrow_in_stage(stage, e.kind(), e.what());
  } catch (const fs::filesystem_error& e) {
    rethrow_in_stage(stage, ErrorKind::config, e.what());
  } catch (const json::exception& e) {
    rethrow_in_stage(stage, ErrorKind::data, e.what());
  }
}

void Pipeline::rollback() {
  std::error_code ec;
  for (const auto& p : written_) fs::remove(p, ec);
  written_.clear();
}

fs::path Pipeline::artifact(const fs::path& relative) const {
  const auto p = config_.out_dir / relative;
  if (!fs::exists(p)) throw DataError("missing artifact " + relative.generic_string());
  return p;
}

void Pipeline::write(const fs::path& relative, std::string_view content) {
  const auto p = config_.out_dir / relative;
  fs::create_directories(p.parent_path());
  written_.push_back(p);
  csv::write_text(p, content);
}

void Pipeline::write_json(const fs::path& relative, const json& j) { write(relative, j.dump(2) + "\n"); }

json Pipeline::read_json(const fs::path& relative) const { return json::parse(csv::read_text(artifact(relative))); }

InputPaths Pipeline::input_paths() const {
  if (config_.inputs) return *config_.inputs;
  const fs::path dir = config_.out_dir / paths::kInputDir;
  return {dir / "persons.csv", dir / "co_events.csv", dir / "overdose_cases.csv", dir / "gazetteer.csv"};
}

void Pipeline::stage_synth() {
  if (!config_.synthetic) throw ConfigError("synth needs a synthetic configuration block");
  const auto& block = *config_.synthetic;
  const auto data = block.fixture == "calibrated" ? synth::calibrated_fixture() : synth::generate_synthetic(block.config);
  const fs::path dir = config_.out_dir / paths::kInputDir;
  fs::create_directories(dir);
  for (const char* name : {"persons.csv", "co_events.csv", "overdose_cases.csv", "gazetteer.csv"})
    written_.push_back(dir / name);
  ingest::write_persons(dir / "persons.csv", data.persons);
  ingest::write_co_events(dir / "co_events.csv", data.events);
  ingest::write_overdose_cases(dir / "overdose_cases.csv", data.cases);
  ingest::write_gazetteer(dir / "gazetteer.csv", data.gazetteer);
  write_json(fs::path(paths::kInputDir) / "truth.json",
             {{"fixture", block.fixture},
              {"cases", data.cases.size()},
              {"persons", data.persons.size()},
              {"events", data.events.size()},
              {"intended_prolific", data.intended_prolific.size()},
              {"sales_points", data.sales_points.size()},
              {"beta", block.config.beta},
              {"theta", block.config.theta}});
}

void Pipeline::stage_ingest() {
  const auto in = input_paths();
  for (const auto* p : {&in.persons, &in.co_events, &in.overdose_cases, &in.gazetteer})
    if (!fs::exists(*p)) throw DataError("missing artifact " + p->generic_string());

  auto persons = ingest::parse_persons(in.persons);
  auto events = ingest::parse_co_events(in.co_events);
  auto cases = ingest::parse_overdose_cases(in.overdose_cases);
  auto gaz = ingest::parse_gazetteer(in.gazetteer);

  const fs::path stage = paths::kStageDir;
  std::string rejections;
  json counts;
  std::vector<std::string> stage_warnings;
  auto section = [&](const char* file, const auto& parsed_rejections, std::size_t rows, std::size_t accepted) {
    counts[file] = parse_counts(rows, accepted, parsed_rejections.size());
    if (parsed_rejections.empty()) return;
    rejections += std::string("# ") + file + "\n" + ingest::format_rejections(parsed_rejections);
    stage_warnings.push_back(std::string(file) + ": " + std::to_string(parsed_rejections.size()) + " rows rejected");
  };
  section("persons", persons.rejections, persons.row_count, persons.records.size());
  section("co_events", events.rejections, events.row_count, events.records.size());
  section("overdose_cases", cases.rejections, cases.row_count, cases.records.size());
  section("gazetteer", gaz.rejections, gaz.row_count, gaz.gazetteer.size());

  for (const char* name : {"persons.csv", "events.csv", "cases.csv", "gazetteer.csv"})
    written_.push_back(config_.out_dir / stage / name);
  ingest::write_persons(config_.out_dir / stage / "persons.csv", persons.records);
  ingest::write_co_events(config_.out_dir / stage / "events.csv", events.records);
  ingest::write_overdose_cases(config_.out_dir / stage / "cases.csv", cases.records);
  ingest::write_gazetteer(config_.out_dir / stage / "gazetteer.csv", gaz.gazetteer);
  write(stage / "rejections.txt", rejections);
  write_json(stage / "ingest.json", {{"files", counts}, {"warnings", stage_warnings}});
  warnings_.insert(warnings_.end(), stage_warnings.begin(), stage_warnings.end());
}

void Pipeline::stage_network() {
  const fs::path stage = paths::kStageDir;
  const auto events_path = artifact(stage / "events.csv");
  const auto persons_path = artifact(stage / "persons.csv");
  const auto events = require_clean(ingest::parse_co_events(events_path), events_path);
  const auto persons = require_clean(ingest::parse_persons(persons_path), persons_path);

  const auto graph = conet::build_graph(events);
  const auto drug = conet::filter_drug_edges(graph);
  const auto selection = conet::select_prolific(drug, persons, events, config_.thresholds);
  const std::set<std::string> seeds(selection.person_ids.begin(), selection.person_ids.end());
  const auto summary = conet::degree_counts(graph, seeds, config_.max_degree);
  const auto gang = conet::gang_connection_degree(graph, selection.person_ids, persons, 3);

  std::map<std::string, bool> gang_member;
  for (const auto& p : persons) gang_member[p.person_id] = p.gang_member;
  json degrees = json::object();
  std::array<std::size_t, 4> histogram{};
  std::size_t unreachable = 0;
  for (const auto& [id, d] : gang) {
    degrees[id] = d ? json(*d) : json(nullptr);
    if (d) ++histogram[*d];
    else ++unreachable;
  }
  std::vector<std::string> stage_warnings = selection.warnings;

  write(stage / "network.json",
        json{{"nodes", graph.node_count()},
             {"edges", graph.edge_count()},
             {"nodes_after_drug_filter", drug.node_count()},
             {"edges_after_drug_filter", drug.edge_count()},
             {"thresholds",
              {{"min_drug_arrests", config_.thresholds.min_drug_arrests},
               {"min_violent_priors", config_.thresholds.min_violent_priors}}},
             {"prolific", selection.person_ids},
             {"gang_members", histogram[0]},
             {"gang_degree", degrees},
             {"gang_degree_histogram",
              {{"0", histogram[0]}, {"1", histogram[1]}, {"2", histogram[2]}, {"3", histogram[3]},
               {"unreachable", unreachable}}},
             {"degree_counts", report::to_json(summary)},
             {"warnings", stage_warnings}}
                .dump(2) +
            "\n");
  write("table2.csv", report::render_table2(summary));
  write("prolific.csv", report::render_prolific(gang, gang_member));
  warnings_.insert(warnings_.end(), stage_warnings.begin(), stage_warnings.end());
}

void Pipeline::stage_geo() {
  const fs::path stage = paths::kStageDir;
  const auto cases_path = artifact(stage / "cases.csv");
  const auto events_path = artifact(stage / "events.csv");
  const auto gaz_path = artifact(stage / "gazetteer.csv");
  const auto network = read_json(stage / "network.json");
  auto cases = require_clean(ingest::parse_overdose_cases(cases_path), cases_path);
  const auto events = require_clean(ingest::parse_co_events(events_path), events_path);
  const auto gaz = ingest::parse_gazetteer(gaz_path);

  const auto prolific_ids = network.at("prolific").get<std::vector<std::string>>();
  const std::set<std::string> prolific(prolific_ids.begin(), prolific_ids.end());
  const auto contacts = seller_locations(events, prolific);
  const auto sales = geo::dedupe_points(contacts);
  if (sales.empty()) throw DataError("no drug sales locations: prolific sellers have no located events");

  std::size_t geocoded = 0, zero_journeys = 0;
  for (auto& c : cases) {
    geocoded += std::holds_alternative<std::string>(c.residence) + std::holds_alternative<std::string>(c.death_location);
    geo::resolve_locations(c, gaz.gazetteer);
    if (geo::journey_distance(c) == 0.0) ++zero_journeys;
    c.sales_distance_miles = geo::nearest_sales_distance(*resolved(c.death_location), sales);
  }
  const auto grid = geo::kde_surface(contacts, config_.kde);
  double max_density = 0, mass = 0;
  for (double v : grid.values) {
    max_density = std::max(max_density, v);
    mass += v * grid.cell_area();
  }

  written_.push_back(config_.out_dir / stage / "cases_geo.csv");
  ingest::write_overdose_cases(config_.out_dir / stage / "cases_geo.csv", cases);
  write("kde.geojson", geo::kde_geojson(grid).dump() + "\n");
  write("journeys.geojson", geo::journeys_geojson(cases).dump() + "\n");
  write("sales.geojson", geo::points_geojson(sales).dump() + "\n");
  write_json(stage / "geo.json",
             {{"cases", cases.size()},
              {"addresses_geocoded", geocoded},
              {"zero_journeys", zero_journeys},
              {"seller_contacts", contacts.size()},
              {"sales_points", sales.size()},
              {"kde",
               {{"bandwidth", config_.kde.bandwidth_miles},
                {"cell_size", config_.kde.cell_size_miles},
                {"padding", config_.kde.padding_miles},
                {"rows", grid.n_rows},
                {"cols", grid.n_cols},
                {"origin", {grid.origin.lat, grid.origin.lon}},
                {"max_density", max_density},
                {"total_mass", mass}}},
              {"warnings", json::array()}});
}

void Pipeline::stage_fit() {
  const fs::path stage = paths::kStageDir;
  const auto cases_path = artifact(stage / "cases_geo.csv");
  const auto cases = require_clean(ingest::parse_overdose_cases(cases_path), cases_path);
  for (const auto& c : cases)
    if (!c.journey_miles || !c.sales_distance_miles)
      throw DataError("case " + c.case_id + " lacks geo-stage distances");

  const auto table1 = glm::descriptives(cases);
  const auto build = glm::build_design(cases);
  std::vector<double> response(build.design.y.data(), build.design.y.data() + build.design.y.size());
  const auto dispersion = glm::dispersion_check(response);
  const auto vifs = glm::vif(build.design);
  const auto fit = glm::nb_fit(build.design);

  std::vector<std::string> stage_warnings;
  if (build.dropped > 0)
    stage_warnings.push_back(std::to_string(build.dropped) + " cases dropped from regression for missing covariates");
  for (std::size_t j = 0; j < vifs.size(); ++j)
    if (vifs[j] > glm::kVifAlarm)
      stage_warnings.push_back("VIF for " + build.design.column_names[j + 1] + " exceeds " +
                               csv::fixed(glm::kVifAlarm, 0));
  if (!fit.converged) {
    if (config_.strict) throw NumericError("negative binomial fit did not converge");
    stage_warnings.push_back("negative binomial fit did not converge after " + std::to_string(fit.iterations) +
                             " outer iterations");
  }

  auto sd_of = [&](const char* variable) -> std::optional<double> {
    for (const auto& r : table1)
      if (r.variable == variable) return r.sd;
    return std::nullopt;
  };
  std::vector<std::optional<double>> sds{std::nullopt, sd_of("Overdose Location to Drug Sales Location"),
                                         sd_of("Education"), std::nullopt, sd_of("Age"), std::nullopt,
                                         std::nullopt};
  std::vector<double> b(fit.beta.data(), fit.beta.data() + fit.beta.size());
  std::vector<double> se(fit.se.data(), fit.se.data() + fit.se.size());
  const auto table3 = glm::coefficient_table(fit.names, b, se, sds);

  std::vector<double> journeys;
  for (const auto& c : cases) journeys.push_back(*c.journey_miles);
  const auto decay = glm::decay_profile(journeys, config_.bin_width);

  json t1 = json::array(), t3 = json::array(), vif_json = json::object();
  for (const auto& r : table1) t1.push_back(report::to_json(r));
  for (const auto& r : table3) t3.push_back(report::to_json(r));
  for (std::size_t j = 0; j < vifs.size(); ++j) vif_json[build.design.column_names[j + 1]] = report::json_number(vifs[j]);

  write_json(stage / "fit.json",
             {{"descriptives", t1},
              {"design", {{"rows", build.design.x.rows()}, {"dropped", build.dropped}}},
              {"dispersion",
               {{"mean", dispersion.mean},
                {"variance", dispersion.variance},
                {"ratio", dispersion.ratio},
                {"overdispersed", dispersion.overdispersed},
                {"threshold", glm::kOverdispersionThreshold}}},
              {"vif", vif_json},
              {"nb_fit", report::to_json(fit)},
              {"coefficients", t3},
              {"decay", report::to_json(decay)},
              {"warnings", stage_warnings}});
  write("table1.csv", report::render_table1(table1));
  write("table3.csv", report::render_table3(table3));
  write("decay.csv", report::render_decay(decay));
  warnings_.insert(warnings_.end(), stage_warnings.begin(), stage_warnings.end());
}

void Pipeline::stage_report() {
  const fs::path stage = paths::kStageDir;
  const auto ingest_json = read_json(stage / "ingest.json");
  const auto network = read_json(stage / "network.json");
  const auto geo_json = read_json(stage / "geo.json");
  const auto fit = read_json(stage / "fit.json");

  std::vector<glm::DescriptiveRow> table1;
  for (const auto& r : fit.at("descriptives")) table1.push_back(report::descriptive_from_json(r));
  std::vector<glm::CoefficientRow> table3;
  for (const auto& r : fit.at("coefficients")) table3.push_back(report::coefficient_from_json(r));
  const auto summary = report::network_summary_from_json(network.at("degree_counts"));
  const auto decay = report::decay_from_json(fit.at("decay"));

  std::map<std::string, std::optional<std::size_t>> gang;
  for (const auto& [id, d] : network.at("gang_degree").items())
    gang[id] = d.is_null() ? std::nullopt : std::optional<std::size_t>(d.get<std::size_t>());
  std::map<std::string, bool> gang_member;
  {
    // prolific.csv carries the gang flag; re-read persons to rebuild it.
    const auto persons_path = artifact(stage / "persons.csv");
    for (const auto& p : require_clean(ingest::parse_persons(persons_path), persons_path))
      if (gang.count(p.person_id)) gang_member[p.person_id] = p.gang_member;
  }

  write("table1.csv", report::render_table1(table1));
  write("table2.csv", report::render_table2(summary));
  write("table3.csv", report::render_table3(table3));
  write("decay.csv", report::render_decay(decay));
  write("prolific.csv", report::render_prolific(gang, gang_member));

  json warnings = json::array();
  for (const auto* j : {&ingest_json, &network, &geo_json, &fit})
    for (const auto& w : j->at("warnings")) warnings.push_back(w);

  const auto& files = ingest_json.at("files");
  json funnel = {
      {"persons_rows", files.at("persons").at("rows")},
      {"events_rows", files.at("co_events").at("rows")},
      {"events_accepted", files.at("co_events").at("accepted")},
      {"cases_rows", files.at("overdose_cases").at("rows")},
      {"cases_accepted", files.at("overdose_cases").at("accepted")},
      {"network_nodes", network.at("nodes")},
      {"network_edges", network.at("edges")},
      {"nodes_after_drug_filter", network.at("nodes_after_drug_filter")},
      {"edges_after_drug_filter", network.at("edges_after_drug_filter")},
      {"prolific", network.at("prolific").size()},
      {"gang_members", network.at("gang_members")},
      {"sales_points", geo_json.at("sales_points")},
      {"cases_with_journeys", geo_json.at("cases")},
      {"cases_in_regression", fit.at("design").at("rows")},
      {"cases_dropped", fit.at("design").at("dropped")},
  };
  json network_report = network;
  network_report.erase("gang_degree");
  network_report.erase("prolific");
  network_report.erase("warnings");
  json fit_report = fit;
  fit_report.erase("warnings");
  json geo_report = geo_json;
  geo_report.erase("warnings");

  write_json("report.json", {{"parameters", config_.to_json()},
                             {"funnel", funnel},
                             {"ingest", ingest_json.at("files")},
                             {"network", network_report},
                             {"geo", geo_report},
                             {"fit", fit_report},
                             {"warnings", warnings}});
}

}  // namespace jto::pipeline
