#include "jto/report.hpp"

#include <cmath>

#include "jto/csv.hpp"

namespace jto::report {

namespace {

using nlohmann::json;

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> number_or_null(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

std::string line(std::vector<std::string> fields) { return csv::join(fields) + "\n"; }

}  // namespace

json json_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::string render_table1(std::span<const glm::DescriptiveRow> rows) {
  std::string out = "variable,N,min,max,mean_or_percent,sd\n";
  for (const auto& r : rows)
    out += line({r.variable, std::to_string(r.n), csv::fixed(r.min), csv::fixed(r.max), csv::fixed(r.mean_or_percent),
                 r.sd ? csv::fixed(*r.sd) : std::string()});
  return out;
}

std::string render_table2(const conet::NetworkSummary& s) {
  std::string out = "source";
  for (std::size_t d = 1; d <= s.max_degree; ++d) out += ",degree" + std::to_string(d);
  out += ",total\n";
  const char* labels[] = {"ARREST", "FIR"};
  for (std::size_t src = 0; src < 2; ++src) {
    out += labels[src];
    for (auto c : s.counts[src]) out += "," + std::to_string(c);
    out += "," + std::to_string(s.row_total(src)) + "\n";
  }
  out += "TOTAL";
  for (std::size_t d = 1; d <= s.max_degree; ++d) out += "," + std::to_string(s.column_total(d));
  out += "," + std::to_string(s.grand_total()) + "\n";
  return out;
}

std::string render_table3(std::span<const glm::CoefficientRow> rows) {
  std::string out = "variable,b,se,z,p,effect_percent,sd_effect_percent\n";
  for (const auto& r : rows)
    out += line({r.variable, csv::fixed(r.b), csv::fixed(r.se), csv::fixed(r.z), csv::fixed(r.p),
                 csv::fixed(r.effect_percent), r.sd_effect_percent ? csv::fixed(*r.sd_effect_percent) : std::string()});
  return out;
}

std::string render_decay(const glm::DecayProfile& p) {
  std::string out = "# zero_count=" + std::to_string(p.zero_count) +
                    ",buffer_zone_detected=" + (p.buffer_zone_detected ? "1" : "0") +
                    ",modal_bin=" + (p.modal_bin ? std::to_string(*p.modal_bin) : std::string()) +
                    ",decay_rate=" + (p.decay_rate ? csv::fixed(*p.decay_rate) : std::string()) + "\n";
  out += "bin_lo,bin_hi,count\n";
  for (std::size_t k = 0; k < p.counts.size(); ++k)
    out += line({csv::fixed(static_cast<double>(k) * p.bin_width), csv::fixed(static_cast<double>(k + 1) * p.bin_width),
                 std::to_string(p.counts[k])});
  return out;
}

std::string render_prolific(const std::map<std::string, std::optional<std::size_t>>& gang_degree,
                            const std::map<std::string, bool>& gang_member) {
  std::string out = "person_id,gang_member,gang_degree\n";
  for (const auto& [id, d] : gang_degree) {
    auto g = gang_member.find(id);
    out += line({id, (g != gang_member.end() && g->second) ? "1" : "0", d ? std::to_string(*d) : std::string("inf")});
  }
  return out;
}

json to_json(const glm::DescriptiveRow& r) {
  return {{"variable", r.variable}, {"binary", r.binary}, {"n", r.n},          {"min", r.min},
          {"max", r.max},           {"mean_or_percent", r.mean_or_percent}, {"sd", optional_number(r.sd)}};
}

glm::DescriptiveRow descriptive_from_json(const json& j) {
  glm::DescriptiveRow r;
  r.variable = j.at("variable").get<std::string>();
  r.binary = j.at("binary").get<bool>();
  r.n = j.at("n").get<std::size_t>();
  r.min = j.at("min").get<double>();
  r.max = j.at("max").get<double>();
  r.mean_or_percent = j.at("mean_or_percent").get<double>();
  r.sd = number_or_null(j.at("sd"));
  return r;
}

json to_json(const conet::NetworkSummary& s) {
  return {{"max_degree", s.max_degree},
          {"arrest", s.counts[0]},
          {"fir", s.counts[1]},
          {"excluded", s.excluded},
          {"grand_total", s.grand_total()}};
}

conet::NetworkSummary network_summary_from_json(const json& j) {
  conet::NetworkSummary s;
  s.max_degree = j.at("max_degree").get<std::size_t>();
  s.counts[0] = j.at("arrest").get<std::vector<std::size_t>>();
  s.counts[1] = j.at("fir").get<std::vector<std::size_t>>();
  s.excluded = j.at("excluded").get<std::size_t>();
  return s;
}

json to_json(const glm::CoefficientRow& r) {
  return {{"variable", r.variable}, {"b", r.b}, {"se", r.se}, {"z", r.z}, {"p", r.p},
          {"effect_percent", r.effect_percent}, {"sd_effect_percent", optional_number(r.sd_effect_percent)}};
}

glm::CoefficientRow coefficient_from_json(const json& j) {
  glm::CoefficientRow r;
  r.variable = j.at("variable").get<std::string>();
  r.b = j.at("b").get<double>();
  r.se = j.at("se").get<double>();
  r.z = j.at("z").get<double>();
  r.p = j.at("p").get<double>();
  r.effect_percent = j.at("effect_percent").get<double>();
  r.sd_effect_percent = number_or_null(j.at("sd_effect_percent"));
  return r;
}

json to_json(const glm::DecayProfile& p) {
  return {{"bin_width", p.bin_width},
          {"zero_count", p.zero_count},
          {"counts", p.counts},
          {"modal_bin", p.modal_bin ? json(*p.modal_bin) : json(nullptr)},
          {"buffer_zone_detected", p.buffer_zone_detected},
          {"decay_rate", optional_number(p.decay_rate)}};
}

glm::DecayProfile decay_from_json(const json& j) {
  glm::DecayProfile p;
  p.bin_width = j.at("bin_width").get<double>();
  p.zero_count = j.at("zero_count").get<std::size_t>();
  p.counts = j.at("counts").get<std::vector<std::size_t>>();
  if (!j.at("modal_bin").is_null()) p.modal_bin = j.at("modal_bin").get<std::size_t>();
  p.buffer_zone_detected = j.at("buffer_zone_detected").get<bool>();
  p.decay_rate = number_or_null(j.at("decay_rate"));
  return p;
}

json to_json(const glm::NBFit& fit) {
  json coefficients = json::array();
  for (Eigen::Index i = 0; i < fit.beta.size(); ++i)
    coefficients.push_back({{"variable", fit.names[static_cast<std::size_t>(i)]},
                            {"b", fit.beta[i]},
                            {"se", fit.se[i]},
                            {"z", fit.z[i]},
                            {"p", fit.p[i]}});
  json trace = json::array();
  for (double ll : fit.log_likelihood_trace) trace.push_back(json_number(ll));
  return {{"coefficients", std::move(coefficients)},
          {"theta", fit.theta},
          {"log_likelihood", fit.log_likelihood},
          {"iterations", fit.iterations},
          {"converged", fit.converged},
          {"log_likelihood_trace", std::move(trace)}};
}

}  // namespace jto::report
