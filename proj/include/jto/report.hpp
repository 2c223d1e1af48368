#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "jto/conet.hpp"
#include "jto/glm.hpp"

namespace jto::report {

// CSV renderers. Reals use six decimals.
std::string render_table1(std::span<const glm::DescriptiveRow> rows);
std::string render_table2(const conet::NetworkSummary& summary);
std::string render_table3(std::span<const glm::CoefficientRow> rows);
std::string render_decay(const glm::DecayProfile& profile);
std::string render_prolific(const std::map<std::string, std::optional<std::size_t>>& gang_degree,
                            const std::map<std::string, bool>& gang_member);

nlohmann::json to_json(const glm::DescriptiveRow& row);
glm::DescriptiveRow descriptive_from_json(const nlohmann::json& j);

nlohmann::json to_json(const conet::NetworkSummary& summary);
conet::NetworkSummary network_summary_from_json(const nlohmann::json& j);

nlohmann::json to_json(const glm::CoefficientRow& row);
glm::CoefficientRow coefficient_from_json(const nlohmann::json& j);

nlohmann::json to_json(const glm::DecayProfile& profile);
glm::DecayProfile decay_from_json(const nlohmann::json& j);

nlohmann::json to_json(const glm::NBFit& fit);

// Infinities become the strings "inf" / "-inf"; JSON has no literal for them.
nlohmann::json json_number(double v);

}  // namespace jto::report
