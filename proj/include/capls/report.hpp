#pragma once

#include <filesystem>

#include <json.hpp>

namespace capls::data {

/// Serializable experiment record: the effective configuration (defaults
/// resolved), the per-iteration trace, and the final metrics. save_report
/// adds a versions block; key layout is stable across releases.
struct ExperimentReport {
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json trace = nlohmann::json::array();
  nlohmann::json metrics = nlohmann::json::object();
};

nlohmann::json report_versions();

nlohmann::json report_to_json(const ExperimentReport& report);

void save_report(const ExperimentReport& report,
                 const std::filesystem::path& path);

}  // namespace capls::data
