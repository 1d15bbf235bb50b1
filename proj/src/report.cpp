#include "capls/report.hpp"

#include <fstream>

#include "capls/errors.hpp"

namespace capls::data {

nlohmann::json report_versions() {
  return nlohmann::json{{"artifact", "capls"},
                        {"version", "0.1.0"},
                        {"report_schema", 1}};
}

nlohmann::json report_to_json(const ExperimentReport& report) {
  nlohmann::json j;
  j["config"] = report.config;
  j["trace"] = report.trace;
  j["metrics"] = report.metrics;
  j["versions"] = report_versions();
  return j;
}

void save_report(const ExperimentReport& report,
                 const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::IoError, "cannot write " + path.string());
  out << report_to_json(report).dump(2) << '\n';
  if (!out) raise(ErrorCode::IoError, "failed writing " + path.string());
}

}  // namespace capls::data
