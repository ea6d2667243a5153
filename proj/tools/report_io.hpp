#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "runs.hpp"

namespace stackel::cli {

struct Outcome {
  std::size_t total = 0, passed = 0, failed = 0, unexpected = 0;
  bool ok() const { return unexpected == 0; }
};
Outcome summarize(const std::vector<Section>& sections);

/// Timing lives only under "seconds" and "timing" keys.
nlohmann::json report_json(const std::string& command, const RunConfig& c, const std::vector<Section>& sections,
                           double total_seconds);
std::string report_markdown(const nlohmann::json& report);

/// Writes report.json and report.md into `dir` (created if missing).
void write_reports(const std::string& dir, const nlohmann::json& report);

}  // namespace stackel::cli
