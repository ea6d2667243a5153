#include "report_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace stackel::cli {

Outcome summarize(const std::vector<Section>& sections) {
  Outcome o;
  for (const auto& s : sections)
    for (const auto& c : s.report.checks) {
      ++o.total;
      (c.passed ? o.passed : o.failed) += 1;
      if (!c.as_expected()) ++o.unexpected;
    }
  return o;
}

nlohmann::json report_json(const std::string& command, const RunConfig& c, const std::vector<Section>& sections,
                           double total_seconds) {
  using nlohmann::json;
  json cfg;
  cfg["n"] = c.n;
  cfg["a"] = json::array();
  for (const auto& v : c.a) cfg["a"].push_back(v.str());
  cfg["seed"] = c.seed;
  cfg["systems"] = json::array();
  for (SystemKind s : c.systems) cfg["systems"].push_back(std::string(system_tag(s)));
  cfg["checks"] = json::array();
  for (Area a : c.checks) cfg["checks"].push_back(area_name(a));
  cfg["tol"] = c.tol;
  cfg["samples"] = c.samples;
  cfg["T"] = c.T;
  cfg["quantum_points"] = c.quantum_points;
  cfg["test_functions"] = c.test_functions;

  json secs = json::array();
  for (const auto& s : sections) {
    json checks = json::array();
    for (const auto& ch : s.report.checks)
      checks.push_back({{"name", ch.name},
                        {"anchor", ch.anchor},
                        {"expected", to_string(ch.expected)},
                        {"verdict", ch.passed ? "PASS" : "FAIL"},
                        {"as_expected", ch.as_expected()},
                        {"witness_size", ch.witness_size},
                        {"samples", ch.samples},
                        {"detail", ch.detail}});
    secs.push_back({{"area", area_name(s.area)}, {"title", s.report.title}, {"seconds", s.seconds}, {"checks", checks}});
  }
  const Outcome o = summarize(sections);
  return json{{"schema_version", 1},
              {"command", command},
              {"config", cfg},
              {"sections", secs},
              {"summary",
               {{"total", o.total}, {"passed", o.passed}, {"failed", o.failed}, {"unexpected", o.unexpected},
                {"ok", o.ok()}}},
              {"timing", {{"total_seconds", total_seconds}}}};
}

std::string report_markdown(const nlohmann::json& r) {
  std::ostringstream md;
  const auto& cfg = r["config"];
  md << "# stackel " << r["command"].get<std::string>() << " report\n\n";
  md << "n = " << cfg["n"].get<int>() << ", a = (";
  for (std::size_t k = 0; k < cfg["a"].size(); ++k) md << (k ? ", " : "") << cfg["a"][k].get<std::string>();
  md << "), seed = " << cfg["seed"].get<std::uint64_t>() << "\n\n";
  const auto& sum = r["summary"];
  md << "**" << (sum["ok"].get<bool>() ? "OK" : "UNEXPECTED VERDICTS") << "**: " << sum["total"].get<int>()
     << " checks, " << sum["passed"].get<int>() << " passed, " << sum["failed"].get<int>() << " failed, "
     << sum["unexpected"].get<int>() << " unexpected.\n";
  for (const auto& s : r["sections"]) {
    md << "\n## " << s["title"].get<std::string>() << " (" << s["area"].get<std::string>() << ")\n\n";
    md << "| check | expected | verdict | samples | witness | detail |\n|---|---|---|---|---|---|\n";
    for (const auto& c : s["checks"]) {
      std::string detail = c["detail"].get<std::string>();
      for (auto& ch : detail)
        if (ch == '|') ch = '/';
      md << "| " << c["name"].get<std::string>() << (c["as_expected"].get<bool>() ? "" : " **(!)**") << " | "
         << c["expected"].get<std::string>() << " | " << c["verdict"].get<std::string>() << " | "
         << c["samples"].get<int>() << " | " << c["witness_size"].get<int>() << " | " << detail << " |\n";
    }
  }
  return md.str();
}

void write_reports(const std::string& dir, const nlohmann::json& report) {
  std::filesystem::create_directories(dir);
  std::ofstream(std::filesystem::path(dir) / "report.json") << report.dump(2) << "\n";
  std::ofstream(std::filesystem::path(dir) / "report.md") << report_markdown(report);
}

}  // namespace stackel::cli
