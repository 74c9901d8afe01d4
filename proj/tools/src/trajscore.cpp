#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "trajscore/analysis.hpp"
#include "trajscore/dataset_io.hpp"
#include "trajscore/format.hpp"
#include "trajscore/semantic_map.hpp"

namespace fs = std::filesystem;
using namespace trajscore;

namespace {

constexpr int kExitInputError = 1;
constexpr int kExitConfigError = 2;

int run_analyze(const std::string& tracks, const std::string& tracks_meta,
                const std::string& recording_meta, const std::string& map_path,
                const std::string& config_path, const std::string& scenario,
                const std::string& out_dir) {
  AnalysisConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    if (!scenario.empty()) cfg.scenario = scenario_from_string(scenario);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  try {
    Recording rec = load_recording(tracks, tracks_meta, recording_meta);
    SemanticMap map = load_map(map_path);
    AnalysisResult res = analyze(rec, map, cfg);
    write_reports(res, map, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return 0;
}

struct CsvRows {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvRows read_csv_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  CsvRows out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (first) {
      out.header = std::move(fields);
      first = false;
    } else {
      out.rows.push_back(std::move(fields));
    }
  }
  return out;
}

size_t column(const CsvRows& csv, const std::string& name) {
  auto it = std::find(csv.header.begin(), csv.header.end(), name);
  if (it == csv.header.end())
    throw IoError("missing column '" + name + "'");
  return static_cast<size_t>(it - csv.header.begin());
}

int run_top(const std::string& report_dir, const std::string& score,
            size_t k, const std::string& level) {
  try {
    score_kind_from_string(score);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  if (level != "track" && level != "punctual") {
    std::cerr << "config error: unknown level '" << level << "'\n";
    return kExitConfigError;
  }
  try {
    struct Item {
      int track_id;
      int frame;
      double value;
    };
    std::vector<Item> items;
    if (level == "track") {
      CsvRows csv = read_csv_file(fs::path(report_dir) / "track_scores.csv");
      size_t ci = column(csv, "track_id"), cv = column(csv, score),
             cf = column(csv, "peak_frame");
      for (const auto& row : csv.rows)
        items.push_back({std::stoi(row[ci]), std::stoi(row[cf]),
                         std::stod(row[cv])});
    } else {
      CsvRows csv = read_csv_file(fs::path(report_dir) / "punctual_scores.csv");
      size_t ci = column(csv, "track_id"), cf = column(csv, "frame"),
             cv = column(csv, score);
      for (const auto& row : csv.rows)
        items.push_back({std::stoi(row[ci]), std::stoi(row[cf]),
                         std::stod(row[cv])});
    }
    std::stable_sort(items.begin(), items.end(),
                     [](const Item& a, const Item& b) {
                       if (a.value != b.value) return a.value > b.value;
                       return std::tie(a.track_id, a.frame) <
                              std::tie(b.track_id, b.frame);
                     });
    if (items.size() > k) items.resize(k);
    std::cout << "rank,track_id,frame," << score << '\n';
    for (size_t i = 0; i < items.size(); ++i)
      std::cout << i + 1 << ',' << items[i].track_id << ',' << items[i].frame
                << ',' << format_double(items[i].value) << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return 0;
}

int run_compare(const std::vector<std::string>& report_dirs,
                const std::string& out_path) {
  try {
    std::vector<RecordingSummary> rows;
    for (const std::string& dir : report_dirs)
      rows.push_back(read_summary(dir));
    std::string csv = comparison_csv(rows);
    {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw IoError("cannot write " + out_path);
      out << csv;
    }
    std::cout << csv;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Batch scoring of bird's-eye-view road-user trajectory data"};
  app.require_subcommand(1);

  std::string tracks, tracks_meta, recording_meta, map_path, config_path,
      scenario, out_dir;
  auto* analyze_cmd = app.add_subcommand("analyze", "Analyze one recording");
  analyze_cmd->add_option("--tracks", tracks)->required();
  analyze_cmd->add_option("--tracks-meta", tracks_meta)->required();
  analyze_cmd->add_option("--recording-meta", recording_meta)->required();
  analyze_cmd->add_option("--map", map_path)->required();
  analyze_cmd->add_option("--config", config_path);
  analyze_cmd->add_option("--scenario", scenario)
      ->check(CLI::IsMember({"urban", "highway"}));
  analyze_cmd->add_option("--out", out_dir)->required();

  std::string report_dir, score = "relevance", level = "track";
  size_t k = 10;
  auto* top_cmd = app.add_subcommand("top", "Rank the highest-scoring items");
  top_cmd->add_option("--report", report_dir)->required();
  top_cmd->add_option("--score", score);
  top_cmd->add_option("--k", k);
  top_cmd->add_option("--level", level);

  std::vector<std::string> report_dirs;
  std::string compare_out = "comparison.csv";
  auto* compare_cmd =
      app.add_subcommand("compare", "Tabulate recordings side by side");
  compare_cmd->add_option("--reports", report_dirs)->required();
  compare_cmd->add_option("--out", compare_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  if (app.got_subcommand(analyze_cmd))
    return run_analyze(tracks, tracks_meta, recording_meta, map_path,
                       config_path, scenario, out_dir);
  if (app.got_subcommand(top_cmd)) return run_top(report_dir, score, k, level);
  return run_compare(report_dirs, compare_out);
}
