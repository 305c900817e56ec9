#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace qsurr::cli {

/// Parses and executes one command line (argv[0] is the program name).
/// Returns the process exit code: 0 success, 1 usage, 2 I/O, 3 numerical/cap,
/// 4 precondition. Failures are reported on `err` as a single JSON object.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct RunManifest {
  std::string command;
  std::vector<std::string> argv;  // without the program name
  std::string out_dir;
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json seeds = nlohmann::json::object();
  double wall_clock_seconds = 0.0;
  std::vector<std::string> artifacts;  // file names relative to out_dir
  std::string version;
};

inline constexpr const char* kManifestName = "run_manifest.json";

void to_json(nlohmann::json& j, const RunManifest& m);
void from_json(const nlohmann::json& j, RunManifest& m);

void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline.
std::string dump(const nlohmann::json& j);

}  // namespace qsurr::cli
