#include <fstream>
#include <sstream>

#include "qsurr/cli.hpp"
#include "qsurr/error.hpp"

namespace qsurr::cli {

void to_json(nlohmann::json& j, const RunManifest& m) {
  j = nlohmann::json{{"command", m.command},
                     {"argv", m.argv},
                     {"out_dir", m.out_dir},
                     {"config", m.config},
                     {"seeds", m.seeds},
                     {"wall_clock_seconds", m.wall_clock_seconds},
                     {"artifacts", m.artifacts},
                     {"version", m.version}};
}

void from_json(const nlohmann::json& j, RunManifest& m) {
  m.command = j.at("command").get<std::string>();
  m.argv = j.at("argv").get<std::vector<std::string>>();
  m.out_dir = j.at("out_dir").get<std::string>();
  m.config = j.value("config", nlohmann::json::object());
  m.seeds = j.value("seeds", nlohmann::json::object());
  m.wall_clock_seconds = j.value("wall_clock_seconds", 0.0);
  m.artifacts = j.at("artifacts").get<std::vector<std::string>>();
  m.version = j.value("version", std::string());
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write '" + path.string() + "'");
  f << content;
  if (!f) throw IoError("write to '" + path.string() + "' failed");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

nlohmann::json read_json(const std::filesystem::path& path) {
  const auto text = read_text(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError("ParseError", "'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace qsurr::cli
