#include "specqc/cli/config.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace specqc::cli {

namespace {

using nlohmann::json;

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::string option_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

ToolConfig parse_config(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // byte is 1-based and points just past the offending character
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON");
  }
  if (!doc.is_object()) throw ConfigError(origin + ": top level must be an object");

  ToolConfig out;
  out.source = origin;
  if (auto it = doc.find("config"); it != doc.end()) {
    if (!it->is_object()) throw ConfigError(origin + ": \"config\" must be an object");
    if (auto t = it->find("timeout"); t != it->end()) {
      if (!t->is_number() || t->get<double>() <= 0) throw ConfigError(origin + ": \"timeout\" must be a positive number");
      out.timeout = t->get<double>();
    }
    if (auto w = it->find("workers"); w != it->end()) {
      if (!w->is_number_integer() || w->get<int>() < 1) throw ConfigError(origin + ": \"workers\" must be a positive integer");
      out.workers = w->get<int>();
    }
  }
  if (auto it = doc.find("strategies"); it != doc.end()) {
    if (!it->is_array()) throw ConfigError(origin + ": \"strategies\" must be an array");
    for (const auto& entry : *it) {
      if (!entry.is_object() || !entry.contains("name") || !entry["name"].is_string()) {
        throw ConfigError(origin + ": each strategy needs a string \"name\"");
      }
      StrategyConfig sc;
      for (const auto& [key, value] : entry.items()) {
        if (key == "name") {
          sc.name = value.get<std::string>();
        } else if (key == "enabled") {
          if (!value.is_boolean()) throw ConfigError(origin + ": \"enabled\" must be true or false");
          sc.enabled = value.get<bool>();
        } else {
          sc.options[key] = option_text(value);
        }
      }
      out.strategies.push_back(std::move(sc));
    }
  }
  return out;
}

ToolConfig load_config_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file.string() + ": cannot read");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), file.string());
}

ToolConfig load_config(const std::filesystem::path& root) {
  for (const auto& candidate : {root / ".vscode" / "quickcheck.json", root / "quickcheck.json"}) {
    if (std::filesystem::exists(candidate)) return load_config_file(candidate);
  }
  return ToolConfig{};
}

void apply_config(const ToolConfig& config, RunSettings& settings, std::vector<std::string>& warnings) {
  settings.timeout = config.timeout;
  settings.workers = config.workers;
  for (const auto& sc : config.strategies) {
    Strategy* s = settings.strategies.find(sc.name);
    if (!s) {
      warnings.push_back(config.source + ": unknown strategy '" + sc.name + "' ignored");
      continue;
    }
    if (sc.enabled) settings.strategies.enable(sc.name, *sc.enabled);
    for (const auto& [key, value] : sc.options) {
      if (auto err = s->set_option(key, value)) warnings.push_back(config.source + ": " + *err);
    }
  }
}

std::string describe_settings(const RunSettings& settings) {
  std::ostringstream out;
  out << "timeout " << settings.timeout << "\n";
  out << "workers " << settings.workers << "\n";
  for (const auto& name : settings.strategies.names()) {
    out << "strategy " << name << (settings.strategies.enabled(name) ? " enabled" : " disabled");
    for (const auto& [key, value] : settings.strategies.find(name)->options()) out << " " << key << "=" << value;
    out << "\n";
  }
  return out.str();
}

}  // namespace specqc::cli
