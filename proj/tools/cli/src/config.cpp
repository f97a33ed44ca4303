#include "dobrushin_cli/config.hpp"

#include <fstream>
#include <set>
#include <utility>

namespace dobrushin::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

}  // namespace

std::vector<ConfigEntry> parse_config(std::istream& in, const std::string& name) {
  std::vector<ConfigEntry> out;
  std::set<std::pair<std::string, std::string>> seen;
  std::string section;
  std::string raw;
  int line = 0;
  auto error = [&](const std::string& what) {
    return InputError(name + ":" + std::to_string(line) + ": " + what);
  };

  while (std::getline(in, raw)) {
    ++line;
    if (line == 1 && raw.starts_with("\xEF\xBB\xBF")) raw.erase(0, 3);
    if (const auto hash = raw.find(" #"); hash != std::string::npos) raw.erase(hash);
    const std::string text = trim(raw);
    if (text.empty() || text[0] == '#' || text[0] == ';') continue;

    if (text.front() == '[') {
      if (text.back() != ']') throw error("unterminated section header");
      section = trim(text.substr(1, text.size() - 2));
      if (!valid_name(section)) throw error("invalid section name '" + section + "'");
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw error("expected 'key = value'");
    ConfigEntry e{section, trim(text.substr(0, eq)), trim(text.substr(eq + 1)), line};
    if (!valid_name(e.key)) throw error("invalid key '" + e.key + "'");
    if (e.value.empty()) throw error("missing value for '" + e.key + "'");
    if (!seen.emplace(section, e.key).second) throw error("duplicate key '" + e.key + "'");
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<ConfigEntry> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open config file");
  return parse_config(in, path);
}

}  // namespace dobrushin::cli
