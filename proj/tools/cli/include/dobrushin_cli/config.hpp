#pragma once

#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dobrushin::cli {

/// Malformed user input. The message already carries "file:line:" context
/// when a location is known.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConfigEntry {
  std::string section;  // empty for keys before the first header
  std::string key;
  std::string value;
  int line = 0;
};

/// Line-oriented `key = value` text with optional `[section]` headers.
/// Blank lines and lines starting with '#' or ';' are skipped; an inline
/// " #" starts a trailing comment. Duplicate keys within a section are errors.
std::vector<ConfigEntry> parse_config(std::istream& in, const std::string& name);

std::vector<ConfigEntry> load_config(const std::string& path);

}  // namespace dobrushin::cli
