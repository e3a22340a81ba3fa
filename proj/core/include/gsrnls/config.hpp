#pragma once

#include <map>
#include <string>

namespace gsrnls {

/// Parses a flat key=value config file. Blank lines and lines starting
/// with '#' are ignored; keys and values are trimmed of surrounding
/// whitespace. Duplicate keys keep the last value. Throws FormatError on
/// malformed lines (no '=') and IoError when the file cannot be read.
std::map<std::string, std::string> parse_config(const std::string& path);

} // namespace gsrnls
