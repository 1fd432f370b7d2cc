#pragma once

// Plain-text "key = value" configuration. '#' starts a comment.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace clrsum {

using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(const std::string& text, const std::string& source);
KeyValues read_key_values(const std::filesystem::path& path);

double parse_double(const std::string& text, const std::string& key);
long long parse_integer(const std::string& text, const std::string& key);
bool parse_bool(const std::string& text, const std::string& key);
/// Comma-separated list of doubles, e.g. "0.05, 0.10".
std::vector<double> parse_double_list(const std::string& text, const std::string& key);
std::vector<std::string> split_list(const std::string& text);

}  // namespace clrsum
