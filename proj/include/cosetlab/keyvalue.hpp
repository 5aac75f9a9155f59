#pragma once

#include <cctype>
#include <map>
#include <string>
#include <string_view>

#include "cosetlab/errors.hpp"

namespace cosetlab {

// Splits "key=value key2=value with spaces" into a map. A key is an
// identifier immediately followed by '=' at the start of the text or after
// whitespace; a value runs until the next key.
inline std::map<std::string, std::string> parse_key_values(std::string_view text) {
  auto is_ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; };
  auto key_at = [&](std::size_t pos) -> std::size_t {
    // Returns the length of "ident=" starting at pos, or 0.
    std::size_t j = pos;
    while (j < text.size() && is_ident(text[j])) ++j;
    return (j > pos && j < text.size() && text[j] == '=') ? j - pos + 1 : 0;
  };
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n;");
    const auto e = s.find_last_not_of(" \t\r\n;");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  };

  std::map<std::string, std::string> out;
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  while (i < text.size()) {
    const std::size_t klen = key_at(i);
    if (klen == 0) throw UsageError("expected key=value in \"" + std::string(text) + "\"");
    std::string key(text.substr(i, klen - 1));
    std::size_t j = i + klen;
    std::size_t end = text.size();
    for (std::size_t t = j; t < text.size(); ++t) {
      if (std::isspace(static_cast<unsigned char>(text[t])) && t + 1 < text.size() && key_at(t + 1) > 0) {
        end = t;
        break;
      }
    }
    if (out.count(key)) throw UsageError("duplicate key '" + key + "'");
    out[key] = trim(std::string(text.substr(j, end - j)));
    i = end;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  }
  return out;
}

}  // namespace cosetlab
