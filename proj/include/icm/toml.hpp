// Copyright (c) 2026 The ICM Pipeline Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>

#include <json.hpp>

#include "icm/common.hpp"
#include "icm/jsonl.hpp"

namespace icm::toml {

using nlohmann::json;

// TOML subset parser producing a JSON tree. Covers what the config surfaces
// of this project use: key/value pairs, [table] and [[array-of-table]]
// headers (dotted paths), quoted keys, basic and literal strings, integers,
// floats, booleans, arrays, and inline tables. Multi-line strings and
// datetimes are rejected with a located error.
class Parser {
 public:
  Parser(std::string_view src, std::string name) : src_(src), name_(std::move(name)) {}

  json parse() {
    skip_blank();
    while (!at_end()) {
      if (peek() == '[') {
        parse_header();
      } else {
        parse_key_value(*current_, current_path_);
      }
      end_of_line();
      skip_blank();
    }
    return std::move(root_);
  }

 private:
  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorKind::Parse,
         name_ + ":" + std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg);
  }

  bool at_end() const { return pos_ >= src_.size(); }
  char peek(size_t off = 0) const {
    return pos_ + off < src_.size() ? src_[pos_ + off] : '\0';
  }

  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_spaces() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) advance();
  }

  void skip_comment() {
    if (!at_end() && peek() == '#')
      while (!at_end() && peek() != '\n') advance();
  }

  // Whitespace, comments, and newlines between top-level constructs.
  void skip_blank() {
    while (!at_end()) {
      skip_spaces();
      skip_comment();
      if (!at_end() && (peek() == '\n' || peek() == '\r')) {
        advance();
        continue;
      }
      break;
    }
  }

  void end_of_line() {
    skip_spaces();
    skip_comment();
    if (at_end()) return;
    if (peek() == '\r') advance();
    if (at_end()) return;
    if (peek() != '\n') error("expected end of line");
    advance();
  }

  static bool is_bare_key_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-';
  }

  std::string parse_key_segment() {
    if (peek() == '"' || peek() == '\'') return parse_string();
    std::string key;
    while (!at_end() && is_bare_key_char(peek())) key += advance();
    if (key.empty()) error("expected key");
    return key;
  }

  std::vector<std::string> parse_dotted_key() {
    std::vector<std::string> segments;
    segments.push_back(parse_key_segment());
    skip_spaces();
    while (!at_end() && peek() == '.') {
      advance();
      skip_spaces();
      segments.push_back(parse_key_segment());
      skip_spaces();
    }
    return segments;
  }

  void parse_header() {
    advance();  // '['
    bool is_array = false;
    if (peek() == '[') {
      advance();
      is_array = true;
    }
    skip_spaces();
    auto segments = parse_dotted_key();
    if (peek() != ']') error("expected ']' in table header");
    advance();
    if (is_array) {
      if (peek() != ']') error("expected ']]' in array-of-tables header");
      advance();
    }

    json* node = &root_;
    std::string path;
    for (size_t i = 0; i + 1 < segments.size(); ++i) descend(node, path, segments[i]);

    const std::string& last = segments.back();
    std::string full = path.empty() ? last : path + "." + last;
    if (is_array) {
      if (!node->contains(last)) {
        (*node)[last] = json::array();
        header_arrays_.insert(full);
      } else if (!header_arrays_.count(full)) {
        error("'" + full + "' is not an array of tables");
      }
      auto& arr = (*node)[last];
      arr.push_back(json::object());
      current_ = &arr.back();
      current_path_ = full + "#" + std::to_string(arr.size() - 1);
    } else {
      if (!node->contains(last)) {
        (*node)[last] = json::object();
      } else if (!(*node)[last].is_object() || explicit_tables_.count(full)) {
        error("duplicate table '" + full + "'");
      }
      explicit_tables_.insert(full);
      current_ = &(*node)[last];
      current_path_ = full;
    }
  }

  // Step through an intermediate segment of a header path, entering the last
  // element of an array of tables when the segment names one.
  void descend(json*& node, std::string& path, const std::string& segment) {
    std::string full = path.empty() ? segment : path + "." + segment;
    if (!node->contains(segment)) (*node)[segment] = json::object();
    json& child = (*node)[segment];
    if (child.is_object()) {
      node = &child;
      path = full;
    } else if (child.is_array() && header_arrays_.count(full)) {
      if (child.empty()) error("'" + full + "' has no elements");
      node = &child.back();
      path = full + "#" + std::to_string(child.size() - 1);
    } else {
      error("'" + full + "' is not a table");
    }
  }

  void parse_key_value(json& table, const std::string& table_path) {
    std::string key = parse_key_segment();
    skip_spaces();
    if (peek() == '.') error("dotted keys are not supported outside table headers");
    if (peek() != '=') error("expected '=' after key");
    advance();
    skip_spaces();
    if (table.contains(key)) {
      std::string where = table_path.empty() ? key : table_path + "." + key;
      error("duplicate key '" + where + "'");
    }
    table[key] = parse_value();
  }

  json parse_value() {
    if (at_end()) error("expected value");
    char c = peek();
    if (c == '"' || c == '\'') return parse_string();
    if (c == '[') return parse_array();
    if (c == '{') return parse_inline_table();
    if (c == 't' || c == 'f') return parse_boolean();
    return parse_number();
  }

  std::string parse_string() {
    char quote = advance();
    if (peek() == quote && peek(1) == quote) error("multi-line strings are not supported");
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') error("unterminated string");
      char c = advance();
      if (c == quote) break;
      if (quote == '"' && c == '\\') {
        out += parse_escape();
      } else {
        out += c;
      }
    }
    return out;
  }

  std::string parse_escape() {
    if (at_end()) error("unterminated escape");
    char c = advance();
    switch (c) {
      case '"': return "\"";
      case '\\': return "\\";
      case 'b': return "\b";
      case 'f': return "\f";
      case 'n': return "\n";
      case 'r': return "\r";
      case 't': return "\t";
      case 'u': return parse_unicode_escape(4);
      case 'U': return parse_unicode_escape(8);
      default: error(std::string("invalid escape '\\") + c + "'");
    }
  }

  std::string parse_unicode_escape(int digits) {
    uint32_t cp = 0;
    for (int i = 0; i < digits; ++i) {
      if (at_end()) error("unterminated unicode escape");
      char c = advance();
      cp <<= 4;
      if (c >= '0' && c <= '9') cp |= static_cast<uint32_t>(c - '0');
      else if (c >= 'a' && c <= 'f') cp |= static_cast<uint32_t>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') cp |= static_cast<uint32_t>(c - 'A' + 10);
      else error("invalid unicode escape digit");
    }
    std::string out;
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
    return out;
  }

  json parse_array() {
    advance();  // '['
    json arr = json::array();
    while (true) {
      skip_array_filler();
      if (at_end()) error("unterminated array");
      if (peek() == ']') {
        advance();
        return arr;
      }
      arr.push_back(parse_value());
      skip_array_filler();
      if (peek() == ',') {
        advance();
        continue;
      }
      if (peek() == ']') {
        advance();
        return arr;
      }
      error("expected ',' or ']' in array");
    }
  }

  // Arrays may span lines and carry comments between elements.
  void skip_array_filler() {
    while (!at_end()) {
      skip_spaces();
      skip_comment();
      if (!at_end() && (peek() == '\n' || peek() == '\r')) {
        advance();
        continue;
      }
      break;
    }
  }

  json parse_inline_table() {
    advance();  // '{'
    json table = json::object();
    skip_spaces();
    if (peek() == '}') {
      advance();
      return table;
    }
    while (true) {
      skip_spaces();
      parse_key_value(table, "<inline>");
      skip_spaces();
      if (peek() == ',') {
        advance();
        continue;
      }
      if (peek() == '}') {
        advance();
        return table;
      }
      error("expected ',' or '}' in inline table");
    }
  }

  json parse_boolean() {
    if (src_.substr(pos_, 4) == "true") {
      for (int i = 0; i < 4; ++i) advance();
      return true;
    }
    if (src_.substr(pos_, 5) == "false") {
      for (int i = 0; i < 5; ++i) advance();
      return false;
    }
    error("expected value");
  }

  json parse_number() {
    std::string raw;
    while (!at_end()) {
      char c = peek();
      bool number_char = (c >= '0' && c <= '9') || c == '+' || c == '-' || c == '.' ||
                         c == 'e' || c == 'E' || c == '_';
      if (!number_char) break;
      raw += advance();
    }
    if (raw.empty()) error("expected value");
    std::string digits;
    for (char c : raw)
      if (c != '_') digits += c;
    bool is_float = digits.find_first_of(".eE") != std::string::npos;
    if (is_float) {
      double v = 0;
      auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
      if (ec != std::errc() || p != digits.data() + digits.size())
        error("invalid number '" + raw + "'");
      return v;
    }
    int64_t v = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc() || p != digits.data() + digits.size())
      error("invalid integer '" + raw + "'");
    return v;
  }

  std::string_view src_;
  std::string name_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  json root_ = json::object();
  json* current_ = &root_;
  std::string current_path_;
  std::set<std::string> explicit_tables_;
  std::set<std::string> header_arrays_;
};

inline json parse(std::string_view text, const std::string& source_name = "<toml>") {
  return Parser(text, source_name).parse();
}

inline json parse_file(const std::filesystem::path& path) {
  return parse(jsonl::read_text_file(path), path.string());
}

// ── typed field access with contextual errors ─────────────────────────────

inline const json& require(const json& obj, const std::string& key, const std::string& ctx) {
  if (!obj.is_object() || !obj.contains(key))
    fail(ErrorKind::Parse, ctx + ": missing field '" + key + "'");
  return obj.at(key);
}

inline std::string require_string(const json& obj, const std::string& key, const std::string& ctx) {
  const json& v = require(obj, key, ctx);
  if (!v.is_string()) fail(ErrorKind::Parse, ctx + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

inline bool require_bool(const json& obj, const std::string& key, const std::string& ctx) {
  const json& v = require(obj, key, ctx);
  if (!v.is_boolean()) fail(ErrorKind::Parse, ctx + ": field '" + key + "' must be a boolean");
  return v.get<bool>();
}

inline int64_t require_int(const json& obj, const std::string& key, const std::string& ctx) {
  const json& v = require(obj, key, ctx);
  if (!v.is_number_integer()) fail(ErrorKind::Parse, ctx + ": field '" + key + "' must be an integer");
  return v.get<int64_t>();
}

inline double require_double(const json& obj, const std::string& key, const std::string& ctx) {
  const json& v = require(obj, key, ctx);
  if (!v.is_number()) fail(ErrorKind::Parse, ctx + ": field '" + key + "' must be a number");
  return v.get<double>();
}

inline std::string get_string(const json& obj, const std::string& key, const std::string& fallback) {
  if (obj.is_object() && obj.contains(key) && obj.at(key).is_string())
    return obj.at(key).get<std::string>();
  return fallback;
}

}  // namespace icm::toml
