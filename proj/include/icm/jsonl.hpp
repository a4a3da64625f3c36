// Copyright (c) 2026 The ICM Pipeline Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "icm/common.hpp"

namespace icm::jsonl {

namespace fs = std::filesystem;
using nlohmann::json;

inline std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open: " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

/// Write-temp-then-rename so readers never observe a partial file.
inline void write_text_file_atomic(const fs::path& path, std::string_view content) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot write: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) fail(ErrorKind::Io, "write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

inline void for_each_line(const fs::path& path, const std::function<void(size_t, const json&)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open: " + path.string());
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded())
      fail(ErrorKind::Parse, path.string() + ":" + std::to_string(lineno) + ": invalid JSON line");
    fn(lineno, j);
  }
}

inline std::vector<json> read_all(const fs::path& path) {
  std::vector<json> out;
  for_each_line(path, [&](size_t, const json& j) { out.push_back(j); });
  return out;
}

inline std::string to_lines(const std::vector<json>& rows) {
  std::string out;
  for (const auto& j : rows) {
    out += j.dump();
    out += '\n';
  }
  return out;
}

inline void write_all_atomic(const fs::path& path, const std::vector<json>& rows) {
  write_text_file_atomic(path, to_lines(rows));
}

inline void append_lines(const fs::path& path, const std::vector<json>& rows) {
  if (rows.empty()) return;
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) fail(ErrorKind::Io, "cannot append: " + path.string());
  for (const auto& j : rows) out << j.dump() << '\n';
  if (!out) fail(ErrorKind::Io, "append failed: " + path.string());
}

}  // namespace icm::jsonl
