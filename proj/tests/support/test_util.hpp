// Copyright (c) 2026 The ICM Pipeline Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>

namespace testutil {

namespace fs = std::filesystem;

inline fs::path source_dir() { return fs::path(ICM_SOURCE_DIR); }
inline fs::path asset(const std::string& rel) { return source_dir() / "assets" / rel; }

inline fs::path unique_temp_dir(const std::string& tag) {
  static std::atomic<uint64_t> counter{0};
  auto p = fs::temp_directory_path() /
           ("icm-" + tag + "-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter.fetch_add(1)));
  fs::create_directories(p);
  return p;
}

struct TempDir {
  fs::path path;

  explicit TempDir(const std::string& tag = "test") : path(unique_temp_dir(tag)) {}
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  fs::path operator/(const std::string& rel) const { return path / rel; }
};

inline void write_file(const fs::path& p, const std::string& content) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

}  // namespace testutil
