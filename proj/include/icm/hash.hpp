// Copyright (c) 2026 The ICM Pipeline Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <fstream>
#include <filesystem>
#include <string>
#include <string_view>

#include <openssl/evp.h>

#include "icm/common.hpp"

namespace icm {

/// Streaming SHA-256, hex-encoded. Content identity for images, templates,
/// configs, and dataset files all go through this.
class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1)
      fail(ErrorKind::Io, "sha256: digest init failed");
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const void* data, size_t n) {
    if (EVP_DigestUpdate(ctx_, data, n) != 1)
      fail(ErrorKind::Io, "sha256: digest update failed");
  }
  void update(std::string_view s) { update(s.data(), s.size()); }

  std::string hex() {
    unsigned char out[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_, out, &len) != 1)
      fail(ErrorKind::Io, "sha256: digest final failed");
    static const char* digits = "0123456789abcdef";
    std::string hex;
    hex.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
      hex += digits[out[i] >> 4];
      hex += digits[out[i] & 0xf];
    }
    return hex;
  }

 private:
  EVP_MD_CTX* ctx_;
};

inline std::string sha256_hex(std::string_view data) {
  Sha256 h;
  h.update(data);
  return h.hex();
}

inline std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open for digest: " + path.string());
  Sha256 h;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    h.update(buf, static_cast<size_t>(in.gcount()));
  }
  return h.hex();
}

}  // namespace icm
