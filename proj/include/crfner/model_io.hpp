#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "crfner/error.hpp"
#include "crfner/model.hpp"

namespace crfner {

// Model container, all integers little-endian:
//
//   "CRFSEQ1"            7-byte magic
//   u32 version          kModelFormatVersion
//   u64 payload_size
//   payload              labels, feature alphabet, weights (IEEE-754 bit
//                        patterns), l2 sigma, training metadata, feature
//                        config, embedded gazetteers
//   u32 crc32            over every preceding byte
inline constexpr std::string_view kModelMagic = "CRFSEQ1";
inline constexpr std::uint32_t kModelFormatVersion = 1;

class ModelLoadError : public Error {
 public:
  enum class Kind { io, bad_magic, unsupported_version, truncated, checksum_mismatch, malformed };

  ModelLoadError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

std::string serialize_model(const Model& model);
Model deserialize_model(std::string_view bytes);

void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace crfner
