#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "backend.hpp"

namespace fot::container {

// On-disk layout (see docs/FORMAT.md for the bit-exact contract):
//   magic "FOTC" | version | backend wire code | flags |
//   varint original_size | varint token_count |
//   varint vocab_blob_len | varint mapping_blob_len |
//   [16-byte external vocab hash, iff vocab not embedded] |
//   vocab blob | mapping blob | payload
// flags: bit0 = vocabulary embedded, bit1 = mapping embedded.
// An absent mapping means the identity permutation.
inline constexpr uint8_t kFormatVersion = 1;

struct ContainerHeader {
  uint8_t version = kFormatVersion;
  backend::Backend backend = backend::Backend::Deflate9;
  bool vocab_embedded = false;
  bool mapping_embedded = false;
  uint64_t original_size = 0;
  uint64_t token_count = 0;
  uint64_t vocab_blob_len = 0;
  uint64_t mapping_blob_len = 0;
  std::array<uint8_t, 16> external_vocab_id{};  // valid iff !vocab_embedded
};

struct Container {
  ContainerHeader header;
  std::vector<uint8_t> vocab_blob;
  std::vector<uint8_t> mapping_blob;
  std::vector<uint8_t> payload;
};

size_t header_size(const ContainerHeader& header);

std::vector<uint8_t> write_container(const Container& c);
Container read_container(std::span<const uint8_t> bytes);

// (vocab_blob_len + mapping_blob_len) / original_size
double overhead_fraction(const Container& c);

}  // namespace fot::container
