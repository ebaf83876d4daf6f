#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "backend.hpp"
#include "bpe.hpp"
#include "container.hpp"

namespace fot::pipeline {

enum class VocabMode { Embedded, Shared };
enum class Variant { Raw, TokenizedOnly, Reordered };

const char* variant_name(Variant v);
Variant variant_from_name(std::string_view name);

struct CompressionReport {
  uint64_t original_bytes = 0;
  uint64_t token_count = 0;
  uint64_t varint_bytes = 0;
  uint64_t compressed_bytes = 0;
  uint64_t metadata_bytes = 0;  // embedded vocab + mapping blobs
  uint64_t header_bytes = 0;
  double t_tokenize = 0, t_reorder = 0, t_varint = 0, t_backend = 0;
  double ratio_percent = 0;
  std::array<uint64_t, 5> varint_hist{};  // tokens taking 1..5 bytes
};

struct CompressResult {
  std::vector<uint8_t> container;
  CompressionReport report;
};

CompressResult compress_text(std::span<const uint8_t> text,
                             const bpe::Vocabulary& vocab,
                             backend::Backend backend, VocabMode mode);

// Supplies the vocabulary for shared-mode containers, keyed by content hash.
using VocabResolver =
    std::function<std::optional<bpe::Vocabulary>(const std::array<uint8_t, 16>&)>;

std::vector<uint8_t> decompress_container(std::span<const uint8_t> bytes,
                                          const VocabResolver& resolver = {});

// Ablation variants. Raw reports the bare backend ratio; TokenizedOnly and
// Reordered report full containers (embedded vocabulary) with and without
// the frequency mapping.
CompressionReport compress_variant(std::span<const uint8_t> text,
                                   const bpe::Vocabulary& vocab,
                                   backend::Backend backend, Variant variant);

}  // namespace fot::pipeline
