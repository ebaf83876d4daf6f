#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fot::bpe {

// Byte-level BPE vocabulary. Token ids 0..255 are the raw byte values;
// token 256 + i is the concatenation produced by merges[i].
struct Vocabulary {
  static constexpr uint32_t kBaseSize = 256;

  std::vector<std::string> tokens;
  std::vector<std::pair<uint32_t, uint32_t>> merges;

  uint32_t size() const { return static_cast<uint32_t>(tokens.size()); }
};

struct TrainOptions {
  // Training subsamples a prefix of the corpus beyond this cap.
  size_t max_training_bytes = size_t{50} << 20;
  // When >= 0, the corpus is chunked after every occurrence of this byte
  // and no merge crosses a chunk boundary (so e.g. split_byte = ' ' keeps
  // merges inside words, GPT-tokenizer style). Default: no chunking.
  int split_byte = -1;
};

Vocabulary train(std::span<const uint8_t> corpus, uint32_t target_vocab_size,
                 const TrainOptions& options = {});

std::vector<uint32_t> tokenize(std::span<const uint8_t> text,
                               const Vocabulary& vocab);

std::vector<uint8_t> detokenize(std::span<const uint32_t> ids,
                                const Vocabulary& vocab);

// Vocabulary file: magic "FOTV", version byte, varint merge count, then per
// merge two varint token ids. Token byte strings are rebuilt from the merges.
std::vector<uint8_t> save_vocab(const Vocabulary& vocab);
Vocabulary load_vocab(std::span<const uint8_t> bytes);

// 128-bit identity hash of the serialized vocabulary (used by shared-mode
// containers to name an external vocabulary file).
std::array<uint8_t, 16> content_hash(const Vocabulary& vocab);

}  // namespace fot::bpe
