#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "backend.hpp"
#include "pipeline.hpp"

namespace fot::wrt {

// Word Replacing Transform baseline: words (maximal ASCII letter runs) are
// replaced by varint codes of their frequency rank; everything else travels
// in literal frames introduced by 0xFF. Codes whose leading varint byte
// would collide with the 0xFF frame marker are skipped by the rank-to-code
// mapping, so the stream stays self-delimiting on arbitrary input.
struct WordDictionary {
  std::vector<std::string> words;  // rank order: frequency desc, first-seen asc
};

struct Encoded {
  WordDictionary dict;
  std::vector<uint8_t> stream;
};

Encoded wrt_encode(std::span<const uint8_t> text);
std::vector<uint8_t> wrt_decode(const WordDictionary& dict,
                                std::span<const uint8_t> stream);

std::vector<uint8_t> serialize_dictionary(const WordDictionary& dict);

// Full-baseline measurement: encode, compress stream and dictionary with the
// backend, report a ratio that includes the dictionary overhead.
pipeline::CompressionReport wrt_ratio(std::span<const uint8_t> text,
                                      backend::Backend backend);

// Rank <-> wire code mapping (exposed for tests).
uint64_t code_for_rank(uint64_t rank);
uint64_t rank_for_code(uint64_t code);

}  // namespace fot::wrt
