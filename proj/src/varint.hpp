#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

// LEB128 unsigned varints: 7 value bits per byte, little-endian groups,
// MSB set on every byte except the last. Encodings are always minimal and
// the decoder rejects non-minimal forms, so every value has exactly one
// byte representation. Values are capped at 5 bytes (2^35 - 1).
namespace fot::varint {

inline constexpr uint64_t kMaxValue = (uint64_t{1} << 35) - 1;
inline constexpr int kMaxBytes = 5;

int byte_length(uint64_t value);

void encode_one(uint64_t value, std::vector<uint8_t>& out);
std::vector<uint8_t> encode_one(uint64_t value);

struct Decoded {
  uint64_t value;
  size_t next_offset;
};

Decoded decode_one(std::span<const uint8_t> bytes, size_t offset);

std::vector<uint8_t> encode_stream(std::span<const uint32_t> values);
std::vector<uint32_t> decode_stream(std::span<const uint8_t> bytes);

}  // namespace fot::varint
