#include "varint.hpp"

#include <string>

#include "error.hpp"

namespace fot::varint {

namespace {

void check_range(uint64_t value) {
  if (value > kMaxValue) {
    raise(ErrorKind::Range,
          "varint value " + std::to_string(value) + " exceeds 5-byte cap");
  }
}

}  // namespace

int byte_length(uint64_t value) {
  check_range(value);
  int len = 1;
  while (value >= 128) {
    value >>= 7;
    ++len;
  }
  return len;
}

void encode_one(uint64_t value, std::vector<uint8_t>& out) {
  check_range(value);
  while (value >= 128) {
    out.push_back(static_cast<uint8_t>(value) | 0x80u);
    value >>= 7;
  }
  out.push_back(static_cast<uint8_t>(value));
}

std::vector<uint8_t> encode_one(uint64_t value) {
  std::vector<uint8_t> out;
  encode_one(value, out);
  return out;
}

Decoded decode_one(std::span<const uint8_t> bytes, size_t offset) {
  if (offset >= bytes.size()) {
    raise(ErrorKind::MalformedStream, "varint decode offset out of bounds");
  }
  uint64_t value = 0;
  int shift = 0;
  size_t pos = offset;
  for (;;) {
    if (pos >= bytes.size()) {
      raise(ErrorKind::MalformedStream,
            "truncated varint at offset " + std::to_string(offset));
    }
    if (pos - offset >= static_cast<size_t>(kMaxBytes)) {
      raise(ErrorKind::MalformedStream,
            "varint longer than 5 bytes at offset " + std::to_string(offset));
    }
    uint8_t b = bytes[pos++];
    value |= static_cast<uint64_t>(b & 0x7Fu) << shift;
    if ((b & 0x80u) == 0) {
      // Strict minimality: a multi-byte encoding must not end in a zero group.
      if (pos - offset > 1 && b == 0) {
        raise(ErrorKind::MalformedStream,
              "non-minimal varint at offset " + std::to_string(offset));
      }
      return {value, pos};
    }
    shift += 7;
  }
}

std::vector<uint8_t> encode_stream(std::span<const uint32_t> values) {
  std::vector<uint8_t> out;
  out.reserve(values.size());
  for (uint32_t v : values) {
    encode_one(v, out);
  }
  return out;
}

std::vector<uint32_t> decode_stream(std::span<const uint8_t> bytes) {
  std::vector<uint32_t> out;
  size_t offset = 0;
  size_t index = 0;
  while (offset < bytes.size()) {
    try {
      Decoded d = decode_one(bytes, offset);
      if (d.value > UINT32_MAX) {
        raise(ErrorKind::MalformedStream, "token id exceeds 32 bits");
      }
      out.push_back(static_cast<uint32_t>(d.value));
      offset = d.next_offset;
    } catch (const Error& e) {
      raise(e.kind(), "element " + std::to_string(index) + ": " + e.what());
    }
    ++index;
  }
  return out;
}

}  // namespace fot::varint
