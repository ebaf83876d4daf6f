#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace fot::backend {

// Final-stage general-purpose compressors. Wire codes are frozen: they are
// written into container headers and must never be reassigned.
enum class Backend : uint8_t {
  Deflate9 = 1,  // zlib stream format, level 9
  Zstd22 = 2,    // zstd frame, level 22
  Lzma = 3,      // xz stream, preset 6
  External = 0x7F,
};

const char* name(Backend backend);
Backend from_wire(uint8_t code);
Backend from_name(std::string_view name);

std::vector<uint8_t> compress(Backend backend, std::span<const uint8_t> data);
std::vector<uint8_t> decompress(Backend backend,
                                std::span<const uint8_t> data);

struct TimedResult {
  std::vector<uint8_t> data;
  double wall_seconds;
};

TimedResult timed_compress(Backend backend, std::span<const uint8_t> data);
TimedResult timed_decompress(Backend backend, std::span<const uint8_t> data);

// The external backend pipes data through user-supplied shell commands
// (FOT_EXTERNAL_COMPRESS / FOT_EXTERNAL_DECOMPRESS): raw bytes on stdin,
// raw bytes on stdout, nonzero exit reported as a backend error.
bool external_configured();

}  // namespace fot::backend
