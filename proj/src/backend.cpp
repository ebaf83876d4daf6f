#include "backend.hpp"

#include <lzma.h>
#include <zlib.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include "error.hpp"
#include "zstd_shim.h"

namespace fot::backend {

namespace {

[[noreturn]] void backend_error(Backend b, const std::string& what) {
  raise(ErrorKind::Backend, std::string(name(b)) + ": " + what);
}

const uint8_t* nonnull(std::span<const uint8_t> data) {
  static const uint8_t dummy = 0;
  return data.empty() ? &dummy : data.data();
}

std::vector<uint8_t> deflate_compress(std::span<const uint8_t> data) {
  uLongf bound = compressBound(static_cast<uLong>(data.size()));
  std::vector<uint8_t> out(bound);
  int rc = compress2(out.data(), &bound, nonnull(data),
                     static_cast<uLong>(data.size()), Z_BEST_COMPRESSION);
  if (rc != Z_OK) {
    backend_error(Backend::Deflate9, "compress2 failed with code " +
                                         std::to_string(rc));
  }
  out.resize(bound);
  return out;
}

std::vector<uint8_t> deflate_decompress(std::span<const uint8_t> data) {
  z_stream strm{};
  if (inflateInit(&strm) != Z_OK) {
    backend_error(Backend::Deflate9, "inflateInit failed");
  }
  strm.next_in = const_cast<Bytef*>(nonnull(data));
  strm.avail_in = static_cast<uInt>(data.size());
  std::vector<uint8_t> out;
  std::vector<uint8_t> chunk(256 * 1024);
  int rc = Z_OK;
  do {
    strm.next_out = chunk.data();
    strm.avail_out = static_cast<uInt>(chunk.size());
    rc = inflate(&strm, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END && rc != Z_BUF_ERROR) {
      inflateEnd(&strm);
      backend_error(Backend::Deflate9,
                    "corrupt deflate stream (code " + std::to_string(rc) + ")");
    }
    out.insert(out.end(), chunk.data(),
               chunk.data() + (chunk.size() - strm.avail_out));
    if (rc == Z_BUF_ERROR && strm.avail_in == 0) {
      inflateEnd(&strm);
      backend_error(Backend::Deflate9, "truncated deflate stream");
    }
  } while (rc != Z_STREAM_END);
  bool trailing = strm.avail_in != 0;
  inflateEnd(&strm);
  if (trailing) {
    backend_error(Backend::Deflate9, "trailing bytes after deflate stream");
  }
  return out;
}

std::vector<uint8_t> zstd_compress(std::span<const uint8_t> data) {
  size_t bound = ZSTD_compressBound(data.size());
  std::vector<uint8_t> out(bound);
  size_t written =
      ZSTD_compress(out.data(), bound, nonnull(data), data.size(), 22);
  if (ZSTD_isError(written)) {
    backend_error(Backend::Zstd22, ZSTD_getErrorName(written));
  }
  out.resize(written);
  return out;
}

std::vector<uint8_t> zstd_decompress(std::span<const uint8_t> data) {
  unsigned long long size = ZSTD_getFrameContentSize(data.data(), data.size());
  if (size == ZSTD_CONTENTSIZE_ERROR || size == ZSTD_CONTENTSIZE_UNKNOWN) {
    backend_error(Backend::Zstd22, "not a zstd frame with known content size");
  }
  std::vector<uint8_t> out(size);
  size_t written =
      ZSTD_decompress(out.data(), out.size(), data.data(), data.size());
  if (ZSTD_isError(written)) {
    backend_error(Backend::Zstd22, ZSTD_getErrorName(written));
  }
  if (written != size) {
    backend_error(Backend::Zstd22, "frame content size mismatch");
  }
  return out;
}

std::vector<uint8_t> lzma_compress_buf(std::span<const uint8_t> data) {
  size_t bound = lzma_stream_buffer_bound(data.size());
  std::vector<uint8_t> out(bound);
  size_t out_pos = 0;
  lzma_ret rc = lzma_easy_buffer_encode(
      LZMA_PRESET_DEFAULT, LZMA_CHECK_CRC64, nullptr, nonnull(data), data.size(),
      out.data(), &out_pos, bound);
  if (rc != LZMA_OK) {
    backend_error(Backend::Lzma,
                  "encode failed with code " + std::to_string(rc));
  }
  out.resize(out_pos);
  return out;
}

std::vector<uint8_t> lzma_decompress_buf(std::span<const uint8_t> data) {
  lzma_stream strm = LZMA_STREAM_INIT;
  if (lzma_stream_decoder(&strm, UINT64_MAX, 0) != LZMA_OK) {
    backend_error(Backend::Lzma, "decoder init failed");
  }
  strm.next_in = nonnull(data);
  strm.avail_in = data.size();
  std::vector<uint8_t> out;
  std::vector<uint8_t> chunk(256 * 1024);
  lzma_ret rc = LZMA_OK;
  do {
    strm.next_out = chunk.data();
    strm.avail_out = chunk.size();
    rc = lzma_code(&strm, LZMA_FINISH);
    if (rc != LZMA_OK && rc != LZMA_STREAM_END) {
      lzma_end(&strm);
      backend_error(Backend::Lzma,
                    "corrupt xz stream (code " + std::to_string(rc) + ")");
    }
    out.insert(out.end(), chunk.data(),
               chunk.data() + (chunk.size() - strm.avail_out));
  } while (rc != LZMA_STREAM_END);
  bool trailing = strm.avail_in != 0;
  lzma_end(&strm);
  if (trailing) {
    backend_error(Backend::Lzma, "trailing bytes after xz stream");
  }
  return out;
}

std::vector<uint8_t> run_external(const char* env_var,
                                  std::span<const uint8_t> data) {
  const char* tmpl = std::getenv(env_var);
  if (tmpl == nullptr || tmpl[0] == '\0') {
    raise(ErrorKind::UnsupportedBackend,
          std::string("external backend requires ") + env_var);
  }
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path();
  fs::path in_path = dir / ("fot-ext-in-" + std::to_string(getpid()) + "-" +
                            std::to_string(rand()));
  fs::path out_path = in_path;
  out_path += ".out";
  {
    std::ofstream f(in_path, std::ios::binary);
    f.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
    if (!f) backend_error(Backend::External, "cannot write temp input");
  }
  std::string cmd = std::string(tmpl) + " < " + in_path.string() + " > " +
                    out_path.string();
  int rc = std::system(cmd.c_str());
  std::vector<uint8_t> out;
  if (rc == 0) {
    std::ifstream f(out_path, std::ios::binary);
    out.assign(std::istreambuf_iterator<char>(f),
               std::istreambuf_iterator<char>());
  }
  std::error_code ec;
  fs::remove(in_path, ec);
  fs::remove(out_path, ec);
  if (rc != 0) {
    backend_error(Backend::External,
                  "command exited with status " + std::to_string(rc));
  }
  return out;
}

}  // namespace

const char* name(Backend backend) {
  switch (backend) {
    case Backend::Deflate9:
      return "deflate-9";
    case Backend::Zstd22:
      return "zstd-22";
    case Backend::Lzma:
      return "lzma";
    case Backend::External:
      return "external";
  }
  return "unknown";
}

Backend from_wire(uint8_t code) {
  switch (code) {
    case 1:
      return Backend::Deflate9;
    case 2:
      return Backend::Zstd22;
    case 3:
      return Backend::Lzma;
    case 0x7F:
      return Backend::External;
    default:
      raise(ErrorKind::UnsupportedBackend,
            "unknown backend wire code " + std::to_string(code));
  }
}

Backend from_name(std::string_view n) {
  if (n == "deflate-9" || n == "zlib-9" || n == "deflate") {
    return Backend::Deflate9;
  }
  if (n == "zstd-22" || n == "zstd") return Backend::Zstd22;
  if (n == "lzma" || n == "xz") return Backend::Lzma;
  if (n == "external") return Backend::External;
  raise(ErrorKind::UnsupportedBackend,
        "unknown backend name '" + std::string(n) + "'");
}

std::vector<uint8_t> compress(Backend backend, std::span<const uint8_t> data) {
  switch (backend) {
    case Backend::Deflate9:
      return deflate_compress(data);
    case Backend::Zstd22:
      return zstd_compress(data);
    case Backend::Lzma:
      return lzma_compress_buf(data);
    case Backend::External:
      return run_external("FOT_EXTERNAL_COMPRESS", data);
  }
  raise(ErrorKind::UnsupportedBackend, "unknown backend");
}

std::vector<uint8_t> decompress(Backend backend,
                                std::span<const uint8_t> data) {
  switch (backend) {
    case Backend::Deflate9:
      return deflate_decompress(data);
    case Backend::Zstd22:
      return zstd_decompress(data);
    case Backend::Lzma:
      return lzma_decompress_buf(data);
    case Backend::External:
      return run_external("FOT_EXTERNAL_DECOMPRESS", data);
  }
  raise(ErrorKind::UnsupportedBackend, "unknown backend");
}

TimedResult timed_compress(Backend backend, std::span<const uint8_t> data) {
  auto start = std::chrono::steady_clock::now();
  std::vector<uint8_t> out = compress(backend, data);
  auto stop = std::chrono::steady_clock::now();
  return {std::move(out), std::chrono::duration<double>(stop - start).count()};
}

TimedResult timed_decompress(Backend backend, std::span<const uint8_t> data) {
  auto start = std::chrono::steady_clock::now();
  std::vector<uint8_t> out = decompress(backend, data);
  auto stop = std::chrono::steady_clock::now();
  return {std::move(out), std::chrono::duration<double>(stop - start).count()};
}

bool external_configured() {
  const char* c = std::getenv("FOT_EXTERNAL_COMPRESS");
  const char* d = std::getenv("FOT_EXTERNAL_DECOMPRESS");
  return c != nullptr && c[0] != '\0' && d != nullptr && d[0] != '\0';
}

}  // namespace fot::backend
