#include "container.hpp"

#include <cstring>
#include <string>

#include "error.hpp"
#include "varint.hpp"

namespace fot::container {

namespace {

constexpr char kMagic[4] = {'F', 'O', 'T', 'C'};
constexpr uint8_t kFlagVocabEmbedded = 0x01;
constexpr uint8_t kFlagMappingEmbedded = 0x02;

void check(const Container& c) {
  if (c.header.vocab_blob_len != c.vocab_blob.size() ||
      c.header.mapping_blob_len != c.mapping_blob.size()) {
    raise(ErrorKind::InvalidArgument,
          "declared section lengths do not match section sizes");
  }
  if (c.header.vocab_embedded && c.vocab_blob.empty()) {
    raise(ErrorKind::InvalidArgument, "embedded vocabulary blob is empty");
  }
  if (!c.header.vocab_embedded && !c.vocab_blob.empty()) {
    raise(ErrorKind::InvalidArgument, "vocab blob present but not flagged");
  }
  if (!c.header.mapping_embedded && !c.mapping_blob.empty()) {
    raise(ErrorKind::InvalidArgument, "mapping blob present but not flagged");
  }
}

}  // namespace

size_t header_size(const ContainerHeader& h) {
  size_t n = 4 + 1 + 1 + 1;  // magic, version, backend, flags
  n += varint::byte_length(h.original_size);
  n += varint::byte_length(h.token_count);
  n += varint::byte_length(h.vocab_blob_len);
  n += varint::byte_length(h.mapping_blob_len);
  if (!h.vocab_embedded) n += 16;
  return n;
}

std::vector<uint8_t> write_container(const Container& c) {
  check(c);
  std::vector<uint8_t> out;
  out.reserve(header_size(c.header) + c.vocab_blob.size() +
              c.mapping_blob.size() + c.payload.size());
  out.insert(out.end(), kMagic, kMagic + 4);
  out.push_back(c.header.version);
  out.push_back(static_cast<uint8_t>(c.header.backend));
  uint8_t flags = 0;
  if (c.header.vocab_embedded) flags |= kFlagVocabEmbedded;
  if (c.header.mapping_embedded) flags |= kFlagMappingEmbedded;
  out.push_back(flags);
  varint::encode_one(c.header.original_size, out);
  varint::encode_one(c.header.token_count, out);
  varint::encode_one(c.header.vocab_blob_len, out);
  varint::encode_one(c.header.mapping_blob_len, out);
  if (!c.header.vocab_embedded) {
    out.insert(out.end(), c.header.external_vocab_id.begin(),
               c.header.external_vocab_id.end());
  }
  out.insert(out.end(), c.vocab_blob.begin(), c.vocab_blob.end());
  out.insert(out.end(), c.mapping_blob.begin(), c.mapping_blob.end());
  out.insert(out.end(), c.payload.begin(), c.payload.end());
  return out;
}

Container read_container(std::span<const uint8_t> bytes) {
  if (bytes.size() < 7) {
    raise(ErrorKind::Format, "container truncated before header");
  }
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    raise(ErrorKind::Format, "bad container magic");
  }
  Container c;
  c.header.version = bytes[4];
  if (c.header.version != kFormatVersion) {
    raise(ErrorKind::Format, "unsupported container version " +
                                 std::to_string(c.header.version));
  }
  c.header.backend = backend::from_wire(bytes[5]);
  uint8_t flags = bytes[6];
  if ((flags & ~(kFlagVocabEmbedded | kFlagMappingEmbedded)) != 0) {
    raise(ErrorKind::Format,
          "unknown container flag bits " + std::to_string(flags));
  }
  c.header.vocab_embedded = (flags & kFlagVocabEmbedded) != 0;
  c.header.mapping_embedded = (flags & kFlagMappingEmbedded) != 0;
  size_t offset = 7;
  auto read_varint = [&](const char* what) {
    try {
      auto d = varint::decode_one(bytes, offset);
      offset = d.next_offset;
      return d.value;
    } catch (const Error&) {
      raise(ErrorKind::Format, std::string("container truncated in ") + what);
    }
  };
  c.header.original_size = read_varint("original size");
  c.header.token_count = read_varint("token count");
  c.header.vocab_blob_len = read_varint("vocab blob length");
  c.header.mapping_blob_len = read_varint("mapping blob length");
  if (c.header.vocab_embedded && c.header.vocab_blob_len == 0) {
    raise(ErrorKind::Format, "vocab flagged embedded but blob length is zero");
  }
  if (!c.header.vocab_embedded && c.header.vocab_blob_len != 0) {
    raise(ErrorKind::Format, "vocab blob present but not flagged embedded");
  }
  if (!c.header.mapping_embedded && c.header.mapping_blob_len != 0) {
    raise(ErrorKind::Format, "mapping blob present but not flagged embedded");
  }
  if (!c.header.vocab_embedded) {
    if (bytes.size() < offset + 16) {
      raise(ErrorKind::Format, "container truncated in vocabulary hash");
    }
    std::memcpy(c.header.external_vocab_id.data(), bytes.data() + offset, 16);
    offset += 16;
  }
  uint64_t remaining = bytes.size() - offset;
  if (remaining < c.header.vocab_blob_len + c.header.mapping_blob_len) {
    raise(ErrorKind::Format, "container sections exceed file length");
  }
  auto take = [&](uint64_t len) {
    std::vector<uint8_t> v(bytes.begin() + offset, bytes.begin() + offset + len);
    offset += len;
    return v;
  };
  c.vocab_blob = take(c.header.vocab_blob_len);
  c.mapping_blob = take(c.header.mapping_blob_len);
  c.payload.assign(bytes.begin() + offset, bytes.end());
  return c;
}

double overhead_fraction(const Container& c) {
  if (c.header.original_size == 0) {
    raise(ErrorKind::InvalidArgument,
          "overhead undefined for zero original size");
  }
  return static_cast<double>(c.header.vocab_blob_len +
                             c.header.mapping_blob_len) /
         static_cast<double>(c.header.original_size);
}

}  // namespace fot::container
