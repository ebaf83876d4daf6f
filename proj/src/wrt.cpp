#include "wrt.hpp"

#include <algorithm>
#include <chrono>
#include <unordered_map>

#include "error.hpp"
#include "varint.hpp"

namespace fot::wrt {

namespace {

constexpr uint8_t kEscape = 0xFF;

bool is_word_byte(uint8_t b) {
  return (b >= 'a' && b <= 'z') || (b >= 'A' && b <= 'Z');
}

}  // namespace

// Valid wire codes are the values whose minimal LEB128 encoding does not
// start with 0xFF, i.e. everything except {v > 127 : v mod 128 == 127}.
uint64_t code_for_rank(uint64_t rank) {
  if (rank < 128) return rank;
  uint64_t rest = rank - 128;
  return 128 * (rest / 127 + 1) + rest % 127;
}

uint64_t rank_for_code(uint64_t code) {
  if (code < 128) return code;
  if (code % 128 == 127) {
    raise(ErrorKind::Format, "reserved word code " + std::to_string(code));
  }
  return 128 + (code / 128 - 1) * 127 + code % 128;
}

Encoded wrt_encode(std::span<const uint8_t> text) {
  struct Stat {
    uint64_t count = 0;
    uint64_t first_seen = 0;
  };
  std::unordered_map<std::string, Stat> stats;
  uint64_t word_index = 0;
  size_t i = 0;
  while (i < text.size()) {
    if (!is_word_byte(text[i])) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < text.size() && is_word_byte(text[j])) ++j;
    std::string word(text.begin() + i, text.begin() + j);
    auto [it, inserted] = stats.try_emplace(std::move(word));
    if (inserted) it->second.first_seen = word_index;
    ++it->second.count;
    ++word_index;
    i = j;
  }

  Encoded out;
  out.dict.words.reserve(stats.size());
  for (const auto& [word, stat] : stats) {
    out.dict.words.push_back(word);
  }
  std::sort(out.dict.words.begin(), out.dict.words.end(),
            [&](const std::string& a, const std::string& b) {
              const Stat& sa = stats.at(a);
              const Stat& sb = stats.at(b);
              if (sa.count != sb.count) return sa.count > sb.count;
              return sa.first_seen < sb.first_seen;
            });
  std::unordered_map<std::string, uint64_t> rank;
  rank.reserve(out.dict.words.size());
  for (uint64_t r = 0; r < out.dict.words.size(); ++r) {
    rank.emplace(out.dict.words[r], r);
  }

  i = 0;
  while (i < text.size()) {
    if (is_word_byte(text[i])) {
      size_t j = i;
      while (j < text.size() && is_word_byte(text[j])) ++j;
      std::string word(text.begin() + i, text.begin() + j);
      varint::encode_one(code_for_rank(rank.at(word)), out.stream);
      i = j;
    } else {
      size_t j = i;
      while (j < text.size() && !is_word_byte(text[j])) ++j;
      out.stream.push_back(kEscape);
      varint::encode_one(j - i, out.stream);
      out.stream.insert(out.stream.end(), text.begin() + i, text.begin() + j);
      i = j;
    }
  }
  return out;
}

std::vector<uint8_t> wrt_decode(const WordDictionary& dict,
                                std::span<const uint8_t> stream) {
  std::vector<uint8_t> out;
  size_t offset = 0;
  while (offset < stream.size()) {
    if (stream[offset] == kEscape) {
      ++offset;
      uint64_t len = 0;
      try {
        auto d = varint::decode_one(stream, offset);
        len = d.value;
        offset = d.next_offset;
      } catch (const Error&) {
        raise(ErrorKind::Format, "truncated literal frame length");
      }
      if (offset + len > stream.size()) {
        raise(ErrorKind::Format, "truncated literal frame");
      }
      out.insert(out.end(), stream.begin() + offset,
                 stream.begin() + offset + len);
      offset += len;
    } else {
      uint64_t code = 0;
      try {
        auto d = varint::decode_one(stream, offset);
        code = d.value;
        offset = d.next_offset;
      } catch (const Error&) {
        raise(ErrorKind::Format, "truncated word code");
      }
      uint64_t rank = rank_for_code(code);
      if (rank >= dict.words.size()) {
        raise(ErrorKind::Format,
              "word rank " + std::to_string(rank) + " out of dictionary range");
      }
      const std::string& word = dict.words[rank];
      out.insert(out.end(), word.begin(), word.end());
    }
  }
  return out;
}

std::vector<uint8_t> serialize_dictionary(const WordDictionary& dict) {
  std::vector<uint8_t> out;
  varint::encode_one(dict.words.size(), out);
  for (const std::string& word : dict.words) {
    varint::encode_one(word.size(), out);
    out.insert(out.end(), word.begin(), word.end());
  }
  return out;
}

pipeline::CompressionReport wrt_ratio(std::span<const uint8_t> text,
                                      backend::Backend be) {
  using Clock = std::chrono::steady_clock;
  pipeline::CompressionReport rep;
  rep.original_bytes = text.size();

  auto t0 = Clock::now();
  Encoded enc = wrt_encode(text);
  rep.t_tokenize = std::chrono::duration<double>(Clock::now() - t0).count();
  rep.varint_bytes = enc.stream.size();

  // Histogram and token count cover the word codes only; literal frames
  // have no analogue in the main pipeline's report.
  size_t offset = 0;
  while (offset < enc.stream.size()) {
    if (enc.stream[offset] == kEscape) {
      auto d = varint::decode_one(enc.stream, offset + 1);
      offset = d.next_offset + d.value;
    } else {
      auto d = varint::decode_one(enc.stream, offset);
      ++rep.token_count;
      ++rep.varint_hist[d.next_offset - offset - 1];
      offset = d.next_offset;
    }
  }

  auto compressed = backend::timed_compress(be, enc.stream);
  rep.compressed_bytes = compressed.data.size();
  rep.t_backend = compressed.wall_seconds;
  rep.metadata_bytes =
      backend::compress(be, serialize_dictionary(enc.dict)).size();
  if (rep.original_bytes > 0) {
    rep.ratio_percent = 100.0 *
                        static_cast<double>(rep.compressed_bytes +
                                            rep.metadata_bytes) /
                        static_cast<double>(rep.original_bytes);
  }
  return rep;
}

}  // namespace fot::wrt
