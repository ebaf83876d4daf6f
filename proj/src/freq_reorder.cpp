#include "freq_reorder.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "error.hpp"
#include "varint.hpp"

namespace fot::freq {

FrequencyTable count_frequencies(std::span<const uint32_t> ids,
                                 uint32_t vocab_size) {
  FrequencyTable counts(vocab_size, 0);
  for (uint32_t id : ids) {
    if (id >= vocab_size) {
      raise(ErrorKind::InvalidArgument,
            "token id " + std::to_string(id) + " out of range");
    }
    ++counts[id];
  }
  return counts;
}

RankPermutation build_permutation(const FrequencyTable& freq) {
  RankPermutation perm;
  auto n = static_cast<uint32_t>(freq.size());
  perm.token_at.resize(n);
  std::iota(perm.token_at.begin(), perm.token_at.end(), 0);
  std::stable_sort(perm.token_at.begin(), perm.token_at.end(),
                   [&](uint32_t a, uint32_t b) { return freq[a] > freq[b]; });
  perm.rank_of.resize(n);
  for (uint32_t r = 0; r < n; ++r) {
    perm.rank_of[perm.token_at[r]] = r;
  }
  return perm;
}

RankPermutation identity_permutation(uint32_t vocab_size) {
  RankPermutation perm;
  perm.rank_of.resize(vocab_size);
  perm.token_at.resize(vocab_size);
  std::iota(perm.rank_of.begin(), perm.rank_of.end(), 0);
  std::iota(perm.token_at.begin(), perm.token_at.end(), 0);
  return perm;
}

namespace {

std::vector<uint32_t> apply(std::span<const uint32_t> ids,
                            const std::vector<uint32_t>& table) {
  std::vector<uint32_t> out;
  out.reserve(ids.size());
  for (uint32_t id : ids) {
    if (id >= table.size()) {
      raise(ErrorKind::InvalidArgument,
            "token id " + std::to_string(id) + " out of range");
    }
    out.push_back(table[id]);
  }
  return out;
}

}  // namespace

std::vector<uint32_t> remap(std::span<const uint32_t> ids,
                            const RankPermutation& perm) {
  return apply(ids, perm.rank_of);
}

std::vector<uint32_t> unremap(std::span<const uint32_t> ids,
                              const RankPermutation& perm) {
  return apply(ids, perm.token_at);
}

std::vector<uint8_t> serialize_mapping(const RankPermutation& perm) {
  std::vector<uint8_t> out;
  varint::encode_one(perm.token_at.size(), out);
  for (uint32_t id : perm.token_at) {
    varint::encode_one(id, out);
  }
  return out;
}

RankPermutation deserialize_mapping(std::span<const uint8_t> bytes) {
  size_t offset = 0;
  uint64_t count = 0;
  try {
    auto d = varint::decode_one(bytes, offset);
    count = d.value;
    offset = d.next_offset;
  } catch (const Error&) {
    raise(ErrorKind::Format, "truncated mapping entry count");
  }
  if (count > UINT32_MAX) {
    raise(ErrorKind::Format, "mapping entry count exceeds 32 bits");
  }
  RankPermutation perm;
  perm.token_at.reserve(count);
  for (uint64_t i = 0; i < count; ++i) {
    try {
      auto d = varint::decode_one(bytes, offset);
      if (d.value >= count) {
        raise(ErrorKind::Format, "mapping entry out of range");
      }
      perm.token_at.push_back(static_cast<uint32_t>(d.value));
      offset = d.next_offset;
    } catch (const Error& e) {
      raise(ErrorKind::Format,
            "mapping entry " + std::to_string(i) + ": " + e.what());
    }
  }
  if (offset != bytes.size()) {
    raise(ErrorKind::Format, "trailing bytes after mapping entries");
  }
  perm.rank_of.assign(count, UINT32_MAX);
  for (uint32_t r = 0; r < count; ++r) {
    uint32_t id = perm.token_at[r];
    if (perm.rank_of[id] != UINT32_MAX) {
      raise(ErrorKind::Format,
            "mapping is not a bijection: duplicate token id " +
                std::to_string(id));
    }
    perm.rank_of[id] = r;
  }
  return perm;
}

double expected_varint_cost(const FrequencyTable& freq,
                            const RankPermutation& perm) {
  if (freq.size() != perm.size()) {
    raise(ErrorKind::InvalidArgument,
          "frequency table and permutation sizes differ");
  }
  uint64_t total = 0;
  uint64_t bytes = 0;
  for (uint32_t r = 0; r < perm.size(); ++r) {
    uint64_t c = freq[perm.token_at[r]];
    total += c;
    bytes += c * static_cast<uint64_t>(varint::byte_length(r));
  }
  if (total == 0) {
    raise(ErrorKind::InvalidArgument,
          "expected cost undefined for an empty frequency table");
  }
  return static_cast<double>(bytes) / static_cast<double>(total);
}

}  // namespace fot::freq
