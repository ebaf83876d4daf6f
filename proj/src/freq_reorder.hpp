#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fot::freq {

// Occurrence counts indexed by token id.
using FrequencyTable = std::vector<uint64_t>;

// Bijection between token ids and frequency ranks: rank 0 is the most
// frequent token. Ties and zero-count tokens order by ascending token id.
struct RankPermutation {
  std::vector<uint32_t> rank_of;   // token id -> rank
  std::vector<uint32_t> token_at;  // rank -> token id

  uint32_t size() const { return static_cast<uint32_t>(token_at.size()); }
};

FrequencyTable count_frequencies(std::span<const uint32_t> ids,
                                 uint32_t vocab_size);

RankPermutation build_permutation(const FrequencyTable& freq);

RankPermutation identity_permutation(uint32_t vocab_size);

std::vector<uint32_t> remap(std::span<const uint32_t> ids,
                            const RankPermutation& perm);
std::vector<uint32_t> unremap(std::span<const uint32_t> ids,
                              const RankPermutation& perm);

// Mapping blob: varint entry count, then token_at entries as varints.
std::vector<uint8_t> serialize_mapping(const RankPermutation& perm);
RankPermutation deserialize_mapping(std::span<const uint8_t> bytes);

// Mean varint bytes per token when the stream is remapped through perm.
double expected_varint_cost(const FrequencyTable& freq,
                            const RankPermutation& perm);

}  // namespace fot::freq
