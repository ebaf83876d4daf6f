#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "backend.hpp"
#include "bpe.hpp"
#include "freq_reorder.hpp"

namespace fot::analysis {

struct ZipfFit {
  double alpha = 0;       // power-law exponent (negated log-log slope)
  double intercept = 0;   // log-log intercept
  double r_squared = 0;
  uint32_t rank_lo = 0;   // 1-based rank range actually used
  uint32_t rank_hi = 0;
};

// Least-squares fit of log(frequency) against log(rank) over the given
// 1-based rank range, skipping zero counts.
ZipfFit fit_zipf(const freq::FrequencyTable& counts, uint32_t rank_lo = 1,
                 uint32_t rank_hi = 1000);

struct TheoryModel {
  uint64_t vocab_size = 0;
  double harmonic = 0;     // exact H_V
  double p_1b = 0;         // probability mass encoded in 1 varint byte
  double p_2b = 0;
  double p_3b_plus = 0;
  double mean_bytes = 0;   // expected bytes per token
};

// Zipf(alpha = 1) byte-cost prediction for a frequency-ordered stream.
TheoryModel predict_costs(uint64_t vocab_size);

// Fraction of tokens per varint byte length under the given permutation;
// the identity permutation gives the pre-reordering distribution.
std::array<double, 5> histogram_bytes(const freq::FrequencyTable& counts,
                                      const freq::RankPermutation& perm);

double mean_from_histogram(const std::array<double, 5>& hist);

struct ScalingRow {
  size_t size = 0;
  backend::Backend backend = backend::Backend::Deflate9;
  double raw_ratio = 0;
  double preprocessed_ratio = 0;
  double improvement_pp = 0;
};

std::vector<ScalingRow> scaling_study(std::span<const uint8_t> text,
                                      std::span<const size_t> sizes,
                                      const bpe::Vocabulary& vocab,
                                      std::span<const backend::Backend> backends);

}  // namespace fot::analysis
