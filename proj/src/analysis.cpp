#include "analysis.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"
#include "pipeline.hpp"
#include "varint.hpp"

namespace fot::analysis {

ZipfFit fit_zipf(const freq::FrequencyTable& counts, uint32_t rank_lo,
                 uint32_t rank_hi) {
  if (rank_lo < 1 || rank_hi < rank_lo) {
    raise(ErrorKind::InvalidArgument, "invalid rank range");
  }
  std::vector<uint64_t> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());

  std::vector<double> xs, ys;
  uint32_t hi = std::min<uint64_t>(rank_hi, sorted.size());
  for (uint32_t r = rank_lo; r <= hi; ++r) {
    uint64_t c = sorted[r - 1];
    if (c == 0) break;  // counts are sorted: the rest are zero too
    xs.push_back(std::log(static_cast<double>(r)));
    ys.push_back(std::log(static_cast<double>(c)));
  }
  if (xs.size() < 10) {
    raise(ErrorKind::InvalidArgument,
          "need at least 10 nonzero ranks in range for a Zipf fit");
  }
  size_t n = xs.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    double dx = xs[i] - mx;
    double dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  ZipfFit fit;
  double slope = sxy / sxx;
  fit.alpha = -slope;
  fit.intercept = my - slope * mx;
  fit.r_squared = (syy == 0) ? 1.0 : (sxy * sxy) / (sxx * syy);
  fit.rank_lo = rank_lo;
  fit.rank_hi = rank_lo + static_cast<uint32_t>(n) - 1;
  return fit;
}

TheoryModel predict_costs(uint64_t vocab_size) {
  if (vocab_size < 1) {
    raise(ErrorKind::InvalidArgument, "vocabulary size must be positive");
  }
  TheoryModel m;
  m.vocab_size = vocab_size;
  if (vocab_size <= 2'000'000) {
    for (uint64_t k = 1; k <= vocab_size; ++k) {
      m.harmonic += 1.0 / static_cast<double>(k);
    }
  } else {
    m.harmonic = std::log(static_cast<double>(vocab_size)) + 0.5772156649;
  }
  // Band masses follow the log-ratio form of the Zipf(1) tail sums, the same
  // arithmetic that produces the 42% / 1.74-byte figures at V = 100k.
  auto band = [&](uint64_t hi) {
    if (vocab_size <= 1) return 1.0;
    double cut = static_cast<double>(std::min<uint64_t>(hi, vocab_size));
    return std::log(cut) / std::log(static_cast<double>(vocab_size));
  };
  if (vocab_size <= 128) {
    m.p_1b = 1.0;
  } else {
    m.p_1b = band(128);
    m.p_2b = band(16384) - m.p_1b;
  }
  m.p_3b_plus = 1.0 - m.p_1b - m.p_2b;
  m.mean_bytes = m.p_1b + 2.0 * m.p_2b + 3.0 * m.p_3b_plus;
  return m;
}

std::array<double, 5> histogram_bytes(const freq::FrequencyTable& counts,
                                      const freq::RankPermutation& perm) {
  if (counts.size() != perm.size()) {
    raise(ErrorKind::InvalidArgument,
          "frequency table and permutation sizes differ");
  }
  std::array<uint64_t, 5> raw{};
  uint64_t total = 0;
  for (uint32_t r = 0; r < perm.size(); ++r) {
    uint64_t c = counts[perm.token_at[r]];
    if (c == 0) continue;
    raw[varint::byte_length(r) - 1] += c;
    total += c;
  }
  if (total == 0) {
    raise(ErrorKind::InvalidArgument, "histogram undefined for empty input");
  }
  std::array<double, 5> out{};
  for (int i = 0; i < 5; ++i) {
    out[i] = static_cast<double>(raw[i]) / static_cast<double>(total);
  }
  return out;
}

double mean_from_histogram(const std::array<double, 5>& hist) {
  double mean = 0;
  for (int i = 0; i < 5; ++i) {
    mean += hist[i] * (i + 1);
  }
  return mean;
}

std::vector<ScalingRow> scaling_study(
    std::span<const uint8_t> text, std::span<const size_t> sizes,
    const bpe::Vocabulary& vocab,
    std::span<const backend::Backend> backends) {
  std::vector<ScalingRow> rows;
  for (size_t size : sizes) {
    if (size > text.size()) {
      raise(ErrorKind::InvalidArgument,
            "prefix size exceeds corpus length");
    }
    auto prefix = text.first(size);
    for (backend::Backend be : backends) {
      ScalingRow row;
      row.size = size;
      row.backend = be;
      row.raw_ratio =
          pipeline::compress_variant(prefix, vocab, be, pipeline::Variant::Raw)
              .ratio_percent;
      row.preprocessed_ratio =
          pipeline::compress_variant(prefix, vocab, be,
                                     pipeline::Variant::Reordered)
              .ratio_percent;
      row.improvement_pp = row.raw_ratio - row.preprocessed_ratio;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace fot::analysis
