#include "pipeline.hpp"

#include <chrono>
#include <string>

#include "error.hpp"
#include "freq_reorder.hpp"
#include "varint.hpp"

namespace fot::pipeline {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename F>
auto stage(const char* label, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    raise(e.kind(), std::string(label) + ": " + e.what());
  }
}

std::array<uint64_t, 5> length_histogram(const freq::FrequencyTable& counts,
                                         const freq::RankPermutation& perm) {
  std::array<uint64_t, 5> hist{};
  for (uint32_t r = 0; r < perm.size(); ++r) {
    uint64_t c = counts[perm.token_at[r]];
    if (c == 0) continue;
    hist[varint::byte_length(r) - 1] += c;
  }
  return hist;
}

CompressResult run_pipeline(std::span<const uint8_t> text,
                            const bpe::Vocabulary& vocab,
                            backend::Backend be, VocabMode mode,
                            bool reorder) {
  CompressResult result;
  CompressionReport& rep = result.report;
  rep.original_bytes = text.size();

  auto t0 = Clock::now();
  std::vector<uint32_t> ids =
      stage("tokenize", [&] { return bpe::tokenize(text, vocab); });
  rep.t_tokenize = seconds_since(t0);
  rep.token_count = ids.size();

  auto t1 = Clock::now();
  freq::FrequencyTable counts = stage(
      "count", [&] { return freq::count_frequencies(ids, vocab.size()); });
  freq::RankPermutation perm = reorder ? freq::build_permutation(counts)
                                       : freq::identity_permutation(vocab.size());
  std::vector<uint32_t> remapped =
      reorder ? freq::remap(ids, perm) : std::move(ids);
  rep.t_reorder = seconds_since(t1);

  auto t2 = Clock::now();
  std::vector<uint8_t> stream =
      stage("varint", [&] { return varint::encode_stream(remapped); });
  rep.t_varint = seconds_since(t2);
  rep.varint_bytes = stream.size();
  rep.varint_hist = length_histogram(counts, perm);

  auto t3 = Clock::now();
  container::Container c;
  c.header.backend = be;
  c.header.original_size = text.size();
  c.header.token_count = rep.token_count;
  c.payload = stage("backend", [&] { return backend::compress(be, stream); });
  if (mode == VocabMode::Embedded) {
    c.header.vocab_embedded = true;
    c.vocab_blob = stage("backend", [&] {
      return backend::compress(be, bpe::save_vocab(vocab));
    });
  } else {
    c.header.vocab_embedded = false;
    c.header.external_vocab_id = bpe::content_hash(vocab);
  }
  if (reorder) {
    c.header.mapping_embedded = true;
    c.mapping_blob = stage("backend", [&] {
      return backend::compress(be, freq::serialize_mapping(perm));
    });
  }
  rep.t_backend = seconds_since(t3);

  c.header.vocab_blob_len = c.vocab_blob.size();
  c.header.mapping_blob_len = c.mapping_blob.size();
  rep.compressed_bytes = c.payload.size();
  rep.metadata_bytes = c.vocab_blob.size() + c.mapping_blob.size();
  rep.header_bytes = container::header_size(c.header);
  if (rep.original_bytes > 0) {
    rep.ratio_percent =
        100.0 *
        static_cast<double>(rep.compressed_bytes + rep.metadata_bytes +
                            rep.header_bytes) /
        static_cast<double>(rep.original_bytes);
  }
  result.container = container::write_container(c);
  return result;
}

}  // namespace

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::Raw:
      return "raw";
    case Variant::TokenizedOnly:
      return "tokenized";
    case Variant::Reordered:
      return "reordered";
  }
  return "unknown";
}

Variant variant_from_name(std::string_view n) {
  if (n == "raw") return Variant::Raw;
  if (n == "tokenized" || n == "tokenized-only") return Variant::TokenizedOnly;
  if (n == "reordered") return Variant::Reordered;
  raise(ErrorKind::InvalidArgument,
        "unknown pipeline variant '" + std::string(n) + "'");
}

CompressResult compress_text(std::span<const uint8_t> text,
                             const bpe::Vocabulary& vocab,
                             backend::Backend backend, VocabMode mode) {
  return run_pipeline(text, vocab, backend, mode, /*reorder=*/true);
}

std::vector<uint8_t> decompress_container(std::span<const uint8_t> bytes,
                                          const VocabResolver& resolver) {
  container::Container c =
      stage("container", [&] { return container::read_container(bytes); });
  backend::Backend be = c.header.backend;

  bpe::Vocabulary vocab;
  if (c.header.vocab_embedded) {
    std::vector<uint8_t> raw = stage(
        "backend", [&] { return backend::decompress(be, c.vocab_blob); });
    vocab = stage("vocab", [&] { return bpe::load_vocab(raw); });
  } else {
    std::optional<bpe::Vocabulary> resolved;
    if (resolver) resolved = resolver(c.header.external_vocab_id);
    if (!resolved) {
      raise(ErrorKind::VocabResolution,
            "shared-mode container references a vocabulary that could not be "
            "resolved");
    }
    vocab = std::move(*resolved);
  }

  freq::RankPermutation perm;
  if (c.header.mapping_embedded) {
    std::vector<uint8_t> raw = stage(
        "backend", [&] { return backend::decompress(be, c.mapping_blob); });
    perm = stage("mapping", [&] { return freq::deserialize_mapping(raw); });
    if (perm.size() != vocab.size()) {
      raise(ErrorKind::Format, "mapping size does not match vocabulary size");
    }
  } else {
    perm = freq::identity_permutation(vocab.size());
  }

  std::vector<uint8_t> stream =
      stage("backend", [&] { return backend::decompress(be, c.payload); });
  std::vector<uint32_t> remapped =
      stage("varint", [&] { return varint::decode_stream(stream); });
  if (remapped.size() != c.header.token_count) {
    raise(ErrorKind::Format, "decoded token count does not match header");
  }
  std::vector<uint32_t> ids =
      stage("remap", [&] { return freq::unremap(remapped, perm); });
  std::vector<uint8_t> text =
      stage("detokenize", [&] { return bpe::detokenize(ids, vocab); });
  if (text.size() != c.header.original_size) {
    raise(ErrorKind::Format, "decompressed size does not match header");
  }
  return text;
}

CompressionReport compress_variant(std::span<const uint8_t> text,
                                   const bpe::Vocabulary& vocab,
                                   backend::Backend be, Variant variant) {
  if (variant == Variant::Raw) {
    CompressionReport rep;
    rep.original_bytes = text.size();
    auto timed = backend::timed_compress(be, text);
    rep.compressed_bytes = timed.data.size();
    rep.t_backend = timed.wall_seconds;
    if (rep.original_bytes > 0) {
      rep.ratio_percent = 100.0 * static_cast<double>(rep.compressed_bytes) /
                          static_cast<double>(rep.original_bytes);
    }
    return rep;
  }
  bool reorder = (variant == Variant::Reordered);
  return run_pipeline(text, vocab, be, VocabMode::Embedded, reorder).report;
}

}  // namespace fot::pipeline
