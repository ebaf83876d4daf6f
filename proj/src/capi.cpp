#include "fot.h"

#include <cstring>
#include <new>
#include <string>

#include "analysis.hpp"
#include "bpe.hpp"
#include "container.hpp"
#include "error.hpp"
#include "freq_reorder.hpp"
#include "pipeline.hpp"
#include "wrt.hpp"

struct fot_vocab {
  fot::bpe::Vocabulary impl;
};

namespace {

thread_local std::string g_last_error;

fot_status status_from(fot::ErrorKind kind) {
  using fot::ErrorKind;
  switch (kind) {
    case ErrorKind::InvalidArgument:
      return FOT_ERR_INVALID_ARGUMENT;
    case ErrorKind::Range:
      return FOT_ERR_RANGE;
    case ErrorKind::MalformedStream:
      return FOT_ERR_MALFORMED_STREAM;
    case ErrorKind::Format:
      return FOT_ERR_FORMAT;
    case ErrorKind::Backend:
      return FOT_ERR_BACKEND;
    case ErrorKind::UnsupportedBackend:
      return FOT_ERR_UNSUPPORTED_BACKEND;
    case ErrorKind::VocabResolution:
      return FOT_ERR_VOCAB_RESOLUTION;
    case ErrorKind::Io:
      return FOT_ERR_IO;
  }
  return FOT_ERR_INTERNAL;
}

template <typename F>
fot_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return FOT_OK;
  } catch (const fot::Error& e) {
    g_last_error = e.what();
    return status_from(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return FOT_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FOT_ERR_INTERNAL;
  }
}

fot_status require(bool ok, const char* what) {
  if (ok) return FOT_OK;
  g_last_error = what;
  return FOT_ERR_INVALID_ARGUMENT;
}

uint8_t* copy_out(const std::vector<uint8_t>& data, size_t* out_len) {
  auto* buf = new uint8_t[data.size() > 0 ? data.size() : 1];
  std::memcpy(buf, data.data(), data.size());
  *out_len = data.size();
  return buf;
}

void fill_report(const fot::pipeline::CompressionReport& rep,
                 fot_report* out) {
  if (out == nullptr) return;
  out->original_bytes = rep.original_bytes;
  out->token_count = rep.token_count;
  out->varint_bytes = rep.varint_bytes;
  out->compressed_bytes = rep.compressed_bytes;
  out->metadata_bytes = rep.metadata_bytes;
  out->header_bytes = rep.header_bytes;
  out->t_tokenize_s = rep.t_tokenize;
  out->t_reorder_s = rep.t_reorder;
  out->t_varint_s = rep.t_varint;
  out->t_backend_s = rep.t_backend;
  out->ratio_percent = rep.ratio_percent;
  for (int i = 0; i < 5; ++i) out->varint_hist[i] = rep.varint_hist[i];
}

std::span<const uint8_t> as_span(const uint8_t* data, size_t len) {
  static const uint8_t dummy = 0;
  return {len == 0 ? &dummy : data, len};
}

}  // namespace

extern "C" {

const char* fot_status_name(fot_status status) {
  switch (status) {
    case FOT_OK:
      return "ok";
    case FOT_ERR_INVALID_ARGUMENT:
      return "invalid-argument";
    case FOT_ERR_RANGE:
      return "range";
    case FOT_ERR_MALFORMED_STREAM:
      return "malformed-stream";
    case FOT_ERR_FORMAT:
      return "format";
    case FOT_ERR_BACKEND:
      return "backend";
    case FOT_ERR_UNSUPPORTED_BACKEND:
      return "unsupported-backend";
    case FOT_ERR_VOCAB_RESOLUTION:
      return "vocab-resolution";
    case FOT_ERR_IO:
      return "io";
    case FOT_ERR_INTERNAL:
      return "internal";
  }
  return "unknown";
}

const char* fot_last_error(void) { return g_last_error.c_str(); }

void fot_buffer_free(uint8_t* buffer) { delete[] buffer; }

fot_status fot_vocab_train(const uint8_t* corpus, size_t corpus_len,
                           uint32_t target_vocab_size, int split_byte,
                           fot_vocab** out) {
  if (auto s = require(out != nullptr, "null output pointer")) return s;
  if (auto s = require(corpus != nullptr || corpus_len == 0,
                       "null corpus with nonzero length")) {
    return s;
  }
  if (auto s = require(split_byte >= -1 && split_byte <= 255,
                       "split byte out of range")) {
    return s;
  }
  return guarded([&] {
    fot::bpe::TrainOptions options;
    options.split_byte = split_byte;
    auto* v = new fot_vocab{fot::bpe::train(as_span(corpus, corpus_len),
                                            target_vocab_size, options)};
    *out = v;
  });
}

fot_status fot_vocab_load(const uint8_t* bytes, size_t len, fot_vocab** out) {
  if (auto s = require(out != nullptr && bytes != nullptr, "null pointer")) {
    return s;
  }
  return guarded([&] {
    auto* v = new fot_vocab{fot::bpe::load_vocab(as_span(bytes, len))};
    *out = v;
  });
}

fot_status fot_vocab_save(const fot_vocab* vocab, uint8_t** out,
                          size_t* out_len) {
  if (auto s = require(vocab != nullptr && out != nullptr && out_len != nullptr,
                       "null pointer")) {
    return s;
  }
  return guarded([&] {
    *out = copy_out(fot::bpe::save_vocab(vocab->impl), out_len);
  });
}

uint32_t fot_vocab_size(const fot_vocab* vocab) {
  return vocab == nullptr ? 0 : vocab->impl.size();
}

fot_status fot_vocab_content_hash(const fot_vocab* vocab, uint8_t out[16]) {
  if (auto s = require(vocab != nullptr && out != nullptr, "null pointer")) {
    return s;
  }
  return guarded([&] {
    auto hash = fot::bpe::content_hash(vocab->impl);
    std::memcpy(out, hash.data(), hash.size());
  });
}

void fot_vocab_free(fot_vocab* vocab) { delete vocab; }

fot_status fot_compress(const uint8_t* data, size_t len,
                        const fot_vocab* vocab, fot_backend backend,
                        fot_vocab_mode mode, uint8_t** out, size_t* out_len,
                        fot_report* report) {
  if (auto s = require(vocab != nullptr && out != nullptr && out_len != nullptr,
                       "null pointer")) {
    return s;
  }
  return guarded([&] {
    auto result = fot::pipeline::compress_text(
        as_span(data, len), vocab->impl,
        fot::backend::from_wire(static_cast<uint8_t>(backend)),
        mode == FOT_MODE_SHARED ? fot::pipeline::VocabMode::Shared
                                : fot::pipeline::VocabMode::Embedded);
    fill_report(result.report, report);
    *out = copy_out(result.container, out_len);
  });
}

fot_status fot_decompress(const uint8_t* data, size_t len,
                          const fot_vocab* shared_vocab, uint8_t** out,
                          size_t* out_len) {
  if (auto s = require(data != nullptr && out != nullptr && out_len != nullptr,
                       "null pointer")) {
    return s;
  }
  return guarded([&] {
    fot::pipeline::VocabResolver resolver;
    if (shared_vocab != nullptr) {
      const fot::bpe::Vocabulary& v = shared_vocab->impl;
      resolver = [&v](const std::array<uint8_t, 16>& id)
          -> std::optional<fot::bpe::Vocabulary> {
        if (fot::bpe::content_hash(v) != id) return std::nullopt;
        return v;
      };
    }
    auto text =
        fot::pipeline::decompress_container(as_span(data, len), resolver);
    *out = copy_out(text, out_len);
  });
}

fot_status fot_compress_variant(const uint8_t* data, size_t len,
                                const fot_vocab* vocab, fot_backend backend,
                                fot_variant variant, fot_report* report) {
  if (auto s = require(report != nullptr, "null report pointer")) return s;
  if (auto s = require(variant == FOT_VARIANT_RAW || vocab != nullptr,
                       "null vocabulary")) {
    return s;
  }
  return guarded([&] {
    static const fot::bpe::Vocabulary empty_vocab;
    const fot::bpe::Vocabulary& v =
        vocab != nullptr ? vocab->impl : empty_vocab;
    fot::pipeline::Variant var =
        variant == FOT_VARIANT_RAW ? fot::pipeline::Variant::Raw
        : variant == FOT_VARIANT_TOKENIZED
            ? fot::pipeline::Variant::TokenizedOnly
            : fot::pipeline::Variant::Reordered;
    auto rep = fot::pipeline::compress_variant(
        as_span(data, len), v,
        fot::backend::from_wire(static_cast<uint8_t>(backend)), var);
    fill_report(rep, report);
  });
}

fot_status fot_container_peek(const uint8_t* data, size_t len,
                              fot_container_info* info) {
  if (auto s = require(data != nullptr && info != nullptr, "null pointer")) {
    return s;
  }
  return guarded([&] {
    auto c = fot::container::read_container(as_span(data, len));
    info->version = c.header.version;
    info->backend_code = static_cast<uint8_t>(c.header.backend);
    info->vocab_embedded = c.header.vocab_embedded ? 1 : 0;
    info->mapping_embedded = c.header.mapping_embedded ? 1 : 0;
    info->original_size = c.header.original_size;
    info->token_count = c.header.token_count;
    info->vocab_blob_len = c.header.vocab_blob_len;
    info->mapping_blob_len = c.header.mapping_blob_len;
    std::memcpy(info->external_vocab_id, c.header.external_vocab_id.data(), 16);
  });
}

fot_status fot_wrt_report(const uint8_t* data, size_t len, fot_backend backend,
                          fot_report* report) {
  if (auto s = require(report != nullptr, "null report pointer")) return s;
  return guarded([&] {
    auto rep = fot::wrt::wrt_ratio(
        as_span(data, len),
        fot::backend::from_wire(static_cast<uint8_t>(backend)));
    fill_report(rep, report);
  });
}

fot_status fot_predict_costs(uint64_t vocab_size, fot_theory_model* out) {
  if (auto s = require(out != nullptr, "null output pointer")) return s;
  return guarded([&] {
    auto m = fot::analysis::predict_costs(vocab_size);
    out->vocab_size = m.vocab_size;
    out->harmonic = m.harmonic;
    out->p_1b = m.p_1b;
    out->p_2b = m.p_2b;
    out->p_3b_plus = m.p_3b_plus;
    out->mean_bytes = m.mean_bytes;
  });
}

fot_status fot_analyze(const uint8_t* data, size_t len, const fot_vocab* vocab,
                       uint32_t rank_lo, uint32_t rank_hi, fot_zipf_fit* fit,
                       fot_histogram_shift* shift) {
  if (auto s = require(vocab != nullptr, "null vocabulary")) return s;
  return guarded([&] {
    auto ids = fot::bpe::tokenize(as_span(data, len), vocab->impl);
    auto counts = fot::freq::count_frequencies(ids, vocab->impl.size());
    if (fit != nullptr) {
      auto f = fot::analysis::fit_zipf(counts, rank_lo, rank_hi);
      fit->alpha = f.alpha;
      fit->intercept = f.intercept;
      fit->r_squared = f.r_squared;
      fit->rank_lo = f.rank_lo;
      fit->rank_hi = f.rank_hi;
    }
    if (shift != nullptr) {
      auto identity = fot::freq::identity_permutation(vocab->impl.size());
      auto ordered = fot::freq::build_permutation(counts);
      auto before = fot::analysis::histogram_bytes(counts, identity);
      auto after = fot::analysis::histogram_bytes(counts, ordered);
      for (int i = 0; i < 5; ++i) {
        shift->before[i] = before[i];
        shift->after[i] = after[i];
      }
      shift->mean_before = fot::analysis::mean_from_histogram(before);
      shift->mean_after = fot::analysis::mean_from_histogram(after);
    }
  });
}

}  // extern "C"
