/* fot — frequency-ordered tokenization compression toolkit.
 *
 * C API of the shared library. All functions return FOT_OK on success or an
 * error code; fot_last_error() holds a thread-local diagnostic for the most
 * recent failure on the calling thread. Buffers returned through uint8_t**
 * are owned by the caller and released with fot_buffer_free().
 */
#ifndef FOT_H
#define FOT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fot_status {
  FOT_OK = 0,
  FOT_ERR_INVALID_ARGUMENT = 1,
  FOT_ERR_RANGE = 2,
  FOT_ERR_MALFORMED_STREAM = 3,
  FOT_ERR_FORMAT = 4,
  FOT_ERR_BACKEND = 5,
  FOT_ERR_UNSUPPORTED_BACKEND = 6,
  FOT_ERR_VOCAB_RESOLUTION = 7,
  FOT_ERR_IO = 8,
  FOT_ERR_INTERNAL = 9,
} fot_status;

/* Wire codes are stable: they appear in container headers. */
typedef enum fot_backend {
  FOT_BACKEND_DEFLATE9 = 1,
  FOT_BACKEND_ZSTD22 = 2,
  FOT_BACKEND_LZMA = 3,
  FOT_BACKEND_EXTERNAL = 0x7F,
} fot_backend;

typedef enum fot_vocab_mode {
  FOT_MODE_EMBEDDED = 0,
  FOT_MODE_SHARED = 1,
} fot_vocab_mode;

typedef enum fot_variant {
  FOT_VARIANT_RAW = 0,
  FOT_VARIANT_TOKENIZED = 1,
  FOT_VARIANT_REORDERED = 2,
} fot_variant;

typedef struct fot_vocab fot_vocab;

typedef struct fot_report {
  uint64_t original_bytes;
  uint64_t token_count;
  uint64_t varint_bytes;
  uint64_t compressed_bytes;
  uint64_t metadata_bytes;
  uint64_t header_bytes;
  double t_tokenize_s;
  double t_reorder_s;
  double t_varint_s;
  double t_backend_s;
  double ratio_percent;
  uint64_t varint_hist[5]; /* tokens taking 1..5 bytes */
} fot_report;

typedef struct fot_container_info {
  uint8_t version;
  uint8_t backend_code;
  int vocab_embedded;
  int mapping_embedded;
  uint64_t original_size;
  uint64_t token_count;
  uint64_t vocab_blob_len;
  uint64_t mapping_blob_len;
  uint8_t external_vocab_id[16]; /* valid iff !vocab_embedded */
} fot_container_info;

typedef struct fot_zipf_fit {
  double alpha;
  double intercept;
  double r_squared;
  uint32_t rank_lo;
  uint32_t rank_hi;
} fot_zipf_fit;

typedef struct fot_theory_model {
  uint64_t vocab_size;
  double harmonic;
  double p_1b;
  double p_2b;
  double p_3b_plus;
  double mean_bytes;
} fot_theory_model;

typedef struct fot_histogram_shift {
  double before[5]; /* token fraction per varint byte length, identity ids */
  double after[5];  /* same, frequency-ordered ids */
  double mean_before;
  double mean_after;
} fot_histogram_shift;

const char* fot_status_name(fot_status status);
const char* fot_last_error(void);
void fot_buffer_free(uint8_t* buffer);

/* Vocabulary lifecycle.
 * split_byte: when in 0..255, training chunks the corpus after every
 * occurrence of that byte and no merge crosses a chunk boundary (e.g. ' '
 * keeps merges inside words). Pass -1 for unrestricted byte-level merging. */
fot_status fot_vocab_train(const uint8_t* corpus, size_t corpus_len,
                           uint32_t target_vocab_size, int split_byte,
                           fot_vocab** out);
fot_status fot_vocab_load(const uint8_t* bytes, size_t len, fot_vocab** out);
fot_status fot_vocab_save(const fot_vocab* vocab, uint8_t** out,
                          size_t* out_len);
uint32_t fot_vocab_size(const fot_vocab* vocab);
fot_status fot_vocab_content_hash(const fot_vocab* vocab, uint8_t out[16]);
void fot_vocab_free(fot_vocab* vocab);

/* Pipeline */
fot_status fot_compress(const uint8_t* data, size_t len,
                        const fot_vocab* vocab, fot_backend backend,
                        fot_vocab_mode mode, uint8_t** out, size_t* out_len,
                        fot_report* report /* nullable */);
fot_status fot_decompress(const uint8_t* data, size_t len,
                          const fot_vocab* shared_vocab /* nullable */,
                          uint8_t** out, size_t* out_len);
fot_status fot_compress_variant(const uint8_t* data, size_t len,
                                const fot_vocab* vocab, fot_backend backend,
                                fot_variant variant, fot_report* report);
fot_status fot_container_peek(const uint8_t* data, size_t len,
                              fot_container_info* info);

/* Baselines and analysis */
fot_status fot_wrt_report(const uint8_t* data, size_t len, fot_backend backend,
                          fot_report* report);
fot_status fot_predict_costs(uint64_t vocab_size, fot_theory_model* out);
fot_status fot_analyze(const uint8_t* data, size_t len, const fot_vocab* vocab,
                       uint32_t rank_lo, uint32_t rank_hi, fot_zipf_fit* fit,
                       fot_histogram_shift* shift);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FOT_H */
