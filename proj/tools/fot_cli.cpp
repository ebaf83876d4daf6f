// Command-line front end for the fot shared library. Everything here goes
// through the public C API; reports are machine-readable CSV on stdout and
// human-readable summaries on stderr.
#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fot.h"

namespace {

namespace fs = std::filesystem;

constexpr const char* kBenchCsvHeader =
    "dataset,size_bytes,variant,backend,original_bytes,token_count,"
    "varint_bytes,compressed_bytes,metadata_bytes,header_bytes,ratio_percent,"
    "t_tokenize_s,t_reorder_s,t_varint_s,t_backend_s,hist1,hist2,hist3,hist4,"
    "hist5";

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(fot_status status, const std::string& context) {
  if (status != FOT_OK) {
    throw CliError(context + ": " + fot_status_name(status) + ": " +
                   fot_last_error());
  }
}

std::vector<uint8_t> read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CliError("cannot open " + path);
  std::vector<uint8_t> data((std::istreambuf_iterator<char>(f)),
                            std::istreambuf_iterator<char>());
  if (f.bad()) throw CliError("error reading " + path);
  return data;
}

void write_file(const std::string& path, const uint8_t* data, size_t len) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw CliError("cannot open " + path + " for writing");
  f.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(len));
  if (!f) throw CliError("error writing " + path);
}

fot_backend backend_from_name(const std::string& name) {
  if (name == "deflate-9" || name == "zlib-9" || name == "deflate") {
    return FOT_BACKEND_DEFLATE9;
  }
  if (name == "zstd-22" || name == "zstd") return FOT_BACKEND_ZSTD22;
  if (name == "lzma" || name == "xz") return FOT_BACKEND_LZMA;
  if (name == "external") return FOT_BACKEND_EXTERNAL;
  throw CLI::ValidationError("unknown backend '" + name + "'");
}

const char* backend_name(fot_backend b) {
  switch (b) {
    case FOT_BACKEND_DEFLATE9:
      return "deflate-9";
    case FOT_BACKEND_ZSTD22:
      return "zstd-22";
    case FOT_BACKEND_LZMA:
      return "lzma";
    case FOT_BACKEND_EXTERNAL:
      return "external";
  }
  return "unknown";
}

class Vocab {
public:
  Vocab() = default;
  explicit Vocab(fot_vocab* v) : v_(v) {}
  ~Vocab() { fot_vocab_free(v_); }
  Vocab(const Vocab&) = delete;
  Vocab& operator=(const Vocab&) = delete;
  Vocab(Vocab&& other) noexcept : v_(other.v_) { other.v_ = nullptr; }
  Vocab& operator=(Vocab&& other) noexcept {
    std::swap(v_, other.v_);
    return *this;
  }
  fot_vocab* get() const { return v_; }

private:
  fot_vocab* v_ = nullptr;
};

Vocab load_vocab_file(const std::string& path) {
  auto bytes = read_file(path);
  fot_vocab* v = nullptr;
  check(fot_vocab_load(bytes.data(), bytes.size(), &v), "loading " + path);
  return Vocab(v);
}

int g_split_byte = -1;  // set by --split-byte

Vocab train_vocab(const std::vector<uint8_t>& corpus, uint32_t size) {
  fot_vocab* v = nullptr;
  check(fot_vocab_train(corpus.data(), corpus.size(), size, g_split_byte, &v),
        "training");
  return Vocab(v);
}

Vocab obtain_vocab(const std::string& vocab_path,
                   const std::vector<uint8_t>& corpus, uint32_t vocab_size) {
  if (!vocab_path.empty()) return load_vocab_file(vocab_path);
  std::cerr << "training " << vocab_size << "-token vocabulary from input\n";
  return train_vocab(corpus, vocab_size);
}

void print_report_row(std::ostream& os, const std::string& dataset,
                      size_t size, const std::string& variant,
                      const std::string& backend, const fot_report& r) {
  os << dataset << ',' << size << ',' << variant << ',' << backend << ','
     << r.original_bytes << ',' << r.token_count << ',' << r.varint_bytes
     << ',' << r.compressed_bytes << ',' << r.metadata_bytes << ','
     << r.header_bytes << ',' << r.ratio_percent << ',' << r.t_tokenize_s
     << ',' << r.t_reorder_s << ',' << r.t_varint_s << ',' << r.t_backend_s;
  for (int i = 0; i < 5; ++i) os << ',' << r.varint_hist[i];
  os << '\n';
}

std::string dataset_name(const std::string& path) {
  return fs::path(path).filename().string();
}

int cmd_train(const std::string& input, uint32_t vocab_size,
              const std::string& output) {
  auto corpus = read_file(input);
  Vocab vocab = train_vocab(corpus, vocab_size);
  uint8_t* bytes = nullptr;
  size_t len = 0;
  check(fot_vocab_save(vocab.get(), &bytes, &len), "saving vocabulary");
  write_file(output, bytes, len);
  fot_buffer_free(bytes);
  std::cerr << "trained vocabulary with " << fot_vocab_size(vocab.get())
            << " tokens -> " << output << '\n';
  return 0;
}

int cmd_compress(const std::string& input, const std::string& output,
                 const std::string& vocab_path, uint32_t vocab_size,
                 const std::string& backend_str, const std::string& mode_str,
                 const std::string& report_path) {
  auto data = read_file(input);
  fot_backend backend = backend_from_name(backend_str);
  fot_vocab_mode mode =
      mode_str == "shared" ? FOT_MODE_SHARED : FOT_MODE_EMBEDDED;
  Vocab vocab = obtain_vocab(vocab_path, data, vocab_size);
  uint8_t* out = nullptr;
  size_t out_len = 0;
  fot_report report{};
  check(fot_compress(data.data(), data.size(), vocab.get(), backend, mode,
                     &out, &out_len, &report),
        "compress");
  write_file(output, out, out_len);
  fot_buffer_free(out);
  if (mode == FOT_MODE_SHARED && vocab_path.empty()) {
    // Self-trained shared-mode vocabularies must be kept for decompression.
    uint8_t* vbytes = nullptr;
    size_t vlen = 0;
    check(fot_vocab_save(vocab.get(), &vbytes, &vlen), "saving vocabulary");
    write_file(output + ".fotv", vbytes, vlen);
    fot_buffer_free(vbytes);
    std::cerr << "shared vocabulary written to " << output << ".fotv\n";
  }
  std::cerr << input << ": " << report.original_bytes << " -> " << out_len
            << " bytes (" << report.ratio_percent << "% incl. metadata)\n";
  if (!report_path.empty()) {
    std::ofstream rf(report_path);
    rf << kBenchCsvHeader << '\n';
    print_report_row(rf, dataset_name(input), data.size(), "reordered",
                     backend_name(backend), report);
  }
  return 0;
}

Vocab resolve_shared_vocab(const fot_container_info& info,
                           const std::string& vocab_dir) {
  if (vocab_dir.empty()) {
    throw CliError(
        "container uses a shared vocabulary: pass --vocab-dir to locate it");
  }
  for (const auto& entry : fs::directory_iterator(vocab_dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".fotv") {
      continue;
    }
    Vocab candidate = load_vocab_file(entry.path().string());
    uint8_t hash[16];
    check(fot_vocab_content_hash(candidate.get(), hash), "hashing vocabulary");
    if (std::equal(hash, hash + 16, info.external_vocab_id)) return candidate;
  }
  throw CliError("no vocabulary in " + vocab_dir +
                 " matches the container's vocabulary hash");
}

int cmd_decompress(const std::string& input, const std::string& output,
                   const std::string& vocab_dir) {
  auto data = read_file(input);
  fot_container_info info{};
  check(fot_container_peek(data.data(), data.size(), &info), "container");
  Vocab shared;
  if (!info.vocab_embedded) {
    shared = resolve_shared_vocab(info, vocab_dir);
  }
  uint8_t* out = nullptr;
  size_t out_len = 0;
  check(fot_decompress(data.data(), data.size(), shared.get(), &out, &out_len),
        "decompress");
  write_file(output, out, out_len);
  fot_buffer_free(out);
  std::cerr << input << ": restored " << out_len << " bytes\n";
  return 0;
}

fot_report best_of(int repeats, const std::function<fot_report()>& run) {
  fot_report best = run();
  for (int i = 1; i < repeats; ++i) {
    fot_report r = run();
    double total_r = r.t_tokenize_s + r.t_reorder_s + r.t_varint_s +
                     r.t_backend_s;
    double total_b = best.t_tokenize_s + best.t_reorder_s + best.t_varint_s +
                     best.t_backend_s;
    if (total_r < total_b) best = r;
  }
  return best;
}

int cmd_bench(const std::string& input, const std::string& vocab_path,
              uint32_t vocab_size, std::vector<std::string> backends,
              std::vector<std::string> variants, std::vector<size_t> sizes,
              int repeats) {
  auto data = read_file(input);
  if (sizes.empty()) sizes.push_back(data.size());
  Vocab vocab = obtain_vocab(vocab_path, data, vocab_size);
  std::cout << kBenchCsvHeader << '\n';
  for (size_t size : sizes) {
    if (size > data.size()) {
      throw CliError("prefix size exceeds input length");
    }
    for (const std::string& variant : variants) {
      for (const std::string& backend_str : backends) {
        fot_backend backend = backend_from_name(backend_str);
        fot_report report{};
        if (variant == "wrt") {
          report = best_of(repeats, [&] {
            fot_report r{};
            check(fot_wrt_report(data.data(), size, backend, &r), "wrt");
            return r;
          });
        } else {
          fot_variant var = variant == "raw"         ? FOT_VARIANT_RAW
                            : variant == "tokenized" ? FOT_VARIANT_TOKENIZED
                                                     : FOT_VARIANT_REORDERED;
          if (variant != "raw" && variant != "tokenized" &&
              variant != "reordered") {
            throw CLI::ValidationError("unknown variant '" + variant + "'");
          }
          report = best_of(repeats, [&] {
            fot_report r{};
            check(fot_compress_variant(data.data(), size, vocab.get(), backend,
                                       var, &r),
                  variant);
            return r;
          });
        }
        print_report_row(std::cout, dataset_name(input), size, variant,
                         backend_name(backend), report);
      }
    }
  }
  return 0;
}

int cmd_ablate(const std::string& input, const std::string& vocab_path,
               uint32_t vocab_size, std::vector<std::string> backends) {
  auto data = read_file(input);
  Vocab vocab = obtain_vocab(vocab_path, data, vocab_size);
  std::cout << "backend,raw_ratio,tokenized_ratio,reordered_ratio,"
               "tokenization_gain_pp,reordering_gain_pp,total_gain_pp\n";
  for (const std::string& backend_str : backends) {
    fot_backend backend = backend_from_name(backend_str);
    fot_report raw{}, tok{}, ord{};
    check(fot_compress_variant(data.data(), data.size(), vocab.get(), backend,
                               FOT_VARIANT_RAW, &raw),
          "raw");
    check(fot_compress_variant(data.data(), data.size(), vocab.get(), backend,
                               FOT_VARIANT_TOKENIZED, &tok),
          "tokenized");
    check(fot_compress_variant(data.data(), data.size(), vocab.get(), backend,
                               FOT_VARIANT_REORDERED, &ord),
          "reordered");
    std::cout << backend_name(backend) << ',' << raw.ratio_percent << ','
              << tok.ratio_percent << ',' << ord.ratio_percent << ','
              << raw.ratio_percent - tok.ratio_percent << ','
              << tok.ratio_percent - ord.ratio_percent << ','
              << raw.ratio_percent - ord.ratio_percent << '\n';
  }
  return 0;
}

int cmd_analyze(const std::string& input, const std::string& vocab_path,
                uint32_t vocab_size, const std::string& rank_range) {
  auto data = read_file(input);
  Vocab vocab = obtain_vocab(vocab_path, data, vocab_size);
  uint32_t lo = 1, hi = 1000;
  if (!rank_range.empty()) {
    if (std::sscanf(rank_range.c_str(), "%u:%u", &lo, &hi) != 2) {
      throw CLI::ValidationError("rank range must look like LO:HI");
    }
  }
  fot_zipf_fit fit{};
  fot_histogram_shift shift{};
  check(fot_analyze(data.data(), data.size(), vocab.get(), lo, hi, &fit,
                    &shift),
        "analyze");
  fot_theory_model theory{};
  check(fot_predict_costs(fot_vocab_size(vocab.get()), &theory), "theory");
  std::cout << "metric,value\n";
  std::cout << "vocab_size," << fot_vocab_size(vocab.get()) << '\n';
  std::cout << "zipf_alpha," << fit.alpha << '\n';
  std::cout << "zipf_intercept," << fit.intercept << '\n';
  std::cout << "zipf_r_squared," << fit.r_squared << '\n';
  std::cout << "zipf_rank_lo," << fit.rank_lo << '\n';
  std::cout << "zipf_rank_hi," << fit.rank_hi << '\n';
  for (int i = 0; i < 5; ++i) {
    std::cout << "hist_before_" << (i + 1) << "b," << shift.before[i] << '\n';
  }
  for (int i = 0; i < 5; ++i) {
    std::cout << "hist_after_" << (i + 1) << "b," << shift.after[i] << '\n';
  }
  std::cout << "empirical_mean_before," << shift.mean_before << '\n';
  std::cout << "empirical_mean_after," << shift.mean_after << '\n';
  std::cout << "theory_p_1b," << theory.p_1b << '\n';
  std::cout << "theory_p_2b," << theory.p_2b << '\n';
  std::cout << "theory_p_3b_plus," << theory.p_3b_plus << '\n';
  std::cout << "theory_mean_bytes," << theory.mean_bytes << '\n';
  std::cout << "harmonic_number," << theory.harmonic << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"frequency-ordered tokenization compression toolkit"};
  app.require_subcommand(1);

  std::string input, output, vocab_path, report_path, vocab_dir;
  std::string backend_str = "zstd-22";
  std::string mode_str = "embedded";
  std::string rank_range;
  uint32_t vocab_size = 32768;
  bool explicit_vocab_size = false;
  std::vector<std::string> backends = {"deflate-9", "zstd-22", "lzma"};
  std::vector<std::string> variants = {"raw", "tokenized", "reordered", "wrt"};
  std::vector<size_t> sizes;
  int repeats = 1;

  auto* train = app.add_subcommand("train", "train a BPE vocabulary");
  train->add_option("--input", input, "corpus file")->required();
  train->add_option("--vocab-size", vocab_size, "target vocabulary size");
  train->add_option("--output", output, "vocabulary file (.fotv)")->required();
  std::string split_byte_str;
  train->add_option("--split-byte", split_byte_str,
                    "chunk training at this byte ('space' or 0-255); merges "
                    "never cross a chunk boundary");

  auto* compress = app.add_subcommand("compress", "compress a file");
  compress->add_option("--input", input, "file to compress")->required();
  compress->add_option("--output", output, "container file (.fotc)")
      ->required();
  auto* compress_vocab =
      compress->add_option("--vocab", vocab_path, "vocabulary file");
  compress
      ->add_option("--train-size", vocab_size,
                   "vocabulary size when training from the input")
      ->excludes(compress_vocab);
  compress->add_option("--backend", backend_str, "deflate-9 | zstd-22 | lzma");
  compress->add_option("--mode", mode_str, "embedded | shared")
      ->check(CLI::IsMember({"embedded", "shared"}));
  compress->add_option("--report", report_path, "write a CSV report here");

  auto* decompress = app.add_subcommand("decompress", "restore a file");
  decompress->add_option("--input", input, "container file")->required();
  decompress->add_option("--output", output, "restored file")->required();
  decompress->add_option("--vocab-dir", vocab_dir,
                         "directory searched for shared vocabularies");

  auto* bench = app.add_subcommand("bench", "benchmark variants x backends");
  bench->add_option("--input", input, "corpus file")->required();
  auto* bench_vocab = bench->add_option("--vocab", vocab_path, "vocabulary");
  bench->add_option("--vocab-size", vocab_size, "trained vocabulary size")
      ->excludes(bench_vocab);
  bench->add_option("--backends", backends, "backends to measure");
  bench->add_option("--variants", variants,
                    "raw | tokenized | reordered | wrt");
  bench->add_option("--sizes", sizes, "prefix sizes (bytes) for scaling runs");
  bench->add_option("--repeats", repeats, "timing repeats, best run kept")
      ->check(CLI::PositiveNumber);

  auto* ablate = app.add_subcommand("ablate", "raw vs tokenized vs reordered");
  ablate->add_option("--input", input, "corpus file")->required();
  auto* ablate_vocab = ablate->add_option("--vocab", vocab_path, "vocabulary");
  ablate->add_option("--vocab-size", vocab_size, "trained vocabulary size")
      ->excludes(ablate_vocab);
  ablate->add_option("--backends", backends, "backends to measure");

  auto* analyze = app.add_subcommand("analyze", "Zipf fit and histograms");
  analyze->add_option("--input", input, "corpus file")->required();
  auto* analyze_vocab =
      analyze->add_option("--vocab", vocab_path, "vocabulary");
  analyze->add_option("--vocab-size", vocab_size, "trained vocabulary size")
      ->excludes(analyze_vocab);
  analyze->add_option("--rank-range", rank_range, "Zipf fit range, LO:HI");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  (void)explicit_vocab_size;
  try {
    if (!split_byte_str.empty()) {
      if (split_byte_str == "space") {
        g_split_byte = ' ';
      } else {
        try {
          g_split_byte = std::stoi(split_byte_str);
        } catch (const std::exception&) {
          g_split_byte = -2;
        }
        if (g_split_byte < 0 || g_split_byte > 255) {
          std::cerr << "usage error: --split-byte wants 'space' or 0-255\n";
          return 2;
        }
      }
    }
    if (train->parsed()) return cmd_train(input, vocab_size, output);
    if (compress->parsed()) {
      return cmd_compress(input, output, vocab_path, vocab_size, backend_str,
                          mode_str, report_path);
    }
    if (decompress->parsed()) return cmd_decompress(input, output, vocab_dir);
    if (bench->parsed()) {
      return cmd_bench(input, vocab_path, vocab_size, backends, variants,
                       sizes, repeats);
    }
    if (ablate->parsed()) {
      return cmd_ablate(input, vocab_path, vocab_size, backends);
    }
    if (analyze->parsed()) {
      return cmd_analyze(input, vocab_path, vocab_size, rank_range);
    }
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
