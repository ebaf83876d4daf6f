#include "bpe.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstring>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "error.hpp"
#include "varint.hpp"

namespace fot::bpe {

namespace {

constexpr char kMagic[4] = {'F', 'O', 'T', 'V'};
constexpr uint8_t kFormatVersion = 1;

uint64_t pair_key(uint32_t a, uint32_t b) {
  return (static_cast<uint64_t>(a) << 32) | b;
}

// Pair occurrences are counted non-overlapping left-to-right, so a run of n
// identical symbols contributes floor(n/2) pairs. For pairs of distinct
// symbols this equals the plain adjacency count.
struct HeapEntry {
  int64_t count;
  uint64_t pair;
};

struct HeapLess {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    if (a.count != b.count) return a.count < b.count;
    return a.pair > b.pair;  // equal counts: lexicographically smallest pair
  }
};

class Trainer {
public:
  Trainer(std::span<const uint8_t> corpus, uint32_t target, int split_byte)
      : target_(target) {
    size_t n = corpus.size();
    sym_.resize(n);
    prv_.resize(n);
    nxt_.resize(n);
    for (size_t i = 0; i < n; ++i) {
      sym_[i] = corpus[i];
      prv_[i] = static_cast<int64_t>(i) - 1;
      nxt_[i] = (i + 1 < n) ? static_cast<int64_t>(i + 1) : -1;
    }
    if (split_byte >= 0) {
      // Chunk boundaries become hard list breaks, so no pair ever spans one.
      for (size_t i = 0; i + 1 < n; ++i) {
        if (corpus[i] == static_cast<uint8_t>(split_byte)) {
          nxt_[i] = -1;
          prv_[i + 1] = -1;
        }
      }
    }
    count_initial_pairs();
  }

  Vocabulary run() {
    Vocabulary vocab;
    vocab.tokens.reserve(target_);
    for (int i = 0; i < 256; ++i) {
      vocab.tokens.push_back(std::string(1, static_cast<char>(i)));
    }
    while (vocab.size() < target_) {
      int64_t count = 0;
      uint64_t pair = 0;
      if (!pop_best(&count, &pair)) break;
      if (count < 2) break;
      auto a = static_cast<uint32_t>(pair >> 32);
      auto b = static_cast<uint32_t>(pair & 0xFFFFFFFFu);
      uint32_t merged_id = vocab.size();
      vocab.merges.emplace_back(a, b);
      vocab.tokens.push_back(vocab.tokens[a] + vocab.tokens[b]);
      apply_merge(a, b, merged_id);
    }
    return vocab;
  }

private:
  void count_initial_pairs() {
    bool prev_counted = false;
    for (size_t i = 0; i + 1 < sym_.size(); ++i) {
      if (nxt_[i] < 0) {  // chunk boundary
        prev_counted = false;
        continue;
      }
      if (sym_[i] == sym_[i + 1] && i > 0 && sym_[i - 1] == sym_[i] &&
          prv_[i] >= 0 && prev_counted) {
        prev_counted = false;  // overlapping occurrence in an identical run
        continue;
      }
      uint64_t key = pair_key(sym_[i], sym_[i + 1]);
      ++counts_[key];
      positions_[key].push_back(static_cast<int64_t>(i));
      prev_counted = true;
    }
    for (const auto& [key, count] : counts_) {
      if (count >= 2) heap_.push({count, key});
    }
  }

  bool pop_best(int64_t* count, uint64_t* pair) {
    while (!heap_.empty()) {
      HeapEntry top = heap_.top();
      auto it = counts_.find(top.pair);
      int64_t current = (it == counts_.end()) ? 0 : it->second;
      if (current != top.count) {
        heap_.pop();
        if (current >= 2) heap_.push({current, top.pair});
        continue;
      }
      heap_.pop();
      *count = top.count;
      *pair = top.pair;
      return true;
    }
    return false;
  }

  int64_t run_len_left(int64_t p, int64_t s) const {
    int64_t len = 0;
    while (p >= 0 && sym_[p] == s) {
      ++len;
      p = prv_[p];
    }
    return len;
  }

  int64_t run_len_right(int64_t p, int64_t s) const {
    int64_t len = 0;
    while (p >= 0 && sym_[p] == s) {
      ++len;
      p = nxt_[p];
    }
    return len;
  }

  void add_count(uint64_t key, int64_t delta) {
    if (delta == 0) return;
    counts_[key] += delta;
    touched_.push_back(key);
  }

  void add_position(uint64_t key, int64_t pos) {
    positions_[key].push_back(pos);
  }

  void apply_merge(uint32_t a, uint32_t b, uint32_t merged_id) {
    touched_.clear();
    uint64_t key_ab = pair_key(a, b);
    std::vector<int64_t> occ = std::move(positions_[key_ab]);
    positions_.erase(key_ab);
    std::sort(occ.begin(), occ.end());
    if (a != b) {
      for (int64_t p : occ) merge_distinct(a, b, merged_id, p);
    } else {
      for (int64_t p : occ) merge_run(a, merged_id, p);
    }
    counts_.erase(key_ab);
    std::sort(touched_.begin(), touched_.end());
    touched_.erase(std::unique(touched_.begin(), touched_.end()),
                   touched_.end());
    for (uint64_t key : touched_) {
      auto it = counts_.find(key);
      if (it != counts_.end() && it->second >= 2) {
        heap_.push({it->second, key});
      }
    }
  }

  void merge_distinct(uint32_t a, uint32_t b, uint32_t merged_id, int64_t p) {
    if (sym_[p] != static_cast<int64_t>(a)) return;
    int64_t q = nxt_[p];
    if (q < 0 || sym_[q] != static_cast<int64_t>(b)) return;
    int64_t l = prv_[p];
    int64_t r = nxt_[q];
    // Retire neighbor pairs. When the neighbor symbol continues an identical
    // run, the non-overlap convention makes the delta depend on run parity.
    if (l >= 0) {
      int64_t x = sym_[l];
      if (x == static_cast<int64_t>(a)) {
        int64_t m = run_len_left(p, a);
        add_count(pair_key(a, a), (m - 1) / 2 - m / 2);
      } else {
        add_count(pair_key(static_cast<uint32_t>(x), a), -1);
      }
    }
    if (r >= 0) {
      int64_t y = sym_[r];
      if (y == static_cast<int64_t>(b)) {
        int64_t m = run_len_right(q, b);
        add_count(pair_key(b, b), (m - 1) / 2 - m / 2);
      } else {
        add_count(pair_key(b, static_cast<uint32_t>(y)), -1);
      }
    }
    sym_[p] = merged_id;
    sym_[q] = -1;
    nxt_[p] = r;
    if (r >= 0) prv_[r] = p;
    if (l >= 0) {
      int64_t x = sym_[l];
      if (x == static_cast<int64_t>(merged_id)) {
        int64_t m = run_len_left(p, merged_id);
        add_count(pair_key(merged_id, merged_id), m / 2 - (m - 1) / 2);
      } else {
        add_count(pair_key(static_cast<uint32_t>(x), merged_id), 1);
      }
      add_position(pair_key(static_cast<uint32_t>(sym_[l]), merged_id), l);
    }
    if (r >= 0) {
      add_count(pair_key(merged_id, static_cast<uint32_t>(sym_[r])), 1);
      add_position(pair_key(merged_id, static_cast<uint32_t>(sym_[r])), p);
    }
  }

  void merge_run(uint32_t a, uint32_t merged_id, int64_t p) {
    if (sym_[p] != static_cast<int64_t>(a)) return;
    int64_t q = nxt_[p];
    if (q < 0 || sym_[q] != static_cast<int64_t>(a)) return;
    // Find the maximal run containing p and rewrite it in one pass.
    int64_t start = p;
    while (prv_[start] >= 0 && sym_[prv_[start]] == static_cast<int64_t>(a)) {
      start = prv_[start];
    }
    std::vector<int64_t> nodes;
    for (int64_t cur = start;
         cur >= 0 && sym_[cur] == static_cast<int64_t>(a); cur = nxt_[cur]) {
      nodes.push_back(cur);
    }
    int64_t m = static_cast<int64_t>(nodes.size());
    int64_t k = m / 2;  // merged tokens produced
    bool odd = (m % 2) != 0;
    int64_t l = prv_[start];
    int64_t r = nxt_[nodes.back()];
    add_count(pair_key(a, a), -k);
    if (l >= 0) {
      add_count(pair_key(static_cast<uint32_t>(sym_[l]), a), -1);
      add_count(pair_key(static_cast<uint32_t>(sym_[l]), merged_id), 1);
      add_position(pair_key(static_cast<uint32_t>(sym_[l]), merged_id), l);
    }
    if (r >= 0 && !odd) {
      add_count(pair_key(a, static_cast<uint32_t>(sym_[r])), -1);
    }
    // Rewrite: k merged symbols, then the trailing 'a' when m is odd.
    std::vector<int64_t> kept;
    kept.reserve(k + 1);
    for (int64_t i = 0; i < k; ++i) {
      int64_t first = nodes[2 * i];
      int64_t second = nodes[2 * i + 1];
      sym_[first] = merged_id;
      sym_[second] = -1;
      kept.push_back(first);
    }
    if (odd) kept.push_back(nodes.back());
    for (size_t i = 0; i < kept.size(); ++i) {
      prv_[kept[i]] = (i == 0) ? l : kept[i - 1];
      nxt_[kept[i]] = (i + 1 < kept.size()) ? kept[i + 1] : r;
    }
    if (l >= 0) nxt_[l] = kept.front();
    if (r >= 0) prv_[r] = kept.back();
    add_count(pair_key(merged_id, merged_id), k / 2);
    for (int64_t i = 0; i + 1 < k; ++i) {
      add_position(pair_key(merged_id, merged_id), kept[i]);
    }
    if (odd && k > 0) {
      add_count(pair_key(merged_id, a), 1);
      add_position(pair_key(merged_id, a), kept[k - 1]);
    }
    if (r >= 0 && !odd) {
      add_count(pair_key(merged_id, static_cast<uint32_t>(sym_[r])), 1);
      add_position(pair_key(merged_id, static_cast<uint32_t>(sym_[r])),
                   kept.back());
    }
  }

  uint32_t target_;
  std::vector<int64_t> sym_, prv_, nxt_;
  std::unordered_map<uint64_t, int64_t> counts_;
  std::unordered_map<uint64_t, std::vector<int64_t>> positions_;
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapLess> heap_;
  std::vector<uint64_t> touched_;
};

}  // namespace

Vocabulary train(std::span<const uint8_t> corpus, uint32_t target_vocab_size,
                 const TrainOptions& options) {
  if (target_vocab_size < Vocabulary::kBaseSize) {
    raise(ErrorKind::InvalidArgument,
          "target vocabulary size must be at least 256");
  }
  if (corpus.empty()) {
    // Nothing to learn: the base byte vocabulary is already complete.
    Vocabulary base;
    base.tokens.reserve(Vocabulary::kBaseSize);
    for (uint32_t b = 0; b < Vocabulary::kBaseSize; ++b) {
      base.tokens.emplace_back(1, static_cast<char>(b));
    }
    return base;
  }
  if (corpus.size() > options.max_training_bytes) {
    corpus = corpus.first(options.max_training_bytes);
  }
  Trainer trainer(corpus, target_vocab_size, options.split_byte);
  return trainer.run();
}

std::vector<uint32_t> tokenize(std::span<const uint8_t> text,
                               const Vocabulary& vocab) {
  std::vector<uint32_t> out;
  if (text.empty()) return out;
  size_t n = text.size();

  std::unordered_map<uint64_t, uint32_t> rank_of_pair;
  rank_of_pair.reserve(vocab.merges.size() * 2);
  for (uint32_t i = 0; i < vocab.merges.size(); ++i) {
    rank_of_pair.emplace(
        pair_key(vocab.merges[i].first, vocab.merges[i].second), i);
  }

  std::vector<int32_t> sym(n), prv(n), nxt(n);
  for (size_t i = 0; i < n; ++i) {
    sym[i] = text[i];
    prv[i] = static_cast<int32_t>(i) - 1;
    nxt[i] = (i + 1 < n) ? static_cast<int32_t>(i + 1) : -1;
  }

  // Min-heap of (merge rank, position): merges apply in learned priority
  // order, left-to-right within a rank.
  std::priority_queue<uint64_t, std::vector<uint64_t>, std::greater<>> heap;
  auto push_candidate = [&](int32_t p) {
    int32_t q = nxt[p];
    if (q < 0) return;
    auto it = rank_of_pair.find(pair_key(sym[p], sym[q]));
    if (it != rank_of_pair.end()) {
      heap.push((static_cast<uint64_t>(it->second) << 32) |
                static_cast<uint32_t>(p));
    }
  };
  for (size_t i = 0; i + 1 < n; ++i) {
    push_candidate(static_cast<int32_t>(i));
  }

  while (!heap.empty()) {
    uint64_t entry = heap.top();
    heap.pop();
    auto rank = static_cast<uint32_t>(entry >> 32);
    auto p = static_cast<int32_t>(entry & 0xFFFFFFFFu);
    auto [a, b] = vocab.merges[rank];
    if (sym[p] != static_cast<int32_t>(a)) continue;
    int32_t q = nxt[p];
    if (q < 0 || sym[q] != static_cast<int32_t>(b)) continue;
    sym[p] = static_cast<int32_t>(Vocabulary::kBaseSize + rank);
    sym[q] = -1;
    int32_t r = nxt[q];
    nxt[p] = r;
    if (r >= 0) prv[r] = p;
    if (prv[p] >= 0) push_candidate(prv[p]);
    push_candidate(p);
  }

  for (int32_t p = 0; p >= 0; p = nxt[p]) {
    out.push_back(static_cast<uint32_t>(sym[p]));
  }
  return out;
}

std::vector<uint8_t> detokenize(std::span<const uint32_t> ids,
                                const Vocabulary& vocab) {
  size_t total = 0;
  for (uint32_t id : ids) {
    if (id >= vocab.size()) {
      raise(ErrorKind::InvalidArgument,
            "token id " + std::to_string(id) + " out of range for vocabulary " +
                "of size " + std::to_string(vocab.size()));
    }
    total += vocab.tokens[id].size();
  }
  std::vector<uint8_t> out;
  out.reserve(total);
  for (uint32_t id : ids) {
    const std::string& tok = vocab.tokens[id];
    out.insert(out.end(), tok.begin(), tok.end());
  }
  return out;
}

std::vector<uint8_t> save_vocab(const Vocabulary& vocab) {
  std::vector<uint8_t> out;
  out.insert(out.end(), kMagic, kMagic + 4);
  out.push_back(kFormatVersion);
  varint::encode_one(vocab.merges.size(), out);
  for (const auto& [a, b] : vocab.merges) {
    varint::encode_one(a, out);
    varint::encode_one(b, out);
  }
  return out;
}

Vocabulary load_vocab(std::span<const uint8_t> bytes) {
  if (bytes.size() < 5 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    raise(ErrorKind::Format, "bad vocabulary magic");
  }
  if (bytes[4] != kFormatVersion) {
    raise(ErrorKind::Format,
          "unsupported vocabulary format version " + std::to_string(bytes[4]));
  }
  size_t offset = 5;
  uint64_t merge_count = 0;
  try {
    auto d = varint::decode_one(bytes, offset);
    merge_count = d.value;
    offset = d.next_offset;
  } catch (const Error&) {
    raise(ErrorKind::Format, "truncated vocabulary merge count");
  }
  Vocabulary vocab;
  vocab.tokens.reserve(Vocabulary::kBaseSize + merge_count);
  for (int i = 0; i < 256; ++i) {
    vocab.tokens.push_back(std::string(1, static_cast<char>(i)));
  }
  vocab.merges.reserve(merge_count);
  for (uint64_t i = 0; i < merge_count; ++i) {
    uint64_t a, b;
    try {
      auto da = varint::decode_one(bytes, offset);
      auto db = varint::decode_one(bytes, da.next_offset);
      a = da.value;
      b = db.value;
      offset = db.next_offset;
    } catch (const Error&) {
      raise(ErrorKind::Format,
            "truncated vocabulary merge " + std::to_string(i));
    }
    uint64_t limit = Vocabulary::kBaseSize + i;
    if (a >= limit || b >= limit) {
      raise(ErrorKind::Format,
            "merge " + std::to_string(i) + " references undefined token");
    }
    vocab.merges.emplace_back(static_cast<uint32_t>(a),
                              static_cast<uint32_t>(b));
    vocab.tokens.push_back(vocab.tokens[a] + vocab.tokens[b]);
  }
  if (offset != bytes.size()) {
    raise(ErrorKind::Format, "trailing bytes after vocabulary merges");
  }
  // Note: two tokens may share a byte string (e.g. "ab"+"c" and "a"+"bc");
  // that is legitimate BPE output, so no duplicate check here.
  return vocab;
}

std::array<uint8_t, 16> content_hash(const Vocabulary& vocab) {
  std::vector<uint8_t> bytes = save_vocab(vocab);
  std::array<uint8_t, 16> hash{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), hash.data(), &len, EVP_md5(),
                 nullptr) != 1 ||
      len != hash.size()) {
    raise(ErrorKind::InvalidArgument, "content hash computation failed");
  }
  return hash;
}

}  // namespace fot::bpe
