#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace embedkit::corpus {

struct VocabEntry {
  std::string token;
  uint64_t count = 0;
};

// Token <-> dense id map. Ids 0 and 1 are reserved for the padding and
// unknown-word entries; every other entry met the min_count threshold at
// build time. Entry order (and therefore id order) is by descending count,
// ties broken lexicographically.
class Vocabulary {
 public:
  static constexpr int32_t kPadId = 0;
  static constexpr int32_t kUnkId = 1;
  static constexpr std::string_view kPadToken = "<pad>";
  static constexpr std::string_view kUnkToken = "<unk>";

  Vocabulary();

  // Appends a non-special entry; used by the builders and loaders.
  void add_entry(std::string token, uint64_t count);

  int32_t size() const { return static_cast<int32_t>(entries_.size()); }

  // Id for a token, or kUnkId when absent.
  int32_t lookup(std::string_view token) const;

  // Id for a token, or nullopt when absent.
  std::optional<int32_t> find(std::string_view token) const;

  const std::string& token(int32_t id) const { return entries_[id].token; }
  uint64_t count(int32_t id) const { return entries_[id].count; }
  const std::vector<VocabEntry>& entries() const { return entries_; }

  uint64_t min_count() const { return min_count_; }
  void set_min_count(uint64_t m) { min_count_ = m; }

  // Sum of counts of non-special entries.
  uint64_t total_count() const;

  static bool is_special(int32_t id) { return id == kPadId || id == kUnkId; }

 private:
  std::vector<VocabEntry> entries_;
  std::unordered_map<std::string, int32_t> index_;
  uint64_t min_count_ = 0;
};

// Counts tokens and keeps those with count >= min_count, ordered by
// descending count then lexicographically. Tokens equal to the reserved
// <pad>/<unk> literals are ignored.
Vocabulary build_vocab(const std::vector<std::string>& tokens,
                       uint64_t min_count);
Vocabulary build_vocab_from_counts(
    const std::unordered_map<std::string, uint64_t>& counts,
    uint64_t min_count);

// Fixed-length id sequence fed to the classifiers.
struct EncodedSequence {
  std::vector<int32_t> ids;   // length == max_len, tail padded with kPadId
  int32_t true_length = 0;    // tokens before padding
};

// Maps tokens to ids (unknown -> kUnkId), truncates to max_len and pads.
EncodedSequence encode(const std::vector<std::string>& tokens,
                       const Vocabulary& vocab, int32_t max_len);

// Inverse of encode for the non-padded prefix.
std::vector<std::string> decode(const EncodedSequence& seq,
                                const Vocabulary& vocab);

}  // namespace embedkit::corpus
