#include "embedkit/corpus/vocab.hpp"

#include <algorithm>

#include "embedkit/error.hpp"
#include "embedkit/strutil.hpp"

namespace embedkit::corpus {

Vocabulary::Vocabulary() {
  entries_.push_back({std::string(kPadToken), 0});
  entries_.push_back({std::string(kUnkToken), 0});
  index_.emplace(std::string(kPadToken), kPadId);
  index_.emplace(std::string(kUnkToken), kUnkId);
}

void Vocabulary::add_entry(std::string token, uint64_t count) {
  auto [it, inserted] =
      index_.emplace(token, static_cast<int32_t>(entries_.size()));
  if (!inserted) fail(strformat("duplicate vocabulary token '%s'", token.c_str()));
  entries_.push_back({std::move(token), count});
}

int32_t Vocabulary::lookup(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnkId : it->second;
}

std::optional<int32_t> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

uint64_t Vocabulary::total_count() const {
  uint64_t total = 0;
  for (size_t i = 2; i < entries_.size(); ++i) total += entries_[i].count;
  return total;
}

Vocabulary build_vocab_from_counts(
    const std::unordered_map<std::string, uint64_t>& counts,
    uint64_t min_count) {
  std::vector<std::pair<std::string, uint64_t>> kept;
  kept.reserve(counts.size());
  for (const auto& [token, count] : counts) {
    if (count < min_count) continue;
    if (token == Vocabulary::kPadToken || token == Vocabulary::kUnkToken)
      continue;
    kept.emplace_back(token, count);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  Vocabulary vocab;
  vocab.set_min_count(min_count);
  for (auto& [token, count] : kept) vocab.add_entry(std::move(token), count);
  return vocab;
}

Vocabulary build_vocab(const std::vector<std::string>& tokens,
                       uint64_t min_count) {
  std::unordered_map<std::string, uint64_t> counts;
  for (const auto& t : tokens) ++counts[t];
  return build_vocab_from_counts(counts, min_count);
}

EncodedSequence encode(const std::vector<std::string>& tokens,
                       const Vocabulary& vocab, int32_t max_len) {
  if (max_len < 1) fail("encode: max_len must be >= 1");
  EncodedSequence seq;
  seq.true_length =
      static_cast<int32_t>(std::min<size_t>(tokens.size(), max_len));
  seq.ids.assign(static_cast<size_t>(max_len), Vocabulary::kPadId);
  for (int32_t i = 0; i < seq.true_length; ++i)
    seq.ids[i] = vocab.lookup(tokens[i]);
  return seq;
}

std::vector<std::string> decode(const EncodedSequence& seq,
                                const Vocabulary& vocab) {
  std::vector<std::string> tokens;
  tokens.reserve(seq.true_length);
  for (int32_t i = 0; i < seq.true_length; ++i)
    tokens.push_back(vocab.token(seq.ids[i]));
  return tokens;
}

}  // namespace embedkit::corpus
