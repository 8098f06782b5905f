#include "embedkit/embed/subword.hpp"

#include <unordered_set>

#include "embedkit/error.hpp"
#include "embedkit/utf8.hpp"

namespace embedkit::embed {

SubwordIndex::SubwordIndex(int ngram_min, int ngram_max,
                           uint32_t bucket_count)
    : ngram_min_(ngram_min),
      ngram_max_(ngram_max),
      bucket_count_(bucket_count) {
  if (ngram_min < 1 || ngram_min > ngram_max)
    fail("SubwordIndex: need 1 <= ngram_min <= ngram_max");
  if (bucket_count < 1) fail("SubwordIndex: bucket_count must be >= 1");
}

uint32_t SubwordIndex::bucket(std::string_view ngram) const {
  uint32_t h = 2166136261u;
  for (char c : ngram) {
    h ^= static_cast<unsigned char>(c);
    h *= 16777619u;
  }
  return h % bucket_count_;
}

std::vector<std::string> SubwordIndex::extract_strings(
    std::string_view word) const {
  if (word.empty()) fail("SubwordIndex: empty word");
  std::u32string bracketed;
  bracketed.push_back(U'<');
  bracketed += utf8_decode(word);
  bracketed.push_back(U'>');

  std::vector<std::string> units;
  std::unordered_set<std::string> seen;
  auto push = [&](const std::u32string& gram) {
    std::string bytes = utf8_encode(gram);
    if (seen.insert(bytes).second) units.push_back(std::move(bytes));
  };

  const size_t n = bracketed.size();
  for (size_t start = 0; start < n; ++start) {
    for (size_t len = static_cast<size_t>(ngram_min_);
         len <= static_cast<size_t>(ngram_max_) && start + len <= n; ++len) {
      push(bracketed.substr(start, len));
    }
  }
  push(bracketed);  // whole word as one unit, regardless of its length
  return units;
}

std::vector<uint32_t> SubwordIndex::extract(std::string_view word) const {
  std::vector<std::string> units = extract_strings(word);
  std::vector<uint32_t> ids;
  ids.reserve(units.size());
  for (const auto& u : units) ids.push_back(bucket(u));
  return ids;
}

}  // namespace embedkit::embed
