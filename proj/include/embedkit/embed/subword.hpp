#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace embedkit::embed {

// Hashes character n-grams of a bracketed word ("<word>") into a fixed
// number of buckets. N-grams are taken at codepoint granularity; the
// bracketed whole word is always included as one unit, and duplicate
// n-gram strings are emitted once.
class SubwordIndex {
 public:
  SubwordIndex(int ngram_min, int ngram_max, uint32_t bucket_count);

  // Bucket ids of all subword units of a word.
  std::vector<uint32_t> extract(std::string_view word) const;

  // Distinct subword unit strings (bracketed), for inspection and tests.
  std::vector<std::string> extract_strings(std::string_view word) const;

  // FNV-1a over UTF-8 bytes, reduced modulo bucket_count.
  uint32_t bucket(std::string_view ngram) const;

  uint32_t bucket_count() const { return bucket_count_; }
  int ngram_min() const { return ngram_min_; }
  int ngram_max() const { return ngram_max_; }

 private:
  int ngram_min_;
  int ngram_max_;
  uint32_t bucket_count_;
};

}  // namespace embedkit::embed
