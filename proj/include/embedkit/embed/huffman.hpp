#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace embedkit::embed {

// Prefix-free binary code for one word: bits[i] is the branch taken at
// internal node path[i], walking from the root.
struct HuffmanCode {
  std::vector<uint8_t> bits;
  std::vector<int32_t> path;
};

// Huffman tree over word frequencies. Words are indexed 0..n-1 in the
// order of the given counts; a tree over n words has n-1 internal nodes.
class HuffmanTree {
 public:
  explicit HuffmanTree(std::span<const uint64_t> counts);

  const HuffmanCode& code(int32_t word) const { return codes_[word]; }
  int32_t word_count() const { return static_cast<int32_t>(codes_.size()); }
  int32_t internal_count() const { return internal_count_; }

 private:
  std::vector<HuffmanCode> codes_;
  int32_t internal_count_ = 0;
};

}  // namespace embedkit::embed
