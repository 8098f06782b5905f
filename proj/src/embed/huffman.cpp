#include "embedkit/embed/huffman.hpp"

#include <algorithm>
#include <numeric>

#include "embedkit/error.hpp"

namespace embedkit::embed {

// Two-queue construction: leaves sorted by ascending count, internal nodes
// created in non-decreasing count order. Ties prefer leaves, then lower
// index, so the tree is fully deterministic.
HuffmanTree::HuffmanTree(std::span<const uint64_t> counts) {
  const int32_t n = static_cast<int32_t>(counts.size());
  if (n == 0) fail("HuffmanTree: empty vocabulary");
  codes_.resize(n);
  internal_count_ = n - 1;
  if (n == 1) return;  // single word: empty code

  std::vector<int32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int32_t a, int32_t b) {
    return counts[a] < counts[b];
  });

  // Nodes 0..n-1 are leaves (word index), n..2n-2 internal.
  struct Node {
    uint64_t count;
    int32_t parent = -1;
    uint8_t bit = 0;
  };
  std::vector<Node> nodes(2 * static_cast<size_t>(n) - 1);
  for (int32_t i = 0; i < n; ++i) nodes[i].count = counts[i];

  size_t leaf_pos = 0;
  size_t internal_pos = static_cast<size_t>(n);
  size_t next_internal = static_cast<size_t>(n);

  auto take_smallest = [&]() -> size_t {
    bool leaf_ok = leaf_pos < order.size();
    bool internal_ok = internal_pos < next_internal;
    size_t leaf = leaf_ok ? static_cast<size_t>(order[leaf_pos]) : 0;
    if (leaf_ok &&
        (!internal_ok || nodes[leaf].count <= nodes[internal_pos].count)) {
      ++leaf_pos;
      return leaf;
    }
    return internal_pos++;
  };

  for (int32_t m = 0; m < n - 1; ++m) {
    size_t a = take_smallest();
    size_t b = take_smallest();
    size_t parent = next_internal++;
    nodes[parent].count = nodes[a].count + nodes[b].count;
    nodes[a].parent = static_cast<int32_t>(parent);
    nodes[a].bit = 0;
    nodes[b].parent = static_cast<int32_t>(parent);
    nodes[b].bit = 1;
  }

  for (int32_t w = 0; w < n; ++w) {
    std::vector<uint8_t> bits;
    std::vector<int32_t> path;
    int32_t node = w;
    while (nodes[node].parent >= 0) {
      bits.push_back(nodes[node].bit);
      path.push_back(nodes[node].parent - n);  // internal node id 0..n-2
      node = nodes[node].parent;
    }
    std::reverse(bits.begin(), bits.end());
    std::reverse(path.begin(), path.end());
    codes_[w] = {std::move(bits), std::move(path)};
  }
}

}  // namespace embedkit::embed
