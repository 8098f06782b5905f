#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace embedkit::embed {

// Sparse symmetric word-word co-occurrence counts. Both (i,j) and (j,i)
// are stored so a training pass visits every nonzero cell of the
// symmetric matrix.
class CooccurrenceMap {
 public:
  struct Cell {
    int32_t row;
    int32_t col;
    double value;
  };

  static uint64_t key(int32_t i, int32_t j) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(i)) << 32) |
           static_cast<uint32_t>(j);
  }

  // Adds w to both (i,j) and (j,i).
  void add_pair(int32_t i, int32_t j, double w);

  double at(int32_t i, int32_t j) const;
  size_t cell_count() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

  // Cells in deterministic (row, col) order.
  std::vector<Cell> sorted_cells() const;

  const std::unordered_map<uint64_t, double>& raw() const { return cells_; }

 private:
  std::unordered_map<uint64_t, double> cells_;
};

// Accumulates co-occurrence counts over id sentences: each ordered pair
// within distance d <= window contributes 1/d (or 1 when
// distance_weighting is off) to both directions. Padding/unknown ids are
// skipped.
CooccurrenceMap build_cooccurrence(
    const std::vector<std::vector<int32_t>>& sentences, int32_t window,
    bool distance_weighting);

}  // namespace embedkit::embed
