#include "embedkit/embed/cooccurrence.hpp"

#include <algorithm>

#include "embedkit/corpus/vocab.hpp"
#include "embedkit/error.hpp"

namespace embedkit::embed {

void CooccurrenceMap::add_pair(int32_t i, int32_t j, double w) {
  cells_[key(i, j)] += w;
  cells_[key(j, i)] += w;
}

double CooccurrenceMap::at(int32_t i, int32_t j) const {
  auto it = cells_.find(key(i, j));
  return it == cells_.end() ? 0.0 : it->second;
}

std::vector<CooccurrenceMap::Cell> CooccurrenceMap::sorted_cells() const {
  std::vector<Cell> out;
  out.reserve(cells_.size());
  for (const auto& [k, v] : cells_) {
    out.push_back({static_cast<int32_t>(k >> 32),
                   static_cast<int32_t>(k & 0xffffffffu), v});
  }
  std::sort(out.begin(), out.end(), [](const Cell& a, const Cell& b) {
    if (a.row != b.row) return a.row < b.row;
    return a.col < b.col;
  });
  return out;
}

CooccurrenceMap build_cooccurrence(
    const std::vector<std::vector<int32_t>>& sentences, int32_t window,
    bool distance_weighting) {
  if (window < 1) fail("build_cooccurrence: window must be >= 1");
  CooccurrenceMap map;
  for (const auto& sentence : sentences) {
    const auto n = static_cast<int32_t>(sentence.size());
    for (int32_t pos = 0; pos < n; ++pos) {
      int32_t center = sentence[pos];
      if (corpus::Vocabulary::is_special(center)) continue;
      int32_t lo = std::max<int32_t>(0, pos - window);
      for (int32_t prev = lo; prev < pos; ++prev) {
        int32_t other = sentence[prev];
        if (corpus::Vocabulary::is_special(other)) continue;
        double w = distance_weighting ? 1.0 / (pos - prev) : 1.0;
        map.add_pair(center, other, w);
      }
    }
  }
  return map;
}

}  // namespace embedkit::embed
