#include "embedkit/embed/glove.hpp"

#include <cmath>

#include "embedkit/error.hpp"
#include "embedkit/strutil.hpp"

namespace embedkit::embed {

double glove_weight(double x, double x_max, double alpha) {
  if (x <= 0.0) fail(strformat("glove_weight: x must be positive, got %g", x));
  if (x >= x_max) return 1.0;
  return std::pow(x / x_max, alpha);
}

GloveState::GloveState(size_t vocab_size, size_t dim, Rng& rng)
    : main(vocab_size, dim),
      context(vocab_size, dim),
      bias_main(vocab_size, 0.0),
      bias_context(vocab_size, 0.0),
      acc_main(vocab_size, dim, 1.0),
      acc_context(vocab_size, dim, 1.0),
      acc_bias_main(vocab_size, 1.0),
      acc_bias_context(vocab_size, 1.0) {
  const double half = 0.5 / static_cast<double>(dim);
  // Rows 0/1 (padding, unknown) stay zero; they never occur in the map.
  for (size_t i = 2; i < vocab_size; ++i) {
    for (size_t d = 0; d < dim; ++d) main.at(i, d) = rng.uniform(-half, half);
  }
}

double glove_objective(const CooccurrenceMap& cooc, const GloveState& state,
                       double x_max, double alpha) {
  double j = 0.0;
  for (const auto& cell : cooc.sorted_cells()) {
    double diff = dot(state.main.row(cell.row), state.context.row(cell.col)) +
                  state.bias_main[cell.row] + state.bias_context[cell.col] -
                  std::log(cell.value);
    j += 0.5 * glove_weight(cell.value, x_max, alpha) * diff * diff;
  }
  return j;
}

double glove_epoch(const CooccurrenceMap& cooc, GloveState& state, double lr,
                   double x_max, double alpha, Rng& rng) {
  double j = glove_objective(cooc, state, x_max, alpha);

  std::vector<CooccurrenceMap::Cell> cells = cooc.sorted_cells();
  rng.shuffle(cells);

  const size_t dim = state.dim();
  for (const auto& cell : cells) {
    auto wi = state.main.row(cell.row);
    auto wj = state.context.row(cell.col);
    double diff = dot(wi, wj) + state.bias_main[cell.row] +
                  state.bias_context[cell.col] - std::log(cell.value);
    double fdiff = glove_weight(cell.value, x_max, alpha) * diff;
    if (!std::isfinite(fdiff))
      fail(strformat("glove_epoch: non-finite gradient at cell (%d, %d), x=%g",
                     cell.row, cell.col, cell.value));

    auto gi = state.acc_main.row(cell.row);
    auto gj = state.acc_context.row(cell.col);
    for (size_t d = 0; d < dim; ++d) {
      double grad_main = fdiff * wj[d];
      double grad_context = fdiff * wi[d];
      gi[d] += grad_main * grad_main;
      gj[d] += grad_context * grad_context;
      wi[d] -= lr * grad_main / std::sqrt(gi[d]);
      wj[d] -= lr * grad_context / std::sqrt(gj[d]);
    }
    state.acc_bias_main[cell.row] += fdiff * fdiff;
    state.acc_bias_context[cell.col] += fdiff * fdiff;
    state.bias_main[cell.row] -=
        lr * fdiff / std::sqrt(state.acc_bias_main[cell.row]);
    state.bias_context[cell.col] -=
        lr * fdiff / std::sqrt(state.acc_bias_context[cell.col]);
  }
  return j;
}

}  // namespace embedkit::embed
