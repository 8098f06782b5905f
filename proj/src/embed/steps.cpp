#include "embedkit/embed/steps.hpp"

#include <cmath>

#include "embedkit/error.hpp"
#include "embedkit/strutil.hpp"

namespace embedkit::embed {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double log_sigmoid_loss(double x) {
  // -log s(x) = softplus(-x)
  if (x > 0) return std::log1p(std::exp(-x));
  return -x + std::log1p(std::exp(x));
}

namespace {

void check_finite(double v, const char* where) {
  if (!std::isfinite(v))
    fail(strformat("%s: non-finite value encountered", where));
}

// Shared core: hidden = mean(inputs); per output row u with label y
// (1 positive, 0 negative): g = s(u.h) - y, loss += softplus(+/- u.h).
double ns_core(std::span<Span> inputs, Span positive,
               std::span<Span> negatives, double lr) {
  const size_t dim = positive.size();
  const double inv_n = 1.0 / static_cast<double>(inputs.size());

  std::vector<double> hidden(dim, 0.0);
  for (const Span& in : inputs) axpy(inv_n, in, hidden);

  std::vector<double> hidden_grad(dim, 0.0);
  double loss = 0.0;

  auto visit = [&](Span u, double label) {
    double s = dot(u, hidden);
    check_finite(s, "ns_step");
    loss += label > 0.5 ? log_sigmoid_loss(s) : log_sigmoid_loss(-s);
    double g = sigmoid(s) - label;
    axpy(g, u, hidden_grad);          // d loss / d hidden, at old u
    if (lr != 0.0) axpy(-lr * g, hidden, u);
  };

  visit(positive, 1.0);
  for (Span u : negatives) visit(u, 0.0);

  check_finite(loss, "ns_step");
  if (lr != 0.0) {
    for (Span in : inputs) axpy(-lr * inv_n, hidden_grad, in);
  }
  return loss;
}

}  // namespace

double ns_step(std::span<Span> inputs, Span positive,
               std::span<Span> negatives, double lr) {
  if (inputs.empty()) fail("ns_step: no input vectors");
  return ns_core(inputs, positive, negatives, lr);
}

double sgns_step(Span center, Span context, std::span<Span> negatives,
                 double lr) {
  Span one[] = {center};
  return ns_core(one, context, negatives, lr);
}

double cbow_step(std::span<Span> context, Span target,
                 std::span<Span> negatives, double lr) {
  if (context.empty()) fail("cbow_step: empty context");
  return ns_core(context, target, negatives, lr);
}

double hs_step(std::span<Span> inputs, const HuffmanCode& code,
               Matrix& node_vectors, double lr) {
  if (inputs.empty()) fail("hs_step: no input vectors");
  const size_t dim = node_vectors.cols();
  const double inv_n = 1.0 / static_cast<double>(inputs.size());

  std::vector<double> hidden(dim, 0.0);
  for (const Span& in : inputs) axpy(inv_n, in, hidden);

  std::vector<double> hidden_grad(dim, 0.0);
  double loss = 0.0;
  for (size_t t = 0; t < code.bits.size(); ++t) {
    Span node = node_vectors.row(static_cast<size_t>(code.path[t]));
    double s = dot(node, hidden);
    check_finite(s, "hs_step");
    // Branch bit 0 has probability s(node.h).
    loss += code.bits[t] == 0 ? log_sigmoid_loss(s) : log_sigmoid_loss(-s);
    double g = sigmoid(s) - (code.bits[t] == 0 ? 1.0 : 0.0);
    axpy(g, node, hidden_grad);
    if (lr != 0.0) axpy(-lr * g, hidden, node);
  }
  check_finite(loss, "hs_step");
  if (lr != 0.0) {
    for (Span in : inputs) axpy(-lr * inv_n, hidden_grad, in);
  }
  return loss;
}

double hierarchical_softmax_step(Span hidden, const HuffmanCode& code,
                                 Matrix& node_vectors, double lr) {
  Span one[] = {hidden};
  return hs_step(one, code, node_vectors, lr);
}

}  // namespace embedkit::embed
