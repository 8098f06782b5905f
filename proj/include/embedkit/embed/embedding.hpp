#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "embedkit/corpus/vocab.hpp"
#include "embedkit/matrix.hpp"

namespace embedkit::embed {

enum class EmbAlgorithm { kGlove, kW2vCbow, kW2vSkipgram, kFtCbow, kFtSkipgram };
enum class EmbObjective { kNegativeSampling, kHierarchicalSoftmax };

std::string_view to_string(EmbAlgorithm a);
std::optional<EmbAlgorithm> parse_algorithm(std::string_view name);
bool is_fasttext(EmbAlgorithm a);
bool is_skipgram(EmbAlgorithm a);

struct EmbConfig {
  EmbAlgorithm algorithm = EmbAlgorithm::kW2vSkipgram;
  int dim = 300;
  int window = 5;
  uint64_t min_count = 5;
  int epochs = 0;              // 0: 5 for word2vec/fastText, 15 for glove
  int negatives = 5;
  double learning_rate = 0.0;  // 0: 0.025 skip-gram, 0.05 cbow/glove
  EmbObjective objective = EmbObjective::kNegativeSampling;
  double subsample_t = 1e-4;
  double sampler_power = 0.75;
  int ngram_min = 3;
  int ngram_max = 6;
  uint32_t bucket_count = 2000000;
  double x_max = 100.0;
  double alpha = 0.75;
  bool distance_weighting = true;
  uint64_t seed = 1;
  int workers = 1;

  void validate() const;
  int resolved_epochs() const;
  double resolved_lr() const;
};

// A trained embedding model. Row 0 (padding) is always the zero vector.
// context_vectors holds the output-side vectors (or the second GloVe
// vector set); subword_vectors is present for fastText models and maps
// hash buckets to vectors.
struct EmbeddingMatrix {
  corpus::Vocabulary vocab;
  Matrix vectors;
  std::optional<Matrix> context_vectors;
  std::optional<Matrix> subword_vectors;

  // Metadata recorded at training time.
  EmbAlgorithm algorithm = EmbAlgorithm::kW2vSkipgram;
  int dim = 0;
  int window = 0;
  bool distance_weighting = true;
  int ngram_min = 3;
  int ngram_max = 6;

  bool resolves(std::string_view word) const;
};

struct TrainStats {
  std::vector<double> epoch_objectives;  // glove only
  double final_mean_loss = 0.0;          // word2vec/fastText
  uint64_t steps = 0;
  uint64_t skipped_empty_contexts = 0;
};

// Trains on pre-tokenized sentences.
EmbeddingMatrix train_embeddings_from_tokens(
    const std::vector<std::vector<std::string>>& sentences,
    const EmbConfig& config, TrainStats* stats = nullptr);

// Trains on a one-sentence-per-line UTF-8 corpus file, optionally running
// text normalization on each line first.
EmbeddingMatrix train_embeddings(const std::string& corpus_path,
                                 const EmbConfig& config,
                                 bool apply_normalize = true,
                                 TrainStats* stats = nullptr);

// Sum of the subword vectors of the word's n-gram units. Defined for
// out-of-vocabulary words; requires subword_vectors.
std::vector<double> fasttext_word_vector(const EmbeddingMatrix& model,
                                         std::string_view word);

// Text vector format: a "<vocab_size> <dim>" header line, then one line
// per word holding the token and dim decimal values.
void save_embeddings(const EmbeddingMatrix& model, const std::string& path);
EmbeddingMatrix load_embeddings(const std::string& path);

// Top-k neighbours by cosine similarity, query excluded, ties broken
// lexicographically. The query must be in the vocabulary or, for fastText
// models, composable from subwords.
std::vector<std::pair<std::string, double>> nearest_neighbors(
    const EmbeddingMatrix& model, std::string_view word, int k);

}  // namespace embedkit::embed
