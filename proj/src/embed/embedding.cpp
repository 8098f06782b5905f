#include "embedkit/embed/embedding.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "embedkit/corpus/text.hpp"
#include "embedkit/embed/cooccurrence.hpp"
#include "embedkit/embed/glove.hpp"
#include "embedkit/embed/huffman.hpp"
#include "embedkit/embed/sampler.hpp"
#include "embedkit/embed/steps.hpp"
#include "embedkit/embed/subword.hpp"
#include "embedkit/error.hpp"
#include "embedkit/log.hpp"
#include "embedkit/rng.hpp"
#include "embedkit/strutil.hpp"

namespace embedkit::embed {

std::string_view to_string(EmbAlgorithm a) {
  switch (a) {
    case EmbAlgorithm::kGlove: return "glove";
    case EmbAlgorithm::kW2vCbow: return "w2v-cb";
    case EmbAlgorithm::kW2vSkipgram: return "w2v-sg";
    case EmbAlgorithm::kFtCbow: return "ft-cb";
    case EmbAlgorithm::kFtSkipgram: return "ft-sg";
  }
  return "?";
}

std::optional<EmbAlgorithm> parse_algorithm(std::string_view name) {
  for (EmbAlgorithm a :
       {EmbAlgorithm::kGlove, EmbAlgorithm::kW2vCbow,
        EmbAlgorithm::kW2vSkipgram, EmbAlgorithm::kFtCbow,
        EmbAlgorithm::kFtSkipgram}) {
    if (name == to_string(a)) return a;
  }
  return std::nullopt;
}

bool is_fasttext(EmbAlgorithm a) {
  return a == EmbAlgorithm::kFtCbow || a == EmbAlgorithm::kFtSkipgram;
}

bool is_skipgram(EmbAlgorithm a) {
  return a == EmbAlgorithm::kW2vSkipgram || a == EmbAlgorithm::kFtSkipgram;
}

void EmbConfig::validate() const {
  if (dim < 1) fail("embed config: dim must be >= 1");
  if (window < 1) fail("embed config: window must be >= 1");
  if (epochs < 0) fail("embed config: epochs must be >= 0");
  if (negatives < 0) fail("embed config: negatives must be >= 0");
  if (learning_rate < 0) fail("embed config: learning_rate must be >= 0");
  if (subsample_t < 0) fail("embed config: subsample_t must be >= 0");
  if (ngram_min < 1 || ngram_min > ngram_max)
    fail("embed config: need 1 <= ngram_min <= ngram_max");
  if (bucket_count < 1) fail("embed config: bucket_count must be >= 1");
  if (x_max <= 0 || alpha <= 0) fail("embed config: x_max and alpha must be positive");
  if (workers < 1) fail("embed config: workers must be >= 1");
}

int EmbConfig::resolved_epochs() const {
  if (epochs > 0) return epochs;
  return algorithm == EmbAlgorithm::kGlove ? 15 : 5;
}

double EmbConfig::resolved_lr() const {
  if (learning_rate > 0) return learning_rate;
  return is_skipgram(algorithm) ? 0.025 : 0.05;
}

bool EmbeddingMatrix::resolves(std::string_view word) const {
  auto id = vocab.find(word);
  if (id && !corpus::Vocabulary::is_special(*id)) return true;
  return subword_vectors.has_value();
}

namespace {

struct PreparedCorpus {
  corpus::Vocabulary vocab;
  std::vector<std::vector<int32_t>> sentences;  // in-vocabulary ids only
  uint64_t train_words = 0;
};

PreparedCorpus prepare_corpus(
    const std::vector<std::vector<std::string>>& sentences,
    uint64_t min_count) {
  std::unordered_map<std::string, uint64_t> counts;
  for (const auto& sent : sentences)
    for (const auto& tok : sent) ++counts[tok];

  PreparedCorpus prepared;
  prepared.vocab = corpus::build_vocab_from_counts(counts, min_count);

  // Out-of-vocabulary tokens are dropped from the training stream, not
  // mapped to <unk>.
  for (const auto& sent : sentences) {
    std::vector<int32_t> ids;
    ids.reserve(sent.size());
    for (const auto& tok : sent) {
      auto id = prepared.vocab.find(tok);
      if (id && !corpus::Vocabulary::is_special(*id)) ids.push_back(*id);
    }
    if (!ids.empty()) {
      prepared.train_words += ids.size();
      prepared.sentences.push_back(std::move(ids));
    }
  }
  return prepared;
}

void init_uniform_rows(Matrix& m, size_t first_row, Rng& rng) {
  const double half = 0.5 / static_cast<double>(m.cols());
  for (size_t i = first_row; i < m.rows(); ++i) {
    auto row = m.row(i);
    for (double& v : row) v = rng.uniform(-half, half);
  }
}

struct EpochLoss {
  std::vector<double> loss;
  std::vector<uint64_t> steps;
  uint64_t skipped = 0;
};

EmbeddingMatrix train_glove(PreparedCorpus prepared, const EmbConfig& cfg,
                            TrainStats* stats) {
  CooccurrenceMap cooc = build_cooccurrence(prepared.sentences, cfg.window,
                                            cfg.distance_weighting);
  if (cooc.empty())
    fail("glove: co-occurrence map is empty (corpus has no word pairs)");

  const size_t vocab_size = static_cast<size_t>(prepared.vocab.size());
  Rng rng(cfg.seed);
  GloveState state(vocab_size, static_cast<size_t>(cfg.dim), rng);
  const double lr = cfg.resolved_lr();
  const int epochs = cfg.resolved_epochs();

  std::vector<CooccurrenceMap::Cell> cells;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    double j = glove_epoch(cooc, state, lr, cfg.x_max, cfg.alpha, rng);
    if (stats) stats->epoch_objectives.push_back(j);
    log_debug(strformat("glove epoch %d/%d objective %.6f", epoch + 1, epochs, j));
  }

  EmbeddingMatrix model;
  model.vocab = std::move(prepared.vocab);
  model.vectors = std::move(state.main);
  model.context_vectors = std::move(state.context);
  model.algorithm = cfg.algorithm;
  model.dim = cfg.dim;
  model.window = cfg.window;
  model.distance_weighting = cfg.distance_weighting;
  return model;
}

EmbeddingMatrix train_word_models(PreparedCorpus prepared,
                                  const EmbConfig& cfg, TrainStats* stats) {
  const auto& vocab = prepared.vocab;
  const size_t vocab_size = static_cast<size_t>(vocab.size());
  const size_t dim = static_cast<size_t>(cfg.dim);
  const bool ft = is_fasttext(cfg.algorithm);
  const bool sg = is_skipgram(cfg.algorithm);
  const bool use_ns = cfg.objective == EmbObjective::kNegativeSampling;
  const int epochs = cfg.resolved_epochs();
  const double lr0 = cfg.resolved_lr();

  Rng init_rng(cfg.seed);

  // Input side: one row per word, or per hash bucket for fastText.
  Matrix input;
  SubwordIndex subindex(cfg.ngram_min, cfg.ngram_max, cfg.bucket_count);
  std::vector<std::vector<uint32_t>> word_units;
  if (ft) {
    input = Matrix(cfg.bucket_count, dim);
    init_uniform_rows(input, 0, init_rng);
    word_units.resize(vocab_size);
    for (size_t id = 2; id < vocab_size; ++id)
      word_units[id] = subindex.extract(vocab.token(static_cast<int32_t>(id)));
  } else {
    input = Matrix(vocab_size, dim);
    init_uniform_rows(input, 2, init_rng);
  }

  // Output side: word vectors for negative sampling, internal-node
  // vectors for hierarchical softmax. Zero-initialized.
  std::optional<NegativeSampler> sampler;
  std::optional<HuffmanTree> tree;
  Matrix output;
  if (use_ns) {
    sampler.emplace(vocab, cfg.sampler_power);
    output = Matrix(vocab_size, dim);
  } else {
    std::vector<uint64_t> counts;
    counts.reserve(vocab_size - 2);
    for (size_t id = 2; id < vocab_size; ++id)
      counts.push_back(vocab.count(static_cast<int32_t>(id)));
    tree.emplace(counts);
    output = Matrix(static_cast<size_t>(std::max(tree->internal_count(), 1)),
                    dim);
  }

  const uint64_t total_scheduled =
      static_cast<uint64_t>(epochs) * prepared.train_words + 1;
  std::atomic<uint64_t> scanned{0};

  auto run_worker = [&](size_t begin, size_t end, uint64_t worker_seed,
                        EpochLoss& acc) {
    Rng rng(worker_seed);
    std::vector<int32_t> reduced;
    std::vector<Span> inputs;
    std::vector<Span> negatives;

    auto units_of = [&](int32_t id) {
      if (ft) {
        for (uint32_t u : word_units[static_cast<size_t>(id)])
          inputs.push_back(input.row(u));
      } else {
        inputs.push_back(input.row(static_cast<size_t>(id)));
      }
    };

    auto do_step = [&](int32_t target, double lr) -> double {
      if (use_ns) {
        negatives.clear();
        for (int d = 0; d < cfg.negatives; ++d) {
          int32_t neg = sampler->sample(rng);
          if (neg == target) continue;
          negatives.push_back(output.row(static_cast<size_t>(neg)));
        }
        return ns_step(inputs, output.row(static_cast<size_t>(target)),
                       negatives, lr);
      }
      return hs_step(inputs, tree->code(target - 2), output, lr);
    };

    for (int epoch = 0; epoch < epochs; ++epoch) {
      double epoch_loss = 0.0;
      uint64_t epoch_steps = 0;
      for (size_t s = begin; s < end; ++s) {
        const auto& sentence = prepared.sentences[s];
        uint64_t before = scanned.fetch_add(sentence.size());
        double remaining =
            1.0 - static_cast<double>(before) /
                      static_cast<double>(total_scheduled);
        double lr = lr0 * std::max(1e-4, remaining);

        reduced.clear();
        for (int32_t id : sentence) {
          if (cfg.subsample_t > 0) {
            double f = static_cast<double>(vocab.count(id)) /
                       static_cast<double>(prepared.train_words);
            double keep = std::sqrt(cfg.subsample_t / f) + cfg.subsample_t / f;
            if (keep < 1.0 && rng.uniform01() >= keep) continue;
          }
          reduced.push_back(id);
        }

        const int n = static_cast<int>(reduced.size());
        for (int pos = 0; pos < n; ++pos) {
          int b = 1 + static_cast<int>(rng.below(
                          static_cast<uint64_t>(cfg.window)));
          int lo = std::max(0, pos - b);
          int hi = std::min(n - 1, pos + b);
          if (sg) {
            for (int c = lo; c <= hi; ++c) {
              if (c == pos) continue;
              inputs.clear();
              units_of(reduced[static_cast<size_t>(pos)]);
              epoch_loss += do_step(reduced[static_cast<size_t>(c)], lr);
              ++epoch_steps;
            }
          } else {
            inputs.clear();
            for (int c = lo; c <= hi; ++c) {
              if (c == pos) continue;
              units_of(reduced[static_cast<size_t>(c)]);
            }
            if (inputs.empty()) {
              ++acc.skipped;
              continue;
            }
            epoch_loss += do_step(reduced[static_cast<size_t>(pos)], lr);
            ++epoch_steps;
          }
        }
      }
      acc.loss[static_cast<size_t>(epoch)] += epoch_loss;
      acc.steps[static_cast<size_t>(epoch)] += epoch_steps;
    }
  };

  const size_t n_sentences = prepared.sentences.size();
  const size_t n_workers =
      std::max<size_t>(1, std::min<size_t>(cfg.workers, n_sentences));
  std::vector<EpochLoss> worker_stats(n_workers);
  for (auto& ws : worker_stats) {
    ws.loss.assign(static_cast<size_t>(epochs), 0.0);
    ws.steps.assign(static_cast<size_t>(epochs), 0);
  }

  if (n_workers == 1) {
    run_worker(0, n_sentences, cfg.seed, worker_stats[0]);
  } else {
    // Hogwild: workers update shared matrices without locks. Lost updates
    // on shared rows are tolerated; runs are reproducible only with one
    // worker.
    std::vector<std::thread> threads;
    for (size_t w = 0; w < n_workers; ++w) {
      size_t begin = n_sentences * w / n_workers;
      size_t end = n_sentences * (w + 1) / n_workers;
      threads.emplace_back(run_worker, begin, end, mix_seed(cfg.seed, w),
                           std::ref(worker_stats[w]));
    }
    for (auto& t : threads) t.join();
  }

  if (stats) {
    double last_loss = 0.0;
    uint64_t last_steps = 0, total_steps = 0, skipped = 0;
    for (const auto& ws : worker_stats) {
      last_loss += ws.loss.back();
      last_steps += ws.steps.back();
      for (uint64_t s : ws.steps) total_steps += s;
      skipped += ws.skipped;
    }
    stats->final_mean_loss =
        last_steps > 0 ? last_loss / static_cast<double>(last_steps) : 0.0;
    stats->steps = total_steps;
    stats->skipped_empty_contexts = skipped;
  }

  EmbeddingMatrix model;
  model.algorithm = cfg.algorithm;
  model.dim = cfg.dim;
  model.window = cfg.window;
  model.distance_weighting = cfg.distance_weighting;
  model.ngram_min = cfg.ngram_min;
  model.ngram_max = cfg.ngram_max;
  if (ft) {
    model.vectors = Matrix(vocab_size, dim);
    for (size_t id = 2; id < vocab_size; ++id) {
      auto row = model.vectors.row(id);
      for (uint32_t u : word_units[id]) axpy(1.0, input.row(u), row);
    }
    model.subword_vectors = std::move(input);
  } else {
    model.vectors = std::move(input);
  }
  model.context_vectors = std::move(output);
  model.vocab = std::move(prepared.vocab);
  return model;
}

}  // namespace

EmbeddingMatrix train_embeddings_from_tokens(
    const std::vector<std::vector<std::string>>& sentences,
    const EmbConfig& config, TrainStats* stats) {
  config.validate();
  PreparedCorpus prepared = prepare_corpus(sentences, config.min_count);
  if (prepared.train_words == 0)
    fail("embedding training: no in-vocabulary tokens in the corpus");
  if (config.algorithm == EmbAlgorithm::kGlove)
    return train_glove(std::move(prepared), config, stats);
  return train_word_models(std::move(prepared), config, stats);
}

EmbeddingMatrix train_embeddings(const std::string& corpus_path,
                                 const EmbConfig& config, bool apply_normalize,
                                 TrainStats* stats) {
  std::ifstream in(corpus_path);
  if (!in) fail(strformat("cannot open corpus file '%s'", corpus_path.c_str()));
  std::vector<std::vector<std::string>> sentences;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> tokens =
        apply_normalize ? corpus::tokenize(corpus::normalize(line))
                        : corpus::tokenize(line);
    if (!tokens.empty()) sentences.push_back(std::move(tokens));
  }
  return train_embeddings_from_tokens(sentences, config, stats);
}

std::vector<double> fasttext_word_vector(const EmbeddingMatrix& model,
                                         std::string_view word) {
  if (!model.subword_vectors)
    fail("fasttext_word_vector: model has no subword vectors");
  const Matrix& buckets = *model.subword_vectors;
  SubwordIndex subindex(model.ngram_min, model.ngram_max,
                        static_cast<uint32_t>(buckets.rows()));
  std::vector<double> vec(buckets.cols(), 0.0);
  for (uint32_t u : subindex.extract(word))
    axpy(1.0, buckets.row(u), std::span<double>(vec));
  return vec;
}

void save_embeddings(const EmbeddingMatrix& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(strformat("cannot write embedding file '%s'", path.c_str()));
  const size_t n = model.vectors.rows();
  const size_t dim = model.vectors.cols();
  out << n << ' ' << dim << '\n';
  for (size_t i = 0; i < n; ++i) {
    out << model.vocab.token(static_cast<int32_t>(i));
    auto row = model.vectors.row(i);
    for (size_t d = 0; d < dim; ++d) out << ' ' << strformat("%.17g", row[d]);
    out << '\n';
  }
  if (!out) fail(strformat("write failed for '%s'", path.c_str()));
}

EmbeddingMatrix load_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(strformat("cannot open embedding file '%s'", path.c_str()));

  std::string line;
  if (!std::getline(in, line))
    fail(strformat("%s:1: missing header", path.c_str()));

  size_t vocab_size = 0, dim = 0;
  {
    char extra;
    std::istringstream hdr(line);
    if (!(hdr >> vocab_size >> dim) || (hdr >> extra) || dim == 0)
      fail(strformat("%s:1: malformed header '%s'", path.c_str(),
                     line.c_str()));
  }

  EmbeddingMatrix model;
  std::vector<std::pair<int32_t, std::vector<double>>> rows;  // id, values
  size_t line_no = 1;
  size_t seen = 0;
  bool saw_pad = false, saw_unk = false;
  std::vector<double> pad_row, unk_row;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++seen;
    size_t sp = line.find(' ');
    if (sp == std::string::npos)
      fail(strformat("%s:%zu: expected token and %zu values", path.c_str(),
                     line_no, dim));
    std::string token = line.substr(0, sp);
    std::vector<double> values;
    values.reserve(dim);
    {
      std::istringstream rest(line.substr(sp + 1));
      double v;
      while (rest >> v) values.push_back(v);
    }
    if (values.size() != dim)
      fail(strformat("%s:%zu: expected %zu values, found %zu", path.c_str(),
                     line_no, dim, values.size()));

    if (token == corpus::Vocabulary::kPadToken) {
      if (saw_pad) fail(strformat("%s:%zu: duplicate token '%s'", path.c_str(),
                                  line_no, token.c_str()));
      saw_pad = true;
      pad_row = std::move(values);
    } else if (token == corpus::Vocabulary::kUnkToken) {
      if (saw_unk) fail(strformat("%s:%zu: duplicate token '%s'", path.c_str(),
                                  line_no, token.c_str()));
      saw_unk = true;
      unk_row = std::move(values);
    } else {
      if (model.vocab.find(token))
        fail(strformat("%s:%zu: duplicate token '%s'", path.c_str(), line_no,
                       token.c_str()));
      model.vocab.add_entry(token, 0);
      rows.emplace_back(model.vocab.size() - 1, std::move(values));
    }
  }
  if (seen != vocab_size)
    fail(strformat("%s: header declares %zu words, file has %zu",
                   path.c_str(), vocab_size, seen));

  model.vectors = Matrix(static_cast<size_t>(model.vocab.size()), dim);
  model.dim = static_cast<int>(dim);
  if (saw_unk)
    std::copy(unk_row.begin(), unk_row.end(),
              model.vectors.row(corpus::Vocabulary::kUnkId).begin());
  for (const auto& [id, values] : rows)
    std::copy(values.begin(), values.end(),
              model.vectors.row(static_cast<size_t>(id)).begin());
  // The padding row is pinned to zero whatever the file says.
  std::fill(model.vectors.row(corpus::Vocabulary::kPadId).begin(),
            model.vectors.row(corpus::Vocabulary::kPadId).end(), 0.0);
  return model;
}

std::vector<std::pair<std::string, double>> nearest_neighbors(
    const EmbeddingMatrix& model, std::string_view word, int k) {
  if (k < 0) fail("nearest_neighbors: k must be >= 0");

  std::vector<double> query_storage;
  std::span<const double> query;
  auto id = model.vocab.find(word);
  int32_t query_id = -1;
  if (id && !corpus::Vocabulary::is_special(*id)) {
    query_id = *id;
    query = model.vectors.row(static_cast<size_t>(*id));
  } else if (model.subword_vectors) {
    query_storage = fasttext_word_vector(model, word);
    query = query_storage;
  } else {
    fail(strformat("nearest_neighbors: '%.*s' is not in the vocabulary",
                   static_cast<int>(word.size()), word.data()));
  }

  std::vector<std::pair<std::string, double>> scored;
  for (int32_t i = 2; i < model.vocab.size(); ++i) {
    if (i == query_id) continue;
    auto row = model.vectors.row(static_cast<size_t>(i));
    if (norm(row) == 0.0) continue;
    scored.emplace_back(model.vocab.token(i), cosine(query, row));
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (scored.size() > static_cast<size_t>(k)) scored.resize(static_cast<size_t>(k));
  return scored;
}

}  // namespace embedkit::embed
