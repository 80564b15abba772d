#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sensorium/types.hpp"
#include "sensorium/util.hpp"

namespace sensorium {

struct TrainingConfig {
  int dim = 200;
  int window = 4;
  int min_count = 10;
  int epochs = 30;
  int negatives = 5;
  double learning_rate = 0.05;
  double subsample = 0.0;       // 0 disables frequent-word subsampling
  bool dynamic_window = false;  // fixed +/-window by default
  int workers = 1;              // >1 is lock-free and nondeterministic
  std::uint64_t seed = 42;

  void validate() const;  // throws std::invalid_argument
};

struct Vocab {
  std::vector<std::string> words;   // index order: count desc, word asc
  std::vector<std::uint64_t> counts;
  std::unordered_map<std::string, int> index;
  std::uint64_t total_tokens = 0;   // tokens covered by the vocabulary

  int lookup(std::string_view word) const {
    auto it = index.find(std::string(word));
    return it == index.end() ? -1 : it->second;
  }
  std::size_t size() const { return words.size(); }
};

// Vocabulary word for a token: lemma plus coarse class for content words,
// lemma plus the verbatim tag otherwise.
std::string embedding_token(std::string_view lemma, std::string_view pos);

Vocab build_vocab(const std::vector<std::vector<std::string>>& sentences,
                  int min_count);
// Streams a normalized corpus file (lemma_POS tokens).
Vocab build_vocab_from_file(const std::string& path, int min_count);

std::vector<std::vector<int>> map_to_ids(
    const std::vector<std::vector<std::string>>& sentences, const Vocab& vocab);
std::vector<std::vector<int>> load_token_ids(const std::string& path,
                                             const Vocab& vocab);

struct EmbeddingModel {
  Vocab vocab;
  TrainingConfig config;
  std::vector<double> input;   // |V| x dim, row-major
  std::vector<double> output;  // |V| x dim; empty after load-from-file

  int dim() const { return config.dim; }
  std::span<const double> input_row(int w) const {
    return {input.data() + static_cast<std::size_t>(w) * config.dim,
            static_cast<std::size_t>(config.dim)};
  }

  void save(const std::string& vectors_path, const std::string& meta_path,
            const std::vector<std::pair<std::string, std::string>>& extra_meta)
      const;
  static EmbeddingModel load(const std::string& vectors_path);
};

struct EpochStats {
  double mean_loss = 0.0;
  std::uint64_t instances = 0;
};

// CBOW with negative sampling. The context vector is the mean of the input
// rows inside the window; each training step applies the exact simultaneous
// gradient of -log sigma(h.v_pos) - sum log sigma(-h.v_neg). The learning
// rate decays linearly to 1e-4 of its initial value over all scheduled
// tokens. Single-worker runs are bit-reproducible for a fixed seed.
// Throws std::runtime_error if the loss turns non-finite.
EmbeddingModel train_cbow(const std::vector<std::vector<int>>& sentences,
                          const Vocab& vocab, const TrainingConfig& config,
                          std::vector<EpochStats>* curve = nullptr);

// One training example pinned down explicitly, for loss/gradient inspection.
struct CbowInstance {
  std::vector<int> context;    // non-empty
  int target = 0;
  std::vector<int> negatives;  // sampled words, none equal to target
};

double cbow_instance_loss(const EmbeddingModel& model, const CbowInstance& inst);
// Gradients of the instance loss with respect to each context row of the
// input matrix and each target row of the output matrix.
void cbow_instance_gradients(
    const EmbeddingModel& model, const CbowInstance& inst,
    std::unordered_map<int, std::vector<double>>& grad_input,
    std::unordered_map<int, std::vector<double>>& grad_output);

// Walker alias table over counts^power; deterministic construction and draws.
class UnigramSampler {
 public:
  UnigramSampler(std::span<const std::uint64_t> counts, double power = 0.75);
  int sample(Rng& rng) const;

 private:
  std::vector<double> prob_;
  std::vector<int> alias_;
};

enum class VectorStatus { Ok, NotFound, Constant };

// Z-scores in place (population standard deviation); false if constant.
bool standardize(std::span<double> values);

// The standardized input-matrix row for a word.
VectorStatus concept_vector(const EmbeddingModel& model, std::string_view word,
                            std::vector<double>& out);

}  // namespace sensorium
