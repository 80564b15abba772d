#include "sensorium/embed.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "sensorium/corpus.hpp"

namespace sensorium {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// -log sigma(x), computed without overflow on either tail
double neg_log_sigmoid(double x) {
  if (x > 0) return std::log1p(std::exp(-x));
  return -x + std::log1p(std::exp(x));
}

constexpr double kLrFloorFactor = 1e-4;

}  // namespace

void TrainingConfig::validate() const {
  if (dim < 1) throw std::invalid_argument("embed: dim must be >= 1");
  if (window < 1) throw std::invalid_argument("embed: window must be >= 1");
  if (min_count < 1) throw std::invalid_argument("embed: min_count must be >= 1");
  if (epochs < 1) throw std::invalid_argument("embed: epochs must be >= 1");
  if (negatives < 1) throw std::invalid_argument("embed: negatives must be >= 1");
  if (!(learning_rate > 0.0))
    throw std::invalid_argument("embed: learning_rate must be > 0");
  if (subsample < 0.0)
    throw std::invalid_argument("embed: subsample must be >= 0");
  if (workers < 1) throw std::invalid_argument("embed: workers must be >= 1");
}

std::string embedding_token(std::string_view lemma, std::string_view pos) {
  std::string out(lemma);
  out += '_';
  PosClass cls = coarse_class(pos);
  if (cls != PosClass::Other) {
    out += to_string(cls);
  } else {
    out += pos;
  }
  return out;
}

namespace {

Vocab vocab_from_counts(
    std::unordered_map<std::string, std::uint64_t>&& counts, int min_count) {
  Vocab v;
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (auto& [word, count] : counts) {
    if (count >= static_cast<std::uint64_t>(min_count))
      kept.emplace_back(word, count);
  }
  if (kept.empty())
    throw std::invalid_argument(
        "empty vocabulary: no word reaches min_count=" +
        std::to_string(min_count));
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  v.words.reserve(kept.size());
  v.counts.reserve(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    v.words.push_back(kept[i].first);
    v.counts.push_back(kept[i].second);
    v.index.emplace(kept[i].first, static_cast<int>(i));
    v.total_tokens += kept[i].second;
  }
  return v;
}

}  // namespace

Vocab build_vocab(const std::vector<std::vector<std::string>>& sentences,
                  int min_count) {
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& s : sentences)
    for (const auto& w : s) counts[w]++;
  return vocab_from_counts(std::move(counts), min_count);
}

Vocab build_vocab_from_file(const std::string& path, int min_count) {
  std::unordered_map<std::string, std::uint64_t> counts;
  LineReader reader(path);
  std::string line;
  ParseCounters pc;
  std::uint64_t id = 0;
  while (reader.next(line)) {
    auto sentence = parse_tagged_line(line, ++id, pc);
    if (!sentence) continue;
    for (const auto& tok : sentence->tokens)
      counts[embedding_token(tok.surface, tok.pos)]++;
  }
  return vocab_from_counts(std::move(counts), min_count);
}

std::vector<std::vector<int>> map_to_ids(
    const std::vector<std::vector<std::string>>& sentences,
    const Vocab& vocab) {
  std::vector<std::vector<int>> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) {
    std::vector<int> ids;
    ids.reserve(s.size());
    for (const auto& w : s) {
      int idx = vocab.lookup(w);
      if (idx >= 0) ids.push_back(idx);
    }
    if (!ids.empty()) out.push_back(std::move(ids));
  }
  return out;
}

std::vector<std::vector<int>> load_token_ids(const std::string& path,
                                             const Vocab& vocab) {
  std::vector<std::vector<int>> out;
  LineReader reader(path);
  std::string line;
  ParseCounters pc;
  std::uint64_t id = 0;
  while (reader.next(line)) {
    auto sentence = parse_tagged_line(line, ++id, pc);
    if (!sentence) continue;
    std::vector<int> ids;
    ids.reserve(sentence->tokens.size());
    for (const auto& tok : sentence->tokens) {
      int idx = vocab.lookup(embedding_token(tok.surface, tok.pos));
      if (idx >= 0) ids.push_back(idx);
    }
    if (!ids.empty()) out.push_back(std::move(ids));
  }
  return out;
}

UnigramSampler::UnigramSampler(std::span<const std::uint64_t> counts,
                               double power) {
  const std::size_t n = counts.size();
  if (n == 0) throw std::invalid_argument("sampler over empty vocabulary");
  std::vector<double> weights(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    weights[i] = std::pow(static_cast<double>(counts[i]), power);
    total += weights[i];
  }
  prob_.assign(n, 0.0);
  alias_.assign(n, 0);
  std::vector<int> small, large;
  std::vector<double> scaled(n);
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = weights[i] * static_cast<double>(n) / total;
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<int>(i));
  }
  while (!small.empty() && !large.empty()) {
    int s = small.back();
    small.pop_back();
    int l = large.back();
    large.pop_back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    (scaled[l] < 1.0 ? small : large).push_back(l);
  }
  for (int s : small) prob_[s] = 1.0;
  for (int l : large) prob_[l] = 1.0;
}

int UnigramSampler::sample(Rng& rng) const {
  std::size_t slot = rng.next_below(prob_.size());
  return rng.next_unit() < prob_[slot] ? static_cast<int>(slot) : alias_[slot];
}

namespace {

struct TrainShared {
  std::vector<double>* input;
  std::vector<double>* output;
  const std::vector<std::vector<int>>* sentences;
  const UnigramSampler* sampler;
  const TrainingConfig* config;
  std::size_t vocab_size;
  std::uint64_t total_scheduled;  // epochs * corpus tokens
  std::atomic<std::uint64_t> processed{0};
  std::atomic<bool> failed{false};
  std::string failure;
  std::vector<double> keep_prob;  // per word, subsampling; empty when off
};

// Trains one epoch over sentences[first, last). Returns summed loss and
// instance count for the epoch.
std::pair<double, std::uint64_t> run_epoch(TrainShared& sh, std::size_t first,
                                           std::size_t last, Rng& rng) {
  const TrainingConfig& cfg = *sh.config;
  const int dim = cfg.dim;
  double* input = sh.input->data();
  double* output = sh.output->data();
  const double init_lr = cfg.learning_rate;

  std::vector<double> h(dim), grad_h(dim);
  std::vector<int> context;
  std::vector<int> targets;
  std::vector<double> gs;
  std::vector<int> kept;
  double loss_sum = 0.0;
  std::uint64_t instances = 0;
  std::uint64_t local_processed = 0;

  for (std::size_t si = first; si < last; ++si) {
    const std::vector<int>* sentence = &(*sh.sentences)[si];
    if (!sh.keep_prob.empty()) {
      kept.clear();
      for (int w : *sentence) {
        if (rng.next_unit() < sh.keep_prob[static_cast<std::size_t>(w)])
          kept.push_back(w);
      }
      local_processed += sentence->size() - kept.size();
      sentence = &kept;
    }
    const auto& toks = *sentence;
    const std::size_t len = toks.size();
    for (std::size_t t = 0; t < len; ++t) {
      ++local_processed;
      if ((local_processed & 0x3FF) == 0) {
        sh.processed.fetch_add(local_processed, std::memory_order_relaxed);
        local_processed = 0;
      }

      int window = cfg.window;
      if (cfg.dynamic_window && window > 1)
        window = 1 + static_cast<int>(rng.next_below(
                        static_cast<std::size_t>(cfg.window)));

      context.clear();
      std::size_t lo =
          t >= static_cast<std::size_t>(window) ? t - window : 0;
      std::size_t hi = std::min(len - 1, t + static_cast<std::size_t>(window));
      for (std::size_t q = lo; q <= hi; ++q)
        if (q != t) context.push_back(toks[q]);
      if (context.empty()) continue;

      const std::uint64_t done =
          sh.processed.load(std::memory_order_relaxed) + local_processed;
      double frac = static_cast<double>(done) /
                    static_cast<double>(sh.total_scheduled);
      double lr = init_lr * std::max(kLrFloorFactor, 1.0 - frac);

      // h = mean of context input rows
      std::fill(h.begin(), h.end(), 0.0);
      for (int c : context) {
        const double* row = input + static_cast<std::size_t>(c) * dim;
        for (int d = 0; d < dim; ++d) h[d] += row[d];
      }
      const double inv_c = 1.0 / static_cast<double>(context.size());
      for (int d = 0; d < dim; ++d) h[d] *= inv_c;

      const int target = toks[t];
      targets.clear();
      targets.push_back(target);
      for (int s = 0; s < cfg.negatives; ++s) {
        int neg = -1;
        for (int attempt = 0; attempt < 16; ++attempt) {
          int cand = sh.sampler->sample(rng);
          if (cand != target) {
            neg = cand;
            break;
          }
        }
        if (neg >= 0) targets.push_back(neg);
      }

      // simultaneous gradient step over the instance
      std::fill(grad_h.begin(), grad_h.end(), 0.0);
      gs.assign(targets.size(), 0.0);
      double loss = 0.0;
      for (std::size_t ti = 0; ti < targets.size(); ++ti) {
        const double* out_row =
            output + static_cast<std::size_t>(targets[ti]) * dim;
        double f = 0.0;
        for (int d = 0; d < dim; ++d) f += h[d] * out_row[d];
        const double label = ti == 0 ? 1.0 : 0.0;
        loss += ti == 0 ? neg_log_sigmoid(f) : neg_log_sigmoid(-f);
        const double g = label - sigmoid(f);  // -dL/df
        gs[ti] = g;
        for (int d = 0; d < dim; ++d) grad_h[d] += g * out_row[d];
      }
      if (!std::isfinite(loss)) {
        sh.failed.store(true);
        return {loss_sum, instances};
      }
      loss_sum += loss;
      ++instances;

      for (std::size_t ti = 0; ti < targets.size(); ++ti) {
        double* out_row = output + static_cast<std::size_t>(targets[ti]) * dim;
        const double step = lr * gs[ti];
        for (int d = 0; d < dim; ++d) out_row[d] += step * h[d];
      }
      const double in_scale = lr * inv_c;
      for (int c : context) {
        double* row = input + static_cast<std::size_t>(c) * dim;
        for (int d = 0; d < dim; ++d) row[d] += in_scale * grad_h[d];
      }
    }
  }
  sh.processed.fetch_add(local_processed, std::memory_order_relaxed);
  return {loss_sum, instances};
}

}  // namespace

EmbeddingModel train_cbow(const std::vector<std::vector<int>>& sentences,
                          const Vocab& vocab, const TrainingConfig& config,
                          std::vector<EpochStats>* curve) {
  config.validate();
  if (vocab.size() == 0) throw std::invalid_argument("empty vocabulary");

  EmbeddingModel model;
  model.vocab = vocab;
  model.config = config;
  const std::size_t vs = vocab.size();
  const int dim = config.dim;
  model.input.resize(vs * static_cast<std::size_t>(dim));
  model.output.assign(vs * static_cast<std::size_t>(dim), 0.0);

  Rng init_rng(mix_seed(config.seed, 0x696e6974));  // "init" stream
  for (double& x : model.input)
    x = (init_rng.next_unit() - 0.5) / static_cast<double>(dim);

  std::uint64_t corpus_tokens = 0;
  for (const auto& s : sentences) corpus_tokens += s.size();
  if (corpus_tokens == 0) throw std::invalid_argument("empty training corpus");

  UnigramSampler sampler(vocab.counts);

  TrainShared sh;
  sh.input = &model.input;
  sh.output = &model.output;
  sh.sentences = &sentences;
  sh.sampler = &sampler;
  sh.config = &config;
  sh.vocab_size = vs;
  sh.total_scheduled =
      static_cast<std::uint64_t>(config.epochs) * corpus_tokens;
  if (config.subsample > 0.0) {
    sh.keep_prob.resize(vs);
    const double threshold = config.subsample;
    for (std::size_t w = 0; w < vs; ++w) {
      double freq = static_cast<double>(vocab.counts[w]) /
                    static_cast<double>(vocab.total_tokens);
      double p = std::sqrt(threshold / freq) + threshold / freq;
      sh.keep_prob[w] = std::min(1.0, p);
    }
  }

  if (curve) curve->clear();
  const int workers = config.workers;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double epoch_loss = 0.0;
    std::uint64_t epoch_instances = 0;
    if (workers == 1) {
      Rng rng(mix_seed(config.seed, 0x747261696eull + epoch));
      auto [loss, instances] = run_epoch(sh, 0, sentences.size(), rng);
      epoch_loss = loss;
      epoch_instances = instances;
    } else {
      std::vector<std::thread> threads;
      std::vector<double> losses(static_cast<std::size_t>(workers), 0.0);
      std::vector<std::uint64_t> counts(static_cast<std::size_t>(workers), 0);
      const std::size_t per =
          (sentences.size() + workers - 1) / static_cast<std::size_t>(workers);
      for (int w = 0; w < workers; ++w) {
        std::size_t first = std::min(sentences.size(), per * w);
        std::size_t last = std::min(sentences.size(), first + per);
        threads.emplace_back([&, w, first, last] {
          Rng rng(mix_seed(config.seed,
                           0x747261696eull + epoch * 1000 + w));
          auto [loss, instances] = run_epoch(sh, first, last, rng);
          losses[static_cast<std::size_t>(w)] = loss;
          counts[static_cast<std::size_t>(w)] = instances;
        });
      }
      for (auto& t : threads) t.join();
      for (int w = 0; w < workers; ++w) {
        epoch_loss += losses[static_cast<std::size_t>(w)];
        epoch_instances += counts[static_cast<std::size_t>(w)];
      }
    }
    if (sh.failed.load())
      throw std::runtime_error(
          "CBOW training diverged (non-finite loss); lower the learning rate");
    if (curve)
      curve->push_back(
          {epoch_instances ? epoch_loss / static_cast<double>(epoch_instances)
                           : 0.0,
           epoch_instances});
  }

  for (double x : model.input)
    if (!std::isfinite(x))
      throw std::runtime_error("non-finite embedding after training");
  return model;
}

double cbow_instance_loss(const EmbeddingModel& model,
                          const CbowInstance& inst) {
  const int dim = model.dim();
  std::vector<double> h(dim, 0.0);
  for (int c : inst.context) {
    auto row = model.input_row(c);
    for (int d = 0; d < dim; ++d) h[d] += row[d];
  }
  for (int d = 0; d < dim; ++d)
    h[d] /= static_cast<double>(inst.context.size());

  auto dot_out = [&](int w) {
    const double* row = model.output.data() + static_cast<std::size_t>(w) * dim;
    double f = 0.0;
    for (int d = 0; d < dim; ++d) f += h[d] * row[d];
    return f;
  };
  double loss = neg_log_sigmoid(dot_out(inst.target));
  for (int neg : inst.negatives) loss += neg_log_sigmoid(-dot_out(neg));
  return loss;
}

void cbow_instance_gradients(
    const EmbeddingModel& model, const CbowInstance& inst,
    std::unordered_map<int, std::vector<double>>& grad_input,
    std::unordered_map<int, std::vector<double>>& grad_output) {
  const int dim = model.dim();
  grad_input.clear();
  grad_output.clear();

  std::vector<double> h(dim, 0.0);
  for (int c : inst.context) {
    auto row = model.input_row(c);
    for (int d = 0; d < dim; ++d) h[d] += row[d];
  }
  for (int d = 0; d < dim; ++d)
    h[d] /= static_cast<double>(inst.context.size());

  std::vector<double> grad_h(dim, 0.0);
  std::vector<int> targets;
  targets.push_back(inst.target);
  for (int neg : inst.negatives) targets.push_back(neg);
  for (std::size_t ti = 0; ti < targets.size(); ++ti) {
    const double* row =
        model.output.data() + static_cast<std::size_t>(targets[ti]) * dim;
    double f = 0.0;
    for (int d = 0; d < dim; ++d) f += h[d] * row[d];
    const double label = ti == 0 ? 1.0 : 0.0;
    const double dldf = sigmoid(f) - label;  // dL/df
    auto& gout = grad_output[targets[ti]];
    if (gout.empty()) gout.assign(dim, 0.0);
    for (int d = 0; d < dim; ++d) {
      gout[d] += dldf * h[d];
      grad_h[d] += dldf * row[d];
    }
  }
  const double inv_c = 1.0 / static_cast<double>(inst.context.size());
  for (int c : inst.context) {
    auto& gin = grad_input[c];
    if (gin.empty()) gin.assign(dim, 0.0);
    for (int d = 0; d < dim; ++d) gin[d] += inv_c * grad_h[d];
  }
}

void EmbeddingModel::save(
    const std::string& vectors_path, const std::string& meta_path,
    const std::vector<std::pair<std::string, std::string>>& extra_meta) const {
  std::ofstream out(vectors_path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write: " + vectors_path);
  out << vocab.size() << ' ' << config.dim << '\n';
  char buf[40];
  for (std::size_t w = 0; w < vocab.size(); ++w) {
    out << vocab.words[w];
    const double* row = input.data() + w * static_cast<std::size_t>(config.dim);
    for (int d = 0; d < config.dim; ++d) {
      std::snprintf(buf, sizeof(buf), " %.8g", row[d]);
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + vectors_path);
  out.close();

  std::string meta;
  meta += "dim\t" + std::to_string(config.dim) + "\n";
  meta += "window\t" + std::to_string(config.window) + "\n";
  meta += "min_count\t" + std::to_string(config.min_count) + "\n";
  meta += "epochs\t" + std::to_string(config.epochs) + "\n";
  meta += "negatives\t" + std::to_string(config.negatives) + "\n";
  meta += "learning_rate\t" + format_double(config.learning_rate) + "\n";
  meta += "subsample\t" + format_double(config.subsample) + "\n";
  meta += std::string("dynamic_window\t") +
          (config.dynamic_window ? "true" : "false") + "\n";
  meta += "workers\t" + std::to_string(config.workers) + "\n";
  meta += "seed\t" + std::to_string(config.seed) + "\n";
  meta += "vocab_size\t" + std::to_string(vocab.size()) + "\n";
  meta += "total_tokens\t" + std::to_string(vocab.total_tokens) + "\n";
  for (const auto& [k, v] : extra_meta) meta += k + "\t" + v + "\n";
  write_file(meta_path, meta);
}

EmbeddingModel EmbeddingModel::load(const std::string& vectors_path) {
  LineReader reader(vectors_path);
  std::string line;
  if (!reader.next(line))
    throw std::runtime_error("empty embedding file: " + vectors_path);
  auto header = split(line, ' ');
  if (header.size() != 2)
    throw std::runtime_error("bad embedding header: " + vectors_path);
  const std::size_t vs = std::stoull(std::string(header[0]));
  const int dim = std::stoi(std::string(header[1]));
  if (vs == 0 || dim < 1)
    throw std::runtime_error("bad embedding shape: " + vectors_path);

  EmbeddingModel model;
  model.config.dim = dim;
  model.input.resize(vs * static_cast<std::size_t>(dim));
  model.vocab.words.reserve(vs);
  std::size_t row = 0;
  while (reader.next(line)) {
    if (line.empty()) continue;
    if (row >= vs)
      throw std::runtime_error("too many embedding rows: " + vectors_path);
    auto cols = split(line, ' ');
    if (cols.size() != static_cast<std::size_t>(dim) + 1)
      throw std::runtime_error("bad embedding row " + std::to_string(row + 2) +
                               " in " + vectors_path);
    model.vocab.words.emplace_back(cols[0]);
    model.vocab.index.emplace(std::string(cols[0]), static_cast<int>(row));
    double* dst = model.input.data() + row * static_cast<std::size_t>(dim);
    for (int d = 0; d < dim; ++d)
      dst[d] = std::stod(std::string(cols[static_cast<std::size_t>(d) + 1]));
    ++row;
  }
  if (row != vs)
    throw std::runtime_error("embedding row count mismatch: " + vectors_path);
  model.vocab.counts.assign(vs, 0);
  return model;
}

bool standardize(std::span<double> values) {
  const std::size_t n = values.size();
  if (n == 0) return false;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  if (var == 0.0) return false;
  const double inv_sd = 1.0 / std::sqrt(var);
  for (double& v : values) v = (v - mean) * inv_sd;
  return true;
}

VectorStatus concept_vector(const EmbeddingModel& model, std::string_view word,
                            std::vector<double>& out) {
  int idx = model.vocab.lookup(word);
  if (idx < 0) return VectorStatus::NotFound;
  auto row = model.input_row(idx);
  out.assign(row.begin(), row.end());
  if (!standardize(out)) return VectorStatus::Constant;
  return VectorStatus::Ok;
}

}  // namespace sensorium
