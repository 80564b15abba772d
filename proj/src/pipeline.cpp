#include "sensorium/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "sensorium/cluster.hpp"
#include "sensorium/collocate.hpp"
#include "sensorium/corpus.hpp"
#include "sensorium/embed.hpp"
#include "sensorium/norms.hpp"
#include "sensorium/pai.hpp"
#include "sensorium/report.hpp"
#include "sensorium/util.hpp"

namespace sensorium {

namespace {

const std::vector<std::string>& section_order() {
  static const std::vector<std::string> order = {
      "run",           "param",         "stage.ingest",  "stage.collocate",
      "stage.rank",    "stage.embed",   "stage.cluster", "stage.recluster",
      "stage.norms",   "stage.report"};
  return order;
}

int section_rank(const std::string& s) {
  const auto& order = section_order();
  for (std::size_t i = 0; i < order.size(); ++i)
    if (order[i] == s) return static_cast<int>(i);
  return static_cast<int>(order.size());
}

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

}  // namespace

Manifest Manifest::load_or_empty(const std::string& path) {
  Manifest m;
  if (!std::filesystem::exists(path)) return m;
  LineReader reader(path);
  std::string line;
  bool first = true;
  while (reader.next(line)) {
    if (first) {  // header
      first = false;
      continue;
    }
    if (line.empty()) continue;
    auto cols = split(line, '\t');
    if (cols.size() != 3) continue;
    m.sections_[std::string(cols[0])][std::string(cols[1])] =
        std::string(cols[2]);
  }
  return m;
}

void Manifest::set(const std::string& section, const std::string& key,
                   std::string value) {
  sections_[section][key] = std::move(value);
}

void Manifest::drop_section(const std::string& section) {
  sections_.erase(section);
}

std::string Manifest::render() const {
  std::vector<std::string> names;
  names.reserve(sections_.size());
  for (const auto& [name, _] : sections_) names.push_back(name);
  std::sort(names.begin(), names.end(), [](const auto& a, const auto& b) {
    int ra = section_rank(a), rb = section_rank(b);
    if (ra != rb) return ra < rb;
    return a < b;
  });
  std::string out = "section\tkey\tvalue\n";
  for (const auto& name : names) {
    for (const auto& [key, value] : sections_.at(name))
      out += name + "\t" + key + "\t" + value + "\n";
  }
  return out;
}

void Manifest::save(const std::string& path) const {
  write_file(path, render());
}

Pipeline::Pipeline(PipelineConfig config) : config_(std::move(config)) {
  config_.validate();
  if (config_.corpus_paths.empty())
    throw ConfigError("no corpus path configured");
}

std::string Pipeline::out_path(const std::string& rel) const {
  return config_.out_dir + "/" + rel;
}

void Pipeline::require_file(const std::string& path, const std::string& stage,
                            const std::string& hint) const {
  if (!std::filesystem::exists(path))
    throw StageError(ExitCode::MissingInput, "missing-input",
                     stage + ": missing " + path + " (" + hint + ")");
}

std::vector<PerceptionVerb> Pipeline::selected_verbs(
    const std::optional<std::string>& only_verb) const {
  if (!only_verb) return config_.lexicon;
  for (const auto& v : config_.lexicon)
    if (v.lemma == *only_verb) return {v};
  throw StageError(ExitCode::ConfigProblem, "config",
                   "verb not in lexicon: " + *only_verb);
}

Lemmatizer Pipeline::make_lemmatizer() const {
  Lemmatizer lem;
  if (!config_.lemma_overrides.empty()) {
    require_file(config_.lemma_overrides, "ingest", "lemma override TSV");
    lem.load_overrides(config_.lemma_overrides);
  }
  return lem;
}

void Pipeline::finish_stage(
    const std::string& stage,
    const std::vector<std::pair<std::string, std::string>>& rows,
    const std::vector<std::string>& input_files, double wall_ms) {
  const std::string manifest_path = out_path("manifest.tsv");
  Manifest manifest = Manifest::load_or_empty(manifest_path);
  manifest.drop_section("run");
  manifest.drop_section("param");
  manifest.set("run", "seed", std::to_string(config_.seed));
  manifest.set("run", "out", config_.out_dir);
  for (const auto& [key, value] : config_.echo())
    manifest.set("param", key, value);
  manifest.drop_section("stage." + stage);
  manifest.set("stage." + stage, "status", "ok");
  for (const auto& path : input_files) {
    manifest.set("stage." + stage,
                 "input." + std::filesystem::path(path).filename().string(),
                 digest_hex(file_digest(path)));
  }
  for (const auto& [key, value] : rows)
    manifest.set("stage." + stage, key, value);
  manifest.save(manifest_path);

  timings_.push_back({stage, wall_ms});
  if (config_.timings) {
    std::string t = "stage\twall_ms\n";
    for (const auto& row : timings_)
      t += row.stage + "\t" + format_fixed(row.wall_ms, 1) + "\n";
    write_file(out_path("timings.tsv"), t);
  }
}

// ---------------------------------------------------------------------------
// sharded line processing: batches of lines split across workers, partial
// results merged in slice order so output never depends on worker count
// ---------------------------------------------------------------------------

namespace {

template <typename Local, typename Fn>
void process_file_sharded(const std::string& path, int workers,
                          std::uint64_t& next_id, Local& total, Fn&& fn) {
  constexpr std::size_t kBatch = 8192;
  LineReader reader(path);
  std::vector<std::string> lines;
  lines.reserve(kBatch);
  std::string line;
  bool more = true;
  while (more) {
    lines.clear();
    while (lines.size() < kBatch && (more = reader.next(line)))
      lines.push_back(line);
    if (lines.empty()) break;

    const int shards = std::max(1, std::min<int>(workers,
        static_cast<int>(lines.size())));
    std::vector<Local> partial(static_cast<std::size_t>(shards));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(shards));
    const std::size_t per =
        (lines.size() + static_cast<std::size_t>(shards) - 1) /
        static_cast<std::size_t>(shards);
    std::vector<std::thread> threads;
    for (int s = 0; s < shards; ++s) {
      const std::size_t first = std::min(lines.size(), per * s);
      const std::size_t last = std::min(lines.size(), first + per);
      const std::uint64_t base = next_id + first;
      threads.emplace_back([&, s, first, last, base] {
        try {
          for (std::size_t i = first; i < last; ++i)
            fn(partial[static_cast<std::size_t>(s)], lines[i],
               base + (i - first));
        } catch (...) {
          errors[static_cast<std::size_t>(s)] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (auto& p : partial) total.merge(p);
    next_id += lines.size();
  }
}

struct IngestLocal {
  ParseCounters counters;
  std::string normalized;
  std::vector<std::string> subcorpus;  // per verb
  std::vector<std::vector<std::uint64_t>> ids;
  std::vector<std::vector<std::size_t>> matched_scratch;

  void merge(IngestLocal& o) {
    counters.merge(o.counters);
    normalized += o.normalized;
    if (o.subcorpus.empty()) return;
    if (subcorpus.empty()) {
      subcorpus.resize(o.subcorpus.size());
      ids.resize(o.ids.size());
    }
    for (std::size_t v = 0; v < subcorpus.size(); ++v) {
      subcorpus[v] += o.subcorpus[v];
      ids[v].insert(ids[v].end(), o.ids[v].begin(), o.ids[v].end());
    }
  }
};

struct TfLocal {
  TfMap tf;
  ParseCounters counters;
  void merge(TfLocal& o) {
    merge_tf(tf, o.tf);
    counters.merge(o.counters);
  }
};

struct OfLocal {
  std::vector<DescriptorCounter> counters;
  ParseCounters parse;
  void merge(OfLocal& o) {
    parse.merge(o.parse);
    if (o.counters.empty()) return;
    if (counters.empty()) {
      counters = std::move(o.counters);
      return;
    }
    for (std::size_t i = 0; i < counters.size(); ++i)
      counters[i].merge(o.counters[i]);
  }
};

}  // namespace

void Pipeline::ingest() {
  auto start = Clock::now();
  const auto& lexicon = config_.lexicon;
  for (const auto& path : config_.corpus_paths)
    require_file(path, "ingest", "corpus input");

  ensure_dir(out_path("corpus"));
  ensure_dir(out_path("subcorpus"));

  Lemmatizer lemmatizer = make_lemmatizer();
  std::unordered_map<std::string, std::size_t> verb_index;
  for (std::size_t v = 0; v < lexicon.size(); ++v)
    verb_index.emplace(lexicon[v].lemma, v);

  std::ofstream normalized(out_path("corpus/normalized.txt"),
                           std::ios::binary | std::ios::trunc);
  std::vector<std::ofstream> sub_files;
  for (const auto& v : lexicon)
    sub_files.emplace_back(out_path("subcorpus/" + v.lemma + ".txt"),
                           std::ios::binary | std::ios::trunc);

  ParseCounters totals;
  std::vector<std::uint64_t> verb_counts(lexicon.size(), 0);
  std::uint64_t next_id = 1;
  for (const auto& path : config_.corpus_paths) {
    IngestLocal total;
    total.subcorpus.resize(lexicon.size());
    total.ids.resize(lexicon.size());

    process_file_sharded(
        path, config_.workers, next_id, total,
        [&](IngestLocal& local, const std::string& line, std::uint64_t id) {
          if (local.subcorpus.empty()) {
            local.subcorpus.resize(lexicon.size());
            local.ids.resize(lexicon.size());
          }
          auto sentence = parse_tagged_line(line, id, local.counters);
          if (!sentence) return;
          normalize(*sentence, lemmatizer);
          std::string rendered = normalized_line(*sentence);
          local.normalized += rendered;
          local.normalized += '\n';
          std::vector<std::size_t> matched;
          for (const auto& tok : sentence->tokens) {
            if (!is_verbal_tag(tok.pos)) continue;
            auto it = verb_index.find(tok.lemma);
            if (it == verb_index.end()) continue;
            if (std::find(matched.begin(), matched.end(), it->second) ==
                matched.end())
              matched.push_back(it->second);
          }
          for (std::size_t v : matched) {
            local.subcorpus[v] += rendered;
            local.subcorpus[v] += '\n';
            local.ids[v].push_back(sentence->id);
          }
        });

    normalized << total.normalized;
    for (std::size_t v = 0; v < lexicon.size(); ++v) {
      sub_files[v] << total.subcorpus[v];
      verb_counts[v] += total.ids[v].size();
    }
    totals.merge(total.counters);
  }
  normalized.close();
  for (auto& f : sub_files) f.close();
  if (!normalized)
    throw StageError(ExitCode::StageFailure, "io",
                     "failed writing normalized corpus");

  SubcorpusStats stats;
  std::vector<int> seen_modalities;
  for (std::size_t v = 0; v < lexicon.size(); ++v)
    stats.verbs.push_back({lexicon[v].lemma, lexicon[v].modality,
                           lexicon[v].mode, verb_counts[v]});
  for (const auto& verb : lexicon) {
    int m = static_cast<int>(verb.modality);
    if (std::find(seen_modalities.begin(), seen_modalities.end(), m) !=
        seen_modalities.end())
      continue;
    seen_modalities.push_back(m);
    std::uint64_t total = 0;
    for (const auto& row : stats.verbs)
      if (row.modality == verb.modality) total += row.sentences;
    stats.modality_totals.emplace_back(verb.modality, total);
  }
  write_file(out_path("corpus/stats.tsv"), subcorpus_stats_tsv(stats));

  std::vector<std::pair<std::string, std::string>> rows;
  rows.emplace_back("lines", std::to_string(totals.lines));
  rows.emplace_back("sentences", std::to_string(totals.sentences));
  rows.emplace_back("skipped_lines", std::to_string(totals.skipped_lines));
  rows.emplace_back("malformed_tokens",
                    std::to_string(totals.malformed_tokens));
  rows.emplace_back("tokens", std::to_string(totals.tokens));
  for (const auto& row : stats.verbs)
    rows.emplace_back("sentences." + row.verb, std::to_string(row.sentences));
  finish_stage("ingest", rows, config_.corpus_paths, ms_since(start));
}

void Pipeline::collocate(const std::optional<std::string>& only_verb) {
  auto start = Clock::now();
  const std::string normalized = out_path("corpus/normalized.txt");
  require_file(normalized, "collocate", "run ingest first");
  auto verbs = selected_verbs(only_verb);

  TfLocal tf_total;
  std::uint64_t id = 0;
  process_file_sharded(normalized, config_.workers, id, tf_total,
                       [&](TfLocal& local, const std::string& line,
                           std::uint64_t line_id) {
                         auto s = parse_tagged_line(line, line_id,
                                                    local.counters);
                         if (s) count_corpus_frequencies(*s, local.tf);
                       });

  ensure_dir(out_path("counts"));
  std::vector<std::pair<std::string, std::string>> rows;
  std::vector<std::string> inputs = {normalized};
  for (const auto& verb : verbs) {
    const std::string sub = out_path("subcorpus/" + verb.lemma + ".txt");
    require_file(sub, "collocate", "run ingest first");
    inputs.push_back(sub);

    OfLocal total;
    total.counters.emplace_back(verb.lemma, config_.window,
                                config_.count_mode);
    std::uint64_t sid = 0;
    process_file_sharded(
        sub, config_.workers, sid, total,
        [&](OfLocal& local, const std::string& line, std::uint64_t line_id) {
          if (local.counters.empty())
            local.counters.emplace_back(verb.lemma, config_.window,
                                        config_.count_mode);
          auto s = parse_tagged_line(line, line_id, local.parse);
          if (s) local.counters[0].add_sentence(*s);
        });

    auto counts = finalize_counts(total.counters[0], tf_total.tf,
                                  config_.min_of_for(verb.lemma));
    write_file(out_path("counts/" + verb.lemma + ".tsv"),
               descriptor_counts_tsv(counts));
    rows.emplace_back("descriptors." + verb.lemma,
                      std::to_string(counts.size()));
    rows.emplace_back("windows." + verb.lemma,
                      std::to_string(total.counters[0].windows_seen()));
    rows.emplace_back("min_of." + verb.lemma,
                      std::to_string(config_.min_of_for(verb.lemma)));
  }
  rows.emplace_back("tf_keys", std::to_string(tf_total.tf.size()));
  rows.emplace_back("window", std::to_string(config_.window));
  rows.emplace_back("count_mode", std::string(to_string(config_.count_mode)));
  finish_stage("collocate", rows, inputs, ms_since(start));
}

void Pipeline::rank(const std::optional<std::string>& only_verb) {
  auto start = Clock::now();
  auto verbs = selected_verbs(only_verb);
  Stoplist stoplist;
  std::vector<std::string> inputs;
  if (!config_.stoplist_path.empty()) {
    require_file(config_.stoplist_path, "rank", "stoplist file");
    stoplist = Stoplist::load(config_.stoplist_path);
    inputs.push_back(config_.stoplist_path);
  }

  ensure_dir(out_path("lists"));
  std::vector<std::pair<std::string, std::string>> rows;
  for (const auto& verb : verbs) {
    const std::string counts_path = out_path("counts/" + verb.lemma + ".tsv");
    require_file(counts_path, "rank", "run collocate first");
    inputs.push_back(counts_path);
    auto counts = parse_descriptor_counts_tsv(counts_path);
    auto list = rank_descriptors(verb.lemma, std::move(counts),
                                 config_.freq_cutoff_for(verb.lemma),
                                 config_.top_k, stoplist);
    write_file(out_path("lists/" + verb.lemma + ".tsv"),
               descriptor_list_tsv(list));
    rows.emplace_back("final_size." + verb.lemma,
                      std::to_string(list.final_size));
    rows.emplace_back("freq_cutoff." + verb.lemma,
                      std::to_string(config_.freq_cutoff_for(verb.lemma)));
    rows.emplace_back("stoplist_dropped." + verb.lemma,
                      std::to_string(list.stoplist_dropped.size()));
  }
  rows.emplace_back("top_k", std::to_string(config_.top_k));
  finish_stage("rank", rows, inputs, ms_since(start));
}

void Pipeline::embed() {
  auto start = Clock::now();
  const std::string normalized = out_path("corpus/normalized.txt");
  require_file(normalized, "embed", "run ingest first");

  TrainingConfig tc = config_.training;
  tc.seed = config_.seed;
  tc.workers = config_.deterministic ? 1 : config_.workers;

  Vocab vocab = build_vocab_from_file(normalized, tc.min_count);
  auto sentences = load_token_ids(normalized, vocab);
  std::vector<EpochStats> curve;
  EmbeddingModel model = train_cbow(sentences, vocab, tc, &curve);

  ensure_dir(out_path("models"));
  std::vector<std::pair<std::string, std::string>> extra;
  extra.emplace_back("corpus_digest", digest_hex(file_digest(normalized)));
  model.save(out_path("models/embeddings.txt"),
             out_path("models/embeddings.meta"), extra);

  std::vector<std::pair<std::string, std::string>> rows;
  rows.emplace_back("vocab_size", std::to_string(vocab.size()));
  rows.emplace_back("train_sentences", std::to_string(sentences.size()));
  if (!curve.empty()) {
    rows.emplace_back("first_epoch_loss",
                      format_fixed(curve.front().mean_loss, 6));
    rows.emplace_back("last_epoch_loss",
                      format_fixed(curve.back().mean_loss, 6));
  }
  finish_stage("embed", rows, {normalized}, ms_since(start));
}

namespace {

struct VerbClusterArtifacts {
  std::vector<std::string> labels;
  DistanceMatrix matrix;
  Dendrogram dendro;
  SilhouetteReport sweep;
  std::vector<std::pair<std::string, std::string>> dropped;  // key, reason
};

VerbClusterArtifacts cluster_one(const std::vector<DescriptorStats>& list,
                                 const EmbeddingModel& model,
                                 std::size_t k_min, std::size_t k_max) {
  VerbClusterArtifacts art;
  std::vector<std::vector<double>> vectors;
  for (const auto& d : list) {
    std::vector<double> v;
    switch (concept_vector(model, key_string(d.key), v)) {
      case VectorStatus::Ok:
        art.labels.push_back(key_string(d.key));
        vectors.push_back(std::move(v));
        break;
      case VectorStatus::NotFound:
        art.dropped.emplace_back(key_string(d.key), "not-in-vocabulary");
        break;
      case VectorStatus::Constant:
        art.dropped.emplace_back(key_string(d.key), "constant-vector");
        break;
    }
  }
  if (art.labels.size() < 3)
    throw StageError(ExitCode::StageFailure, "cluster",
                     "fewer than 3 usable descriptor vectors");
  art.matrix = DistanceMatrix::from_vectors(art.labels, vectors);
  art.dendro = agnes_ward(art.matrix);
  std::size_t hi = k_max == 0 ? art.labels.size() - 1 : std::min(
      k_max, art.labels.size() - 1);
  art.sweep = sweep_k(art.dendro, art.matrix, std::min(k_min, hi), hi);
  return art;
}

std::string dropped_tsv(
    const std::vector<std::pair<std::string, std::string>>& dropped) {
  std::string out = "key\treason\n";
  for (const auto& [key, reason] : dropped) out += key + "\t" + reason + "\n";
  return out;
}

}  // namespace

void Pipeline::cluster(const std::optional<std::string>& only_verb) {
  auto start = Clock::now();
  const std::string model_path = out_path("models/embeddings.txt");
  require_file(model_path, "cluster", "run embed first");
  auto verbs = selected_verbs(only_verb);

  EmbeddingModel model = EmbeddingModel::load(model_path);
  ensure_dir(out_path("cluster"));

  std::vector<std::string> inputs = {model_path};
  std::vector<std::pair<std::string, std::string>> rows;
  for (const auto& verb : verbs) {
    const std::string list_path = out_path("lists/" + verb.lemma + ".tsv");
    require_file(list_path, "cluster", "run rank first");
    inputs.push_back(list_path);
    auto list = parse_descriptor_list_tsv(list_path);
    if (list.size() < 3)
      throw StageError(ExitCode::StageFailure, "cluster",
                       "ranked list too small for " + verb.lemma);
    auto art = cluster_one(list, model, config_.k_min, config_.k_max);

    write_file(out_path("cluster/" + verb.lemma + ".matrix.tsv"),
               art.matrix.to_tsv());
    write_file(out_path("cluster/" + verb.lemma + ".dendro"),
               dendrogram_text(art.dendro, art.labels));
    write_file(out_path("cluster/" + verb.lemma + ".sweep.tsv"),
               silhouette_report_tsv(art.sweep));
    write_file(out_path("cluster/" + verb.lemma + ".dropped.tsv"),
               dropped_tsv(art.dropped));

    rows.emplace_back("leaves." + verb.lemma,
                      std::to_string(art.labels.size()));
    rows.emplace_back("dropped." + verb.lemma,
                      std::to_string(art.dropped.size()));
    rows.emplace_back("best_k." + verb.lemma,
                      std::to_string(art.sweep.best_k));
    rows.emplace_back("best_score." + verb.lemma,
                      format_fixed(art.sweep.best_score, 6));
  }
  finish_stage("cluster", rows, inputs, ms_since(start));
}

void Pipeline::recluster(const std::string& verb, std::size_t at_k,
                         int member) {
  auto start = Clock::now();
  const std::string dendro_path = out_path("cluster/" + verb + ".dendro");
  const std::string matrix_path = out_path("cluster/" + verb + ".matrix.tsv");
  require_file(dendro_path, "recluster", "run cluster first");
  require_file(matrix_path, "recluster", "run cluster first");

  auto [dendro, labels] = parse_dendrogram_text(read_file(dendro_path));
  DistanceMatrix matrix = DistanceMatrix::from_tsv_file(matrix_path);
  if (matrix.labels() != labels)
    throw StageError(ExitCode::StageFailure, "recluster",
                     "dendrogram and matrix disagree for " + verb);

  if (at_k == 0) {
    auto sweep = sweep_k(dendro, matrix);
    at_k = sweep.best_k;
  }
  if (at_k < 2 || at_k > dendro.n_leaves)
    throw StageError(ExitCode::ConfigProblem, "config",
                     "recluster cut k out of range");
  auto assignment = cut(dendro, at_k);

  std::vector<std::size_t> cluster_sizes(at_k, 0);
  for (int c : assignment) cluster_sizes[static_cast<std::size_t>(c)]++;
  std::size_t chosen;
  if (member < 0) {
    chosen = 0;
    for (std::size_t c = 1; c < cluster_sizes.size(); ++c)
      if (cluster_sizes[c] > cluster_sizes[chosen]) chosen = c;
  } else {
    chosen = static_cast<std::size_t>(member);
    if (chosen >= at_k)
      throw StageError(ExitCode::ConfigProblem, "config",
                       "recluster member out of range");
  }

  std::vector<std::size_t> subset;
  for (std::size_t i = 0; i < assignment.size(); ++i)
    if (static_cast<std::size_t>(assignment[i]) == chosen) subset.push_back(i);
  if (subset.size() < 3)
    throw StageError(ExitCode::StageFailure, "recluster",
                     "selected sub-cluster has fewer than 3 members");

  DistanceMatrix sub_matrix = matrix.restrict(subset);
  Dendrogram sub_dendro = agnes_ward(sub_matrix);
  std::size_t hi = sub_matrix.size() - 1;
  auto sub_sweep = sweep_k(sub_dendro, sub_matrix, std::min<std::size_t>(2, hi),
                           hi);

  const std::string tag =
      verb + ".sub.k" + std::to_string(at_k) + ".m" + std::to_string(chosen);
  write_file(out_path("cluster/" + tag + ".dendro"),
             dendrogram_text(sub_dendro, sub_matrix.labels()));
  write_file(out_path("cluster/" + tag + ".sweep.tsv"),
             silhouette_report_tsv(sub_sweep));

  std::vector<std::pair<std::string, std::string>> rows;
  rows.emplace_back("verb", verb);
  rows.emplace_back("cut_k", std::to_string(at_k));
  rows.emplace_back("member", std::to_string(chosen));
  rows.emplace_back("subset_size", std::to_string(subset.size()));
  rows.emplace_back("best_k", std::to_string(sub_sweep.best_k));
  rows.emplace_back("best_score", format_fixed(sub_sweep.best_score, 6));
  finish_stage("recluster", rows, {dendro_path, matrix_path}, ms_since(start));
}

void Pipeline::norms(const std::optional<std::string>& only_verb) {
  auto start = Clock::now();
  if (config_.norms_csv.empty())
    throw StageError(ExitCode::ConfigProblem, "config",
                     "norms stage needs norms.csv in the config");
  require_file(config_.norms_csv, "norms", "norms CSV input");
  auto verbs = selected_verbs(only_verb);

  NormsTable table = load_norms(config_.norms_csv, config_.norms_columns);
  ensure_dir(out_path("norms"));

  std::vector<std::string> inputs = {config_.norms_csv};
  std::vector<std::pair<std::string, std::string>> rows;
  rows.emplace_back("entries", std::to_string(table.entries.size()));
  rows.emplace_back("rejected_rows", std::to_string(table.rejected_rows));
  rows.emplace_back("duplicate_rows", std::to_string(table.duplicate_rows));

  std::string profile_rows =
      "verb\tA\tG\tH\tI\tO\tV\tNA\tape\tape_std\tams\tams_std\tmatched\tlist_"
      "size\n";
  for (const auto& verb : verbs) {
    const std::string list_path = out_path("lists/" + verb.lemma + ".tsv");
    require_file(list_path, "norms", "run rank first");
    inputs.push_back(list_path);
    auto stats = parse_descriptor_list_tsv(list_path);
    DescriptorList list;
    list.verb = verb.lemma;
    list.descriptors = std::move(stats);
    list.final_size = list.descriptors.size();

    std::vector<DescriptorModality> per;
    ModalityProfile p =
        profile(list, table, config_.seed, config_.norms_strict_pos, &per);

    std::string detail = "key\tmatched\texclusivity\tmax_strength\tdominant\n";
    for (const auto& d : per) {
      detail += key_string(d.key);
      detail += '\t';
      detail += d.matched ? "1" : "0";
      detail += '\t';
      detail += d.matched ? format_fixed(d.exclusivity, 6) : "NA";
      detail += '\t';
      detail += d.matched ? format_fixed(d.max_strength, 3) : "NA";
      detail += '\t';
      detail += d.dominant ? std::string(to_string(*d.dominant)) : "NA";
      detail += '\n';
    }
    write_file(out_path("norms/" + verb.lemma + ".tsv"), detail);

    profile_rows += p.verb;
    for (double pct : p.percent) {
      profile_rows += '\t';
      profile_rows += format_fixed(pct, 4);
    }
    profile_rows += '\t';
    profile_rows += p.matched ? format_fixed(p.ape, 6) : "NA";
    profile_rows += '\t';
    profile_rows += p.matched ? format_fixed(p.ape_std, 6) : "NA";
    profile_rows += '\t';
    profile_rows += p.matched ? format_fixed(p.ams, 6) : "NA";
    profile_rows += '\t';
    profile_rows += p.matched ? format_fixed(p.ams_std, 6) : "NA";
    profile_rows += '\t';
    profile_rows += std::to_string(p.matched);
    profile_rows += '\t';
    profile_rows += std::to_string(p.list_size);
    profile_rows += '\n';

    rows.emplace_back("matched." + verb.lemma, std::to_string(p.matched));
  }
  write_file(out_path("norms/profiles.tsv"), profile_rows);
  finish_stage("norms", rows, inputs, ms_since(start));
}

void Pipeline::report() {
  auto start = Clock::now();
  ensure_dir(out_path("tables"));
  ensure_dir(out_path("figures"));

  const std::string stats_path = out_path("corpus/stats.tsv");
  require_file(stats_path, "report", "run ingest first");
  write_file(out_path("tables/subcorpus_stats.tsv"), read_file(stats_path));

  std::vector<std::string> inputs = {stats_path};
  std::vector<DescriptorList> lists;
  std::string pos_table = "verb\tNN\tJJ\tVB\tRB\tMD\n";
  for (const auto& verb : config_.lexicon) {
    const std::string list_path = out_path("lists/" + verb.lemma + ".tsv");
    require_file(list_path, "report", "run rank first");
    inputs.push_back(list_path);
    DescriptorList list;
    list.verb = verb.lemma;
    list.descriptors = parse_descriptor_list_tsv(list_path);
    list.final_size = list.descriptors.size();
    auto dist = pos_distribution(list);
    pos_table += verb.lemma;
    for (std::size_t c : dist) {
      pos_table += '\t';
      pos_table += std::to_string(c);
    }
    pos_table += '\n';
    lists.push_back(std::move(list));
  }
  write_file(out_path("tables/pos_distribution.tsv"), pos_table);

  OverlapMatrix overlap = overlap_matrix(lists);
  write_file(out_path("figures/heatmap.csv"), overlap_csv(overlap));
  write_file(out_path("figures/heatmap.svg"), render_heatmap_svg(overlap));

  std::string silhouette_table = "set\tmax_silhouette\toptimal_k\tleaves\n";
  for (const auto& verb : config_.lexicon) {
    const std::string dendro_path =
        out_path("cluster/" + verb.lemma + ".dendro");
    const std::string sweep_path =
        out_path("cluster/" + verb.lemma + ".sweep.tsv");
    require_file(dendro_path, "report", "run cluster first");
    require_file(sweep_path, "report", "run cluster first");
    inputs.push_back(dendro_path);

    auto [dendro, labels] = parse_dendrogram_text(read_file(dendro_path));
    write_file(out_path("figures/dendrogram_" + verb.lemma + ".svg"),
               render_dendrogram_svg(dendro, labels));

    // best row from the sweep file: max score, smallest k on ties
    LineReader reader(sweep_path);
    std::string line;
    bool first = true;
    std::size_t best_k = 0;
    double best = 0.0;
    while (reader.next(line)) {
      if (first || line.empty()) {
        first = false;
        continue;
      }
      auto cols = split(line, '\t');
      if (cols.size() != 2) continue;
      std::size_t k = std::stoull(std::string(cols[0]));
      double score = std::stod(std::string(cols[1]));
      if (best_k == 0 || score > best) {
        best_k = k;
        best = score;
      }
    }
    silhouette_table += verb.lemma + "\t" + format_fixed(best, 6) + "\t" +
                        std::to_string(best_k) + "\t" +
                        std::to_string(dendro.n_leaves) + "\n";
  }
  write_file(out_path("tables/silhouette.tsv"), silhouette_table);

  const std::string profiles_path = out_path("norms/profiles.tsv");
  bool norms_present = std::filesystem::exists(profiles_path);
  if (norms_present) {
    inputs.push_back(profiles_path);
    // reshape the profile rows into the two tables
    LineReader reader(profiles_path);
    std::string line;
    bool first = true;
    std::string t3 = "verb\tA\tG\tH\tI\tO\tV\tNA\n";
    std::string t4 = "verb\tape\tape_std\tams\tams_std\tcount\n";
    while (reader.next(line)) {
      if (first || line.empty()) {
        first = false;
        continue;
      }
      auto cols = split(line, '\t');
      if (cols.size() != 14) continue;
      t3 += std::string(cols[0]);
      for (int c = 1; c <= 7; ++c) {
        t3 += '\t';
        t3 += std::string(cols[static_cast<std::size_t>(c)]);
      }
      t3 += '\n';
      t4 += std::string(cols[0]);
      for (int c = 8; c <= 12; ++c) {
        t4 += '\t';
        t4 += std::string(cols[static_cast<std::size_t>(c)]);
      }
      t4 += '\n';
    }
    write_file(out_path("tables/modality_distribution.tsv"), t3);
    write_file(out_path("tables/ape_ams.tsv"), t4);
  } else {
    std::cout << "notice: no norms artifacts; skipping modality tables\n";
  }

  std::vector<std::pair<std::string, std::string>> rows;
  rows.emplace_back("lists", std::to_string(lists.size()));
  rows.emplace_back("norms_tables", norms_present ? "written" : "skipped");
  finish_stage("report", rows, inputs, ms_since(start));
}

void Pipeline::all() {
  ingest();
  collocate();
  rank();
  embed();
  cluster();
  if (!config_.norms_csv.empty()) {
    norms();
  } else {
    std::cout << "notice: no norms.csv configured; skipping norms stage\n";
  }
  report();
}

}  // namespace sensorium
