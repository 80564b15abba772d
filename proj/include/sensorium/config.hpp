#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sensorium/collocate.hpp"
#include "sensorium/embed.hpp"
#include "sensorium/norms.hpp"
#include "sensorium/types.hpp"

namespace sensorium {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Effective settings for a run. Defaults reproduce the reference setup:
// +/-4 window, min_of 10 (8 for smell/taste), cutoff 1600 (1400 for see),
// top 300, CBOW dim 200 / min_count 10 / 30 epochs.
struct PipelineConfig {
  // [corpus]
  std::vector<std::string> corpus_paths;
  std::string lemma_overrides;

  // [pipeline]
  std::uint64_t seed = 42;
  std::string out_dir = "out";
  int workers = 1;
  bool deterministic = true;
  bool timings = false;

  // [collocate]
  int window = 4;
  std::uint64_t min_of = 10;
  std::map<std::string, std::uint64_t> min_of_overrides = {{"smell", 8},
                                                           {"taste", 8}};
  CountMode count_mode = CountMode::Occurrence;

  // [rank]
  std::uint64_t freq_cutoff = 1600;
  std::map<std::string, std::uint64_t> freq_cutoff_overrides = {{"see", 1400}};
  std::size_t top_k = 300;
  std::string stoplist_path;

  // [embed]
  TrainingConfig training;

  // [cluster]
  std::size_t k_min = 2;
  std::size_t k_max = 0;  // 0 = n-1

  // [norms]
  std::string norms_csv;
  NormsColumns norms_columns;
  bool norms_strict_pos = false;

  // [verbs]
  std::vector<PerceptionVerb> lexicon = default_verb_lexicon();

  std::uint64_t min_of_for(const std::string& verb) const;
  std::uint64_t freq_cutoff_for(const std::string& verb) const;

  void validate() const;  // throws ConfigError

  // Every effective parameter in canonical order, for the manifest echo.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

// Line-oriented `key = value` file with [section] headers. Unknown sections
// or keys are rejected; full-line comments start with # or ;. Relative paths
// resolve against the config file's directory.
PipelineConfig load_config(const std::string& path);

}  // namespace sensorium
