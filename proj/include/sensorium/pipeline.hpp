#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sensorium/config.hpp"

namespace sensorium {

enum class ExitCode : int {
  Ok = 0,
  ConfigProblem = 2,
  MissingInput = 3,
  StageFailure = 4,
};

struct StageError : std::runtime_error {
  ExitCode code;
  std::string category;
  StageError(ExitCode code, std::string category, const std::string& message)
      : std::runtime_error(message), code(code), category(std::move(category)) {}
};

// Deterministic key/value record of a run: effective parameters, input
// digests and stage status. Sections render in pipeline order with sorted
// keys, so reruns with identical inputs produce identical bytes.
class Manifest {
 public:
  static Manifest load_or_empty(const std::string& path);

  void set(const std::string& section, const std::string& key,
           std::string value);
  void drop_section(const std::string& section);
  std::string render() const;
  void save(const std::string& path) const;

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

// Stage runner over one output directory. Each stage validates that its
// inputs exist, writes its artifacts and updates the manifest.
class Pipeline {
 public:
  explicit Pipeline(PipelineConfig config);

  void ingest();
  void collocate(const std::optional<std::string>& only_verb = {});
  void rank(const std::optional<std::string>& only_verb = {});
  void embed();
  void cluster(const std::optional<std::string>& only_verb = {});
  // at_k = 0 picks the silhouette-optimal cut; member = -1 picks the largest
  // cluster of that cut.
  void recluster(const std::string& verb, std::size_t at_k = 0,
                 int member = -1);
  void norms(const std::optional<std::string>& only_verb = {});
  void report();
  void all();

  const PipelineConfig& config() const { return config_; }

 private:
  struct StageTiming {
    std::string stage;
    double wall_ms;
  };

  std::string out_path(const std::string& rel) const;
  void require_file(const std::string& path, const std::string& stage,
                    const std::string& hint) const;
  std::vector<PerceptionVerb> selected_verbs(
      const std::optional<std::string>& only_verb) const;
  void finish_stage(const std::string& stage,
                    const std::vector<std::pair<std::string, std::string>>&
                        rows,
                    const std::vector<std::string>& input_files,
                    double wall_ms);
  Lemmatizer make_lemmatizer() const;

  PipelineConfig config_;
  std::vector<StageTiming> timings_;
};

}  // namespace sensorium
