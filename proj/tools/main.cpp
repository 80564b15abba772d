#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "sensorium/pipeline.hpp"

namespace {

void print_error(const std::string& category, const std::string& message) {
  std::cerr << "sensorium-error\t" << category << "\t" << message << "\n";
}

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> workers;
  std::optional<bool> deterministic;
  std::optional<bool> timings;
  std::optional<int> window;
  std::optional<std::uint64_t> min_of;
  std::optional<std::uint64_t> freq_cutoff;
  std::optional<std::size_t> top_k;
  std::optional<std::string> verb;

  void apply(sensorium::PipelineConfig& cfg) const {
    if (seed) cfg.seed = *seed;
    if (out) cfg.out_dir = *out;
    if (workers) cfg.workers = *workers;
    if (deterministic) cfg.deterministic = *deterministic;
    if (timings) cfg.timings = *timings;
    if (window) cfg.window = *window;
    if (min_of) {
      if (verb) cfg.min_of_overrides[*verb] = *min_of;
      else cfg.min_of = *min_of;
    }
    if (freq_cutoff) {
      if (verb) cfg.freq_cutoff_overrides[*verb] = *freq_cutoff;
      else cfg.freq_cutoff = *freq_cutoff;
    }
    if (top_k) cfg.top_k = *top_k;
    cfg.validate();
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "sensorium: contextual sensory-space pipeline for perception verbs"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("-c,--config", config_path, "pipeline config file")
      ->envname("SENSORIUM_CONFIG");

  Overrides ov;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", ov.seed, "run seed");
    cmd->add_option("--out", ov.out, "output directory");
    cmd->add_option("--workers", ov.workers, "worker threads");
    cmd->add_flag("--deterministic,!--no-deterministic", ov.deterministic,
                  "force single-worker training");
    cmd->add_flag("--timings", ov.timings, "write timings.tsv");
  };
  auto add_verb = [&](CLI::App* cmd) {
    cmd->add_option("--verb", ov.verb, "restrict to one perception verb");
  };

  CLI::App* ingest = app.add_subcommand("ingest", "parse + normalize corpus");
  add_common(ingest);

  CLI::App* collocate =
      app.add_subcommand("collocate", "count context descriptors");
  add_common(collocate);
  add_verb(collocate);
  collocate->add_option("--window", ov.window, "context window size");
  collocate->add_option("--min-of", ov.min_of, "minimum window frequency");

  CLI::App* rank = app.add_subcommand("rank", "score and rank descriptors");
  add_common(rank);
  add_verb(rank);
  rank->add_option("--freq-cutoff", ov.freq_cutoff,
                   "frequency cutoff before scoring");
  rank->add_option("--top-k", ov.top_k, "final list size");

  CLI::App* embed = app.add_subcommand("embed", "train the CBOW model");
  add_common(embed);

  CLI::App* cluster =
      app.add_subcommand("cluster", "distance matrices + dendrograms");
  add_common(cluster);
  add_verb(cluster);

  CLI::App* recluster =
      app.add_subcommand("recluster", "re-cluster one sub-cluster");
  add_common(recluster);
  std::string recluster_verb;
  std::size_t at_k = 0;
  int member = -1;
  recluster->add_option("--verb", recluster_verb, "verb whose space to refine")
      ->required();
  recluster->add_option("--at-k", at_k,
                        "cut level (default: silhouette-optimal)");
  recluster->add_option("--member", member,
                        "cluster index at the cut (default: largest)");

  CLI::App* norms = app.add_subcommand("norms", "sensorimotor norm profiles");
  add_common(norms);
  add_verb(norms);

  CLI::App* report = app.add_subcommand("report", "tables and figures");
  add_common(report);

  CLI::App* all = app.add_subcommand("all", "run the whole pipeline");
  add_common(all);
  all->add_option("--window", ov.window, "context window size");
  all->add_option("--min-of", ov.min_of, "minimum window frequency");
  all->add_option("--freq-cutoff", ov.freq_cutoff,
                  "frequency cutoff before scoring");
  all->add_option("--top-k", ov.top_k, "final list size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return static_cast<int>(sensorium::ExitCode::ConfigProblem);
  }

  try {
    if (config_path.empty())
      throw sensorium::ConfigError(
          "no config file: pass --config or set SENSORIUM_CONFIG");
    sensorium::PipelineConfig cfg = sensorium::load_config(config_path);
    ov.apply(cfg);
    sensorium::Pipeline pipeline(std::move(cfg));

    if (ingest->parsed()) pipeline.ingest();
    else if (collocate->parsed()) pipeline.collocate(ov.verb);
    else if (rank->parsed()) pipeline.rank(ov.verb);
    else if (embed->parsed()) pipeline.embed();
    else if (cluster->parsed()) pipeline.cluster(ov.verb);
    else if (recluster->parsed()) pipeline.recluster(recluster_verb, at_k, member);
    else if (norms->parsed()) pipeline.norms(ov.verb);
    else if (report->parsed()) pipeline.report();
    else if (all->parsed()) pipeline.all();
    return static_cast<int>(sensorium::ExitCode::Ok);
  } catch (const sensorium::ConfigError& e) {
    print_error("config", e.what());
    return static_cast<int>(sensorium::ExitCode::ConfigProblem);
  } catch (const sensorium::StageError& e) {
    print_error(e.category, e.what());
    return static_cast<int>(e.code);
  } catch (const std::exception& e) {
    print_error("stage", e.what());
    return static_cast<int>(sensorium::ExitCode::StageFailure);
  }
}
