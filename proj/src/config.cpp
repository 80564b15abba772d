#include "sensorium/config.hpp"

#include <algorithm>
#include <filesystem>
#include <set>

#include "sensorium/util.hpp"

namespace sensorium {

std::uint64_t PipelineConfig::min_of_for(const std::string& verb) const {
  auto it = min_of_overrides.find(verb);
  return it == min_of_overrides.end() ? min_of : it->second;
}

std::uint64_t PipelineConfig::freq_cutoff_for(const std::string& verb) const {
  auto it = freq_cutoff_overrides.find(verb);
  return it == freq_cutoff_overrides.end() ? freq_cutoff : it->second;
}

void PipelineConfig::validate() const {
  if (window < 1) throw ConfigError("collocate.window must be >= 1");
  if (min_of < 1) throw ConfigError("collocate.min_of must be >= 1");
  for (const auto& [verb, value] : min_of_overrides)
    if (value < 1)
      throw ConfigError("collocate.min_of." + verb + " must be >= 1");
  if (top_k < 1) throw ConfigError("rank.top_k must be >= 1");
  if (freq_cutoff < top_k)
    throw ConfigError("rank.freq_cutoff must be >= rank.top_k");
  for (const auto& [verb, value] : freq_cutoff_overrides)
    if (value < top_k)
      throw ConfigError("rank.freq_cutoff." + verb + " must be >= rank.top_k");
  try {
    training.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (k_min < 2) throw ConfigError("cluster.k_min must be >= 2");
  if (k_max != 0 && k_max < k_min)
    throw ConfigError("cluster.k_max must be 0 or >= cluster.k_min");
  if (workers < 1) throw ConfigError("pipeline.workers must be >= 1");
  if (norms_strict_pos && norms_columns.pos.empty())
    throw ConfigError("norms.strict_pos needs norms.column.pos");
  if (lexicon.empty()) throw ConfigError("verb lexicon is empty");
  std::set<std::string> seen;
  for (const auto& v : lexicon) {
    if (v.lemma.empty()) throw ConfigError("verb lexicon entry without lemma");
    if (!seen.insert(v.lemma).second)
      throw ConfigError("duplicate verb in lexicon: " + v.lemma);
  }
}

std::vector<std::pair<std::string, std::string>> PipelineConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> out;
  auto add = [&](std::string key, std::string value) {
    out.emplace_back(std::move(key), std::move(value));
  };
  for (std::size_t i = 0; i < corpus_paths.size(); ++i)
    add("corpus.path." + std::to_string(i), corpus_paths[i]);
  add("corpus.lemma_overrides", lemma_overrides);
  add("pipeline.seed", std::to_string(seed));
  add("pipeline.out", out_dir);
  add("pipeline.workers", std::to_string(workers));
  add("pipeline.deterministic", deterministic ? "true" : "false");
  add("pipeline.timings", timings ? "true" : "false");
  add("collocate.window", std::to_string(window));
  add("collocate.min_of", std::to_string(min_of));
  for (const auto& [verb, value] : min_of_overrides)
    add("collocate.min_of." + verb, std::to_string(value));
  add("collocate.count_mode", std::string(to_string(count_mode)));
  add("rank.freq_cutoff", std::to_string(freq_cutoff));
  for (const auto& [verb, value] : freq_cutoff_overrides)
    add("rank.freq_cutoff." + verb, std::to_string(value));
  add("rank.top_k", std::to_string(top_k));
  add("rank.stoplist", stoplist_path);
  add("embed.dim", std::to_string(training.dim));
  add("embed.window", std::to_string(training.window));
  add("embed.min_count", std::to_string(training.min_count));
  add("embed.epochs", std::to_string(training.epochs));
  add("embed.negatives", std::to_string(training.negatives));
  add("embed.learning_rate", format_double(training.learning_rate));
  add("embed.subsample", format_double(training.subsample));
  add("embed.dynamic_window", training.dynamic_window ? "true" : "false");
  add("cluster.k_min", std::to_string(k_min));
  add("cluster.k_max", std::to_string(k_max));
  add("norms.csv", norms_csv);
  add("norms.column.word", norms_columns.word);
  static const char* rating_names[] = {"auditory",      "gustatory",
                                       "haptic",        "interoceptive",
                                       "olfactory",     "visual"};
  for (std::size_t m = 0; m < kNormModalities; ++m)
    add(std::string("norms.column.") + rating_names[m],
        norms_columns.ratings[m]);
  add("norms.column.pos", norms_columns.pos);
  add("norms.strict_pos", norms_strict_pos ? "true" : "false");
  for (const auto& v : lexicon) {
    std::string value = std::string(to_string(v.modality)) + "," +
                        std::string(to_string(v.mode));
    for (const auto& i : v.inflections) value += "," + i;
    add("verbs." + v.lemma, value);
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::uint64_t parse_u64(const std::string& where, std::string_view v) {
  try {
    std::size_t pos = 0;
    std::string s(v);
    std::uint64_t out = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return out;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected a non-negative integer, got \"" +
                      std::string(v) + "\"");
  }
}

int parse_int(const std::string& where, std::string_view v) {
  try {
    std::size_t pos = 0;
    std::string s(v);
    int out = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return out;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected an integer, got \"" +
                      std::string(v) + "\"");
  }
}

double parse_real(const std::string& where, std::string_view v) {
  try {
    std::size_t pos = 0;
    std::string s(v);
    double out = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return out;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected a number, got \"" + std::string(v) +
                      "\"");
  }
}

bool parse_bool(const std::string& where, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(where + ": expected true/false, got \"" + std::string(v) +
                    "\"");
}

}  // namespace

PipelineConfig load_config(const std::string& path) {
  PipelineConfig cfg;
  std::filesystem::path base = std::filesystem::path(path).parent_path();
  auto resolve = [&](std::string_view p) -> std::string {
    std::filesystem::path fp{std::string(p)};
    if (fp.is_absolute() || base.empty()) return fp.string();
    return (base / fp).string();
  };

  LineReader reader(path);
  std::string line;
  std::string section;
  std::size_t lineno = 0;
  bool verbs_section_seen = false;
  std::set<std::string> seen_keys;

  while (reader.next(line)) {
    ++lineno;
    std::string_view sv = trim(line);
    if (sv.empty() || sv.front() == '#' || sv.front() == ';') continue;
    const std::string where = path + ":" + std::to_string(lineno);

    if (sv.front() == '[') {
      if (sv.back() != ']') throw ConfigError(where + ": unterminated section");
      section = std::string(trim(sv.substr(1, sv.size() - 2)));
      static const std::set<std::string> known = {
          "corpus", "pipeline", "collocate", "rank",
          "embed",  "cluster",  "norms",     "verbs"};
      if (!known.contains(section))
        throw ConfigError(where + ": unknown section [" + section + "]");
      if (section == "verbs" && !verbs_section_seen) {
        verbs_section_seen = true;
        cfg.lexicon.clear();  // explicit lexicon replaces the default
      }
      continue;
    }

    std::size_t eq = sv.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(where + ": expected key = value");
    std::string key(trim(sv.substr(0, eq)));
    std::string value(trim(sv.substr(eq + 1)));
    if (section.empty())
      throw ConfigError(where + ": key outside any [section]");
    if (key.empty()) throw ConfigError(where + ": empty key");

    const std::string full = section + "." + key;
    const bool repeatable = full == "corpus.path";
    if (!repeatable && section != "verbs" && !seen_keys.insert(full).second)
      throw ConfigError(where + ": duplicate key " + full);

    if (section == "corpus") {
      if (key == "path") cfg.corpus_paths.push_back(resolve(value));
      else if (key == "lemma_overrides") cfg.lemma_overrides = resolve(value);
      else throw ConfigError(where + ": unknown key " + full);
    } else if (section == "pipeline") {
      if (key == "seed") cfg.seed = parse_u64(where, value);
      else if (key == "out") cfg.out_dir = resolve(value);
      else if (key == "workers") cfg.workers = parse_int(where, value);
      else if (key == "deterministic")
        cfg.deterministic = parse_bool(where, value);
      else if (key == "timings") cfg.timings = parse_bool(where, value);
      else throw ConfigError(where + ": unknown key " + full);
    } else if (section == "collocate") {
      if (key == "window") cfg.window = parse_int(where, value);
      else if (key == "min_of") cfg.min_of = parse_u64(where, value);
      else if (key.starts_with("min_of."))
        cfg.min_of_overrides[key.substr(7)] = parse_u64(where, value);
      else if (key == "count_mode") {
        if (value == "occurrence") cfg.count_mode = CountMode::Occurrence;
        else if (value == "sentence-presence")
          cfg.count_mode = CountMode::SentencePresence;
        else
          throw ConfigError(where +
                            ": count_mode is occurrence or sentence-presence");
      } else throw ConfigError(where + ": unknown key " + full);
    } else if (section == "rank") {
      if (key == "freq_cutoff") cfg.freq_cutoff = parse_u64(where, value);
      else if (key.starts_with("freq_cutoff."))
        cfg.freq_cutoff_overrides[key.substr(12)] = parse_u64(where, value);
      else if (key == "top_k")
        cfg.top_k = static_cast<std::size_t>(parse_u64(where, value));
      else if (key == "stoplist") cfg.stoplist_path = resolve(value);
      else throw ConfigError(where + ": unknown key " + full);
    } else if (section == "embed") {
      if (key == "dim") cfg.training.dim = parse_int(where, value);
      else if (key == "window") cfg.training.window = parse_int(where, value);
      else if (key == "min_count")
        cfg.training.min_count = parse_int(where, value);
      else if (key == "epochs") cfg.training.epochs = parse_int(where, value);
      else if (key == "negatives")
        cfg.training.negatives = parse_int(where, value);
      else if (key == "learning_rate")
        cfg.training.learning_rate = parse_real(where, value);
      else if (key == "subsample")
        cfg.training.subsample = parse_real(where, value);
      else if (key == "dynamic_window")
        cfg.training.dynamic_window = parse_bool(where, value);
      else throw ConfigError(where + ": unknown key " + full);
    } else if (section == "cluster") {
      if (key == "k_min")
        cfg.k_min = static_cast<std::size_t>(parse_u64(where, value));
      else if (key == "k_max")
        cfg.k_max = static_cast<std::size_t>(parse_u64(where, value));
      else throw ConfigError(where + ": unknown key " + full);
    } else if (section == "norms") {
      if (key == "csv") cfg.norms_csv = resolve(value);
      else if (key == "strict_pos")
        cfg.norms_strict_pos = parse_bool(where, value);
      else if (key == "column.word") cfg.norms_columns.word = value;
      else if (key == "column.auditory") cfg.norms_columns.ratings[0] = value;
      else if (key == "column.gustatory") cfg.norms_columns.ratings[1] = value;
      else if (key == "column.haptic") cfg.norms_columns.ratings[2] = value;
      else if (key == "column.interoceptive")
        cfg.norms_columns.ratings[3] = value;
      else if (key == "column.olfactory") cfg.norms_columns.ratings[4] = value;
      else if (key == "column.visual") cfg.norms_columns.ratings[5] = value;
      else if (key == "column.pos") cfg.norms_columns.pos = value;
      else throw ConfigError(where + ": unknown key " + full);
    } else if (section == "verbs") {
      auto parts = split(value, ',');
      if (parts.size() < 3)
        throw ConfigError(where +
                          ": verb needs modality,mode,inflection[,...]");
      auto modality = parse_modality(parts[0]);
      auto mode = parse_verb_mode(parts[1]);
      if (!modality) throw ConfigError(where + ": unknown modality");
      if (!mode) throw ConfigError(where + ": unknown mode");
      PerceptionVerb v;
      v.lemma = lower_ascii(key);
      v.modality = *modality;
      v.mode = *mode;
      for (std::size_t i = 2; i < parts.size(); ++i) {
        auto infl = trim(parts[i]);
        if (!infl.empty()) v.inflections.push_back(lower_ascii(infl));
      }
      cfg.lexicon.push_back(std::move(v));
    }
  }

  cfg.validate();
  return cfg;
}

}  // namespace sensorium
