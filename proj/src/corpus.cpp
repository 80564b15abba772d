#include "sensorium/corpus.hpp"

#include <algorithm>
#include <stdexcept>

#include "sensorium/util.hpp"

namespace sensorium {

std::optional<TaggedSentence> parse_tagged_line(std::string_view line,
                                                std::uint64_t id,
                                                ParseCounters& counters) {
  counters.lines++;
  if (!valid_utf8(line))
    throw std::runtime_error("invalid UTF-8 on line " + std::to_string(id));
  if (line.empty()) {
    counters.skipped_lines++;
    return std::nullopt;
  }

  TaggedSentence sentence;
  sentence.id = id;
  std::size_t start = 0;
  const std::size_t n = line.size();
  while (start < n) {
    std::size_t end = line.find(' ', start);
    if (end == std::string_view::npos) end = n;
    std::string_view tok = line.substr(start, end - start);
    start = end + 1;
    if (tok.empty()) continue;  // collapsed runs of spaces
    std::size_t us = tok.rfind('_');
    if (us == std::string_view::npos || us == 0 || us + 1 >= tok.size()) {
      counters.malformed_tokens++;
      continue;
    }
    TaggedToken t;
    t.surface = std::string(tok.substr(0, us));
    t.pos = std::string(tok.substr(us + 1));
    sentence.tokens.push_back(std::move(t));
  }

  if (sentence.tokens.empty()) {
    counters.skipped_lines++;
    return std::nullopt;
  }
  counters.sentences++;
  counters.tokens += sentence.tokens.size();
  return sentence;
}

void normalize(TaggedSentence& sentence, const Lemmatizer& lemmatizer) {
  for (auto& tok : sentence.tokens) {
    tok.surface = lower_ascii(tok.surface);
    if (is_content_tag(tok.pos)) {
      tok.lemma = lemmatizer.lemma(tok.surface, tok.pos);
    } else {
      tok.lemma = tok.surface;
    }
  }
}

std::string normalized_line(const TaggedSentence& sentence) {
  std::string out;
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    if (i) out += ' ';
    out += sentence.tokens[i].lemma;
    out += '_';
    out += sentence.tokens[i].pos;
  }
  return out;
}

bool matches_verb(const TaggedSentence& sentence, std::string_view lemma) {
  for (const auto& tok : sentence.tokens)
    if (tok.lemma == lemma && is_verbal_tag(tok.pos)) return true;
  return false;
}

SubcorpusAccumulator::SubcorpusAccumulator(
    const std::vector<PerceptionVerb>& lexicon)
    : lexicon_(lexicon), ids_(lexicon.size()) {
  for (std::size_t i = 0; i < lexicon_.size(); ++i)
    by_lemma_.emplace(lexicon_[i].lemma, i);
}

std::vector<std::size_t> SubcorpusAccumulator::add(
    const TaggedSentence& sentence) {
  std::vector<std::size_t> matched;
  for (const auto& tok : sentence.tokens) {
    if (!is_verbal_tag(tok.pos)) continue;
    auto it = by_lemma_.find(tok.lemma);
    if (it == by_lemma_.end()) continue;
    if (std::find(matched.begin(), matched.end(), it->second) == matched.end())
      matched.push_back(it->second);
  }
  for (std::size_t idx : matched) ids_[idx].push_back(sentence.id);
  return matched;
}

void SubcorpusAccumulator::merge(const SubcorpusAccumulator& other) {
  if (other.lexicon_.size() != lexicon_.size())
    throw std::logic_error("merging accumulators over different lexicons");
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    ids_[i].insert(ids_[i].end(), other.ids_[i].begin(), other.ids_[i].end());
  }
}

SubcorpusStats SubcorpusAccumulator::stats() const {
  SubcorpusStats s;
  std::unordered_map<int, std::uint64_t> totals;
  for (std::size_t i = 0; i < lexicon_.size(); ++i) {
    s.verbs.push_back({lexicon_[i].lemma, lexicon_[i].modality,
                       lexicon_[i].mode, ids_[i].size()});
    totals[static_cast<int>(lexicon_[i].modality)] += ids_[i].size();
  }
  // modality rows in first-appearance order of the lexicon
  std::vector<int> seen;
  for (const auto& verb : lexicon_) {
    int m = static_cast<int>(verb.modality);
    if (std::find(seen.begin(), seen.end(), m) == seen.end()) {
      seen.push_back(m);
      s.modality_totals.emplace_back(verb.modality, totals[m]);
    }
  }
  return s;
}

std::string subcorpus_stats_tsv(const SubcorpusStats& stats) {
  std::string out = "modality\tverb\tmode\tsentences\n";
  for (const auto& [modality, total] : stats.modality_totals) {
    out += std::string(to_string(modality)) + "\t(total)\t\t" +
           std::to_string(total) + "\n";
    for (const auto& row : stats.verbs) {
      if (row.modality != modality) continue;
      out += std::string(to_string(modality)) + "\t" + row.verb + "\t" +
             std::string(to_string(row.mode)) + "\t" +
             std::to_string(row.sentences) + "\n";
    }
  }
  return out;
}

}  // namespace sensorium
