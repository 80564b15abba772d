#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sensorium/lemmatizer.hpp"
#include "sensorium/types.hpp"

namespace sensorium {

// Counters carried through parsing; merges are associative and commutative
// so shard results combine independently of order.
struct ParseCounters {
  std::uint64_t lines = 0;
  std::uint64_t sentences = 0;
  std::uint64_t skipped_lines = 0;
  std::uint64_t malformed_tokens = 0;
  std::uint64_t tokens = 0;

  void merge(const ParseCounters& o) {
    lines += o.lines;
    sentences += o.sentences;
    skipped_lines += o.skipped_lines;
    malformed_tokens += o.malformed_tokens;
    tokens += o.tokens;
  }
};

// Parses one `surface_POS surface_POS ...` line. The last underscore of each
// token splits surface from tag. Malformed tokens are dropped and counted;
// a line with no valid tokens yields nullopt. Throws on invalid UTF-8.
std::optional<TaggedSentence> parse_tagged_line(std::string_view line,
                                                std::uint64_t id,
                                                ParseCounters& counters);

// Lowercases surfaces and fills lemmas: content POS through the lemmatizer,
// everything else identity.
void normalize(TaggedSentence& sentence, const Lemmatizer& lemmatizer);

// Sentence rendered as `lemma_POS` tokens; the persisted normalized format.
std::string normalized_line(const TaggedSentence& sentence);

// True when the sentence contains a token with this lemma and a verbal tag.
bool matches_verb(const TaggedSentence& sentence, std::string_view lemma);

struct SubcorpusStats {
  struct Row {
    std::string verb;
    SenseModality modality;
    VerbMode mode;
    std::uint64_t sentences;
  };
  std::vector<Row> verbs;  // lexicon order
  std::vector<std::pair<SenseModality, std::uint64_t>> modality_totals;
};

// Collects per-verb sentence-id sets over normalized sentences. A sentence
// with k distinct perception verbs lands in all k sets; repeated occurrences
// of one verb count the sentence once.
class SubcorpusAccumulator {
 public:
  explicit SubcorpusAccumulator(const std::vector<PerceptionVerb>& lexicon);

  // Returns the indices of lexicon verbs matched in this sentence.
  std::vector<std::size_t> add(const TaggedSentence& sentence);
  void merge(const SubcorpusAccumulator& other);

  const std::vector<PerceptionVerb>& lexicon() const { return lexicon_; }
  const std::vector<std::vector<std::uint64_t>>& sentence_ids() const {
    return ids_;
  }
  SubcorpusStats stats() const;

 private:
  std::vector<PerceptionVerb> lexicon_;
  std::unordered_map<std::string, std::size_t> by_lemma_;
  std::vector<std::vector<std::uint64_t>> ids_;  // per verb, in add order
};

std::string subcorpus_stats_tsv(const SubcorpusStats& stats);

}  // namespace sensorium
