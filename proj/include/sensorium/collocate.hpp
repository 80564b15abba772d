#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sensorium/types.hpp"

namespace sensorium {

using TfMap = std::unordered_map<DescriptorKey, std::uint64_t, DescriptorKeyHash>;

// Adds every content-token occurrence of the sentence to the map, keyed by
// (lemma, coarse class). Modals count here; they are filtered at ranking.
void count_corpus_frequencies(const TaggedSentence& sentence, TfMap& tf);
void merge_tf(TfMap& into, const TfMap& from);

struct ContextWindow {
  std::uint64_t sentence_id = 0;
  std::size_t verb_pos = 0;           // token index of this occurrence
  std::vector<std::size_t> members;   // token indices within +/-W, verb excluded
};

// One window per occurrence of the verb (lemma match + verbal tag), truncated
// at sentence edges. Other perception-verb tokens inside a window stay in.
std::vector<ContextWindow> extract_windows(const TaggedSentence& sentence,
                                           std::string_view verb_lemma,
                                           int window);

// How `of` is accumulated. Occurrence counts every content-token position
// that falls inside at least one window of the verb (a position is counted
// once even when windows overlap, which keeps of <= tf). SentencePresence
// counts a descriptor once per sentence in which it appears near the verb.
enum class CountMode { Occurrence, SentencePresence };
std::string_view to_string(CountMode m);

class DescriptorCounter {
 public:
  DescriptorCounter(std::string verb_lemma, int window, CountMode mode);

  void add_sentence(const TaggedSentence& sentence);
  void merge(const DescriptorCounter& other);

  const std::unordered_map<DescriptorKey, std::uint64_t, DescriptorKeyHash>&
  of() const {
    return of_;
  }
  std::uint64_t windows_seen() const { return windows_; }

 private:
  std::string verb_;
  int window_;
  CountMode mode_;
  std::uint64_t windows_ = 0;
  std::unordered_map<DescriptorKey, std::uint64_t, DescriptorKeyHash> of_;
};

struct RawDescriptorCount {
  DescriptorKey key;
  std::uint64_t of = 0;
  std::uint64_t tf = 0;

  bool operator==(const RawDescriptorCount&) const = default;
};

// Joins of-counts with corpus frequencies, drops keys below min_of, and
// returns rows sorted by key for stable output. Every emitted key satisfies
// of <= tf in occurrence mode.
std::vector<RawDescriptorCount> finalize_counts(const DescriptorCounter& counter,
                                                const TfMap& tf,
                                                std::uint64_t min_of);

std::string descriptor_counts_tsv(const std::vector<RawDescriptorCount>& rows);
std::vector<RawDescriptorCount> parse_descriptor_counts_tsv(
    const std::string& path);

}  // namespace sensorium
