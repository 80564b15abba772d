#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "sensorium/collocate.hpp"
#include "sensorium/types.hpp"

namespace sensorium {

// log2(of/tf). Requires 1 <= of <= tf; anything else signals an upstream
// counting bug and throws.
double pai_score(std::uint64_t of, std::uint64_t tf);

struct DescriptorStats {
  DescriptorKey key;
  std::uint64_t of = 0;
  std::uint64_t tf = 0;
  double pai = 0.0;
  std::uint32_t freq_rank = 0;  // dense rank by descending of
  std::uint32_t pai_rank = 0;   // dense rank by descending pai
};

struct DescriptorList {
  std::string verb;
  std::vector<DescriptorStats> descriptors;  // pai-descending
  std::uint64_t freq_cutoff = 0;
  std::size_t final_size = 0;
  std::vector<std::string> stoplist_dropped;  // keys removed by the stoplist
};

// Entries are bare lemmas (drop every POS class) or `lemma_NN` style keys.
struct Stoplist {
  std::unordered_set<std::string> lemmas;
  std::unordered_set<std::string> keys;

  bool contains(const DescriptorKey& k) const {
    return lemmas.contains(k.lemma) || keys.contains(key_string(k));
  }
  bool empty() const { return lemmas.empty() && keys.empty(); }
  static Stoplist load(const std::string& path);
};

// The selection procedure: keep the freq_cutoff most frequent candidates by
// of, drop stoplisted and modal entries, score the rest with PAI and keep the
// top_k best. Ordering is fully deterministic: pai desc, then of desc, then
// lemma, then class.
DescriptorList rank_descriptors(const std::string& verb,
                                std::vector<RawDescriptorCount> counts,
                                std::uint64_t freq_cutoff, std::size_t top_k,
                                const Stoplist& stoplist);

// Counts per class NN, JJ, VB, RB, MD over the final list.
std::array<std::size_t, 5> pos_distribution(const DescriptorList& list);

std::string descriptor_list_tsv(const DescriptorList& list);
// Reads back the ranked rows (rank, key, of, tf, pai as printed).
std::vector<DescriptorStats> parse_descriptor_list_tsv(const std::string& path);

}  // namespace sensorium
