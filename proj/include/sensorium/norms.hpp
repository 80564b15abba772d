#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sensorium/pai.hpp"
#include "sensorium/types.hpp"

namespace sensorium {

// Rating order everywhere: Auditory, Gustatory, Haptic, Interoceptive,
// Olfactory, Visual.
enum class NormModality : std::uint8_t { A, G, H, I, O, V };
constexpr std::size_t kNormModalities = 6;
std::string_view to_string(NormModality m);

struct NormEntry {
  std::string word;
  std::string pos;  // empty unless the file carries one
  std::array<double, kNormModalities> ratings{};
};

struct NormsColumns {
  std::string word = "Word";
  std::array<std::string, kNormModalities> ratings = {
      "Auditory.mean", "Gustatory.mean",    "Haptic.mean",
      "Interoceptive.mean", "Olfactory.mean", "Visual.mean"};
  std::string pos;  // optional column for strict matching
};

struct NormsTable {
  std::vector<NormEntry> entries;
  std::unordered_map<std::string, std::size_t> by_word;       // lowercased
  std::unordered_map<std::string, std::size_t> by_word_pos;   // "word|pos"
  std::uint64_t rejected_rows = 0;
  std::uint64_t duplicate_rows = 0;

  const NormEntry* find(std::string_view word) const;
  const NormEntry* find_strict(std::string_view word,
                               std::string_view pos) const;
};

// CSV with a header row; ratings outside [0,5] reject the row with a warning,
// duplicate words keep the last row. Missing required columns are fatal.
NormsTable load_norms(const std::string& path, const NormsColumns& columns);

// (max - min) / sum over the six ratings; undefined on all-zero ratings.
double exclusivity(const std::array<double, kNormModalities>& ratings);

// Argmax modality; exact ties drawn uniformly with the given seed stream.
// nullopt on all-zero ratings.
std::optional<NormModality> dominant_modality(
    const std::array<double, kNormModalities>& ratings, std::uint64_t seed);

struct DescriptorModality {
  DescriptorKey key;
  bool matched = false;
  double exclusivity = 0.0;
  double max_strength = 0.0;
  std::optional<NormModality> dominant;
};

struct ModalityProfile {
  std::string verb;
  // A, G, H, I, O, V, NA; percentages over the whole descriptor list
  std::array<double, kNormModalities + 1> percent{};
  double ape = 0.0, ape_std = 0.0;  // over matched descriptors
  double ams = 0.0, ams_std = 0.0;
  std::size_t matched = 0;
  std::size_t list_size = 0;
};

// Matches descriptors against the norms by lemma (case-insensitive), or by
// lemma+POS when strict_pos is set and the file has a POS column. The
// tie-break RNG stream derives from run_seed and the descriptor key, so
// draws do not depend on iteration order.
ModalityProfile profile(const DescriptorList& list, const NormsTable& norms,
                        std::uint64_t run_seed, bool strict_pos = false,
                        std::vector<DescriptorModality>* per_descriptor = nullptr);

std::string modality_distribution_tsv(const std::vector<ModalityProfile>& rows);
std::string ape_ams_tsv(const std::vector<ModalityProfile>& rows);

// Minimal RFC-4180 row parser used by the norms loader; exposed for tests.
std::vector<std::string> parse_csv_row(std::string_view line);

}  // namespace sensorium
