#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sensorium {

// Coarse part-of-speech classes used for descriptor identity. Everything
// outside these five classes is treated as non-content.
enum class PosClass : std::uint8_t { NN, JJ, VB, RB, MD, Other };

// Penn Treebank tag helpers. Unknown tags are preserved verbatim on tokens
// but never classify as content.
bool is_known_tag(std::string_view tag);
bool is_verbal_tag(std::string_view tag);
PosClass coarse_class(std::string_view tag);
inline bool is_content_tag(std::string_view tag) {
  return coarse_class(tag) != PosClass::Other;
}

std::string_view to_string(PosClass cls);
std::optional<PosClass> parse_pos_class(std::string_view s);

struct TaggedToken {
  std::string surface;
  std::string lemma;
  std::string pos;
};

struct TaggedSentence {
  std::uint64_t id = 0;
  std::vector<TaggedToken> tokens;
};

enum class SenseModality : std::uint8_t {
  Visual,
  Auditory,
  Tactile,
  Olfactory,
  Gustatory
};
std::string_view to_string(SenseModality m);
std::optional<SenseModality> parse_modality(std::string_view s);

enum class VerbMode : std::uint8_t { Agentive, Experiential, Unsplit };
std::string_view to_string(VerbMode m);
std::optional<VerbMode> parse_verb_mode(std::string_view s);

struct PerceptionVerb {
  std::string lemma;
  SenseModality modality;
  VerbMode mode;
  std::vector<std::string> inflections;
};

// The eight verbs with their modality assignment and inflection sets.
std::vector<PerceptionVerb> default_verb_lexicon();

// Descriptor identity: lemma plus coarse POS class, so the noun and verb
// readings of the same lemma are distinct descriptors.
struct DescriptorKey {
  std::string lemma;
  PosClass cls = PosClass::Other;

  bool operator==(const DescriptorKey&) const = default;
  auto operator<=>(const DescriptorKey&) const = default;
};

struct DescriptorKeyHash {
  std::size_t operator()(const DescriptorKey& k) const;
};

// "lemma_NN" form used in files and as embedding vocabulary words.
std::string key_string(const DescriptorKey& k);
std::optional<DescriptorKey> parse_key_string(std::string_view s);

}  // namespace sensorium
