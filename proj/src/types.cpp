#include "sensorium/types.hpp"

#include <array>
#include <unordered_set>

#include "sensorium/util.hpp"

namespace sensorium {

namespace {

const std::unordered_set<std::string_view>& known_tags() {
  static const std::unordered_set<std::string_view> tags = {
      "CC", "CD",   "DT",  "EX",  "FW",   "IN",   "JJ",  "JJR", "JJS", "LS",
      "MD", "NN",   "NNS", "NNP", "NNPS", "PDT",  "POS", "PRP", "PRP$",
      "RB", "RBR",  "RBS", "RP",  "SYM",  "TO",   "UH",  "VB",  "VBD", "VBG",
      "VBN", "VBP", "VBZ", "WDT", "WP",   "WP$",  "WRB",
      // punctuation and bracket tags
      ".", ",", ":", "``", "''", "(", ")", "$", "#", "-LRB-", "-RRB-"};
  return tags;
}

}  // namespace

bool is_known_tag(std::string_view tag) {
  return known_tags().contains(tag);
}

bool is_verbal_tag(std::string_view tag) {
  return tag == "VB" || tag == "VBD" || tag == "VBG" || tag == "VBN" ||
         tag == "VBP" || tag == "VBZ";
}

PosClass coarse_class(std::string_view tag) {
  if (tag == "NN" || tag == "NNS" || tag == "NNP" || tag == "NNPS")
    return PosClass::NN;
  if (tag == "JJ" || tag == "JJR" || tag == "JJS") return PosClass::JJ;
  if (is_verbal_tag(tag)) return PosClass::VB;
  if (tag == "RB" || tag == "RBR" || tag == "RBS") return PosClass::RB;
  if (tag == "MD") return PosClass::MD;
  return PosClass::Other;
}

std::string_view to_string(PosClass cls) {
  switch (cls) {
    case PosClass::NN: return "NN";
    case PosClass::JJ: return "JJ";
    case PosClass::VB: return "VB";
    case PosClass::RB: return "RB";
    case PosClass::MD: return "MD";
    case PosClass::Other: return "XX";
  }
  return "XX";
}

std::optional<PosClass> parse_pos_class(std::string_view s) {
  if (s == "NN") return PosClass::NN;
  if (s == "JJ") return PosClass::JJ;
  if (s == "VB") return PosClass::VB;
  if (s == "RB") return PosClass::RB;
  if (s == "MD") return PosClass::MD;
  return std::nullopt;
}

std::string_view to_string(SenseModality m) {
  switch (m) {
    case SenseModality::Visual: return "visual";
    case SenseModality::Auditory: return "auditory";
    case SenseModality::Tactile: return "tactile";
    case SenseModality::Olfactory: return "olfactory";
    case SenseModality::Gustatory: return "gustatory";
  }
  return "?";
}

std::optional<SenseModality> parse_modality(std::string_view s) {
  if (s == "visual") return SenseModality::Visual;
  if (s == "auditory") return SenseModality::Auditory;
  if (s == "tactile") return SenseModality::Tactile;
  if (s == "olfactory") return SenseModality::Olfactory;
  if (s == "gustatory") return SenseModality::Gustatory;
  return std::nullopt;
}

std::string_view to_string(VerbMode m) {
  switch (m) {
    case VerbMode::Agentive: return "agentive";
    case VerbMode::Experiential: return "experiential";
    case VerbMode::Unsplit: return "unsplit";
  }
  return "?";
}

std::optional<VerbMode> parse_verb_mode(std::string_view s) {
  if (s == "agentive") return VerbMode::Agentive;
  if (s == "experiential") return VerbMode::Experiential;
  if (s == "unsplit") return VerbMode::Unsplit;
  return std::nullopt;
}

std::vector<PerceptionVerb> default_verb_lexicon() {
  using M = SenseModality;
  using V = VerbMode;
  return {
      {"look", M::Visual, V::Agentive, {"look", "looks", "looked", "looking"}},
      {"see", M::Visual, V::Experiential,
       {"see", "sees", "saw", "seen", "seeing"}},
      {"listen", M::Auditory, V::Agentive,
       {"listen", "listens", "listened", "listening"}},
      {"hear", M::Auditory, V::Experiential,
       {"hear", "hears", "heard", "hearing"}},
      {"touch", M::Tactile, V::Agentive,
       {"touch", "touches", "touched", "touching"}},
      {"feel", M::Tactile, V::Experiential,
       {"feel", "feels", "felt", "feeling"}},
      {"smell", M::Olfactory, V::Unsplit,
       {"smell", "smells", "smelled", "smelt", "smelling"}},
      {"taste", M::Gustatory, V::Unsplit,
       {"taste", "tastes", "tasted", "tasting"}},
  };
}

std::size_t DescriptorKeyHash::operator()(const DescriptorKey& k) const {
  std::uint64_t h = fnv1a64(k.lemma);
  h ^= static_cast<std::uint64_t>(k.cls) + 0x9e3779b97f4a7c15ull + (h << 6) +
       (h >> 2);
  return static_cast<std::size_t>(h);
}

std::string key_string(const DescriptorKey& k) {
  std::string s = k.lemma;
  s += '_';
  s += to_string(k.cls);
  return s;
}

std::optional<DescriptorKey> parse_key_string(std::string_view s) {
  std::size_t us = s.rfind('_');
  if (us == std::string_view::npos || us == 0 || us + 1 >= s.size())
    return std::nullopt;
  auto cls = parse_pos_class(s.substr(us + 1));
  if (!cls) return std::nullopt;
  return DescriptorKey{std::string(s.substr(0, us)), *cls};
}

}  // namespace sensorium
