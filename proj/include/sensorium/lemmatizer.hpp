#pragma once

#include <string>
#include <string_view>
#include <unordered_map>

#include "sensorium/types.hpp"

namespace sensorium {

// Rule-based English lemmatizer: an exception table for irregular forms plus
// suffix rules keyed by coarse POS class. Deterministic and immutable after
// load, so it can be shared across worker threads. User entries loaded via
// load_overrides() take precedence over everything built in.
class Lemmatizer {
 public:
  Lemmatizer();

  // TSV lines: surface<TAB>pos<TAB>lemma. The pos column accepts a full Penn
  // tag or a coarse class (NN/JJ/VB/RB/MD). Throws on unreadable file or
  // rows that do not have three columns.
  void load_overrides(const std::string& tsv_path);

  // surface is expected lowercased. Non-content tags return the surface
  // unchanged. Never fails; falls back to identity.
  std::string lemma(std::string_view surface, std::string_view pos) const;

 private:
  using Table = std::unordered_map<std::string, std::string>;
  // index 0..4 = PosClass NN..MD
  Table overrides_[5];
  Table exceptions_[5];

  static std::string apply_noun_rules(std::string_view s);
  static std::string apply_verb_rules(std::string_view s);
  static std::string apply_adj_rules(std::string_view s);
};

}  // namespace sensorium
