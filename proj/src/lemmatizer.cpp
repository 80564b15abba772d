#include "sensorium/lemmatizer.hpp"

#include <stdexcept>

#include "sensorium/util.hpp"

namespace sensorium {

namespace {

bool ends_with(std::string_view s, std::string_view suf) {
  return s.size() >= suf.size() &&
         s.substr(s.size() - suf.size()) == suf;
}

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

// consonant doubled before -ing/-ed/-er, as in running, stopped, bigger
bool undoubles(char c) {
  switch (c) {
    case 'b': case 'd': case 'g': case 'm':
    case 'n': case 'p': case 'r': case 't':
      return true;
    default:
      return false;
  }
}

bool sibilant_stem(std::string_view stem) {
  if (stem.empty()) return false;
  char last = stem.back();
  if (last == 's' || last == 'x' || last == 'z') return true;
  return ends_with(stem, "ch") || ends_with(stem, "sh");
}

// After stripping -ing/-ed/-er the stem of a silent-e word looks like
// consonant+vowel+consonant (mak, tak, nic). Only restore on short stems;
// longer ones (visit, listen) are already complete.
bool wants_e_restore(std::string_view stem) {
  if (stem.size() < 3 || stem.size() > 4) return false;
  std::size_t n = stem.size();
  char c2 = stem[n - 1], c1 = stem[n - 2], c0 = stem[n - 3];
  if (is_vowel(c2) || !is_vowel(c1) || is_vowel(c0)) return false;
  // w/x/y never precede silent e this way
  return c2 != 'w' && c2 != 'x' && c2 != 'y';
}

std::string strip_participle(std::string_view s, std::size_t suffix_len) {
  std::string stem(s.substr(0, s.size() - suffix_len));
  std::size_t n = stem.size();
  if (n >= 3 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]) &&
      undoubles(stem[n - 1])) {
    stem.pop_back();
    return stem;
  }
  if (wants_e_restore(stem)) stem += 'e';
  return stem;
}

struct ExceptionRow {
  const char* surface;
  const char* lemma;
};

constexpr ExceptionRow kVerbExceptions[] = {
    {"am", "be"},       {"are", "be"},      {"is", "be"},
    {"was", "be"},      {"were", "be"},     {"been", "be"},
    {"being", "be"},    {"has", "have"},    {"had", "have"},
    {"having", "have"}, {"does", "do"},     {"did", "do"},
    {"done", "do"},     {"goes", "go"},     {"went", "go"},
    {"gone", "go"},     {"said", "say"},    {"made", "make"},
    {"took", "take"},   {"taken", "take"},  {"got", "get"},
    {"gotten", "get"},  {"gave", "give"},   {"given", "give"},
    {"came", "come"},   {"coming", "come"}, {"knew", "know"},
    {"known", "know"},  {"thought", "think"}, {"found", "find"},
    {"told", "tell"},   {"became", "become"}, {"left", "leave"},
    {"kept", "keep"},   {"ran", "run"},     {"brought", "bring"},
    {"wrote", "write"}, {"written", "write"}, {"writing", "write"},
    {"stood", "stand"}, {"met", "meet"},    {"paid", "pay"},
    {"sat", "sit"},     {"spoke", "speak"}, {"spoken", "speak"},
    {"held", "hold"},   {"meant", "mean"},  {"began", "begin"},
    {"begun", "begin"}, {"shown", "show"},  {"showed", "show"},
    {"used", "use"},    {"using", "use"},   {"lost", "lose"},
    {"built", "build"}, {"sent", "send"},   {"spent", "spend"},
    {"bought", "buy"},  {"caught", "catch"}, {"taught", "teach"},
    {"sang", "sing"},   {"sung", "sing"},   {"rang", "ring"},
    {"rung", "ring"},   {"drank", "drink"}, {"drunk", "drink"},
    {"ate", "eat"},     {"eaten", "eat"},   {"eating", "eat"},
    {"grew", "grow"},   {"grown", "grow"},  {"drew", "draw"},
    {"drawn", "draw"},  {"flew", "fly"},    {"flown", "fly"},
    {"threw", "throw"}, {"thrown", "throw"}, {"broke", "break"},
    {"broken", "break"}, {"chose", "choose"}, {"chosen", "choose"},
    {"fell", "fall"},   {"fallen", "fall"}, {"rose", "rise"},
    {"risen", "rise"},  {"led", "lead"},    {"read", "read"},
    {"lay", "lie"},     {"lain", "lie"},    {"woke", "wake"},
    {"woken", "wake"},  {"wore", "wear"},   {"worn", "wear"},
    {"slept", "sleep"}, {"swept", "sweep"}, {"wept", "weep"},
    // perception verbs, so the lexicon match never depends on the rules
    {"saw", "see"},     {"seen", "see"},    {"seeing", "see"},
    {"heard", "hear"},  {"hearing", "hear"}, {"felt", "feel"},
    {"feeling", "feel"}, {"smelt", "smell"}, {"tasted", "taste"},
    {"tasting", "taste"}, {"touched", "touch"}, {"touching", "touch"},
    // common silent-e forms the CVC heuristic misses
    {"moved", "move"},  {"moving", "move"}, {"lived", "live"},
    {"living", "live"}, {"loved", "love"},  {"loving", "love"},
    {"caused", "cause"}, {"causing", "cause"}, {"changed", "change"},
    {"changing", "change"}, {"noticed", "notice"}, {"noticing", "notice"},
    {"seemed", "seem"}, {"argued", "argue"}, {"arguing", "argue"},
    {"judged", "judge"}, {"judging", "judge"}, {"died", "die"},
    {"dying", "die"},   {"tied", "tie"},    {"tying", "tie"},
};

constexpr ExceptionRow kNounExceptions[] = {
    {"feet", "foot"},       {"men", "man"},      {"women", "woman"},
    {"children", "child"},  {"teeth", "tooth"},  {"mice", "mouse"},
    {"geese", "goose"},     {"lives", "life"},   {"leaves", "leaf"},
    {"knives", "knife"},    {"wives", "wife"},   {"wolves", "wolf"},
    {"shelves", "shelf"},   {"loaves", "loaf"},  {"halves", "half"},
    {"oxen", "ox"},         {"people", "person"},
};

constexpr ExceptionRow kAdjExceptions[] = {
    {"better", "good"}, {"best", "good"}, {"worse", "bad"},
    {"worst", "bad"},   {"further", "far"}, {"furthest", "far"},
};

constexpr ExceptionRow kAdvExceptions[] = {
    {"better", "well"}, {"best", "well"},
};

}  // namespace

Lemmatizer::Lemmatizer() {
  auto load = [](Table& t, const ExceptionRow* rows, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) t.emplace(rows[i].surface, rows[i].lemma);
  };
  load(exceptions_[static_cast<int>(PosClass::VB)], kVerbExceptions,
       std::size(kVerbExceptions));
  load(exceptions_[static_cast<int>(PosClass::NN)], kNounExceptions,
       std::size(kNounExceptions));
  load(exceptions_[static_cast<int>(PosClass::JJ)], kAdjExceptions,
       std::size(kAdjExceptions));
  load(exceptions_[static_cast<int>(PosClass::RB)], kAdvExceptions,
       std::size(kAdvExceptions));
}

void Lemmatizer::load_overrides(const std::string& tsv_path) {
  LineReader reader(tsv_path);
  std::string line;
  std::size_t lineno = 0;
  while (reader.next(line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto cols = split(line, '\t');
    if (cols.size() != 3)
      throw std::runtime_error(tsv_path + ":" + std::to_string(lineno) +
                               ": expected 3 tab-separated columns");
    PosClass cls = coarse_class(cols[1]);
    if (cls == PosClass::Other) {
      auto parsed = parse_pos_class(cols[1]);
      if (!parsed)
        throw std::runtime_error(tsv_path + ":" + std::to_string(lineno) +
                                 ": unusable pos column");
      cls = *parsed;
    }
    overrides_[static_cast<int>(cls)][lower_ascii(cols[0])] =
        lower_ascii(cols[2]);
  }
}

std::string Lemmatizer::apply_noun_rules(std::string_view s) {
  if (ends_with(s, "ies") && s.size() > 3)
    return std::string(s.substr(0, s.size() - 3)) + "y";
  if (ends_with(s, "es") && s.size() > 3 &&
      sibilant_stem(s.substr(0, s.size() - 2)))
    return std::string(s.substr(0, s.size() - 2));
  if (ends_with(s, "s") && !ends_with(s, "ss") && !ends_with(s, "us") &&
      !ends_with(s, "is") && s.size() > 2)
    return std::string(s.substr(0, s.size() - 1));
  return std::string(s);
}

std::string Lemmatizer::apply_verb_rules(std::string_view s) {
  if (ends_with(s, "ies") && s.size() > 3)
    return std::string(s.substr(0, s.size() - 3)) + "y";
  if (ends_with(s, "ied") && s.size() > 3)
    return std::string(s.substr(0, s.size() - 3)) + "y";
  if (ends_with(s, "ing") && s.size() > 4) return strip_participle(s, 3);
  if (ends_with(s, "eed")) return std::string(s.substr(0, s.size() - 1));
  if (ends_with(s, "ed") && s.size() > 3) return strip_participle(s, 2);
  if (ends_with(s, "es") && s.size() > 3 &&
      sibilant_stem(s.substr(0, s.size() - 2)))
    return std::string(s.substr(0, s.size() - 2));
  if (ends_with(s, "s") && !ends_with(s, "ss") && s.size() > 2)
    return std::string(s.substr(0, s.size() - 1));
  return std::string(s);
}

std::string Lemmatizer::apply_adj_rules(std::string_view s) {
  if (ends_with(s, "iest") && s.size() > 4)
    return std::string(s.substr(0, s.size() - 4)) + "y";
  if (ends_with(s, "ier") && s.size() > 3)
    return std::string(s.substr(0, s.size() - 3)) + "y";
  if (ends_with(s, "est") && s.size() > 4) return strip_participle(s, 3);
  if (ends_with(s, "er") && s.size() > 3) return strip_participle(s, 2);
  return std::string(s);
}

std::string Lemmatizer::lemma(std::string_view surface,
                              std::string_view pos) const {
  PosClass cls = coarse_class(pos);
  if (cls == PosClass::Other) return std::string(surface);
  int idx = static_cast<int>(cls);
  std::string key(surface);
  if (auto it = overrides_[idx].find(key); it != overrides_[idx].end())
    return it->second;
  if (auto it = exceptions_[idx].find(key); it != exceptions_[idx].end())
    return it->second;
  switch (cls) {
    case PosClass::NN: return apply_noun_rules(surface);
    case PosClass::VB: return apply_verb_rules(surface);
    case PosClass::JJ: return apply_adj_rules(surface);
    case PosClass::RB:
    case PosClass::MD:
    default:
      return std::string(surface);
  }
}

}  // namespace sensorium
