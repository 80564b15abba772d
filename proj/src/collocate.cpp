#include "sensorium/collocate.hpp"

#include <algorithm>
#include <stdexcept>

#include "sensorium/util.hpp"

namespace sensorium {

void count_corpus_frequencies(const TaggedSentence& sentence, TfMap& tf) {
  for (const auto& tok : sentence.tokens) {
    PosClass cls = coarse_class(tok.pos);
    if (cls == PosClass::Other) continue;
    tf[DescriptorKey{tok.lemma, cls}]++;
  }
}

void merge_tf(TfMap& into, const TfMap& from) {
  for (const auto& [key, count] : from) into[key] += count;
}

std::vector<ContextWindow> extract_windows(const TaggedSentence& sentence,
                                           std::string_view verb_lemma,
                                           int window) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  std::vector<ContextWindow> out;
  const std::size_t n = sentence.tokens.size();
  for (std::size_t p = 0; p < n; ++p) {
    const auto& tok = sentence.tokens[p];
    if (tok.lemma != verb_lemma || !is_verbal_tag(tok.pos)) continue;
    ContextWindow w;
    w.sentence_id = sentence.id;
    w.verb_pos = p;
    std::size_t lo = p >= static_cast<std::size_t>(window)
                         ? p - static_cast<std::size_t>(window)
                         : 0;
    std::size_t hi = std::min(n - 1, p + static_cast<std::size_t>(window));
    for (std::size_t q = lo; q <= hi; ++q)
      if (q != p) w.members.push_back(q);
    out.push_back(std::move(w));
  }
  return out;
}

std::string_view to_string(CountMode m) {
  return m == CountMode::Occurrence ? "occurrence" : "sentence-presence";
}

DescriptorCounter::DescriptorCounter(std::string verb_lemma, int window,
                                     CountMode mode)
    : verb_(std::move(verb_lemma)), window_(window), mode_(mode) {
  if (window_ < 1) throw std::invalid_argument("window must be >= 1");
}

void DescriptorCounter::add_sentence(const TaggedSentence& sentence) {
  auto windows = extract_windows(sentence, verb_, window_);
  if (windows.empty()) return;
  windows_ += windows.size();

  // union of member positions across this verb's windows, so a token
  // occurrence never counts twice when windows overlap
  std::vector<char> covered(sentence.tokens.size(), 0);
  for (const auto& w : windows)
    for (std::size_t q : w.members) covered[q] = 1;

  if (mode_ == CountMode::Occurrence) {
    for (std::size_t q = 0; q < covered.size(); ++q) {
      if (!covered[q]) continue;
      const auto& tok = sentence.tokens[q];
      PosClass cls = coarse_class(tok.pos);
      if (cls == PosClass::Other) continue;
      of_[DescriptorKey{tok.lemma, cls}]++;
    }
  } else {
    std::unordered_map<DescriptorKey, char, DescriptorKeyHash> present;
    for (std::size_t q = 0; q < covered.size(); ++q) {
      if (!covered[q]) continue;
      const auto& tok = sentence.tokens[q];
      PosClass cls = coarse_class(tok.pos);
      if (cls == PosClass::Other) continue;
      present.emplace(DescriptorKey{tok.lemma, cls}, 1);
    }
    for (const auto& [key, _] : present) of_[key]++;
  }
}

void DescriptorCounter::merge(const DescriptorCounter& other) {
  if (other.verb_ != verb_ || other.window_ != window_ ||
      other.mode_ != mode_)
    throw std::logic_error("merging descriptor counters with different setup");
  windows_ += other.windows_;
  for (const auto& [key, count] : other.of_) of_[key] += count;
}

std::vector<RawDescriptorCount> finalize_counts(
    const DescriptorCounter& counter, const TfMap& tf, std::uint64_t min_of) {
  if (min_of < 1) throw std::invalid_argument("min_of must be >= 1");
  std::vector<RawDescriptorCount> rows;
  rows.reserve(counter.of().size());
  for (const auto& [key, of] : counter.of()) {
    if (of < min_of) continue;
    auto it = tf.find(key);
    if (it == tf.end())
      throw std::logic_error("descriptor missing from corpus frequencies: " +
                             key_string(key));
    rows.push_back({key, of, it->second});
  }
  std::sort(rows.begin(), rows.end(),
            [](const RawDescriptorCount& a, const RawDescriptorCount& b) {
              return a.key < b.key;
            });
  return rows;
}

std::string descriptor_counts_tsv(const std::vector<RawDescriptorCount>& rows) {
  std::string out = "lemma\tpos\tof\ttf\n";
  for (const auto& r : rows) {
    out += r.key.lemma;
    out += '\t';
    out += to_string(r.key.cls);
    out += '\t';
    out += std::to_string(r.of);
    out += '\t';
    out += std::to_string(r.tf);
    out += '\n';
  }
  return out;
}

std::vector<RawDescriptorCount> parse_descriptor_counts_tsv(
    const std::string& path) {
  LineReader reader(path);
  std::string line;
  std::vector<RawDescriptorCount> rows;
  bool first = true;
  while (reader.next(line)) {
    if (first) {
      first = false;
      continue;  // header
    }
    if (line.empty()) continue;
    auto cols = split(line, '\t');
    if (cols.size() != 4)
      throw std::runtime_error(path + ": malformed counts row: " + line);
    auto cls = parse_pos_class(cols[1]);
    if (!cls) throw std::runtime_error(path + ": bad pos class: " + line);
    rows.push_back({DescriptorKey{std::string(cols[0]), *cls},
                    std::stoull(std::string(cols[2])),
                    std::stoull(std::string(cols[3]))});
  }
  return rows;
}

}  // namespace sensorium
