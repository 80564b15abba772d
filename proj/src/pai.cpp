#include "sensorium/pai.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sensorium/util.hpp"

namespace sensorium {

double pai_score(std::uint64_t of, std::uint64_t tf) {
  if (of < 1 || of > tf)
    throw std::invalid_argument("pai_score requires 1 <= of <= tf, got of=" +
                                std::to_string(of) +
                                " tf=" + std::to_string(tf));
  return std::log2(static_cast<double>(of) / static_cast<double>(tf));
}

Stoplist Stoplist::load(const std::string& path) {
  Stoplist s;
  LineReader reader(path);
  std::string line;
  while (reader.next(line)) {
    if (line.empty() || line[0] == '#') continue;
    std::string entry = lower_ascii(line);
    if (auto key = parse_key_string(entry)) {
      s.keys.insert(key_string(*key));
    } else {
      s.lemmas.insert(entry);
    }
  }
  return s;
}

DescriptorList rank_descriptors(const std::string& verb,
                                std::vector<RawDescriptorCount> counts,
                                std::uint64_t freq_cutoff, std::size_t top_k,
                                const Stoplist& stoplist) {
  if (top_k < 1 || freq_cutoff < top_k)
    throw std::invalid_argument("need freq_cutoff >= top_k >= 1");

  DescriptorList list;
  list.verb = verb;
  list.freq_cutoff = freq_cutoff;
  if (counts.empty()) return list;

  // most frequent first; ties ordered by key so truncation is deterministic
  std::sort(counts.begin(), counts.end(),
            [](const RawDescriptorCount& a, const RawDescriptorCount& b) {
              if (a.of != b.of) return a.of > b.of;
              return a.key < b.key;
            });

  std::vector<DescriptorStats> scored;
  std::uint32_t dense = 0;
  std::uint64_t prev_of = 0;
  for (std::size_t i = 0; i < counts.size() && i < freq_cutoff; ++i) {
    const auto& c = counts[i];
    if (i == 0 || c.of != prev_of) ++dense;
    prev_of = c.of;
    if (c.key.cls == PosClass::MD) continue;
    if (stoplist.contains(c.key)) {
      list.stoplist_dropped.push_back(key_string(c.key));
      continue;
    }
    DescriptorStats d;
    d.key = c.key;
    d.of = c.of;
    d.tf = c.tf;
    d.pai = pai_score(c.of, c.tf);
    d.freq_rank = dense;
    scored.push_back(std::move(d));
  }

  std::sort(scored.begin(), scored.end(),
            [](const DescriptorStats& a, const DescriptorStats& b) {
              if (a.pai != b.pai) return a.pai > b.pai;
              if (a.of != b.of) return a.of > b.of;
              return a.key < b.key;
            });

  std::uint32_t pai_dense = 0;
  double prev_pai = 1.0;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    if (i == 0 || scored[i].pai != prev_pai) ++pai_dense;
    prev_pai = scored[i].pai;
    scored[i].pai_rank = pai_dense;
  }

  if (scored.size() > top_k) scored.resize(top_k);
  list.descriptors = std::move(scored);
  list.final_size = list.descriptors.size();
  std::sort(list.stoplist_dropped.begin(), list.stoplist_dropped.end());
  return list;
}

std::array<std::size_t, 5> pos_distribution(const DescriptorList& list) {
  std::array<std::size_t, 5> counts{};
  for (const auto& d : list.descriptors) {
    int idx = static_cast<int>(d.key.cls);
    if (idx >= 0 && idx < 5) counts[static_cast<std::size_t>(idx)]++;
  }
  return counts;
}

std::string descriptor_list_tsv(const DescriptorList& list) {
  std::string out = "rank\tlemma\tpos\tof\ttf\tpai\n";
  std::size_t rank = 1;
  for (const auto& d : list.descriptors) {
    out += std::to_string(rank++);
    out += '\t';
    out += d.key.lemma;
    out += '\t';
    out += to_string(d.key.cls);
    out += '\t';
    out += std::to_string(d.of);
    out += '\t';
    out += std::to_string(d.tf);
    out += '\t';
    out += format_fixed(d.pai, 6);
    out += '\n';
  }
  return out;
}

std::vector<DescriptorStats> parse_descriptor_list_tsv(
    const std::string& path) {
  LineReader reader(path);
  std::string line;
  std::vector<DescriptorStats> rows;
  bool first = true;
  while (reader.next(line)) {
    if (first) {
      first = false;
      continue;
    }
    if (line.empty()) continue;
    auto cols = split(line, '\t');
    if (cols.size() != 6)
      throw std::runtime_error(path + ": malformed list row: " + line);
    auto cls = parse_pos_class(cols[2]);
    if (!cls) throw std::runtime_error(path + ": bad pos class: " + line);
    DescriptorStats d;
    d.key = DescriptorKey{std::string(cols[1]), *cls};
    d.of = std::stoull(std::string(cols[3]));
    d.tf = std::stoull(std::string(cols[4]));
    d.pai = std::stod(std::string(cols[5]));
    rows.push_back(std::move(d));
  }
  return rows;
}

}  // namespace sensorium
