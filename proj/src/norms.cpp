#include "sensorium/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sensorium/util.hpp"

namespace sensorium {

std::string_view to_string(NormModality m) {
  switch (m) {
    case NormModality::A: return "A";
    case NormModality::G: return "G";
    case NormModality::H: return "H";
    case NormModality::I: return "I";
    case NormModality::O: return "O";
    case NormModality::V: return "V";
  }
  return "?";
}

std::vector<std::string> parse_csv_row(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
    ++i;
  }
  fields.push_back(std::move(cur));
  return fields;
}

const NormEntry* NormsTable::find(std::string_view word) const {
  auto it = by_word.find(lower_ascii(word));
  return it == by_word.end() ? nullptr : &entries[it->second];
}

const NormEntry* NormsTable::find_strict(std::string_view word,
                                         std::string_view pos) const {
  auto it = by_word_pos.find(lower_ascii(word) + "|" + lower_ascii(pos));
  return it == by_word_pos.end() ? nullptr : &entries[it->second];
}

NormsTable load_norms(const std::string& path, const NormsColumns& columns) {
  LineReader reader(path);
  std::string line;
  if (!reader.next(line))
    throw std::runtime_error("empty norms file: " + path);

  auto header = parse_csv_row(line);
  auto col_of = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    return std::nullopt;
  };

  auto word_col = col_of(columns.word);
  if (!word_col)
    throw std::runtime_error(path + ": missing word column \"" +
                             columns.word + "\"");
  std::array<std::size_t, kNormModalities> rating_cols{};
  for (std::size_t m = 0; m < kNormModalities; ++m) {
    auto c = col_of(columns.ratings[m]);
    if (!c)
      throw std::runtime_error(path + ": missing rating column \"" +
                               columns.ratings[m] + "\"");
    rating_cols[m] = *c;
  }
  std::optional<std::size_t> pos_col;
  if (!columns.pos.empty()) {
    pos_col = col_of(columns.pos);
    if (!pos_col)
      throw std::runtime_error(path + ": missing pos column \"" +
                               columns.pos + "\"");
  }

  NormsTable table;
  while (reader.next(line)) {
    if (line.empty()) continue;
    auto fields = parse_csv_row(line);
    std::size_t needed = *word_col;
    for (std::size_t c : rating_cols) needed = std::max(needed, c);
    if (pos_col) needed = std::max(needed, *pos_col);
    if (fields.size() <= needed) {
      table.rejected_rows++;
      continue;
    }

    NormEntry entry;
    entry.word = lower_ascii(fields[*word_col]);
    if (entry.word.empty()) {
      table.rejected_rows++;
      continue;
    }
    if (pos_col) entry.pos = lower_ascii(fields[*pos_col]);
    bool ok = true;
    for (std::size_t m = 0; m < kNormModalities; ++m) {
      try {
        entry.ratings[m] = std::stod(fields[rating_cols[m]]);
      } catch (const std::exception&) {
        ok = false;
        break;
      }
      if (!(entry.ratings[m] >= 0.0 && entry.ratings[m] <= 5.0)) {
        ok = false;
        break;
      }
    }
    if (!ok) {
      table.rejected_rows++;
      continue;
    }

    auto key = entry.word;
    auto it = table.by_word.find(key);
    if (it != table.by_word.end()) {
      table.duplicate_rows++;
      table.entries[it->second] = entry;  // last row wins
    } else {
      table.by_word.emplace(key, table.entries.size());
      table.entries.push_back(entry);
    }
    if (pos_col) {
      table.by_word_pos[entry.word + "|" + entry.pos] =
          table.by_word[key];
    }
  }
  return table;
}

double exclusivity(const std::array<double, kNormModalities>& ratings) {
  double lo = ratings[0], hi = ratings[0], sum = 0.0;
  for (double r : ratings) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    sum += r;
  }
  if (sum == 0.0)
    throw std::domain_error("exclusivity undefined for all-zero ratings");
  return (hi - lo) / sum;
}

std::optional<NormModality> dominant_modality(
    const std::array<double, kNormModalities>& ratings, std::uint64_t seed) {
  double hi = 0.0;
  for (double r : ratings) hi = std::max(hi, r);
  if (hi == 0.0) return std::nullopt;
  std::vector<std::size_t> tied;
  for (std::size_t m = 0; m < kNormModalities; ++m)
    if (ratings[m] == hi) tied.push_back(m);
  std::size_t pick = 0;
  if (tied.size() > 1) {
    Rng rng(seed);
    pick = rng.next_below(tied.size());
  }
  return static_cast<NormModality>(tied[pick]);
}

ModalityProfile profile(const DescriptorList& list, const NormsTable& norms,
                        std::uint64_t run_seed, bool strict_pos,
                        std::vector<DescriptorModality>* per_descriptor) {
  ModalityProfile p;
  p.verb = list.verb;
  p.list_size = list.descriptors.size();
  if (per_descriptor) per_descriptor->clear();

  std::array<std::size_t, kNormModalities + 1> counts{};
  std::vector<double> excl, strength;
  for (const auto& d : list.descriptors) {
    DescriptorModality dm;
    dm.key = d.key;
    const NormEntry* entry =
        strict_pos ? norms.find_strict(d.key.lemma, to_string(d.key.cls))
                   : norms.find(d.key.lemma);
    std::optional<NormModality> dominant;
    if (entry) {
      dominant = dominant_modality(
          entry->ratings, mix_seed(run_seed, fnv1a64(key_string(d.key))));
    }
    if (entry && dominant) {
      dm.matched = true;
      dm.dominant = dominant;
      dm.exclusivity = exclusivity(entry->ratings);
      dm.max_strength =
          *std::max_element(entry->ratings.begin(), entry->ratings.end());
      counts[static_cast<std::size_t>(*dominant)]++;
      excl.push_back(dm.exclusivity);
      strength.push_back(dm.max_strength);
    } else {
      counts[kNormModalities]++;  // NA bucket
    }
    if (per_descriptor) per_descriptor->push_back(std::move(dm));
  }

  if (p.list_size > 0) {
    for (std::size_t i = 0; i < counts.size(); ++i)
      p.percent[i] = 100.0 * static_cast<double>(counts[i]) /
                     static_cast<double>(p.list_size);
  }
  p.matched = excl.size();
  auto mean_std = [](const std::vector<double>& xs, double& mean,
                     double& std_out) {
    mean = 0.0;
    std_out = 0.0;
    if (xs.empty()) return;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    std_out = std::sqrt(var / static_cast<double>(xs.size()));
  };
  mean_std(excl, p.ape, p.ape_std);
  mean_std(strength, p.ams, p.ams_std);
  return p;
}

std::string modality_distribution_tsv(
    const std::vector<ModalityProfile>& rows) {
  std::string out = "verb\tA\tG\tH\tI\tO\tV\tNA\n";
  for (const auto& r : rows) {
    out += r.verb;
    for (double pct : r.percent) {
      out += '\t';
      out += format_fixed(pct, 2);
    }
    out += '\n';
  }
  return out;
}

std::string ape_ams_tsv(const std::vector<ModalityProfile>& rows) {
  std::string out = "verb\tape\tape_std\tams\tams_std\tcount\n";
  for (const auto& r : rows) {
    out += r.verb;
    out += '\t';
    out += r.matched ? format_fixed(r.ape, 4) : "NA";
    out += '\t';
    out += r.matched ? format_fixed(r.ape_std, 4) : "NA";
    out += '\t';
    out += r.matched ? format_fixed(r.ams, 4) : "NA";
    out += '\t';
    out += r.matched ? format_fixed(r.ams_std, 4) : "NA";
    out += '\t';
    out += std::to_string(r.matched);
    out += '\n';
  }
  return out;
}

}  // namespace sensorium
