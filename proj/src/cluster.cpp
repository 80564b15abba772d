#include "sensorium/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "sensorium/util.hpp"

namespace sensorium {

double pearson(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size())
    throw std::invalid_argument("pearson: length mismatch");
  const std::size_t n = u.size();
  if (n < 2) throw std::invalid_argument("pearson: need length >= 2");
  double mu = 0.0, mv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mu += u[i];
    mv += v[i];
  }
  mu /= static_cast<double>(n);
  mv /= static_cast<double>(n);
  double suu = 0.0, svv = 0.0, suv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double du = u[i] - mu, dv = v[i] - mv;
    suu += du * du;
    svv += dv * dv;
    suv += du * dv;
  }
  if (suu == 0.0 || svv == 0.0)
    throw std::invalid_argument("pearson: constant vector");
  double r = suv / std::sqrt(suu * svv);
  return std::clamp(r, -1.0, 1.0);
}

DistanceMatrix::DistanceMatrix(std::vector<std::string> labels,
                               std::vector<double> values)
    : labels_(std::move(labels)), values_(std::move(values)) {
  if (values_.size() != labels_.size() * labels_.size())
    throw std::invalid_argument("distance matrix shape mismatch");
}

DistanceMatrix DistanceMatrix::from_vectors(
    std::vector<std::string> labels,
    const std::vector<std::vector<double>>& vectors) {
  const std::size_t n = vectors.size();
  if (n < 2) throw std::invalid_argument("need at least 2 vectors");
  if (labels.size() != n)
    throw std::invalid_argument("labels/vectors size mismatch");
  const std::size_t dim = vectors[0].size();
  for (const auto& v : vectors)
    if (v.size() != dim)
      throw std::invalid_argument("vectors must share one dimension");

  std::vector<double> values(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double p;
      try {
        p = pearson(vectors[i], vectors[j]);
      } catch (const std::invalid_argument&) {
        throw std::invalid_argument("undefined correlation for \"" +
                                    labels[i] + "\" vs \"" + labels[j] + "\"");
      }
      double d = 0.5 * (1.0 - p);
      d = std::clamp(d, 0.0, 1.0);
      values[i * n + j] = d;
      values[j * n + i] = d;
    }
  }
  return DistanceMatrix(std::move(labels), std::move(values));
}

DistanceMatrix DistanceMatrix::restrict(
    const std::vector<std::size_t>& indices) const {
  const std::size_t m = indices.size();
  std::vector<std::string> labels(m);
  std::vector<double> values(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    labels[a] = labels_[indices[a]];
    for (std::size_t b = 0; b < m; ++b)
      values[a * m + b] = at(indices[a], indices[b]);
  }
  return DistanceMatrix(std::move(labels), std::move(values));
}

std::string DistanceMatrix::to_tsv() const {
  const std::size_t n = size();
  std::string out = "key";
  for (const auto& l : labels_) {
    out += '\t';
    out += l;
  }
  out += '\n';
  for (std::size_t i = 0; i < n; ++i) {
    out += labels_[i];
    for (std::size_t j = 0; j < n; ++j) {
      out += '\t';
      out += format_double(at(i, j));
    }
    out += '\n';
  }
  return out;
}

DistanceMatrix DistanceMatrix::from_tsv(const std::string& text) {
  std::vector<std::string_view> lines = split(text, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw std::runtime_error("empty distance matrix text");
  auto header = split(lines[0], '\t');
  if (header.size() < 3 || header[0] != "key")
    throw std::runtime_error("bad distance matrix header");
  std::vector<std::string> labels;
  for (std::size_t i = 1; i < header.size(); ++i)
    labels.emplace_back(header[i]);
  const std::size_t n = labels.size();
  if (lines.size() != n + 1)
    throw std::runtime_error("distance matrix row count mismatch");
  std::vector<double> values(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    auto cols = split(lines[i + 1], '\t');
    if (cols.size() != n + 1 || std::string(cols[0]) != labels[i])
      throw std::runtime_error("bad distance matrix row " +
                               std::to_string(i + 1));
    for (std::size_t j = 0; j < n; ++j)
      values[i * n + j] = std::stod(std::string(cols[j + 1]));
  }
  return DistanceMatrix(std::move(labels), std::move(values));
}

DistanceMatrix DistanceMatrix::from_tsv_file(const std::string& path) {
  return from_tsv(read_file(path));
}

Dendrogram agnes_ward(const DistanceMatrix& dist) {
  const std::size_t n = dist.size();
  if (n < 2) throw std::invalid_argument("agnes_ward: need >= 2 points");

  // squared dissimilarities, full symmetric storage over original slots
  std::vector<double> s(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double d = dist.at(i, j);
      s[i * n + j] = d * d;
    }

  std::vector<int> node(n);       // current node id living in each slot
  std::vector<int> csize(n, 1);   // cluster size per slot
  std::vector<char> active(n, 1);
  std::iota(node.begin(), node.end(), 0);

  Dendrogram out;
  out.n_leaves = n;
  out.merges.reserve(n - 1);

  for (std::size_t step = 0; step < n - 1; ++step) {
    // global minimum scan; ties resolve to the smallest (left,right) node pair
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    int bleft = 0, bright = 0;
    bool found = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!active[j]) continue;
        double v = s[i * n + j];
        int left = std::min(node[i], node[j]);
        int right = std::max(node[i], node[j]);
        if (!found || v < best ||
            (v == best &&
             (left < bleft || (left == bleft && right < bright)))) {
          best = v;
          bi = i;
          bj = j;
          bleft = left;
          bright = right;
          found = true;
        }
      }
    }

    const double ni = csize[bi], nj = csize[bj];
    Merge m;
    m.left = bleft;
    m.right = bright;
    m.height = std::sqrt(std::max(0.0, best));
    m.size = static_cast<int>(ni + nj);
    out.merges.push_back(m);

    // Lance-Williams update with Ward coefficients; merged cluster lives in bi
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == bi || k == bj) continue;
      const double nk = csize[k];
      const double denom = ni + nj + nk;
      double v = (ni + nk) / denom * s[bi * n + k] +
                 (nj + nk) / denom * s[bj * n + k] - nk / denom * best;
      s[bi * n + k] = v;
      s[k * n + bi] = v;
    }
    csize[bi] = static_cast<int>(ni + nj);
    node[bi] = static_cast<int>(n + step);
    active[bj] = 0;
  }
  return out;
}

std::vector<int> cut(const Dendrogram& dendro, std::size_t k) {
  const std::size_t n = dendro.n_leaves;
  if (k < 1 || k > n) throw std::invalid_argument("cut: k out of range");

  // apply the first n-k merges with a union-find over node ids
  std::vector<int> parent(2 * n - 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::size_t m = 0; m < n - k; ++m) {
    int target = static_cast<int>(n + m);
    parent[find(dendro.merges[m].left)] = target;
    parent[find(dendro.merges[m].right)] = target;
  }

  // order clusters by smallest contained leaf
  std::vector<int> root_to_cluster(2 * n - 1, -1);
  std::vector<int> labels(n, -1);
  int next = 0;
  for (std::size_t leaf = 0; leaf < n; ++leaf) {
    int r = find(static_cast<int>(leaf));
    if (root_to_cluster[r] == -1) root_to_cluster[r] = next++;
    labels[leaf] = root_to_cluster[r];
  }
  return labels;
}

double silhouette(const DistanceMatrix& dist, std::span<const int> labels) {
  const std::size_t n = dist.size();
  if (labels.size() != n)
    throw std::invalid_argument("silhouette: label count mismatch");
  int k = 0;
  for (int l : labels) {
    if (l < 0) throw std::invalid_argument("silhouette: negative label");
    k = std::max(k, l + 1);
  }
  if (k < 2) throw std::invalid_argument("silhouette: need k >= 2");

  std::vector<std::size_t> cluster_size(static_cast<std::size_t>(k), 0);
  for (int l : labels) cluster_size[static_cast<std::size_t>(l)]++;
  for (std::size_t c = 0; c < cluster_size.size(); ++c)
    if (cluster_size[c] == 0)
      throw std::invalid_argument("silhouette: empty cluster " +
                                  std::to_string(c));

  double total = 0.0;
  std::vector<double> sum(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(sum.begin(), sum.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j)
      sum[static_cast<std::size_t>(labels[j])] += dist.at(i, j);
    const std::size_t own = static_cast<std::size_t>(labels[i]);
    if (cluster_size[own] == 1) continue;  // singleton convention: s = 0
    double a = sum[own] / static_cast<double>(cluster_size[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < sum.size(); ++c) {
      if (c == own) continue;
      b = std::min(b, sum[c] / static_cast<double>(cluster_size[c]));
    }
    double denom = std::max(a, b);
    total += denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return total / static_cast<double>(n);
}

SilhouetteReport sweep_k(const Dendrogram& dendro, const DistanceMatrix& dist,
                         std::size_t k_min, std::size_t k_max) {
  const std::size_t n = dendro.n_leaves;
  if (n < 3) throw std::invalid_argument("sweep_k: need >= 3 points");
  if (k_max == 0) k_max = n - 1;
  if (k_min < 2 || k_max > n || k_min > k_max)
    throw std::invalid_argument("sweep_k: bad k range");

  SilhouetteReport report;
  for (std::size_t k = k_min; k <= k_max; ++k) {
    auto labels = cut(dendro, k);
    double score = silhouette(dist, labels);
    report.by_k.emplace_back(k, score);
    if (report.best_k == 0 || score > report.best_score) {
      report.best_k = k;
      report.best_score = score;
    }
  }
  return report;
}

std::string dendrogram_text(const Dendrogram& dendro,
                            std::span<const std::string> labels) {
  if (labels.size() != dendro.n_leaves)
    throw std::invalid_argument("dendrogram_text: label count mismatch");
  std::string out = "leaves\t" + std::to_string(dendro.n_leaves) + "\n";
  for (std::size_t i = 0; i < labels.size(); ++i)
    out += "leaf\t" + std::to_string(i) + "\t" + labels[i] + "\n";
  for (const auto& m : dendro.merges) {
    out += "merge\t" + std::to_string(m.left) + "\t" + std::to_string(m.right) +
           "\t" + format_double(m.height) + "\t" + std::to_string(m.size) +
           "\n";
  }
  return out;
}

std::pair<Dendrogram, std::vector<std::string>> parse_dendrogram_text(
    const std::string& text) {
  Dendrogram d;
  std::vector<std::string> labels;
  auto lines = split(text, '\n');
  for (auto line : lines) {
    if (line.empty()) continue;
    auto cols = split(line, '\t');
    if (cols[0] == "leaves" && cols.size() == 2) {
      d.n_leaves = std::stoull(std::string(cols[1]));
      labels.resize(d.n_leaves);
    } else if (cols[0] == "leaf" && cols.size() == 3) {
      std::size_t idx = std::stoull(std::string(cols[1]));
      if (idx >= labels.size())
        throw std::runtime_error("dendrogram leaf index out of range");
      labels[idx] = std::string(cols[2]);
    } else if (cols[0] == "merge" && cols.size() == 5) {
      Merge m;
      m.left = std::stoi(std::string(cols[1]));
      m.right = std::stoi(std::string(cols[2]));
      m.height = std::stod(std::string(cols[3]));
      m.size = std::stoi(std::string(cols[4]));
      d.merges.push_back(m);
    } else {
      throw std::runtime_error("unrecognized dendrogram line: " +
                               std::string(line));
    }
  }
  if (d.n_leaves == 0 || d.merges.size() != d.n_leaves - 1)
    throw std::runtime_error("incomplete dendrogram text");
  return {std::move(d), std::move(labels)};
}

std::string silhouette_report_tsv(const SilhouetteReport& report) {
  std::string out = "k\tsilhouette\n";
  for (const auto& [k, score] : report.by_k)
    out += std::to_string(k) + "\t" + format_fixed(score, 6) + "\n";
  return out;
}

}  // namespace sensorium
