#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sensorium/types.hpp"

namespace sensorium {

// Sample Pearson correlation. Requires equal lengths >= 2 and non-constant
// inputs; a constant vector has no defined correlation and throws.
double pearson(std::span<const double> u, std::span<const double> v);

// Symmetric matrix of D_ij = 0.5 * (1 - pearson), zero diagonal, range [0,1].
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(std::vector<std::string> labels, std::vector<double> values);

  static DistanceMatrix from_vectors(
      std::vector<std::string> labels,
      const std::vector<std::vector<double>>& vectors);

  std::size_t size() const { return labels_.size(); }
  double at(std::size_t i, std::size_t j) const {
    return values_[i * labels_.size() + j];
  }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& values() const { return values_; }

  // Restriction to a subset of rows/columns, keeping the given order.
  DistanceMatrix restrict(const std::vector<std::size_t>& indices) const;

  std::string to_tsv() const;
  static DistanceMatrix from_tsv_file(const std::string& path);
  static DistanceMatrix from_tsv(const std::string& text);

  bool operator==(const DistanceMatrix&) const = default;

 private:
  std::vector<std::string> labels_;
  std::vector<double> values_;  // n*n row-major
};

struct Merge {
  int left = 0;   // node ids: leaves 0..n-1, merge m creates node n+m
  int right = 0;  // left < right
  double height = 0.0;
  int size = 0;   // leaves under the new node
};

struct Dendrogram {
  std::size_t n_leaves = 0;
  std::vector<Merge> merges;  // n_leaves - 1 entries, heights non-decreasing

  bool operator==(const Dendrogram&) const = default;
};

// AGNES with Ward linkage over the squared dissimilarities, updated by the
// Lance-Williams recurrence; reported heights are the square roots of the
// merged values. Tied minima resolve to the smallest (left,right) node pair.
Dendrogram agnes_ward(const DistanceMatrix& dist);

// Undoes the last k-1 merges; clusters are labeled 0..k-1 ordered by their
// smallest contained leaf.
std::vector<int> cut(const Dendrogram& dendro, std::size_t k);

// Mean silhouette over all points: s(i) = (b-a)/max(a,b), singletons get 0.
// Requires at least two clusters.
double silhouette(const DistanceMatrix& dist, std::span<const int> labels);

struct SilhouetteReport {
  std::vector<std::pair<std::size_t, double>> by_k;
  std::size_t best_k = 0;
  double best_score = 0.0;
};

// Evaluates every cut k in [k_min, k_max] (k_max = 0 means n-1) and reports
// the argmax, smallest k winning ties.
SilhouetteReport sweep_k(const Dendrogram& dendro, const DistanceMatrix& dist,
                         std::size_t k_min = 2, std::size_t k_max = 0);

// Dendrogram plus leaf labels as a line-oriented text block that parses back
// to exactly the same structure.
std::string dendrogram_text(const Dendrogram& dendro,
                            std::span<const std::string> labels);
std::pair<Dendrogram, std::vector<std::string>> parse_dendrogram_text(
    const std::string& text);

std::string silhouette_report_tsv(const SilhouetteReport& report);

}  // namespace sensorium
