#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sensorium/cluster.hpp"
#include "sensorium/pai.hpp"

namespace sensorium {

struct OverlapMatrix {
  std::vector<std::string> verbs;
  std::vector<std::vector<std::uint64_t>> counts;  // symmetric

  bool operator==(const OverlapMatrix&) const = default;
};

// count[i][j] = shared (lemma, pos-class) keys between the two lists;
// diagonal entries are the list sizes.
OverlapMatrix overlap_matrix(const std::vector<DescriptorList>& lists);

std::string overlap_csv(const OverlapMatrix& matrix);
OverlapMatrix parse_overlap_csv(const std::string& text);

// 8x8 colored grid with labels; the fill scale is linear from white to a
// dark blue, anchored at [0, max off-diagonal count].
std::string render_heatmap_svg(const OverlapMatrix& matrix);

// Dendrogram layout constants, fixed so emitted geometry is checkable:
// a merge at height h draws its bar at y = kDendroBaselineY - h * scale,
// scale = kDendroPlotHeight / max height.
inline constexpr double kDendroBaselineY = 460.0;
inline constexpr double kDendroPlotHeight = 400.0;

// Leaf display order: recursive traversal, smaller-index subtree first.
std::vector<int> dendrogram_leaf_order(const Dendrogram& dendro);

std::string render_dendrogram_svg(const Dendrogram& dendro,
                                  std::span<const std::string> labels);

}  // namespace sensorium
