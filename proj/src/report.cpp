#include "sensorium/report.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "sensorium/util.hpp"

namespace sensorium {

OverlapMatrix overlap_matrix(const std::vector<DescriptorList>& lists) {
  OverlapMatrix m;
  const std::size_t n = lists.size();
  m.verbs.reserve(n);
  std::vector<std::unordered_set<std::string>> sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    m.verbs.push_back(lists[i].verb);
    for (const auto& d : lists[i].descriptors)
      sets[i].insert(key_string(d.key));
  }
  m.counts.assign(n, std::vector<std::uint64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    m.counts[i][i] = sets[i].size();
    for (std::size_t j = i + 1; j < n; ++j) {
      std::uint64_t shared = 0;
      for (const auto& key : sets[i])
        if (sets[j].contains(key)) ++shared;
      m.counts[i][j] = shared;
      m.counts[j][i] = shared;
    }
  }
  return m;
}

std::string overlap_csv(const OverlapMatrix& matrix) {
  std::string out = "verb";
  for (const auto& v : matrix.verbs) {
    out += ',';
    out += v;
  }
  out += '\n';
  for (std::size_t i = 0; i < matrix.verbs.size(); ++i) {
    out += matrix.verbs[i];
    for (std::uint64_t c : matrix.counts[i]) {
      out += ',';
      out += std::to_string(c);
    }
    out += '\n';
  }
  return out;
}

OverlapMatrix parse_overlap_csv(const std::string& text) {
  OverlapMatrix m;
  auto lines = split(text, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw std::runtime_error("empty overlap csv");
  auto header = split(lines[0], ',');
  for (std::size_t i = 1; i < header.size(); ++i)
    m.verbs.emplace_back(header[i]);
  const std::size_t n = m.verbs.size();
  if (lines.size() != n + 1)
    throw std::runtime_error("overlap csv row count mismatch");
  m.counts.assign(n, std::vector<std::uint64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    auto cols = split(lines[i + 1], ',');
    if (cols.size() != n + 1 || std::string(cols[0]) != m.verbs[i])
      throw std::runtime_error("bad overlap csv row " + std::to_string(i + 1));
    for (std::size_t j = 0; j < n; ++j)
      m.counts[i][j] = std::stoull(std::string(cols[j + 1]));
  }
  return m;
}

namespace {

std::string rgb_for(double t) {
  t = std::clamp(t, 0.0, 1.0);
  // white -> dark blue
  int r = static_cast<int>(std::lround(255.0 + t * (8.0 - 255.0)));
  int g = static_cast<int>(std::lround(255.0 + t * (48.0 - 255.0)));
  int b = static_cast<int>(std::lround(255.0 + t * (107.0 - 255.0)));
  return "rgb(" + std::to_string(r) + "," + std::to_string(g) + "," +
         std::to_string(b) + ")";
}

std::string fmt_coord(double v) { return format_fixed(v, 2); }

}  // namespace

std::string render_heatmap_svg(const OverlapMatrix& matrix) {
  const std::size_t n = matrix.verbs.size();
  const double cell = 56.0, left = 96.0, top = 72.0;
  const double width = left + cell * static_cast<double>(n) + 24.0;
  const double height = top + cell * static_cast<double>(n) + 24.0;

  std::uint64_t max_off = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) max_off = std::max(max_off, matrix.counts[i][j]);

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         fmt_coord(width) + "\" height=\"" + fmt_coord(height) + "\">\n";
  svg += "<style>text{font-family:sans-serif;font-size:12px;}</style>\n";
  for (std::size_t j = 0; j < n; ++j) {
    double x = left + cell * (static_cast<double>(j) + 0.5);
    svg += "<text x=\"" + fmt_coord(x) + "\" y=\"" + fmt_coord(top - 10.0) +
           "\" text-anchor=\"middle\">" + matrix.verbs[j] + "</text>\n";
  }
  for (std::size_t i = 0; i < n; ++i) {
    double y = top + cell * (static_cast<double>(i) + 0.5) + 4.0;
    svg += "<text x=\"" + fmt_coord(left - 8.0) + "\" y=\"" + fmt_coord(y) +
           "\" text-anchor=\"end\">" + matrix.verbs[i] + "</text>\n";
    for (std::size_t j = 0; j < n; ++j) {
      double t = max_off > 0 ? static_cast<double>(matrix.counts[i][j]) /
                                   static_cast<double>(max_off)
                             : 0.0;
      double x = left + cell * static_cast<double>(j);
      double cy = top + cell * static_cast<double>(i);
      svg += "<rect class=\"cell\" x=\"" + fmt_coord(x) + "\" y=\"" +
             fmt_coord(cy) + "\" width=\"" + fmt_coord(cell) + "\" height=\"" +
             fmt_coord(cell) + "\" fill=\"" + rgb_for(t) + "\"/>\n";
      std::string text_color = t > 0.55 ? "#ffffff" : "#1a1a1a";
      svg += "<text x=\"" + fmt_coord(x + cell / 2.0) + "\" y=\"" +
             fmt_coord(cy + cell / 2.0 + 4.0) +
             "\" text-anchor=\"middle\" fill=\"" + text_color + "\">" +
             std::to_string(matrix.counts[i][j]) + "</text>\n";
    }
  }
  svg += "</svg>\n";
  return svg;
}

namespace {

void collect_leaves(const Dendrogram& dendro, int node, std::vector<int>& out) {
  const int n = static_cast<int>(dendro.n_leaves);
  if (node < n) {
    out.push_back(node);
    return;
  }
  const Merge& m = dendro.merges[static_cast<std::size_t>(node - n)];
  collect_leaves(dendro, m.left, out);
  collect_leaves(dendro, m.right, out);
}

}  // namespace

std::vector<int> dendrogram_leaf_order(const Dendrogram& dendro) {
  std::vector<int> order;
  order.reserve(dendro.n_leaves);
  if (dendro.n_leaves == 0) return order;
  if (dendro.merges.empty()) {
    order.push_back(0);
    return order;
  }
  int root = static_cast<int>(dendro.n_leaves + dendro.merges.size() - 1);
  collect_leaves(dendro, root, order);
  return order;
}

std::string render_dendrogram_svg(const Dendrogram& dendro,
                                  std::span<const std::string> labels) {
  if (labels.size() != dendro.n_leaves)
    throw std::invalid_argument("dendrogram labels size mismatch");
  const std::size_t n = dendro.n_leaves;
  auto order = dendrogram_leaf_order(dendro);

  const double slot = 22.0, left = 40.0;
  const double width = left + slot * static_cast<double>(n) + 40.0;
  const double label_space = 120.0;
  const double height = kDendroBaselineY + label_space;

  double h_max = 0.0;
  for (const auto& m : dendro.merges) h_max = std::max(h_max, m.height);
  const double scale = h_max > 0.0 ? kDendroPlotHeight / h_max : 0.0;

  // x,y per node id
  std::vector<double> xs(2 * n - 1, 0.0), ys(2 * n - 1, kDendroBaselineY);
  for (std::size_t pos = 0; pos < order.size(); ++pos)
    xs[static_cast<std::size_t>(order[pos])] =
        left + slot * (static_cast<double>(pos) + 0.5);

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         fmt_coord(width) + "\" height=\"" + fmt_coord(height) + "\">\n";
  svg += "<style>text{font-family:sans-serif;font-size:10px;}"
         "line{stroke:#333;stroke-width:1;}</style>\n";

  for (std::size_t mi = 0; mi < dendro.merges.size(); ++mi) {
    const Merge& m = dendro.merges[mi];
    const std::size_t node = n + mi;
    double y = kDendroBaselineY - m.height * scale;
    double xl = xs[static_cast<std::size_t>(m.left)];
    double xr = xs[static_cast<std::size_t>(m.right)];
    xs[node] = (xl + xr) / 2.0;
    ys[node] = y;
    svg += "<line class=\"drop\" x1=\"" + fmt_coord(xl) + "\" y1=\"" +
           fmt_coord(ys[static_cast<std::size_t>(m.left)]) + "\" x2=\"" +
           fmt_coord(xl) + "\" y2=\"" + fmt_coord(y) + "\"/>\n";
    svg += "<line class=\"drop\" x1=\"" + fmt_coord(xr) + "\" y1=\"" +
           fmt_coord(ys[static_cast<std::size_t>(m.right)]) + "\" x2=\"" +
           fmt_coord(xr) + "\" y2=\"" + fmt_coord(y) + "\"/>\n";
    svg += "<line class=\"bar\" x1=\"" + fmt_coord(xl) + "\" y1=\"" +
           fmt_coord(y) + "\" x2=\"" + fmt_coord(xr) + "\" y2=\"" +
           fmt_coord(y) + "\"/>\n";
  }

  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    double x = left + slot * (static_cast<double>(pos) + 0.5);
    double y = kDendroBaselineY + 12.0;
    svg += "<text class=\"leaf\" x=\"" + fmt_coord(x) + "\" y=\"" +
           fmt_coord(y) + "\" transform=\"rotate(60 " + fmt_coord(x) + " " +
           fmt_coord(y) + ")\">" +
           labels[static_cast<std::size_t>(order[pos])] + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace sensorium
