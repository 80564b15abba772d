#include <doctest.h>

#include <regex>

#include "sensorium/report.hpp"
#include "sensorium/util.hpp"

using namespace sensorium;

namespace {

DescriptorList list_of(const std::string& verb,
                       const std::vector<std::string>& lemmas) {
  DescriptorList list;
  list.verb = verb;
  for (const auto& lemma : lemmas) {
    DescriptorStats d;
    d.key = DescriptorKey{lemma, PosClass::NN};
    list.descriptors.push_back(d);
  }
  list.final_size = list.descriptors.size();
  return list;
}

}  // namespace

TEST_CASE("overlap counts shared keys; diagonal is list size") {
  auto a = list_of("see", {"w1", "w2", "w3", "w4", "w5", "w6", "w7", "a1"});
  auto b = list_of("look", {"w1", "w2", "w3", "w4", "w5", "w6", "w7", "b1"});
  auto c = list_of("taste", {"c1", "c2"});
  auto m = overlap_matrix({a, b, c});
  CHECK(m.counts[0][0] == 8);
  CHECK(m.counts[1][1] == 8);
  CHECK(m.counts[2][2] == 2);
  CHECK(m.counts[0][1] == 7);
  CHECK(m.counts[1][0] == 7);
  CHECK(m.counts[0][2] == 0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(m.counts[i][j] == m.counts[j][i]);
      if (i != j)
        CHECK(m.counts[i][j] <= std::min(m.counts[i][i], m.counts[j][j]));
    }
}

TEST_CASE("identical and disjoint lists") {
  auto a = list_of("see", {"x", "y", "z"});
  auto m_same = overlap_matrix({a, a});
  CHECK(m_same.counts[0][1] == 3);
  auto b = list_of("look", {"p", "q"});
  auto m_disj = overlap_matrix({a, b});
  CHECK(m_disj.counts[0][1] == 0);
}

TEST_CASE("overlap csv round-trips") {
  auto a = list_of("see", {"x", "y", "z"});
  auto b = list_of("look", {"x", "q"});
  auto m = overlap_matrix({a, b});
  CHECK(parse_overlap_csv(overlap_csv(m)) == m);
}

TEST_CASE("heatmap cell shades follow the counts") {
  OverlapMatrix m;
  m.verbs = {"v1", "v2", "v3"};
  m.counts = {{5, 1, 4}, {1, 5, 2}, {4, 2, 5}};
  auto svg = render_heatmap_svg(m);

  std::regex rect("<rect class=\"cell\"[^>]*fill=\"rgb\\((\\d+),(\\d+),(\\d+)\\)\"");
  std::vector<int> shade;  // sum of channels; darker = smaller
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), rect);
       it != std::sregex_iterator(); ++it) {
    shade.push_back(std::stoi((*it)[1]) + std::stoi((*it)[2]) +
                    std::stoi((*it)[3]));
  }
  REQUIRE(shade.size() == 9);
  std::vector<std::uint64_t> flat = {5, 1, 4, 1, 5, 2, 4, 2, 5};
  for (std::size_t i = 0; i < 9; ++i)
    for (std::size_t j = 0; j < 9; ++j) {
      if (flat[i] < flat[j]) CHECK(shade[i] > shade[j]);
      if (flat[i] == flat[j]) CHECK(shade[i] == shade[j]);
    }
}

TEST_CASE("zero matrix renders uniformly without crashing") {
  OverlapMatrix m;
  m.verbs = {"a", "b"};
  m.counts = {{0, 0}, {0, 0}};
  auto svg = render_heatmap_svg(m);
  std::regex rect("fill=\"rgb\\(255,255,255\\)\"");
  auto begin = std::sregex_iterator(svg.begin(), svg.end(), rect);
  CHECK(std::distance(begin, std::sregex_iterator()) == 4);
}

TEST_CASE("dendrogram svg geometry matches merge heights") {
  // worked 3-point instance: heights 0.1 and 0.574456...
  std::vector<double> v = {0.0, 0.1, 0.5, 0.1, 0.0, 0.5, 0.5, 0.5, 0.0};
  DistanceMatrix dist({"A", "B", "C"}, v);
  auto dendro = agnes_ward(dist);
  auto svg = render_dendrogram_svg(dendro, dist.labels());

  std::regex bar("<line class=\"bar\"[^>]*y1=\"([0-9.]+)\"");
  std::vector<double> ys;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), bar);
       it != std::sregex_iterator(); ++it)
    ys.push_back(std::stod((*it)[1]));
  REQUIRE(ys.size() == 2);
  double h1 = kDendroBaselineY - ys[0];
  double h2 = kDendroBaselineY - ys[1];
  CHECK(h1 / h2 == doctest::Approx(0.1 / dendro.merges[1].height)
                       .epsilon(1e-2));
  // the deepest merge spans the full plot height
  CHECK(h2 == doctest::Approx(kDendroPlotHeight).epsilon(1e-6));
}

TEST_CASE("dendrogram svg carries every leaf label") {
  Rng rng(8);
  std::vector<std::string> labels;
  const std::size_t n = 12;
  std::vector<double> values(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back("leaf" + std::to_string(i));
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = rng.next_unit();
      values[i * n + j] = d;
      values[j * n + i] = d;
    }
  }
  DistanceMatrix dist(labels, values);
  auto dendro = agnes_ward(dist);
  auto svg = render_dendrogram_svg(dendro, labels);
  std::regex leaf("class=\"leaf\"");
  auto begin = std::sregex_iterator(svg.begin(), svg.end(), leaf);
  CHECK(static_cast<std::size_t>(
            std::distance(begin, std::sregex_iterator())) == n);
}

TEST_CASE("two-leaf dendrogram renders one bar at its height") {
  std::vector<double> v = {0.0, 0.42, 0.42, 0.0};
  DistanceMatrix dist({"l", "r"}, v);
  auto dendro = agnes_ward(dist);
  auto svg = render_dendrogram_svg(dendro, dist.labels());
  std::regex bar("<line class=\"bar\"");
  auto begin = std::sregex_iterator(svg.begin(), svg.end(), bar);
  CHECK(std::distance(begin, std::sregex_iterator()) == 1);
}

TEST_CASE("leaf order is the recursive merge order") {
  // chain: (0,1) first, then +2, then +3: order must keep subtrees adjacent
  std::vector<double> v = {
      0.0, 0.1, 0.9, 0.5,
      0.1, 0.0, 0.9, 0.5,
      0.9, 0.9, 0.0, 0.7,
      0.5, 0.5, 0.7, 0.0};
  DistanceMatrix dist({"a", "b", "c", "d"}, v);
  auto dendro = agnes_ward(dist);
  auto order = dendrogram_leaf_order(dendro);
  REQUIRE(order.size() == 4);
  // tightest pair stays adjacent
  auto pos = [&](int leaf) {
    return std::find(order.begin(), order.end(), leaf) - order.begin();
  };
  CHECK(std::abs(pos(0) - pos(1)) == 1);
}
