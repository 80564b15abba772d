#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "../support/oracles.hpp"
#include "sensorium/cluster.hpp"
#include "sensorium/util.hpp"

using namespace sensorium;
using namespace sensorium::testing;

namespace {

DistanceMatrix three_point() {
  // d(A,B)=0.1, d(A,C)=d(B,C)=0.5
  std::vector<double> v = {0.0, 0.1, 0.5, 0.1, 0.0, 0.5, 0.5, 0.5, 0.0};
  return DistanceMatrix({"A", "B", "C"}, v);
}

}  // namespace

TEST_CASE("pearson basics") {
  std::vector<double> u = {1, 2, 3, 4};
  std::vector<double> nu = {-1, -2, -3, -4};
  CHECK(pearson(u, u) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pearson(u, nu) == doctest::Approx(-1.0).epsilon(1e-12));
  std::vector<double> v = {1, 2, 3, 5};
  CHECK(pearson(u, v) == doctest::Approx(0.9827).epsilon(1e-4));
  std::vector<double> c = {2, 2, 2, 2};
  CHECK_THROWS_AS(pearson(u, c), std::invalid_argument);
  std::vector<double> shorter = {1, 2};
  CHECK_THROWS_AS(pearson(u, shorter), std::invalid_argument);
}

TEST_CASE("distance matrix endpoints") {
  std::vector<std::vector<double>> vectors = {
      {1, 2, 3, 4}, {2, 4, 6, 8}, {-1, -2, -3, -4}, {4, 1, 3, 2}};
  auto m = DistanceMatrix::from_vectors({"a", "b", "c", "d"}, vectors);
  CHECK(m.at(0, 1) == doctest::Approx(0.0).epsilon(1e-12));  // identical shape
  CHECK(m.at(0, 2) == doctest::Approx(1.0).epsilon(1e-12));  // anti-correlated
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(m.at(i, i) == 0.0);
    for (std::size_t j = 0; j < m.size(); ++j) {
      CHECK(m.at(i, j) == m.at(j, i));
      CHECK(m.at(i, j) >= 0.0);
      CHECK(m.at(i, j) <= 1.0);
    }
  }
}

TEST_CASE("uncorrelated vectors land at 0.5") {
  std::vector<std::vector<double>> vectors = {{1, -1, 1, -1}, {1, 1, -1, -1}};
  auto m = DistanceMatrix::from_vectors({"a", "b"}, vectors);
  CHECK(m.at(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("constant vector is rejected by name") {
  std::vector<std::vector<double>> vectors = {{1, 2, 3}, {5, 5, 5}};
  try {
    DistanceMatrix::from_vectors({"ok", "flat"}, vectors);
    FAIL("expected throw");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("flat") != std::string::npos);
  }
}

TEST_CASE("two points merge at their distance") {
  std::vector<double> v = {0.0, 0.4, 0.4, 0.0};
  auto d = agnes_ward(DistanceMatrix({"x", "y"}, v));
  REQUIRE(d.merges.size() == 1);
  CHECK(d.merges[0].left == 0);
  CHECK(d.merges[0].right == 1);
  CHECK(d.merges[0].height == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(d.merges[0].size == 2);
}

TEST_CASE("three-point worked example") {
  auto d = agnes_ward(three_point());
  REQUIRE(d.merges.size() == 2);
  CHECK(d.merges[0].left == 0);
  CHECK(d.merges[0].right == 1);
  CHECK(d.merges[0].height == doctest::Approx(0.1).epsilon(1e-12));
  double expected = std::sqrt(2.0 / 3.0 * 0.25 + 2.0 / 3.0 * 0.25 -
                              1.0 / 3.0 * 0.01);
  CHECK(d.merges[1].height == doctest::Approx(expected).epsilon(1e-12));
  CHECK(d.merges[1].height == doctest::Approx(0.5745).epsilon(1e-4));
  CHECK(d.merges[1].left == 2);
  CHECK(d.merges[1].right == 3);

  auto labels = cut(d, 2);
  CHECK(labels == std::vector<int>{0, 0, 1});
}

TEST_CASE("agnes matches the closed-form oracle on random instances") {
  Rng rng(2024);
  for (int iter = 0; iter < 60; ++iter) {
    std::size_t n = 2 + rng.next_below(30);
    auto dist = random_distance_matrix(rng, n);
    auto fast = agnes_ward(dist);
    auto slow = agnes_ward_oracle(dist);
    REQUIRE(fast.merges.size() == slow.merges.size());
    for (std::size_t m = 0; m < fast.merges.size(); ++m) {
      CHECK(fast.merges[m].left == slow.merges[m].left);
      CHECK(fast.merges[m].right == slow.merges[m].right);
      CHECK(fast.merges[m].size == slow.merges[m].size);
      CHECK(fast.merges[m].height ==
            doctest::Approx(slow.merges[m].height).epsilon(1e-9));
    }
    for (std::size_t m = 1; m < fast.merges.size(); ++m)
      CHECK(fast.merges[m].height >= fast.merges[m - 1].height - 1e-12);
  }
}

TEST_CASE("cut endpoints") {
  Rng rng(7);
  auto dist = random_distance_matrix(rng, 9);
  auto dendro = agnes_ward(dist);
  auto one = cut(dendro, 1);
  CHECK(std::all_of(one.begin(), one.end(), [](int l) { return l == 0; }));
  auto all = cut(dendro, 9);
  std::vector<int> expect(9);
  std::iota(expect.begin(), expect.end(), 0);
  CHECK(all == expect);  // singletons labeled by smallest leaf
  CHECK_THROWS(cut(dendro, 0));
  CHECK_THROWS(cut(dendro, 10));
}

TEST_CASE("cut refinement splits exactly one cluster") {
  Rng rng(41);
  for (int iter = 0; iter < 15; ++iter) {
    std::size_t n = 5 + rng.next_below(25);
    auto dist = random_distance_matrix(rng, n);
    auto dendro = agnes_ward(dist);
    for (std::size_t k = 1; k < n; ++k) {
      auto coarse = cut(dendro, k);
      auto fine = cut(dendro, k + 1);
      // count clusters in `coarse` whose members get split in `fine`
      std::size_t splits = 0;
      for (std::size_t c = 0; c < k; ++c) {
        std::vector<int> fine_ids;
        for (std::size_t i = 0; i < n; ++i)
          if (coarse[i] == static_cast<int>(c)) fine_ids.push_back(fine[i]);
        std::sort(fine_ids.begin(), fine_ids.end());
        fine_ids.erase(std::unique(fine_ids.begin(), fine_ids.end()),
                       fine_ids.end());
        REQUIRE(fine_ids.size() <= 2);
        if (fine_ids.size() == 2) ++splits;
      }
      CHECK(splits == 1);
    }
  }
}

TEST_CASE("silhouette of two tight pairs") {
  std::vector<double> v(16, 0.0);
  auto set = [&](std::size_t i, std::size_t j, double d) {
    v[i * 4 + j] = d;
    v[j * 4 + i] = d;
  };
  set(0, 1, 0.1);
  set(2, 3, 0.1);
  set(0, 2, 0.9);
  set(0, 3, 0.9);
  set(1, 2, 0.9);
  set(1, 3, 0.9);
  DistanceMatrix dist({"a", "b", "c", "d"}, v);
  std::vector<int> labels = {0, 0, 1, 1};
  CHECK(silhouette(dist, labels) ==
        doctest::Approx((0.9 - 0.1) / 0.9).epsilon(1e-12));
}

TEST_CASE("singletons contribute zero") {
  std::vector<double> v = {0.0, 0.3, 0.3, 0.0};
  DistanceMatrix dist({"a", "b"}, v);
  std::vector<int> labels = {0, 1};
  CHECK(silhouette(dist, labels) == 0.0);
}

TEST_CASE("silhouette matches the direct-definition oracle") {
  Rng rng(555);
  for (int iter = 0; iter < 60; ++iter) {
    std::size_t n = 4 + rng.next_below(37);
    auto dist = random_distance_matrix(rng, n);
    std::size_t k = 2 + rng.next_below(n - 2);
    std::vector<int> labels(n);
    // force every cluster non-empty, rest random
    for (std::size_t i = 0; i < n; ++i)
      labels[i] = i < k ? static_cast<int>(i)
                        : static_cast<int>(rng.next_below(k));
    double mine = silhouette(dist, labels);
    double ref = silhouette_oracle(dist, labels);
    CHECK(mine == doctest::Approx(ref).epsilon(1e-9));
    CHECK(mine >= -1.0);
    CHECK(mine <= 1.0);
  }
}

TEST_CASE("sweep picks two blobs, equidistant ties go to k_min") {
  // two well-separated triples
  const std::size_t n = 6;
  std::vector<double> v(n * n, 0.0);
  auto set = [&](std::size_t i, std::size_t j, double d) {
    v[i * n + j] = d;
    v[j * n + i] = d;
  };
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) set(i, j, 0.05);
  for (std::size_t i = 3; i < 6; ++i)
    for (std::size_t j = i + 1; j < 6; ++j) set(i, j, 0.05);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 3; j < 6; ++j) set(i, j, 0.95);
  DistanceMatrix blobs({"a", "b", "c", "d", "e", "f"}, v);
  auto dendro = agnes_ward(blobs);
  auto report = sweep_k(dendro, blobs);
  CHECK(report.best_k == 2);
  CHECK(report.best_score > 0.8);
  CHECK(report.by_k.size() == n - 2);

  // all-equal distances: all coefficients 0, smallest k wins
  std::vector<double> eq(n * n, 0.3);
  for (std::size_t i = 0; i < n; ++i) eq[i * n + i] = 0.0;
  DistanceMatrix flat({"a", "b", "c", "d", "e", "f"}, eq);
  auto flat_dendro = agnes_ward(flat);
  auto flat_report = sweep_k(flat_dendro, flat);
  CHECK(flat_report.best_k == 2);
  for (const auto& [k, score] : flat_report.by_k)
    CHECK(score == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("permutation equivariance") {
  Rng rng(321);
  for (int iter = 0; iter < 10; ++iter) {
    std::size_t n = 6 + rng.next_below(20);
    auto dist = random_distance_matrix(rng, n);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = n - 1; i > 0; --i)
      std::swap(perm[i], perm[rng.next_below(i + 1)]);
    auto permuted = dist.restrict(perm);

    auto d1 = agnes_ward(dist);
    auto d2 = agnes_ward(permuted);
    std::vector<double> h1, h2;
    for (const auto& m : d1.merges) h1.push_back(m.height);
    for (const auto& m : d2.merges) h2.push_back(m.height);
    std::sort(h1.begin(), h1.end());
    std::sort(h2.begin(), h2.end());
    for (std::size_t m = 0; m < h1.size(); ++m)
      CHECK(h1[m] == doctest::Approx(h2[m]).epsilon(1e-9));

    for (std::size_t k = 2; k <= std::min<std::size_t>(5, n - 1); ++k) {
      auto s1 = silhouette(dist, cut(d1, k));
      auto s2 = silhouette(permuted, cut(d2, k));
      CHECK(s1 == doctest::Approx(s2).epsilon(1e-9));
    }
  }
}

TEST_CASE("restriction to the full set is the identity") {
  Rng rng(99);
  auto dist = random_distance_matrix(rng, 12);
  std::vector<std::size_t> all(12);
  std::iota(all.begin(), all.end(), 0);
  auto same = dist.restrict(all);
  CHECK(agnes_ward(dist) == agnes_ward(same));
}

TEST_CASE("dendrogram text round-trips exactly") {
  Rng rng(17);
  auto dist = random_distance_matrix(rng, 15);
  auto dendro = agnes_ward(dist);
  auto text = dendrogram_text(dendro, dist.labels());
  auto [parsed, labels] = parse_dendrogram_text(text);
  CHECK(parsed == dendro);
  CHECK(labels == dist.labels());
}

TEST_CASE("distance matrix tsv round-trips exactly") {
  Rng rng(18);
  auto dist = random_distance_matrix(rng, 9);
  auto back = DistanceMatrix::from_tsv(dist.to_tsv());
  CHECK(back == dist);
}
