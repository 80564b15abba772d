#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "sensorium/norms.hpp"
#include "sensorium/util.hpp"

using namespace sensorium;

namespace {

const char* kCsv =
    "Word,Auditory.mean,Gustatory.mean,Haptic.mean,Interoceptive.mean,"
    "Olfactory.mean,Visual.mean\n"
    "drum,4.5,0.2,1.0,0.5,0.1,3.0\n"
    "honey,0.5,4.8,2.0,1.0,3.0,3.5\n"
    "tied,3.0,0.0,3.0,1.0,0.0,2.0\n";

std::string write_temp(const std::string& name, const std::string& content) {
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "sensorium_norms_test";
  fs::create_directories(dir);
  auto path = (dir / name).string();
  write_file(path, content);
  return path;
}

DescriptorList list_of(const std::vector<std::string>& lemmas) {
  DescriptorList list;
  list.verb = "hear";
  for (const auto& lemma : lemmas) {
    DescriptorStats d;
    d.key = DescriptorKey{lemma, PosClass::NN};
    list.descriptors.push_back(d);
  }
  list.final_size = list.descriptors.size();
  return list;
}

}  // namespace

TEST_CASE("csv loading basics") {
  auto path = write_temp("ok.csv", kCsv);
  auto table = load_norms(path, NormsColumns{});
  CHECK(table.entries.size() == 3);
  CHECK(table.rejected_rows == 0);
  const NormEntry* drum = table.find("drum");
  REQUIRE(drum != nullptr);
  CHECK(drum->ratings[0] == 4.5);
  CHECK(drum->ratings[5] == 3.0);
  CHECK(table.find("DRUM") == drum);  // case-insensitive
}

TEST_CASE("out-of-range ratings reject the row") {
  auto path = write_temp(
      "range.csv",
      "Word,Auditory.mean,Gustatory.mean,Haptic.mean,Interoceptive.mean,"
      "Olfactory.mean,Visual.mean\nbad,5.2,0,0,0,0,1\ngood,1,1,1,1,1,1\n");
  auto table = load_norms(path, NormsColumns{});
  CHECK(table.entries.size() == 1);
  CHECK(table.rejected_rows == 1);
  CHECK(table.find("bad") == nullptr);
}

TEST_CASE("duplicate word keeps the last row") {
  auto path = write_temp(
      "dup.csv",
      "Word,Auditory.mean,Gustatory.mean,Haptic.mean,Interoceptive.mean,"
      "Olfactory.mean,Visual.mean\nx,1,0,0,0,0,1\nx,2,0,0,0,0,2\n");
  auto table = load_norms(path, NormsColumns{});
  CHECK(table.entries.size() == 1);
  CHECK(table.duplicate_rows == 1);
  CHECK(table.find("x")->ratings[0] == 2.0);
}

TEST_CASE("missing columns are fatal") {
  auto path = write_temp("cols.csv", "Word,Auditory.mean\nx,1\n");
  CHECK_THROWS(load_norms(path, NormsColumns{}));
}

TEST_CASE("quoted csv fields parse") {
  auto row = parse_csv_row("\"a,b\",2,\"say \"\"hi\"\"\"");
  REQUIRE(row.size() == 3);
  CHECK(row[0] == "a,b");
  CHECK(row[1] == "2");
  CHECK(row[2] == "say \"hi\"");
}

TEST_CASE("exclusivity formula") {
  CHECK(exclusivity({3, 3, 3, 3, 3, 3}) == 0.0);
  CHECK(exclusivity({4, 0, 0, 0, 0, 0}) == 1.0);
  CHECK(exclusivity({5, 3, 1, 0, 0, 0}) ==
        doctest::Approx(5.0 / 9.0).epsilon(1e-12));
  CHECK_THROWS_AS(exclusivity({0, 0, 0, 0, 0, 0}), std::domain_error);
}

TEST_CASE("exclusivity is invariant under uniform positive scaling") {
  Rng rng(4);
  for (int iter = 0; iter < 50; ++iter) {
    std::array<double, 6> r{};
    for (auto& x : r) x = rng.next_unit() * 5.0;
    r[0] += 0.01;  // avoid all-zero
    double base = exclusivity(r);
    double scale = 0.2 + rng.next_unit();  // ratings stay in range anyway
    std::array<double, 6> scaled{};
    for (std::size_t i = 0; i < 6; ++i) scaled[i] = r[i] * scale;
    CHECK(exclusivity(scaled) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("dominant modality: strict argmax") {
  auto m = dominant_modality({1.0, 0.5, 0.2, 0.1, 0.0, 4.2}, 9);
  REQUIRE(m.has_value());
  CHECK(*m == NormModality::V);
  CHECK_FALSE(dominant_modality({0, 0, 0, 0, 0, 0}, 9).has_value());
}

TEST_CASE("dominant modality: ties always land in the argmax set") {
  std::array<double, 6> r = {3.0, 1.0, 0.0, 0.0, 0.0, 3.0};
  int a = 0, v = 0;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    auto m = dominant_modality(r, seed);
    REQUIRE(m.has_value());
    REQUIRE((*m == NormModality::A || *m == NormModality::V));
    (*m == NormModality::A ? a : v)++;
  }
  // roughly even split for a two-way tie
  CHECK(a > 700);
  CHECK(v > 700);
}

TEST_CASE("profile against a hand-computed fixture") {
  auto path = write_temp("prof.csv", kCsv);
  auto table = load_norms(path, NormsColumns{});
  auto list = list_of({"drum", "honey", "nowhere"});

  std::vector<DescriptorModality> per;
  auto p = profile(list, table, 42, false, &per);
  CHECK(p.list_size == 3);
  CHECK(p.matched == 2);

  // drum: max 4.5 (A), excl (4.5-0.1)/9.3; honey: max 4.8 (G),
  // excl (4.8-0.5)/14.8
  const double e_drum = (4.5 - 0.1) / (4.5 + 0.2 + 1.0 + 0.5 + 0.1 + 3.0);
  const double e_honey = (4.8 - 0.5) / (0.5 + 4.8 + 2.0 + 1.0 + 3.0 + 3.5);
  const double ape = (e_drum + e_honey) / 2.0;
  CHECK(p.ape == doctest::Approx(ape).epsilon(1e-12));
  const double var =
      ((e_drum - ape) * (e_drum - ape) + (e_honey - ape) * (e_honey - ape)) /
      2.0;
  CHECK(p.ape_std == doctest::Approx(std::sqrt(var)).epsilon(1e-12));
  CHECK(p.ams == doctest::Approx((4.5 + 4.8) / 2.0).epsilon(1e-12));
  CHECK(p.ams >= 0.0);
  CHECK(p.ams <= 5.0);

  // percentages: A 1/3, G 1/3, NA 1/3
  CHECK(p.percent[0] == doctest::Approx(100.0 / 3.0).epsilon(1e-9));
  CHECK(p.percent[1] == doctest::Approx(100.0 / 3.0).epsilon(1e-9));
  CHECK(p.percent[6] == doctest::Approx(100.0 / 3.0).epsilon(1e-9));
  double sum = 0.0;
  for (double pct : p.percent) sum += pct;
  CHECK(sum == doctest::Approx(100.0).epsilon(1e-4));

  REQUIRE(per.size() == 3);
  CHECK(per[2].matched == false);
  CHECK_FALSE(per[2].dominant.has_value());
}

TEST_CASE("fully covered and disjoint lists") {
  auto path = write_temp("cover.csv", kCsv);
  auto table = load_norms(path, NormsColumns{});

  auto covered = profile(list_of({"drum", "honey"}), table, 1);
  CHECK(covered.percent[6] == 0.0);

  auto disjoint = profile(list_of({"qq", "ww"}), table, 1);
  CHECK(disjoint.percent[6] == 100.0);
  CHECK(disjoint.matched == 0);
}

TEST_CASE("tie draws are stable per descriptor, independent of order") {
  auto path = write_temp(
      "tie.csv",
      "Word,Auditory.mean,Gustatory.mean,Haptic.mean,Interoceptive.mean,"
      "Olfactory.mean,Visual.mean\nt1,2,0,0,0,0,2\nt2,2,0,0,0,0,2\n");
  auto table = load_norms(path, NormsColumns{});

  std::vector<DescriptorModality> fwd, rev;
  profile(list_of({"t1", "t2"}), table, 77, false, &fwd);
  profile(list_of({"t2", "t1"}), table, 77, false, &rev);
  REQUIRE(fwd.size() == 2);
  REQUIRE(rev.size() == 2);
  CHECK(fwd[0].dominant == rev[1].dominant);  // t1 in both
  CHECK(fwd[1].dominant == rev[0].dominant);  // t2 in both
}

TEST_CASE("strict matching uses the pos column") {
  auto path = write_temp(
      "pos.csv",
      "Word,POS,Auditory.mean,Gustatory.mean,Haptic.mean,Interoceptive.mean,"
      "Olfactory.mean,Visual.mean\nbark,NN,4,0,0,0,0,1\n");
  NormsColumns cols;
  cols.pos = "POS";
  auto table = load_norms(path, cols);
  CHECK(table.find_strict("bark", "NN") != nullptr);
  CHECK(table.find_strict("bark", "VB") == nullptr);
  CHECK(table.find("bark") != nullptr);
}
