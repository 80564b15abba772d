#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "sensorium/cluster.hpp"
#include "sensorium/embed.hpp"

using namespace sensorium;

namespace {

// tiny synthetic corpus: two interchangeable tokens plus an unrelated topic
std::vector<std::vector<std::string>> toy_corpus(Rng& rng, int sentences) {
  std::vector<std::string> ctx = {"c0", "c1", "c2", "c3", "c4", "c5"};
  std::vector<std::string> other = {"o0", "o1", "o2", "o3", "o4", "o5"};
  std::vector<std::vector<std::string>> out;
  for (int i = 0; i < sentences; ++i) {
    std::vector<std::string> s;
    if (i % 3 == 2) {
      s.push_back(other[rng.next_below(other.size())]);
      s.push_back("zz");
      s.push_back(other[rng.next_below(other.size())]);
      s.push_back(other[rng.next_below(other.size())]);
    } else {
      s.push_back(ctx[rng.next_below(ctx.size())]);
      s.push_back(i % 3 == 0 ? "xx" : "yy");
      s.push_back(ctx[rng.next_below(ctx.size())]);
      s.push_back(ctx[rng.next_below(ctx.size())]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

TrainingConfig small_config(std::uint64_t seed) {
  TrainingConfig cfg;
  cfg.dim = 16;
  cfg.window = 4;
  cfg.min_count = 1;
  cfg.epochs = 10;
  cfg.negatives = 5;
  cfg.learning_rate = 0.05;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("vocabulary filters by min_count and orders by frequency") {
  std::vector<std::vector<std::string>> sentences = {
      {"a", "a", "a", "b", "b", "c"}, {"a", "b", "d"}};
  auto vocab = build_vocab(sentences, 2);
  REQUIRE(vocab.size() == 2);
  CHECK(vocab.words[0] == "a");  // freq 4
  CHECK(vocab.words[1] == "b");  // freq 3
  CHECK(vocab.lookup("c") == -1);
  CHECK(vocab.lookup("d") == -1);
  CHECK(vocab.total_tokens == 7);

  auto vocab10 = build_vocab(
      {{"x", "x", "x", "x", "x", "x", "x", "x", "x"},   // 9
       {"y", "y", "y", "y", "y", "y", "y", "y", "y", "y"}},  // 10
      10);
  CHECK(vocab10.lookup("x") == -1);
  CHECK(vocab10.lookup("y") == 0);

  CHECK_THROWS(build_vocab({{"solo"}}, 5));
}

TEST_CASE("vocabulary tie order is lexicographic") {
  auto vocab = build_vocab({{"bb", "aa", "cc"}}, 1);
  CHECK(vocab.words == std::vector<std::string>{"aa", "bb", "cc"});
}

TEST_CASE("embedding token keys") {
  CHECK(embedding_token("dog", "NNS") == "dog_NN");
  CHECK(embedding_token("run", "VBD") == "run_VB");
  CHECK(embedding_token("the", "DT") == "the_DT");
}

TEST_CASE("unigram sampler follows counts") {
  std::vector<std::uint64_t> counts = {1000, 10, 10};
  UnigramSampler sampler(counts, 0.75);
  Rng rng(5);
  std::array<int, 3> hits{};
  for (int i = 0; i < 20000; ++i) hits[sampler.sample(rng)]++;
  CHECK(hits[0] > hits[1]);
  CHECK(hits[0] > hits[2]);
  CHECK(hits[1] > 0);
  CHECK(hits[2] > 0);
}

TEST_CASE("analytic gradients match finite differences") {
  Rng rng(99);
  for (int iter = 0; iter < 10; ++iter) {
    const int vocab_size = 8;
    TrainingConfig cfg = small_config(100 + iter);
    cfg.dim = 6;
    EmbeddingModel model;
    model.config = cfg;
    for (int w = 0; w < vocab_size; ++w) {
      model.vocab.words.push_back("w" + std::to_string(w));
      model.vocab.index.emplace("w" + std::to_string(w), w);
      model.vocab.counts.push_back(10);
    }
    model.input.resize(vocab_size * cfg.dim);
    model.output.resize(vocab_size * cfg.dim);
    for (auto& x : model.input) x = rng.next_range(-0.8, 0.8);
    for (auto& x : model.output) x = rng.next_range(-0.8, 0.8);

    CbowInstance inst;
    inst.context = {0, 2, 2, 5};  // repeated context word on purpose
    inst.target = 1;
    inst.negatives = {3, 4, 3};   // repeated negative on purpose

    std::unordered_map<int, std::vector<double>> gin, gout;
    cbow_instance_gradients(model, inst, gin, gout);

    const double h = 1e-4;
    double max_rel = 0.0;
    auto check_param = [&](std::vector<double>& matrix, int word, int d,
                           double analytic) {
      const std::size_t idx =
          static_cast<std::size_t>(word) * cfg.dim + static_cast<std::size_t>(d);
      const double saved = matrix[idx];
      matrix[idx] = saved + h;
      double up = cbow_instance_loss(model, inst);
      matrix[idx] = saved - h;
      double down = cbow_instance_loss(model, inst);
      matrix[idx] = saved;
      double numeric = (up - down) / (2.0 * h);
      double denom = std::max({std::abs(numeric), std::abs(analytic), 1e-8});
      max_rel = std::max(max_rel, std::abs(numeric - analytic) / denom);
    };
    for (const auto& [word, grad] : gin)
      for (int d = 0; d < cfg.dim; ++d)
        check_param(model.input, word, d, grad[static_cast<std::size_t>(d)]);
    for (const auto& [word, grad] : gout)
      for (int d = 0; d < cfg.dim; ++d)
        check_param(model.output, word, d, grad[static_cast<std::size_t>(d)]);
    CHECK(max_rel < 1e-4);
  }
}

TEST_CASE("training loss decreases over the first epochs") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    Rng rng(seed);
    auto corpus = toy_corpus(rng, 300);
    auto vocab = build_vocab(corpus, 1);
    auto ids = map_to_ids(corpus, vocab);
    std::vector<EpochStats> curve;
    train_cbow(ids, vocab, small_config(seed), &curve);
    REQUIRE(curve.size() >= 5);
    for (int e = 1; e < 5; ++e)
      CHECK(curve[static_cast<std::size_t>(e)].mean_loss <
            curve[static_cast<std::size_t>(e - 1)].mean_loss);
  }
}

TEST_CASE("fixed seed single worker reproduces bit-identical matrices") {
  Rng rng(11);
  auto corpus = toy_corpus(rng, 120);
  auto vocab = build_vocab(corpus, 1);
  auto ids = map_to_ids(corpus, vocab);
  auto m1 = train_cbow(ids, vocab, small_config(7));
  auto m2 = train_cbow(ids, vocab, small_config(7));
  CHECK(m1.input == m2.input);
  CHECK(m1.output == m2.output);
  auto m3 = train_cbow(ids, vocab, small_config(8));
  CHECK(m1.input != m3.input);
}

TEST_CASE("substitutable tokens end up closer than unrelated ones") {
  int wins = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    auto corpus = toy_corpus(rng, 600);
    auto vocab = build_vocab(corpus, 1);
    auto ids = map_to_ids(corpus, vocab);
    auto model = train_cbow(ids, vocab, small_config(seed));

    std::vector<double> x, y, z;
    REQUIRE(concept_vector(model, "xx", x) == VectorStatus::Ok);
    REQUIRE(concept_vector(model, "yy", y) == VectorStatus::Ok);
    REQUIRE(concept_vector(model, "zz", z) == VectorStatus::Ok);
    double near = 0.5 * (1.0 - pearson(x, y));
    double far = 0.5 * (1.0 - pearson(x, z));
    if (near < far) ++wins;
  }
  CHECK(wins == 5);
}

TEST_CASE("concept vectors are standardized, OOV and constant flagged") {
  EmbeddingModel model;
  model.config.dim = 3;
  model.vocab.words = {"w", "flat"};
  model.vocab.index = {{"w", 0}, {"flat", 1}};
  model.vocab.counts = {5, 5};
  model.input = {1.0, 2.0, 3.0, 4.0, 4.0, 4.0};

  std::vector<double> out;
  REQUIRE(concept_vector(model, "w", out) == VectorStatus::Ok);
  CHECK(out[0] == doctest::Approx(-1.2247).epsilon(1e-4));
  CHECK(out[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(out[2] == doctest::Approx(1.2247).epsilon(1e-4));
  double mean = (out[0] + out[1] + out[2]) / 3.0;
  CHECK(std::abs(mean) < 1e-9);

  CHECK(concept_vector(model, "flat", out) == VectorStatus::Constant);
  CHECK(concept_vector(model, "missing", out) == VectorStatus::NotFound);
}

TEST_CASE("standardization is idempotent") {
  Rng rng(3);
  for (int iter = 0; iter < 20; ++iter) {
    std::vector<double> v(16);
    for (auto& x : v) x = rng.next_range(-5, 5);
    REQUIRE(standardize(v));
    auto once = v;
    REQUIRE(standardize(v));
    for (std::size_t i = 0; i < v.size(); ++i)
      CHECK(v[i] == doctest::Approx(once[i]).epsilon(1e-12));
  }
}

TEST_CASE("correlation is invariant under positive affine maps") {
  Rng rng(31);
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<double> u(12), v(12);
    for (auto& x : u) x = rng.next_gaussian();
    for (auto& x : v) x = rng.next_gaussian();
    double base = pearson(u, v);
    double a = 0.1 + rng.next_unit() * 5.0;
    double b = rng.next_range(-3, 3);
    auto u2 = u;
    for (auto& x : u2) x = a * x + b;
    CHECK(pearson(u2, v) == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("model save/load round-trip") {
  Rng rng(13);
  auto corpus = toy_corpus(rng, 100);
  auto vocab = build_vocab(corpus, 1);
  auto ids = map_to_ids(corpus, vocab);
  TrainingConfig cfg = small_config(5);
  cfg.epochs = 2;
  auto model = train_cbow(ids, vocab, cfg);

  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "sensorium_embed_test";
  fs::create_directories(dir);
  auto vec_path = (dir / "embeddings.txt").string();
  auto meta_path = (dir / "embeddings.meta").string();
  model.save(vec_path, meta_path, {{"corpus_digest", "test"}});

  auto loaded = EmbeddingModel::load(vec_path);
  REQUIRE(loaded.vocab.size() == model.vocab.size());
  CHECK(loaded.vocab.words == model.vocab.words);
  CHECK(loaded.config.dim == model.config.dim);
  for (std::size_t i = 0; i < model.input.size(); ++i)
    CHECK(loaded.input[i] ==
          doctest::Approx(model.input[i]).epsilon(1e-7));
  std::string meta = read_file(meta_path);
  CHECK(meta.find("corpus_digest\ttest") != std::string::npos);
  CHECK(meta.find("dim\t16") != std::string::npos);
  fs::remove_all(dir);
}
