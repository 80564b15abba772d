#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "sensorium/cluster.hpp"
#include "sensorium/collocate.hpp"
#include "sensorium/corpus.hpp"
#include "sensorium/embed.hpp"
#include "sensorium/lemmatizer.hpp"
#include "sensorium/norms.hpp"
#include "sensorium/pai.hpp"

namespace py = pybind11;
using namespace sensorium;

namespace {

DistanceMatrix matrix_from_rows(const std::vector<std::vector<double>>& rows,
                                std::vector<std::string> labels) {
  const std::size_t n = rows.size();
  if (labels.empty())
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  std::vector<double> values;
  values.reserve(n * n);
  for (const auto& row : rows) {
    if (row.size() != n)
      throw std::invalid_argument("distance matrix must be square");
    values.insert(values.end(), row.begin(), row.end());
  }
  return DistanceMatrix(std::move(labels), std::move(values));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "core operations of the sensorium pipeline";

  m.def("pai_score", &pai_score, py::arg("of"), py::arg("tf"),
        "log2(of/tf) association score");

  m.def(
      "lemmatize",
      [](const std::string& surface, const std::string& pos) {
        static const Lemmatizer lemmatizer;
        return lemmatizer.lemma(surface, pos);
      },
      py::arg("surface"), py::arg("pos"),
      "rule-based lemma for a lowercased surface form");

  m.def(
      "pearson",
      [](const std::vector<double>& u, const std::vector<double>& v) {
        return pearson(u, v);
      },
      py::arg("u"), py::arg("v"));

  m.def(
      "distance_matrix",
      [](const std::vector<std::vector<double>>& vectors,
         std::vector<std::string> labels) {
        auto matrix =
            DistanceMatrix::from_vectors(std::move(labels), vectors);
        const std::size_t n = matrix.size();
        std::vector<std::vector<double>> rows(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) rows[i][j] = matrix.at(i, j);
        return rows;
      },
      py::arg("vectors"), py::arg("labels") = std::vector<std::string>{},
      "pairwise 0.5*(1-pearson) distances");

  m.def(
      "agnes_ward",
      [](const std::vector<std::vector<double>>& dist) {
        auto dendro = agnes_ward(matrix_from_rows(dist, {}));
        std::vector<std::tuple<int, int, double, int>> merges;
        for (const auto& mg : dendro.merges)
          merges.emplace_back(mg.left, mg.right, mg.height, mg.size);
        return merges;
      },
      py::arg("dist"),
      "Ward agglomeration; rows of (left, right, height, size)");

  m.def(
      "cut",
      [](std::size_t n_leaves,
         const std::vector<std::tuple<int, int, double, int>>& merges,
         std::size_t k) {
        Dendrogram d;
        d.n_leaves = n_leaves;
        for (const auto& [l, r, h, s] : merges)
          d.merges.push_back({l, r, h, s});
        return cut(d, k);
      },
      py::arg("n_leaves"), py::arg("merges"), py::arg("k"));

  m.def(
      "silhouette",
      [](const std::vector<std::vector<double>>& dist,
         const std::vector<int>& labels) {
        return silhouette(matrix_from_rows(dist, {}), labels);
      },
      py::arg("dist"), py::arg("labels"));

  m.def(
      "sweep_k",
      [](const std::vector<std::vector<double>>& dist, std::size_t k_min,
         std::size_t k_max) {
        auto matrix = matrix_from_rows(dist, {});
        auto dendro = agnes_ward(matrix);
        auto report = sweep_k(dendro, matrix, k_min, k_max);
        return py::make_tuple(report.best_k, report.best_score, report.by_k);
      },
      py::arg("dist"), py::arg("k_min") = 2, py::arg("k_max") = 0,
      "(best_k, best_score, [(k, score), ...])");

  m.def(
      "exclusivity",
      [](const std::array<double, kNormModalities>& ratings) {
        return exclusivity(ratings);
      },
      py::arg("ratings"), "(max - min) / sum over the six ratings");

  m.def(
      "dominant_modality",
      [](const std::array<double, kNormModalities>& ratings,
         std::uint64_t seed) -> std::optional<std::string> {
        auto m_ = dominant_modality(ratings, seed);
        if (!m_) return std::nullopt;
        return std::string(to_string(*m_));
      },
      py::arg("ratings"), py::arg("seed") = 0,
      "argmax modality letter, random tie-break from the seed");

  m.def(
      "extract_windows",
      [](const std::vector<std::pair<std::string, std::string>>& tokens,
         const std::string& verb_lemma, int window) {
        TaggedSentence s;
        s.id = 1;
        for (const auto& [lemma, pos] : tokens)
          s.tokens.push_back({lemma, lemma, pos});
        std::vector<std::vector<std::size_t>> out;
        for (const auto& w : extract_windows(s, verb_lemma, window))
          out.push_back(w.members);
        return out;
      },
      py::arg("tokens"), py::arg("verb_lemma"), py::arg("window") = 4,
      "member token indices per occurrence window");

  m.def(
      "train_cbow",
      [](const std::vector<std::vector<std::string>>& sentences, int dim,
         int window, int min_count, int epochs, int negatives,
         double learning_rate, std::uint64_t seed) {
        TrainingConfig cfg;
        cfg.dim = dim;
        cfg.window = window;
        cfg.min_count = min_count;
        cfg.epochs = epochs;
        cfg.negatives = negatives;
        cfg.learning_rate = learning_rate;
        cfg.seed = seed;
        Vocab vocab = build_vocab(sentences, min_count);
        auto ids = map_to_ids(sentences, vocab);
        std::vector<EpochStats> curve;
        auto model = train_cbow(ids, vocab, cfg, &curve);
        py::dict vectors;
        for (std::size_t w = 0; w < vocab.size(); ++w) {
          auto row = model.input_row(static_cast<int>(w));
          vectors[py::str(vocab.words[w])] =
              std::vector<double>(row.begin(), row.end());
        }
        std::vector<double> losses;
        for (const auto& e : curve) losses.push_back(e.mean_loss);
        return py::make_tuple(vectors, losses);
      },
      py::arg("sentences"), py::arg("dim") = 32, py::arg("window") = 4,
      py::arg("min_count") = 1, py::arg("epochs") = 5,
      py::arg("negatives") = 5, py::arg("learning_rate") = 0.05,
      py::arg("seed") = 42,
      "(word -> vector dict, per-epoch mean losses)");

  m.def(
      "standardize",
      [](std::vector<double> values) {
        if (!standardize(values))
          throw std::invalid_argument("constant vector cannot be standardized");
        return values;
      },
      py::arg("values"));
}
