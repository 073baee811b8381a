#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include "json.hpp"
#include "wordpuzzle/errors.hpp"
#include "wordpuzzle/topic_models.hpp"

namespace wordpuzzle {

using json = nlohmann::json;

namespace {
constexpr std::string_view kModelFormat = "wordpuzzle.topic_model";
constexpr int kModelVersion = 1;
}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::lsa:
      return "lsa";
    case ModelKind::lda:
      return "lda";
    case ModelKind::dictlearn:
      return "dictlearn";
  }
  return "unknown";
}

ModelKind model_kind_from_string(std::string_view s) {
  if (s == "lsa") return ModelKind::lsa;
  if (s == "lda") return ModelKind::lda;
  if (s == "dictlearn") return ModelKind::dictlearn;
  throw InputError("unknown topic model '" + std::string(s) + "' (expected lsa, lda or dictlearn)");
}

std::vector<TopicWordSet> extract_top_k(const TopicDictionary& dict, std::size_t k) {
  const std::size_t n = dict.vocabulary_size();
  if (k < 1 || k > n) {
    throw InputError("top-k size k=" + std::to_string(k) + " must lie in [1, N=" + std::to_string(n) + "]");
  }
  const bool magnitude = dict.kind == ModelKind::lsa;

  std::vector<TopicWordSet> sets;
  sets.reserve(dict.topic_count());
  std::vector<WordId> order(n);
  std::vector<double> sig(n);
  for (std::size_t z = 0; z < dict.topic_count(); ++z) {
    for (std::size_t w = 0; w < n; ++w) {
      const double v = dict.topics(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(z));
      sig[w] = magnitude ? std::abs(v) : v;
    }
    std::iota(order.begin(), order.end(), WordId{0});
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](WordId a, WordId b) { return sig[a] > sig[b] || (sig[a] == sig[b] && a < b); });
    TopicWordSet set;
    set.topic = z;
    set.words.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    for (WordId w : set.words) set.weights.push_back(sig[w]);
    sets.push_back(std::move(set));
  }
  return sets;
}

void save_topic_model(const std::filesystem::path& path, const TopicDictionary& dict,
                      std::span<const std::string> vocabulary) {
  if (vocabulary.size() != dict.vocabulary_size()) {
    throw InputError("topic model rows do not match the vocabulary size");
  }
  json header = {
      {"model", to_string(dict.kind)},
      {"rows", dict.vocabulary_size()},
      {"cols", dict.topic_count()},
      {"seed", dict.seed},
      {"config", dict.params},
      {"singular_values", dict.singular_values},
      {"vocab", vocabulary},
  };
  std::vector<double> payload(dict.topics.data(), dict.topics.data() + dict.topics.size());
  json doc = {{"format", kModelFormat},
              {"version", kModelVersion},
              {"header", std::move(header)},
              {"weights", std::move(payload)}};
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << doc.dump() << '\n';
}

TopicModelFile load_topic_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  try {
    const json doc = json::parse(in);
    if (doc.at("format") != kModelFormat) throw InputError("'" + path.string() + "' is not a topic model file");
    if (doc.at("version") != kModelVersion) throw InputError("unsupported topic model file version");
    const auto& h = doc.at("header");
    TopicModelFile file;
    file.dict.kind = model_kind_from_string(h.at("model").get<std::string>());
    file.dict.seed = h.at("seed").get<std::uint64_t>();
    file.dict.params = h.at("config").get<std::map<std::string, std::string>>();
    file.dict.singular_values = h.at("singular_values").get<std::vector<double>>();
    file.vocabulary = h.at("vocab").get<std::vector<std::string>>();
    const auto rows = h.at("rows").get<Eigen::Index>();
    const auto cols = h.at("cols").get<Eigen::Index>();
    const auto payload = doc.at("weights").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(payload.size()) != rows * cols ||
        static_cast<Eigen::Index>(file.vocabulary.size()) != rows) {
      throw InputError("topic model payload does not match its header dimensions");
    }
    file.dict.topics = Eigen::Map<const Eigen::MatrixXd>(payload.data(), rows, cols);
    return file;
  } catch (const json::exception& e) {
    throw InputError("malformed topic model file '" + path.string() + "': " + e.what());
  }
}

}  // namespace wordpuzzle
