#include "wordpuzzle/esa.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>

#include "json.hpp"
#include "wordpuzzle/errors.hpp"

namespace wordpuzzle {

using json = nlohmann::json;

namespace {
constexpr std::string_view kIndexFormat = "wordpuzzle.esa_index";
constexpr int kIndexVersion = 1;
}  // namespace

EsaIndex::EsaIndex(std::size_t concept_count, std::size_t truncation, std::vector<std::string> words,
                   std::vector<std::vector<ConceptWeight>> vectors)
    : concept_count_(concept_count), truncation_(truncation), words_(std::move(words)) {
  if (words_.size() != vectors.size()) throw InputError("ESA index: one vector per word required");
  for (std::size_t i = 1; i < words_.size(); ++i) {
    if (!(words_[i - 1] < words_[i])) throw InputError("ESA index: words must be sorted and unique");
  }
  squared_norms_.reserve(words_.size());
  for (const auto& vec : vectors) {
    if (vec.size() > truncation_) throw InputError("ESA index: vector longer than the truncation limit");
    double sq = 0.0;
    for (std::size_t p = 0; p < vec.size(); ++p) {
      if (vec[p].concept_id >= concept_count_) throw InputError("ESA index: concept id out of range");
      if (p > 0 && vec[p].concept_id <= vec[p - 1].concept_id) {
        throw InputError("ESA index: concept ids must be strictly increasing");
      }
      if (!(vec[p].weight > 0.0)) throw InputError("ESA index: weights must be > 0");
      sq += vec[p].weight * vec[p].weight;
      entries_.push_back(vec[p]);
    }
    offsets_.push_back(entries_.size());
    squared_norms_.push_back(sq);
  }
}

std::optional<std::uint32_t> EsaIndex::find(std::string_view word) const {
  auto it = std::lower_bound(words_.begin(), words_.end(), word,
                             [](const std::string& a, std::string_view b) { return a < b; });
  if (it == words_.end() || *it != word) return std::nullopt;
  return static_cast<std::uint32_t>(it - words_.begin());
}

std::span<const ConceptWeight> EsaIndex::vector(std::uint32_t id) const {
  return std::span<const ConceptWeight>(entries_).subspan(offsets_.at(id), offsets_[id + 1] - offsets_[id]);
}

std::span<const ConceptWeight> EsaIndex::vector(std::string_view word) const {
  auto id = find(word);
  if (!id) return {};
  return vector(*id);
}

double EsaIndex::cosine(std::uint32_t a, std::uint32_t b) const {
  const double sa = squared_norms_.at(a);
  const double sb = squared_norms_.at(b);
  if (sa == 0.0 || sb == 0.0) return 0.0;
  if (a == b) return 1.0;
  auto va = vector(a);
  auto vb = vector(b);
  // Merge in concept order; the summation order does not depend on which
  // argument comes first, so cosine(a, b) == cosine(b, a) bit for bit.
  double dot = 0.0;
  std::size_t i = 0, j = 0;
  while (i < va.size() && j < vb.size()) {
    if (va[i].concept_id < vb[j].concept_id) {
      ++i;
    } else if (vb[j].concept_id < va[i].concept_id) {
      ++j;
    } else {
      dot += va[i].weight * vb[j].weight;
      ++i;
      ++j;
    }
  }
  return std::clamp(dot / std::sqrt(sa * sb), 0.0, 1.0);
}

Relatedness EsaIndex::relatedness(std::string_view a, std::string_view b) const {
  auto ia = find(a);
  auto ib = find(b);
  if (!ia || !ib) return {0.0, false};
  return {cosine(*ia, *ib), true};
}

EsaIndex build_esa_index(std::span<const Document> concepts, const EsaConfig& config) {
  if (concepts.empty()) throw InputError("ESA index needs a non-empty concept corpus");
  if (config.truncation < 1) throw InputError("ESA truncation limit must be >= 1");
  if (concepts.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw InputError("too many concept documents");
  }

  const Tokenizer tokenizer(config.tokenizer);
  // word -> (concept, term frequency), concepts appended in order.
  std::map<std::string, std::vector<std::pair<std::uint32_t, double>>> postings;
  for (std::size_t c = 0; c < concepts.size(); ++c) {
    auto tokens = tokenizer(concepts[c].text);
    std::sort(tokens.begin(), tokens.end());
    for (std::size_t i = 0; i < tokens.size();) {
      std::size_t run = i;
      while (run < tokens.size() && tokens[run] == tokens[i]) ++run;
      postings[tokens[i]].emplace_back(static_cast<std::uint32_t>(c), static_cast<double>(run - i));
      i = run;
    }
  }

  const double concept_total = static_cast<double>(concepts.size());
  std::vector<std::string> words;
  std::vector<std::vector<ConceptWeight>> vectors;
  words.reserve(postings.size());
  vectors.reserve(postings.size());
  for (auto& [word, list] : postings) {
    const double idf = std::log(concept_total / static_cast<double>(list.size()));
    std::vector<ConceptWeight> vec;
    for (const auto& [c, tf] : list) {
      const double w = tf * idf;
      if (w > 0.0) vec.push_back({c, w});
    }
    if (vec.size() > config.truncation) {
      std::sort(vec.begin(), vec.end(), [](const ConceptWeight& a, const ConceptWeight& b) {
        return a.weight > b.weight || (a.weight == b.weight && a.concept_id < b.concept_id);
      });
      vec.resize(config.truncation);
      std::sort(vec.begin(), vec.end(),
                [](const ConceptWeight& a, const ConceptWeight& b) { return a.concept_id < b.concept_id; });
    }
    words.push_back(word);
    vectors.push_back(std::move(vec));
  }
  return EsaIndex(concepts.size(), config.truncation, std::move(words), std::move(vectors));
}

void save_esa_index(const std::filesystem::path& path, const EsaIndex& index) {
  json vectors = json::array();
  for (std::uint32_t i = 0; i < index.size(); ++i) {
    json entries = json::array();
    for (const auto& e : index.vector(i)) entries.push_back(json::array({e.concept_id, e.weight}));
    vectors.push_back({{"word", index.words()[i]}, {"entries", std::move(entries)}});
  }
  json doc = {{"format", kIndexFormat},
              {"version", kIndexVersion},
              {"header",
               {{"concept_count", index.concept_count()},
                {"truncation", index.truncation()},
                {"words", index.size()}}},
              {"vectors", std::move(vectors)}};
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << doc.dump() << '\n';
}

EsaIndex load_esa_index(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  try {
    const json doc = json::parse(in);
    if (doc.at("format") != kIndexFormat) throw InputError("'" + path.string() + "' is not an ESA index file");
    if (doc.at("version") != kIndexVersion) throw InputError("unsupported ESA index file version");
    const auto& h = doc.at("header");
    std::vector<std::string> words;
    std::vector<std::vector<ConceptWeight>> vectors;
    for (const auto& v : doc.at("vectors")) {
      words.push_back(v.at("word").get<std::string>());
      std::vector<ConceptWeight> vec;
      for (const auto& e : v.at("entries")) {
        vec.push_back({e.at(0).get<std::uint32_t>(), e.at(1).get<double>()});
      }
      vectors.push_back(std::move(vec));
    }
    if (words.size() != h.at("words").get<std::size_t>()) throw InputError("ESA index word count mismatch");
    return EsaIndex(h.at("concept_count").get<std::size_t>(), h.at("truncation").get<std::size_t>(),
                    std::move(words), std::move(vectors));
  } catch (const json::exception& e) {
    throw InputError("malformed ESA index file '" + path.string() + "': " + e.what());
  }
}

Eigen::MatrixXd SimilarityProvider::similarity_submatrix(std::span<const WordId> words) const {
  const auto n = static_cast<Eigen::Index>(words.size());
  Eigen::MatrixXd s(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s(i, i) = relatedness(words[static_cast<std::size_t>(i)], words[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = relatedness(words[static_cast<std::size_t>(i)], words[static_cast<std::size_t>(j)]);
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return s;
}

EsaSimilarity::EsaSimilarity(std::shared_ptr<const EsaIndex> index, std::span<const std::string> vocabulary,
                             std::size_t memo_capacity)
    : index_(std::move(index)), memo_capacity_(memo_capacity) {
  if (!index_) throw InputError("EsaSimilarity needs an index");
  mapping_.reserve(vocabulary.size());
  for (const auto& w : vocabulary) mapping_.push_back(index_->find(w));
}

bool EsaSimilarity::has_vector(WordId w) const {
  const auto& id = mapping_.at(w);
  return id && !index_->vector(*id).empty();
}

double EsaSimilarity::compute(WordId a, WordId b) const {
  const auto& ia = mapping_.at(a);
  const auto& ib = mapping_.at(b);
  if (!ia || !ib) {
    unindexed_queries_.fetch_add(1, std::memory_order_relaxed);
    return 0.0;
  }
  return index_->cosine(*ia, *ib);
}

double EsaSimilarity::relatedness(WordId a, WordId b) const {
  if (memo_capacity_ == 0) return compute(a, b);
  const std::uint64_t key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) | std::max(a, b);
  {
    std::shared_lock lock(memo_mutex_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  const double value = compute(a, b);
  std::unique_lock lock(memo_mutex_);
  if (memo_.size() >= memo_capacity_) memo_.clear();
  memo_.emplace(key, value);
  return value;
}

}  // namespace wordpuzzle
