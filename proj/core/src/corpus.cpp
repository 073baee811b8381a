#include "wordpuzzle/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "wordpuzzle/errors.hpp"

namespace wordpuzzle {

using json = nlohmann::json;

namespace {

constexpr std::string_view kMatrixFormat = "wordpuzzle.doc_term_matrix";
constexpr int kMatrixVersion = 1;

void check_unique_ids(std::span<const Document> docs) {
  std::vector<std::string_view> ids;
  ids.reserve(docs.size());
  for (const auto& d : docs) ids.emplace_back(d.id);
  std::sort(ids.begin(), ids.end());
  auto dup = std::adjacent_find(ids.begin(), ids.end());
  if (dup != ids.end()) {
    throw InputError("duplicate document id '" + std::string(*dup) + "'");
  }
}

}  // namespace

Tokenizer::Tokenizer(const TokenizerConfig& config)
    : lowercase_(config.lowercase),
      min_length_(config.min_length),
      pattern_(config.pattern, std::regex::ECMAScript | std::regex::optimize) {
  for (const auto& w : config.stopwords) {
    std::string lower = w;
    if (lowercase_) {
      std::transform(lower.begin(), lower.end(), lower.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    }
    stopwords_.insert(std::move(lower));
  }
}

std::vector<std::string> Tokenizer::operator()(std::string_view text) const {
  std::vector<std::string> tokens;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  for (std::cregex_iterator it(begin, end, pattern_), last; it != last; ++it) {
    std::string token = it->str();
    if (token.size() < min_length_) continue;
    if (lowercase_) {
      std::transform(token.begin(), token.end(), token.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    }
    if (stopwords_.contains(token)) continue;
    tokens.push_back(std::move(token));
  }
  return tokens;
}

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& config) {
  return Tokenizer(config)(text);
}

Vocabulary::Vocabulary(std::vector<std::string> words, std::vector<std::size_t> doc_freq)
    : words_(std::move(words)), doc_freq_(std::move(doc_freq)) {
  if (words_.size() != doc_freq_.size()) {
    throw InputError("vocabulary: word and document-frequency lists differ in length");
  }
  for (std::size_t i = 1; i < words_.size(); ++i) {
    if (!(words_[i - 1] < words_[i])) {
      throw InputError("vocabulary: words must be unique and lexicographically sorted (at '" +
                       words_[i] + "')");
    }
  }
}

std::optional<WordId> Vocabulary::find(std::string_view word) const {
  auto it = std::lower_bound(words_.begin(), words_.end(), word,
                             [](const std::string& a, std::string_view b) { return a < b; });
  if (it == words_.end() || *it != word) return std::nullopt;
  return static_cast<WordId>(it - words_.begin());
}

Vocabulary build_vocabulary(std::span<const Document> docs, const VocabularyFilter& filter,
                            const TokenizerConfig& config) {
  if (filter.min_df < 1) throw InputError("min_df must be >= 1");
  if (!(filter.max_df_ratio > 0.0 && filter.max_df_ratio <= 1.0)) {
    throw InputError("max_df_ratio must lie in (0, 1]");
  }
  check_unique_ids(docs);

  const Tokenizer tokenizer(config);
  std::unordered_map<std::string, std::size_t> df;
  for (const auto& doc : docs) {
    auto tokens = tokenizer(doc.text);
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    for (auto& t : tokens) ++df[std::move(t)];
  }

  const double max_df = filter.max_df_ratio * static_cast<double>(docs.size());
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [word, count] : df) {
    if (count >= filter.min_df && static_cast<double>(count) <= max_df) {
      kept.emplace_back(word, count);
    }
  }
  if (kept.empty()) {
    std::ostringstream msg;
    msg << "empty vocabulary after filtering " << docs.size() << " documents with min_df="
        << filter.min_df << ", max_df_ratio=" << filter.max_df_ratio << " (" << df.size()
        << " distinct tokens before filtering)";
    throw InputError(msg.str());
  }
  std::sort(kept.begin(), kept.end());

  std::vector<std::string> words;
  std::vector<std::size_t> freqs;
  words.reserve(kept.size());
  freqs.reserve(kept.size());
  for (auto& [w, c] : kept) {
    words.push_back(std::move(w));
    freqs.push_back(c);
  }
  return Vocabulary(std::move(words), std::move(freqs));
}

std::string_view to_string(Weighting w) {
  return w == Weighting::raw_count ? "raw-count" : "tfidf";
}

Weighting weighting_from_string(std::string_view s) {
  if (s == "raw-count") return Weighting::raw_count;
  if (s == "tfidf") return Weighting::tfidf;
  throw InputError("unknown weighting '" + std::string(s) + "'");
}

DocTermMatrix::DocTermMatrix(std::size_t rows, std::vector<std::size_t> col_ptr,
                             std::vector<WordId> row_index, std::vector<double> values,
                             Weighting weighting, std::vector<std::string> doc_ids)
    : rows_(rows),
      col_ptr_(std::move(col_ptr)),
      row_index_(std::move(row_index)),
      values_(std::move(values)),
      weighting_(weighting),
      doc_ids_(std::move(doc_ids)) {
  if (col_ptr_.empty() || col_ptr_.front() != 0 || col_ptr_.back() != values_.size() ||
      row_index_.size() != values_.size()) {
    throw InputError("doc-term matrix: inconsistent compressed-column layout");
  }
  if (doc_ids_.size() != cols()) {
    throw InputError("doc-term matrix: one document id per column required");
  }
  for (std::size_t j = 0; j < cols(); ++j) {
    if (col_ptr_[j] > col_ptr_[j + 1]) throw InputError("doc-term matrix: column pointers decrease");
    for (std::size_t p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) {
      if (row_index_[p] >= rows_) throw InputError("doc-term matrix: row index out of range");
      if (p > col_ptr_[j] && row_index_[p] <= row_index_[p - 1]) {
        throw InputError("doc-term matrix: rows within a column must be strictly increasing");
      }
      if (!(values_[p] > 0.0)) throw InputError("doc-term matrix: stored entries must be > 0");
    }
  }
}

std::span<const WordId> DocTermMatrix::column_rows(std::size_t j) const {
  return std::span<const WordId>(row_index_).subspan(col_ptr_[j], col_ptr_[j + 1] - col_ptr_[j]);
}

std::span<const double> DocTermMatrix::column_values(std::size_t j) const {
  return std::span<const double>(values_).subspan(col_ptr_[j], col_ptr_[j + 1] - col_ptr_[j]);
}

double DocTermMatrix::sum() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s;
}

std::vector<std::size_t> DocTermMatrix::row_doc_freq() const {
  std::vector<std::size_t> df(rows_, 0);
  for (WordId r : row_index_) ++df[r];
  return df;
}

Eigen::SparseMatrix<double> DocTermMatrix::to_eigen() const {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(values_.size());
  for (std::size_t j = 0; j < cols(); ++j) {
    for (std::size_t p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) {
      triplets.emplace_back(static_cast<int>(row_index_[p]), static_cast<int>(j), values_[p]);
    }
  }
  Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols()));
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

Eigen::VectorXd DocTermMatrix::dense_column(std::size_t j) const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows_));
  for (std::size_t p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) x[row_index_[p]] = values_[p];
  return x;
}

DocTermMatrix build_doc_term_matrix(std::span<const Document> docs, const Vocabulary& vocab,
                                    const TokenizerConfig& config,
                                    std::vector<std::string>* dropped_ids) {
  check_unique_ids(docs);
  const Tokenizer tokenizer(config);
  std::vector<std::size_t> col_ptr{0};
  std::vector<WordId> rows;
  std::vector<double> values;
  std::vector<std::string> ids;

  std::vector<WordId> hits;
  for (const auto& doc : docs) {
    hits.clear();
    for (const auto& token : tokenizer(doc.text)) {
      if (auto id = vocab.find(token)) hits.push_back(*id);
    }
    if (hits.empty()) {
      if (dropped_ids) dropped_ids->push_back(doc.id);
      continue;
    }
    std::sort(hits.begin(), hits.end());
    for (std::size_t i = 0; i < hits.size();) {
      std::size_t run = i;
      while (run < hits.size() && hits[run] == hits[i]) ++run;
      rows.push_back(hits[i]);
      values.push_back(static_cast<double>(run - i));
      i = run;
    }
    col_ptr.push_back(values.size());
    ids.push_back(doc.id);
  }
  return DocTermMatrix(vocab.size(), std::move(col_ptr), std::move(rows), std::move(values),
                       Weighting::raw_count, std::move(ids));
}

DocTermMatrix tfidf_transform(const DocTermMatrix& counts) {
  if (counts.weighting() != Weighting::raw_count) {
    throw InputError("tfidf_transform expects a raw-count matrix");
  }
  const auto df = counts.row_doc_freq();
  const double m = static_cast<double>(counts.cols());
  std::vector<std::size_t> col_ptr{0};
  std::vector<WordId> rows;
  std::vector<double> values;
  for (std::size_t j = 0; j < counts.cols(); ++j) {
    auto r = counts.column_rows(j);
    auto v = counts.column_values(j);
    for (std::size_t p = 0; p < r.size(); ++p) {
      const double weight = v[p] * std::log(m / static_cast<double>(df[r[p]]));
      if (weight > 0.0) {
        rows.push_back(r[p]);
        values.push_back(weight);
      }
    }
    col_ptr.push_back(values.size());
  }
  return DocTermMatrix(counts.rows(), std::move(col_ptr), std::move(rows), std::move(values),
                       Weighting::tfidf,
                       std::vector<std::string>(counts.doc_ids().begin(), counts.doc_ids().end()));
}

std::vector<Document> read_jsonl_documents(std::istream& in) {
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw InputError("line " + std::to_string(line_no) + ": invalid JSON (" + e.what() + ")");
    }
    if (!obj.is_object()) {
      throw InputError("line " + std::to_string(line_no) + ": expected a JSON object");
    }
    for (const char* field : {"id", "text"}) {
      auto it = obj.find(field);
      if (it == obj.end()) {
        throw InputError("line " + std::to_string(line_no) + ": missing field '" + field + "'");
      }
      if (!it->is_string()) {
        throw InputError("line " + std::to_string(line_no) + ": field '" + field +
                         "' must be a string");
      }
    }
    docs.push_back({obj["id"].get<std::string>(), obj["text"].get<std::string>()});
  }
  return docs;
}

std::vector<Document> read_jsonl_documents(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return read_jsonl_documents(in);
}

void write_jsonl_documents(std::ostream& out, std::span<const Document> docs) {
  for (const auto& d : docs) out << json{{"id", d.id}, {"text", d.text}}.dump() << '\n';
}

void save_corpus_matrix(const std::filesystem::path& path, const CorpusMatrix& corpus) {
  const auto& m = corpus.matrix;
  json header = {
      {"rows", m.rows()},
      {"cols", m.cols()},
      {"weighting", to_string(m.weighting())},
      {"vocab", corpus.vocab.words()},
      {"doc_freq", corpus.vocab.doc_freqs()},
      {"doc_ids", m.doc_ids()},
  };
  json triplets = json::array();
  for (std::size_t j = 0; j < m.cols(); ++j) {
    auto r = m.column_rows(j);
    auto v = m.column_values(j);
    for (std::size_t p = 0; p < r.size(); ++p) triplets.push_back(json::array({r[p], j, v[p]}));
  }
  json doc = {{"format", kMatrixFormat},
              {"version", kMatrixVersion},
              {"header", std::move(header)},
              {"triplets", std::move(triplets)}};
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << doc.dump() << '\n';
}

CorpusMatrix load_corpus_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  try {
    const json doc = json::parse(in);
    if (doc.at("format") != kMatrixFormat) throw InputError("'" + path.string() + "' is not a doc-term matrix file");
    if (doc.at("version") != kMatrixVersion) throw InputError("unsupported matrix file version");
    const auto& h = doc.at("header");
    Vocabulary vocab(h.at("vocab").get<std::vector<std::string>>(),
                     h.at("doc_freq").get<std::vector<std::size_t>>());
    const auto rows = h.at("rows").get<std::size_t>();
    const auto cols = h.at("cols").get<std::size_t>();
    if (rows != vocab.size()) throw InputError("matrix rows do not match vocabulary size");

    std::vector<std::size_t> col_ptr(cols + 1, 0);
    std::vector<WordId> row_index;
    std::vector<double> values;
    std::size_t prev_col = 0;
    for (const auto& t : doc.at("triplets")) {
      const auto r = t.at(0).get<WordId>();
      const auto c = t.at(1).get<std::size_t>();
      if (c >= cols || c < prev_col) throw InputError("triplets must be column-major and in range");
      prev_col = c;
      ++col_ptr[c + 1];
      row_index.push_back(r);
      values.push_back(t.at(2).get<double>());
    }
    for (std::size_t j = 0; j < cols; ++j) col_ptr[j + 1] += col_ptr[j];
    DocTermMatrix matrix(rows, std::move(col_ptr), std::move(row_index), std::move(values),
                         weighting_from_string(h.at("weighting").get<std::string>()),
                         h.at("doc_ids").get<std::vector<std::string>>());
    return {std::move(vocab), std::move(matrix)};
  } catch (const json::exception& e) {
    throw InputError("malformed matrix file '" + path.string() + "': " + e.what());
  }
}

}  // namespace wordpuzzle
