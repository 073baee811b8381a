#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <Eigen/SparseCore>

namespace wordpuzzle {

using WordId = std::uint32_t;

struct Document {
  std::string id;
  std::string text;
};

/// Version tag of the bundled English stopword list.
inline constexpr std::string_view kStopwordListVersion = "en-1";

/// The bundled English stopword list (lowercase, sorted).
const std::vector<std::string>& default_stopwords();

struct TokenizerConfig {
  bool lowercase = true;
  /// ECMAScript regex; every maximal match is a candidate token.
  std::string pattern = "[A-Za-z]+";
  std::size_t min_length = 2;
  std::vector<std::string> stopwords = default_stopwords();
};

/// Compiled form of a TokenizerConfig. Safe to share between threads.
class Tokenizer {
 public:
  explicit Tokenizer(const TokenizerConfig& config = {});

  std::vector<std::string> operator()(std::string_view text) const;

 private:
  bool lowercase_;
  std::size_t min_length_;
  std::regex pattern_;
  std::unordered_set<std::string> stopwords_;
};

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& config = {});

/// Sorted word list with per-word document frequencies. Word ids are
/// positions in lexicographic (byte) order.
class Vocabulary {
 public:
  Vocabulary() = default;
  /// `words` must be strictly increasing; `doc_freq` parallel to it.
  Vocabulary(std::vector<std::string> words, std::vector<std::size_t> doc_freq);

  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  const std::string& word(WordId id) const { return words_.at(id); }
  std::size_t doc_freq(WordId id) const { return doc_freq_.at(id); }
  std::optional<WordId> find(std::string_view word) const;
  std::span<const std::string> words() const { return words_; }
  std::span<const std::size_t> doc_freqs() const { return doc_freq_; }

  friend bool operator==(const Vocabulary&, const Vocabulary&) = default;

 private:
  std::vector<std::string> words_;
  std::vector<std::size_t> doc_freq_;
};

struct VocabularyFilter {
  std::size_t min_df = 1;
  double max_df_ratio = 1.0;
};

/// Keeps tokens whose document frequency lies in [min_df, max_df_ratio * M].
/// Throws InputError on bad filters, duplicate document ids, or when nothing
/// survives filtering.
Vocabulary build_vocabulary(std::span<const Document> docs, const VocabularyFilter& filter,
                            const TokenizerConfig& config = {});

enum class Weighting { raw_count, tfidf };

std::string_view to_string(Weighting w);
Weighting weighting_from_string(std::string_view s);

/// Sparse N x M word-by-document matrix in compressed-column form.
/// Row indices within a column are strictly increasing; stored values are > 0.
class DocTermMatrix {
 public:
  DocTermMatrix() = default;
  DocTermMatrix(std::size_t rows, std::vector<std::size_t> col_ptr, std::vector<WordId> row_index,
                std::vector<double> values, Weighting weighting, std::vector<std::string> doc_ids);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return col_ptr_.empty() ? 0 : col_ptr_.size() - 1; }
  std::size_t nonzeros() const { return values_.size(); }
  Weighting weighting() const { return weighting_; }

  std::span<const WordId> column_rows(std::size_t j) const;
  std::span<const double> column_values(std::size_t j) const;
  const std::string& doc_id(std::size_t j) const { return doc_ids_.at(j); }
  std::span<const std::string> doc_ids() const { return doc_ids_; }

  std::span<const std::size_t> col_ptr() const { return col_ptr_; }
  std::span<const WordId> row_index() const { return row_index_; }
  std::span<const double> values() const { return values_; }

  double sum() const;
  /// Number of columns in which each row has a stored entry.
  std::vector<std::size_t> row_doc_freq() const;

  Eigen::SparseMatrix<double> to_eigen() const;
  Eigen::VectorXd dense_column(std::size_t j) const;

  friend bool operator==(const DocTermMatrix&, const DocTermMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::vector<std::size_t> col_ptr_{0};
  std::vector<WordId> row_index_;
  std::vector<double> values_;
  Weighting weighting_ = Weighting::raw_count;
  std::vector<std::string> doc_ids_;
};

/// Raw-count matrix, x_ij = occurrences of word i in document j.
/// Documents with no in-vocabulary tokens are dropped; their ids are appended
/// to `dropped_ids` when given.
DocTermMatrix build_doc_term_matrix(std::span<const Document> docs, const Vocabulary& vocab,
                                    const TokenizerConfig& config = {},
                                    std::vector<std::string>* dropped_ids = nullptr);

/// tf * ln(M / df). Entries that become zero (words in every document) are
/// removed so that stored values stay strictly positive.
DocTermMatrix tfidf_transform(const DocTermMatrix& counts);

/// One JSON object per line with string fields `id` and `text`.
/// Throws InputError naming the offending line.
std::vector<Document> read_jsonl_documents(std::istream& in);
std::vector<Document> read_jsonl_documents(const std::filesystem::path& path);
void write_jsonl_documents(std::ostream& out, std::span<const Document> docs);

struct CorpusMatrix {
  Vocabulary vocab;
  DocTermMatrix matrix;
};

/// Versioned JSON header plus (row, col, value) triplets in column-major order.
void save_corpus_matrix(const std::filesystem::path& path, const CorpusMatrix& corpus);
CorpusMatrix load_corpus_matrix(const std::filesystem::path& path);

}  // namespace wordpuzzle
