#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wordpuzzle/corpus.hpp"
#include "wordpuzzle/rng.hpp"

namespace testing_support {

/// Dense nonnegative matrix to CSC; zeros are not stored.
inline wordpuzzle::DocTermMatrix to_doc_term(const Eigen::MatrixXd& x,
                                             wordpuzzle::Weighting weighting = wordpuzzle::Weighting::raw_count) {
  std::vector<std::size_t> col_ptr{0};
  std::vector<wordpuzzle::WordId> rows;
  std::vector<double> values;
  std::vector<std::string> ids;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if (x(i, j) != 0.0) {
        rows.push_back(static_cast<wordpuzzle::WordId>(i));
        values.push_back(x(i, j));
      }
    }
    col_ptr.push_back(values.size());
    ids.push_back("d" + std::to_string(j));
  }
  return {static_cast<std::size_t>(x.rows()), col_ptr, rows, values, weighting, ids};
}

/// Entries uniform in (0, 1].
inline Eigen::MatrixXd random_positive(Eigen::Index rows, Eigen::Index cols, wordpuzzle::Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = 1.0 - rng.uniform();
  return m;
}

inline Eigen::MatrixXd random_normal(Eigen::Index rows, Eigen::Index cols, wordpuzzle::Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("wordpuzzle-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

}  // namespace testing_support
