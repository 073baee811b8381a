#pragma once

#include <Eigen/Dense>

#include "wordpuzzle/esa.hpp"

namespace testing_support {

/// Relatedness read from an explicit symmetric matrix. A word "has a vector"
/// when its diagonal entry is 1.
class MatrixSimilarity final : public wordpuzzle::SimilarityProvider {
 public:
  explicit MatrixSimilarity(Eigen::MatrixXd s) : s_(std::move(s)) {}

  std::size_t vocabulary_size() const override { return static_cast<std::size_t>(s_.rows()); }
  double relatedness(wordpuzzle::WordId a, wordpuzzle::WordId b) const override { return s_(a, b); }
  bool has_vector(wordpuzzle::WordId w) const override { return s_(w, w) == 1.0; }

 private:
  Eigen::MatrixXd s_;
};

}  // namespace testing_support
