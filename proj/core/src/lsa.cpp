#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "wordpuzzle/errors.hpp"
#include "wordpuzzle/rng.hpp"
#include "wordpuzzle/topic_models.hpp"

namespace wordpuzzle {

namespace {

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& y) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
  return qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
}

void normalize_sign(Eigen::Ref<Eigen::VectorXd> column) {
  Eigen::Index arg = 0;
  column.cwiseAbs().maxCoeff(&arg);
  if (column[arg] < 0.0) column = -column;
}

// Within a block of numerically equal singular values any orthonormal basis
// is a valid set of singular vectors. Pick one that does not depend on the
// random sketch: pivot on the dominant rows of the block, make the block the
// identity on those rows, then re-orthonormalize in pivot order.
void canonicalize_block(Eigen::Ref<Eigen::MatrixXd> block) {
  const Eigen::Index c = block.cols();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> pivots(block.transpose());
  const auto& perm = pivots.colsPermutation().indices();
  std::vector<Eigen::Index> rows(perm.data(), perm.data() + c);
  std::sort(rows.begin(), rows.end());

  Eigen::MatrixXd square(c, c);
  for (Eigen::Index r = 0; r < c; ++r) square.row(r) = block.row(rows[static_cast<std::size_t>(r)]);
  Eigen::MatrixXd basis = block * square.fullPivLu().inverse();

  for (Eigen::Index j = 0; j < c; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) basis.col(j) -= basis.col(i).dot(basis.col(j)) * basis.col(i);
    basis.col(j).normalize();
  }
  block = basis;
}

}  // namespace

TopicDictionary lsa_fit(const DocTermMatrix& x, const LsaConfig& config) {
  const std::size_t n = x.rows();
  const std::size_t m = x.cols();
  const std::size_t k = config.topics;
  const std::size_t max_k = std::min(n, m);
  if (k < 1 || k > max_k) {
    throw InputError("LSA topic count K=" + std::to_string(k) + " must lie in [1, min(N, M)=" +
                     std::to_string(max_k) + "]");
  }

  const Eigen::SparseMatrix<double> a = x.to_eigen();
  const auto width = static_cast<Eigen::Index>(std::min(k + config.oversampling, max_k));

  Rng rng(config.seed);
  Eigen::MatrixXd omega(static_cast<Eigen::Index>(m), width);
  for (Eigen::Index j = 0; j < width; ++j) {
    for (Eigen::Index i = 0; i < omega.rows(); ++i) omega(i, j) = rng.normal();
  }

  Eigen::MatrixXd q = orthonormal_basis(a * omega);
  for (std::size_t it = 0; it < config.power_iterations; ++it) {
    const Eigen::MatrixXd z = orthonormal_basis(a.transpose() * q);
    q = orthonormal_basis(a * z);
  }

  // Rayleigh-Ritz on the captured range.
  const Eigen::MatrixXd b = (a.transpose() * q).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinU);
  const Eigen::VectorXd& sigma = svd.singularValues();
  Eigen::MatrixXd u = q * svd.matrixU();

  const double tol = sigma.size() > 0 ? sigma[0] * static_cast<double>(std::max(n, m)) *
                                            std::numeric_limits<double>::epsilon()
                                      : 0.0;
  std::size_t rank = 0;
  while (rank < static_cast<std::size_t>(sigma.size()) && sigma[static_cast<Eigen::Index>(rank)] > tol) {
    ++rank;
  }
  if (k > rank) {
    throw InputError("LSA topic count K=" + std::to_string(k) + " exceeds the effective rank " +
                     std::to_string(rank) + " of the document-term matrix");
  }

  const double cluster_tol = 1e-10 * sigma[0];
  for (Eigen::Index start = 0; start < static_cast<Eigen::Index>(k);) {
    Eigen::Index end = start + 1;
    while (end < sigma.size() && sigma[end - 1] - sigma[end] <= cluster_tol) ++end;
    if (end - start > 1) canonicalize_block(u.middleCols(start, end - start));
    start = end;
  }

  TopicDictionary dict;
  dict.kind = ModelKind::lsa;
  dict.topics = u.leftCols(static_cast<Eigen::Index>(k));
  for (Eigen::Index j = 0; j < dict.topics.cols(); ++j) normalize_sign(dict.topics.col(j));
  dict.singular_values.assign(sigma.data(), sigma.data() + k);
  dict.seed = config.seed;
  dict.params = {{"K", std::to_string(k)},
                 {"power_iterations", std::to_string(config.power_iterations)},
                 {"oversampling", std::to_string(config.oversampling)}};
  return dict;
}

}  // namespace wordpuzzle
