#include <cmath>
#include <string>

#include "format.hpp"
#include "wordpuzzle/errors.hpp"
#include "wordpuzzle/rng.hpp"
#include "wordpuzzle/topic_models.hpp"

namespace wordpuzzle {

namespace {

void validate(const DocTermMatrix& x, const DictLearnConfig& config) {
  if (config.topics < 1) throw InputError("dictionary learning needs K >= 1");
  if (!(config.kappa > 0.0)) throw InputError("dictionary learning needs kappa > 0");
  if (!(config.rho >= 0.0)) throw InputError("dictionary learning needs rho >= 0");
  if (config.epochs < 1) throw InputError("dictionary learning needs at least one epoch");
  if (config.regularizer.penalty == Penalty::group_l2 && config.regularizer.group_size < 1) {
    throw InputError("group-l2 needs a group size >= 1");
  }
  if (x.cols() == 0 || x.rows() == 0) throw InputError("dictionary learning needs a non-empty matrix");
}

Eigen::MatrixXd initial_dictionary(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd d(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < d.cols(); ++j) {
    for (Eigen::Index i = 0; i < d.rows(); ++i) d(i, j) = rng.uniform();
    const double norm = d.col(j).norm();
    if (norm > 0.0) {
      d.col(j) /= norm;
    } else {
      d.col(j).setZero();
      d(j % d.rows(), j) = 1.0;
    }
  }
  return d;
}

}  // namespace

TopicDictionary dict_learn_fit(const DocTermMatrix& x, const DictLearnConfig& config,
                               const EpochCallback& on_epoch) {
  validate(x, config);
  const auto n = static_cast<Eigen::Index>(x.rows());
  const auto m = static_cast<Eigen::Index>(x.cols());
  const auto k = static_cast<Eigen::Index>(config.topics);

  Eigen::MatrixXd dict = initial_dictionary(x.rows(), config.topics, config.seed);

  // Document i (1-based) carries weight (i / M)^rho.
  std::vector<double> weight(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    weight[static_cast<std::size_t>(i)] =
        std::pow(static_cast<double>(i + 1) / static_cast<double>(m), config.rho);
  }

  // Latest code of every document; its weighted outer products make up the
  // sufficient statistics of the quadratic surrogate.
  Eigen::MatrixXd codes = Eigen::MatrixXd::Zero(k, m);
  Eigen::MatrixXd stat_a = Eigen::MatrixXd::Zero(k, k);
  Eigen::MatrixXd stat_b = Eigen::MatrixXd::Zero(n, k);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    // Rebuild from the stored codes so rounding does not drift across epochs.
    stat_a.setZero();
    stat_b.setZero();
    for (Eigen::Index i = 0; i < m; ++i) {
      const double w = weight[static_cast<std::size_t>(i)];
      stat_a.noalias() += w * codes.col(i) * codes.col(i).transpose();
      stat_b.noalias() += w * x.dense_column(static_cast<std::size_t>(i)) * codes.col(i).transpose();
    }

    for (Eigen::Index i = 0; i < m; ++i) {
      const double w = weight[static_cast<std::size_t>(i)];
      const Eigen::VectorXd xi = x.dense_column(static_cast<std::size_t>(i));
      const Eigen::VectorXd alpha = SparseCoder(dict, config.kappa, config.regularizer).encode(xi).alpha;
      const Eigen::VectorXd old = codes.col(i);

      stat_a.noalias() += w * (alpha * alpha.transpose() - old * old.transpose());
      stat_b.noalias() += w * xi * (alpha - old).transpose();
      codes.col(i) = alpha;

      // One pass of projected block-coordinate descent over the columns;
      // each column update exactly minimizes the surrogate on the unit ball.
      for (Eigen::Index j = 0; j < k; ++j) {
        const double ajj = stat_a(j, j);
        if (ajj <= 0.0) continue;
        Eigen::VectorXd u = dict.col(j) + (stat_b.col(j) - dict * stat_a.col(j)) / ajj;
        const double norm = u.norm();
        if (norm == 0.0) continue;
        if (norm > 1.0) u /= norm;
        dict.col(j) = u;
      }
    }
    if (on_epoch) on_epoch(epoch, dict);
  }

  TopicDictionary out;
  out.kind = ModelKind::dictlearn;
  out.topics = std::move(dict);
  out.seed = config.seed;
  out.params = {{"K", std::to_string(config.topics)},
                {"kappa", detail::format_double(config.kappa)},
                {"rho", detail::format_double(config.rho)},
                {"regularizer", std::string(to_string(config.regularizer.penalty))},
                {"group_size", std::to_string(config.regularizer.group_size)},
                {"epochs", std::to_string(config.epochs)}};
  return out;
}

}  // namespace wordpuzzle
