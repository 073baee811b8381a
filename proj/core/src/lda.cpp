#include <cmath>
#include <limits>
#include <string>

#include "format.hpp"
#include "wordpuzzle/errors.hpp"
#include "wordpuzzle/topic_models.hpp"

namespace wordpuzzle {

namespace {

void validate(const DocTermMatrix& x, const LdaConfig& config) {
  if (x.weighting() != Weighting::raw_count) {
    throw InputError("LDA needs a raw-count matrix (got " + std::string(to_string(x.weighting())) +
                     "); re-run ingest without tf-idf weighting");
  }
  if (config.topics < 1) throw InputError("LDA topic count must be >= 1");
  if (!(config.alpha > 0.0)) throw InputError("LDA alpha must be > 0");
  if (!(config.beta > 0.0)) throw InputError("LDA beta must be > 0");
  if (config.iterations < 1) throw InputError("LDA needs at least one sweep");
  if (!(config.averaging_fraction > 0.0 && config.averaging_fraction <= 1.0)) {
    throw InputError("LDA averaging fraction must lie in (0, 1]");
  }
  if (x.cols() > std::numeric_limits<std::uint32_t>::max()) {
    throw InputError("too many documents for the LDA sampler");
  }
}

}  // namespace

LdaGibbsSampler::LdaGibbsSampler(const DocTermMatrix& x, const LdaConfig& config)
    : words_(x.rows()),
      topics_(config.topics),
      alpha_(config.alpha),
      beta_(config.beta),
      rng_(config.seed),
      word_topic_(x.rows() * config.topics, 0),
      doc_topic_(x.cols() * config.topics, 0),
      topic_total_(config.topics, 0),
      weights_(config.topics, 0.0) {
  validate(x, config);
  for (std::size_t j = 0; j < x.cols(); ++j) {
    auto rows = x.column_rows(j);
    auto vals = x.column_values(j);
    for (std::size_t p = 0; p < rows.size(); ++p) {
      const double count = vals[p];
      if (count != std::floor(count)) {
        throw InputError("LDA needs integer counts; document '" + x.doc_id(j) +
                         "' has a fractional entry");
      }
      for (auto c = static_cast<std::size_t>(count); c > 0; --c) {
        token_word_.push_back(rows[p]);
        token_doc_.push_back(static_cast<std::uint32_t>(j));
      }
    }
  }
  token_topic_.resize(token_word_.size());
  for (std::size_t t = 0; t < token_word_.size(); ++t) {
    const auto z = static_cast<std::uint32_t>(rng_.below(topics_));
    token_topic_[t] = z;
    ++word_topic_[token_word_[t] * topics_ + z];
    ++doc_topic_[token_doc_[t] * topics_ + z];
    ++topic_total_[z];
  }
}

void LdaGibbsSampler::sweep() {
  const double vocab_beta = static_cast<double>(words_) * beta_;
  for (std::size_t t = 0; t < token_word_.size(); ++t) {
    const std::size_t w = token_word_[t];
    const std::size_t d = token_doc_[t];
    std::uint32_t z = token_topic_[t];
    std::uint32_t* wt = &word_topic_[w * topics_];
    std::uint32_t* dt = &doc_topic_[d * topics_];
    --wt[z];
    --dt[z];
    --topic_total_[z];

    double total = 0.0;
    for (std::size_t k = 0; k < topics_; ++k) {
      total += (dt[k] + alpha_) * (wt[k] + beta_) / (topic_total_[k] + vocab_beta);
      weights_[k] = total;
    }
    const double u = rng_.uniform() * total;
    z = 0;
    while (z + 1 < topics_ && weights_[z] <= u) ++z;

    token_topic_[t] = z;
    ++wt[z];
    ++dt[z];
    ++topic_total_[z];
  }
  ++sweeps_;
}

Eigen::MatrixXd LdaGibbsSampler::topic_word_distribution() const {
  const auto n = static_cast<Eigen::Index>(words_);
  const auto k = static_cast<Eigen::Index>(topics_);
  Eigen::MatrixXd phi(n, k);
  const double vocab_beta = static_cast<double>(words_) * beta_;
  for (Eigen::Index z = 0; z < k; ++z) {
    const double denom = topic_total_[static_cast<std::size_t>(z)] + vocab_beta;
    for (Eigen::Index w = 0; w < n; ++w) {
      phi(w, z) = (word_topic_[static_cast<std::size_t>(w) * topics_ + static_cast<std::size_t>(z)] +
                   beta_) /
                  denom;
    }
  }
  return phi;
}

TopicDictionary lda_fit(const DocTermMatrix& x, const LdaConfig& config) {
  validate(x, config);
  LdaGibbsSampler sampler(x, config);

  const auto averaged = static_cast<std::size_t>(
      std::ceil(config.averaging_fraction * static_cast<double>(config.iterations)));
  const std::size_t first_averaged = config.iterations - averaged;

  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(x.rows()),
                                               static_cast<Eigen::Index>(config.topics));
  for (std::size_t it = 0; it < config.iterations; ++it) {
    sampler.sweep();
    if (it >= first_averaged) mean += sampler.topic_word_distribution();
  }
  mean /= static_cast<double>(averaged);
  // Each sample column sums to one; renormalize away accumulated rounding.
  for (Eigen::Index z = 0; z < mean.cols(); ++z) mean.col(z) /= mean.col(z).sum();

  TopicDictionary dict;
  dict.kind = ModelKind::lda;
  dict.topics = std::move(mean);
  dict.seed = config.seed;
  dict.params = {{"K", std::to_string(config.topics)},
                 {"alpha", detail::format_double(config.alpha)},
                 {"beta", detail::format_double(config.beta)},
                 {"iterations", std::to_string(config.iterations)},
                 {"averaging_fraction", detail::format_double(config.averaging_fraction)}};
  return dict;
}

}  // namespace wordpuzzle
