#include <gtest/gtest.h>

#include <set>

#include "support.hpp"
#include "wordpuzzle/errors.hpp"
#include "wordpuzzle/topic_models.hpp"

using namespace wordpuzzle;

namespace {

TopicDictionary column(ModelKind kind, std::initializer_list<double> values) {
  TopicDictionary d;
  d.kind = kind;
  d.topics.resize(static_cast<Eigen::Index>(values.size()), 1);
  Eigen::Index i = 0;
  for (double v : values) d.topics(i++, 0) = v;
  return d;
}

std::set<WordId> words_of(const TopicWordSet& s) { return {s.words.begin(), s.words.end()}; }

}  // namespace

TEST(TopK, PicksLargestWeights) {
  const auto sets = extract_top_k(column(ModelKind::lda, {0.1, 0.9, 0.5, 0.3}), 2);
  ASSERT_EQ(sets.size(), 1u);
  EXPECT_EQ(words_of(sets[0]), (std::set<WordId>{1, 2}));
  EXPECT_EQ(sets[0].words, (std::vector<WordId>{1, 2}));
}

TEST(TopK, LsaUsesMagnitude) {
  const auto sets = extract_top_k(column(ModelKind::lsa, {-0.9, 0.1, 0.2}), 1);
  EXPECT_EQ(sets[0].words, std::vector<WordId>{0});
  const auto raw = extract_top_k(column(ModelKind::dictlearn, {-0.9, 0.1, 0.2}), 1);
  EXPECT_EQ(raw[0].words, std::vector<WordId>{2});
}

TEST(TopK, TiesGoToLowerIndex) {
  EXPECT_EQ(extract_top_k(column(ModelKind::lda, {0.5, 0.5, 0.1}), 1)[0].words, std::vector<WordId>{0});
}

TEST(TopK, WeightsNonIncreasingAndScaleInvariant) {
  Rng rng(4);
  TopicDictionary d;
  d.kind = ModelKind::dictlearn;
  d.topics = testing_support::random_positive(30, 6, rng);
  const auto sets = extract_top_k(d, 5);
  ASSERT_EQ(sets.size(), 6u);
  TopicDictionary scaled = d;
  scaled.topics *= 3.7;
  const auto sets2 = extract_top_k(scaled, 5);
  for (std::size_t t = 0; t < sets.size(); ++t) {
    EXPECT_EQ(sets[t].topic, t);
    EXPECT_EQ(sets[t].words.size(), 5u);
    EXPECT_EQ(words_of(sets[t]).size(), 5u);
    EXPECT_TRUE(std::is_sorted(sets[t].weights.rbegin(), sets[t].weights.rend()));
    EXPECT_EQ(sets[t].words, sets2[t].words);
  }
}

TEST(TopK, RejectsKOutOfRange) {
  const auto d = column(ModelKind::lda, {0.2, 0.8});
  EXPECT_THROW(extract_top_k(d, 0), InputError);
  EXPECT_THROW(extract_top_k(d, 3), InputError);
}

TEST(ModelKindNames, RoundTrip) {
  for (auto k : {ModelKind::lsa, ModelKind::lda, ModelKind::dictlearn})
    EXPECT_EQ(model_kind_from_string(to_string(k)), k);
  EXPECT_THROW(model_kind_from_string("nmf"), InputError);
}

TEST(ModelPersistence, BitExactRoundTrip) {
  testing_support::TempDir dir;
  Rng rng(21);
  TopicDictionary d;
  d.kind = ModelKind::lsa;
  d.topics = testing_support::random_normal(7, 3, rng) * 1e-3;
  d.topics(0, 0) = 1.0 / 3.0;
  d.topics(1, 1) = 5e-324;  // smallest subnormal
  d.singular_values = {3.5, 2.0 / 3.0, 1e-17};
  d.seed = 0xfedcba9876543210ULL;
  d.params = {{"K", "3"}, {"power_iterations", "10"}};
  std::vector<std::string> vocab{"a", "b", "c", "d", "e", "f", "g"};
  save_topic_model(dir / "m.json", d, vocab);
  const auto back = load_topic_model(dir / "m.json");
  EXPECT_TRUE(back.dict.topics == d.topics);
  EXPECT_EQ(back.dict.singular_values, d.singular_values);
  EXPECT_EQ(back.dict.seed, d.seed);
  EXPECT_EQ(back.dict.kind, d.kind);
  EXPECT_EQ(back.dict.params, d.params);
  EXPECT_EQ(back.vocabulary, vocab);
  save_topic_model(dir / "m2.json", back.dict, back.vocabulary);
  EXPECT_EQ(testing_support::slurp(dir / "m.json"), testing_support::slurp(dir / "m2.json"));
}

TEST(ModelPersistence, RejectsMismatchedPayload) {
  testing_support::TempDir dir;
  TopicDictionary d;
  d.kind = ModelKind::lda;
  d.topics = Eigen::MatrixXd::Constant(2, 1, 0.5);
  EXPECT_THROW(save_topic_model(dir / "m.json", d, std::vector<std::string>{"a"}), InputError);
  testing_support::write_file(dir / "bad.json", "{\"format\":\"wordpuzzle.topic_model\",\"version\":99}");
  EXPECT_THROW(load_topic_model(dir / "bad.json"), InputError);
}
