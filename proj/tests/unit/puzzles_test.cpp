#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

#include "matrix_similarity.hpp"
#include "wordpuzzle/errors.hpp"
#include "wordpuzzle/puzzles.hpp"

using namespace wordpuzzle;
using testing_support::MatrixSimilarity;

namespace {

// Vocabulary of 24 words. Sets A = {0,1,2,3} and B = {4,5,6,7} are internally
// related at 0.6; word 8+i relates to A with strength 0.003 * (i + 1), and to
// nothing else. Word 23 has no vector.
Eigen::MatrixXd fixture() {
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(24, 24);
  auto link = [&](int a, int b, double v) { s(a, b) = s(b, a) = v; };
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      link(i, j, 0.6);
      link(4 + i, 4 + j, 0.6);
    }
  for (int i = 0; i < 15; ++i) link(0, 8 + i, 0.003 * (i + 1));
  s(23, 23) = 0.0;
  return s;
}

const ConsistentSet kA{0, {0, 1, 2, 3}, 0.6, 0.1};
const ConsistentSet kB{1, {4, 5, 6, 7}, 0.6, 0.1};

CandidatePool everyone() {
  std::vector<WordId> all(24);
  std::iota(all.begin(), all.end(), WordId{0});
  return CandidatePool(all);
}

}  // namespace

TEST(Bands, Presets) {
  EXPECT_EQ(beginner_band().eta1, 0.005);
  EXPECT_EQ(beginner_band().eta2, 0.02);
  EXPECT_EQ(intermediate_band().eta1, 0.1);
  EXPECT_EQ(intermediate_band().eta2, 0.2);
  EXPECT_EQ(band_from_name("intermediate").name, "intermediate");
  EXPECT_THROW(band_from_name("expert"), InputError);
  EXPECT_THROW((DifficultyBand{"x", 0.3, 0.2}.validate()), InputError);
  EXPECT_FALSE(beginner_band().contains(0.02));  // open interval
  EXPECT_FALSE(beginner_band().contains(0.005));
}

TEST(Kinds, Strings) {
  for (auto k : {PuzzleKind::odd_one_out, PuzzleKind::choose_related, PuzzleKind::separate_topics})
    EXPECT_EQ(puzzle_kind_from_string(to_string(k)), k);
  EXPECT_THROW(puzzle_kind_from_string("analogy"), InputError);
}

TEST(MaxAttempts, DefaultFormula) {
  EXPECT_EQ(default_max_attempts(100), 100u);
  EXPECT_EQ(default_max_attempts(2), 15u);
  EXPECT_EQ(default_max_attempts(1'000'000), 5000u);
}

TEST(OddOneOut, SigmaInsideBandAndOddWordOutsideSet) {
  const MatrixSimilarity sim(fixture());
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const auto r = gen_odd_one_out(kA, sim, beginner_band(), everyone(), rng, 500);
    ASSERT_EQ(r.status, GenStatus::ok);
    const auto& p = *r.puzzle;
    const WordId odd = p.words[p.solution];
    EXPECT_EQ(p.solution, 4u);
    EXPECT_TRUE(std::find(kA.words.begin(), kA.words.end(), odd) == kA.words.end());
    EXPECT_GT(p.sigma, 0.005);
    EXPECT_LT(p.sigma, 0.02);
    EXPECT_EQ(p.sigma, sim.relatedness(0, odd));
    EXPECT_NE(odd, 23u);
  }
}

TEST(OddOneOut, ExhaustsWhenNothingFits) {
  const MatrixSimilarity sim(fixture());
  Rng rng(1);
  const auto r = gen_odd_one_out(kA, sim, {"empty", 0.5, 0.55}, everyone(), rng, 40);
  EXPECT_EQ(r.status, GenStatus::exhausted);
  EXPECT_FALSE(r.puzzle);
  EXPECT_EQ(r.attempts, 40u);
  Rng again(1);
  EXPECT_THROW(gen_odd_one_out(kA, sim, beginner_band(), everyone(), again, 0), InputError);
}

TEST(OddOneOut, PoolWithoutOutsideWordsExhaustsImmediately) {
  const MatrixSimilarity sim(fixture());
  Rng rng(1);
  const CandidatePool inside(std::vector<WordId>{0, 1, 2, 3});
  EXPECT_EQ(gen_odd_one_out(kA, sim, beginner_band(), inside, rng, 10).status, GenStatus::exhausted);
  const CandidatePool weighted(std::vector<WordId>{0, 1, 9}, {1.0, 1.0, 0.0});
  EXPECT_EQ(gen_odd_one_out(kA, sim, beginner_band(), weighted, rng, 10).status, GenStatus::exhausted);
}

TEST(OddOneOut, RaisingEta1ShrinksAcceptableWords) {
  const MatrixSimilarity sim(fixture());
  auto acceptable = [&](const DifficultyBand& band) {
    std::set<WordId> out;
    for (WordId w = 4; w < 24; ++w) {
      double sigma = 0;
      for (WordId t : kA.words) sigma = std::max(sigma, sim.relatedness(t, w));
      if (sim.has_vector(w) && band.contains(sigma)) out.insert(w);
    }
    return out;
  };
  const auto wide = acceptable({"a", 0.0, 0.04});
  for (double eta1 : {0.005, 0.01, 0.02, 0.03}) {
    const auto narrow = acceptable({"b", eta1, 0.04});
    EXPECT_TRUE(std::includes(wide.begin(), wide.end(), narrow.begin(), narrow.end()));
    EXPECT_LT(narrow.size(), wide.size());
  }
  // The generator only ever returns acceptable words.
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    const auto r = gen_odd_one_out(kA, sim, {"b", 0.02, 0.04}, everyone(), rng, 1000);
    ASSERT_EQ(r.status, GenStatus::ok);
    EXPECT_TRUE(acceptable({"b", 0.02, 0.04}).count(r.puzzle->words[r.puzzle->solution]));
  }
}

TEST(ChooseRelated, MembershipAndBand) {
  const MatrixSimilarity sim(fixture());
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    const auto r = gen_choose_related(kA, sim, {"b", 0.0, 0.9}, 3, everyone(), rng, 2000);
    if (r.status != GenStatus::ok) continue;  // stem may miss word 0, leaving no in-band words
    const auto& p = *r.puzzle;
    ASSERT_EQ(p.words.size(), 4u);
    EXPECT_EQ(p.stem.size(), 3u);
    const WordId answer = p.words[p.solution];
    EXPECT_TRUE(std::count(kA.words.begin(), kA.words.end(), answer));
    EXPECT_FALSE(std::count(p.stem.begin(), p.stem.end(), answer));
    ASSERT_EQ(p.distractor_sigmas.size(), 3u);
    for (std::size_t q = 1; q < 4; ++q) {
      EXPECT_FALSE(std::count(kA.words.begin(), kA.words.end(), p.words[q]));
      double sigma = 0;
      for (WordId t : p.stem) sigma = std::max(sigma, sim.relatedness(t, p.words[q]));
      EXPECT_EQ(sigma, p.distractor_sigmas[q - 1]);
      EXPECT_GT(sigma, 0.0);
      EXPECT_LT(sigma, 0.9);
    }
  }
}

TEST(ChooseRelated, Preconditions) {
  const MatrixSimilarity sim(fixture());
  Rng rng(0);
  EXPECT_THROW(gen_choose_related(kA, sim, beginner_band(), 0, everyone(), rng, 10), InputError);
  const ConsistentSet pair{5, {0, 1}, 0.6, 0.1};
  EXPECT_THROW(gen_choose_related(pair, sim, beginner_band(), 2, everyone(), rng, 10), InputError);
}

TEST(SeparateTopics, OverlapRejectedDisjointAccepted) {
  const MatrixSimilarity sim(fixture());
  EXPECT_EQ(gen_separate_topics(kA, kA, sim, 0.5).status, GenStatus::rejected);
  const auto ok = gen_separate_topics(kA, kB, sim, 0.01);
  ASSERT_EQ(ok.status, GenStatus::ok);
  EXPECT_EQ(ok.puzzle->solution, 0b1111u);
  EXPECT_EQ(ok.puzzle->sigma, 0.0);
  EXPECT_EQ(ok.puzzle->sources, (std::vector<std::size_t>{0, 1}));
}

TEST(SeparateTopics, InjectedCrossPairRejected) {
  auto s = fixture();
  s(2, 6) = s(6, 2) = 0.35;
  const MatrixSimilarity sim(s);
  EXPECT_EQ(gen_separate_topics(kA, kB, sim, 0.3).status, GenStatus::rejected);
  EXPECT_EQ(gen_separate_topics(kA, kB, sim, 0.35).status, GenStatus::rejected);  // cap is strict
  EXPECT_EQ(gen_separate_topics(kA, kB, sim, 0.36).status, GenStatus::ok);
}

TEST(Presentation, DeterministicBijectionThatResolves) {
  const MatrixSimilarity sim(fixture());
  Puzzle p = *gen_separate_topics(kA, kB, sim, 0.5).puzzle;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng a(seed), b(seed);
    const auto x = shuffle_and_render(p, a);
    const auto y = shuffle_and_render(p, b);
    EXPECT_EQ(x.order, y.order);
    EXPECT_EQ(x.words, y.words);
    std::vector<std::size_t> sorted = x.order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t q = 0; q < sorted.size(); ++q) EXPECT_EQ(sorted[q], q);
    EXPECT_EQ(resolve(x), p.solution);
    // The shown solution picks out exactly the first set's words.
    std::set<WordId> picked;
    for (std::size_t q = 0; q < x.words.size(); ++q)
      if ((x.solution >> q) & 1U) picked.insert(x.words[q]);
    EXPECT_EQ(picked, (std::set<WordId>{0, 1, 2, 3}));
  }
  Puzzle odd = *[&] {
    Rng rng(3);
    return gen_odd_one_out(kA, sim, beginner_band(), everyone(), rng, 500).puzzle;
  }();
  Rng rng(9);
  const auto shown = shuffle_and_render(odd, rng);
  EXPECT_EQ(shown.words[shown.solution], odd.words[odd.solution]);
  EXPECT_EQ(resolve(shown), odd.solution);
}

TEST(CandidatePool, WeightedDrawsRespectWeights) {
  const CandidatePool pool(std::vector<WordId>{10, 11, 12}, {0.0, 3.0, 1.0});
  EXPECT_EQ(pool.size(), 2u);
  Rng rng(4);
  int eleven = 0;
  for (int i = 0; i < 4000; ++i) {
    const WordId w = pool.draw(rng);
    EXPECT_NE(w, 10u);
    eleven += w == 11;
  }
  EXPECT_NEAR(eleven / 4000.0, 0.75, 0.03);
  EXPECT_THROW(CandidatePool(std::vector<WordId>{1}, {0.0}), InputError);
  EXPECT_THROW(CandidatePool(std::vector<WordId>{1, 2}, {1.0}), InputError);
  EXPECT_THROW(CandidatePool(std::vector<WordId>{}).draw(rng), InputError);
}

TEST(CandidatePool, FromProviderSkipsWordsWithoutVectors) {
  const MatrixSimilarity sim(fixture());
  const auto pool = CandidatePool::from_provider(sim);
  EXPECT_EQ(pool.size(), 23u);
  EXPECT_FALSE(std::count(pool.words().begin(), pool.words().end(), WordId{23}));
}

TEST(Bank, DeterministicOrderIndependentAndVerified) {
  const MatrixSimilarity sim(fixture());
  BankConfig cfg;
  cfg.kinds = {PuzzleKind::odd_one_out, PuzzleKind::choose_related, PuzzleKind::separate_topics};
  cfg.band = {"custom", 0.0, 0.05};
  cfg.seed = 1234;
  const std::vector<ConsistentSet> sets{kA, kB};
  const auto pool = everyone();
  const auto bank = generate_bank(sets, sim, pool, cfg);
  const auto again = generate_bank(sets, sim, pool, cfg);
  const std::vector<std::string> vocab = [] {
    std::vector<std::string> v;
    for (int i = 0; i < 24; ++i) v.push_back("w" + std::to_string(i));
    return v;
  }();
  std::ostringstream a, b;
  write_puzzle_bank(a, bank, vocab);
  write_puzzle_bank(b, again, vocab);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(bank.summary.outcomes.size(), 6u);
  EXPECT_EQ(bank.summary.count(PuzzleKind::separate_topics, GenStatus::ok), 2u);
  // B has nothing in the band for odd-one-out: it relates to no outside word.
  EXPECT_EQ(bank.summary.count(PuzzleKind::odd_one_out, GenStatus::exhausted), 1u);

  for (const auto& e : bank.entries) EXPECT_TRUE(verify_puzzle(e, sets, sim).empty());

  const std::vector<ConsistentSet> reversed{kB, kA};
  const auto swapped = generate_bank(reversed, sim, pool, cfg);
  auto key = [](const BankEntry& e) { return std::make_pair(e.puzzle.sources.front(), e.puzzle.kind); };
  for (const auto& e : bank.entries) {
    if (e.puzzle.kind == PuzzleKind::separate_topics) continue;  // partner order depends on the set list
    const auto it = std::find_if(swapped.entries.begin(), swapped.entries.end(),
                                 [&](const BankEntry& o) { return key(o) == key(e); });
    ASSERT_NE(it, swapped.entries.end());
    EXPECT_EQ(it->presentation.words, e.presentation.words);
    EXPECT_EQ(it->puzzle.seed, puzzle_seed(1234, e.puzzle.sources.front(), e.puzzle.kind));
  }
}

TEST(Bank, VerificationCatchesTampering) {
  const MatrixSimilarity sim(fixture());
  BankConfig cfg;
  cfg.band = beginner_band();
  const std::vector<ConsistentSet> sets{kA};
  const auto bank = generate_bank(sets, sim, everyone(), cfg);
  ASSERT_EQ(bank.entries.size(), 1u);

  auto bad_sigma = bank.entries[0];
  bad_sigma.puzzle.sigma += 1e-3;
  EXPECT_FALSE(verify_puzzle(bad_sigma, sets, sim).empty());

  auto bad_solution = bank.entries[0];
  bad_solution.presentation.solution = (bad_solution.presentation.solution + 1) % 5;
  EXPECT_FALSE(verify_puzzle(bad_solution, sets, sim).empty());

  auto bad_band = bank.entries[0];
  bad_band.puzzle.band = {"tight", 0.5, 0.6};
  EXPECT_FALSE(verify_puzzle(bad_band, sets, sim).empty());

  std::vector<ConsistentSet> stricter{kA};
  stricter[0].delta = 0.7;  // the source no longer clears its threshold
  EXPECT_FALSE(verify_puzzle(bank.entries[0], stricter, sim).empty());
}

TEST(Bank, FileWithAndWithoutSolutions) {
  const MatrixSimilarity sim(fixture());
  BankConfig cfg;
  cfg.kinds = {PuzzleKind::odd_one_out, PuzzleKind::choose_related};
  cfg.band = {"custom", 0.0, 0.05};
  const std::vector<ConsistentSet> sets{kA};
  const auto bank = generate_bank(sets, sim, everyone(), cfg);
  std::vector<std::string> vocab;
  for (int i = 0; i < 24; ++i) vocab.push_back("w" + std::to_string(i));
  std::ostringstream full, hidden;
  write_puzzle_bank(full, bank, vocab, true);
  write_puzzle_bank(hidden, bank, vocab, false);
  std::istringstream f(full.str()), h(hidden.str());
  std::string lf, lh;
  std::size_t n = 0;
  while (std::getline(f, lf) && std::getline(h, lh)) {
    const auto jf = nlohmann::json::parse(lf);
    const auto jh = nlohmann::json::parse(lh);
    EXPECT_TRUE(jf.contains("solution"));
    EXPECT_FALSE(jh.contains("solution"));
    for (const char* field : {"kind", "words", "band", "sigma", "sources", "seed"}) {
      EXPECT_TRUE(jf.contains(field)) << field;
      EXPECT_EQ(jf[field], jh[field]);
    }
    ++n;
  }
  EXPECT_EQ(n, bank.entries.size());
}

TEST(Render, OneLine) {
  Presentation p;
  p.kind = PuzzleKind::odd_one_out;
  p.words = {0, 1, 2};
  const std::vector<std::string> vocab{"vote", "election", "sony"};
  EXPECT_EQ(render_text(p, vocab), "vote election sony");
}
