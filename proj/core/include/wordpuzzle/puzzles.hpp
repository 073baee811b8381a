#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wordpuzzle/consistency.hpp"
#include "wordpuzzle/corpus.hpp"
#include "wordpuzzle/esa.hpp"
#include "wordpuzzle/rng.hpp"

namespace wordpuzzle {

enum class PuzzleKind { odd_one_out, choose_related, separate_topics };

std::string_view to_string(PuzzleKind kind);
PuzzleKind puzzle_kind_from_string(std::string_view s);

/// Relatedness interval (eta1, eta2) for mixed-in words. Raising eta1 makes
/// the odd word closer to the set and the puzzle harder.
struct DifficultyBand {
  std::string name;
  double eta1 = 0.0;
  double eta2 = 1.0;

  /// Throws InputError unless 0 <= eta1 < eta2 <= 1.
  void validate() const;
  bool contains(double sigma) const { return eta1 < sigma && sigma < eta2; }
};

DifficultyBand beginner_band();      // (0.005, 0.02)
DifficultyBand intermediate_band();  // (0.1, 0.2)
/// "beginner", "intermediate", or "custom" with explicit values.
DifficultyBand band_from_name(std::string_view name);

/// A generated puzzle in canonical (unshuffled) order:
///   odd-one-out      words = C + {w},            solution = index of w
///   choose-related   words = {answer} + distractors, stem = C - {answer},
///                    solution = index of answer
///   separate-topics  words = C1 + C2,            solution = bitmask of C1
struct Puzzle {
  PuzzleKind kind = PuzzleKind::odd_one_out;
  std::vector<WordId> stem;
  std::vector<WordId> words;
  std::uint64_t solution = 0;
  DifficultyBand band;
  /// Topic indices of the consistent set(s) the puzzle was built from.
  std::vector<std::size_t> sources;
  /// Largest relatedness of any mixed-in element to its set (for separate
  /// topics: the largest cross-set relatedness).
  double sigma = 0.0;
  /// choose-related: sigma of each distractor, in canonical order.
  std::vector<double> distractor_sigmas;
  std::uint64_t seed = 0;
};

/// The order in which a puzzle is shown to the solver.
struct Presentation {
  PuzzleKind kind = PuzzleKind::odd_one_out;
  std::vector<WordId> stem;
  std::vector<WordId> words;
  /// Shown position p holds canonical position order[p].
  std::vector<std::size_t> order;
  /// Solution in shown positions.
  std::uint64_t solution = 0;
};

/// Fisher-Yates permutation of the puzzle words; the solution is remapped.
Presentation shuffle_and_render(const Puzzle& puzzle, Rng& rng);
/// Maps a presentation's solution back to canonical positions.
std::uint64_t resolve(const Presentation& presentation);

/// Words eligible to be mixed into a set, drawn uniformly or in proportion
/// to per-word weights (e.g. corpus frequencies).
class CandidatePool {
 public:
  explicit CandidatePool(std::vector<WordId> words, std::vector<double> weights = {});

  /// Every vocabulary word with a non-empty representation.
  static CandidatePool from_provider(const SimilarityProvider& sim);

  std::size_t size() const { return words_.size(); }
  std::span<const WordId> words() const { return words_; }
  WordId draw(Rng& rng) const;

 private:
  std::vector<WordId> words_;
  std::vector<double> cumulative_;
};

/// min(5000, ceil(10 * sqrt(vocabulary size))).
std::size_t default_max_attempts(std::size_t vocabulary_size);

enum class GenStatus { ok, exhausted, rejected };

struct GenResult {
  GenStatus status = GenStatus::exhausted;
  std::optional<Puzzle> puzzle;
  std::size_t attempts = 0;
};

/// Draws w outside C until eta1 < max_{t in C} s(t, w) < eta2; words with an
/// empty representation never qualify. Exhausted after max_attempts draws.
GenResult gen_odd_one_out(const ConsistentSet& set, const SimilarityProvider& sim, const DifficultyBand& band,
                          const CandidatePool& pool, Rng& rng, std::size_t max_attempts);

/// Holds out one word of C as the answer; the rest is the stem. Distractors
/// are distinct words outside C whose max relatedness to the stem lies
/// strictly inside the band. Needs |C| >= 3 and n_distractors >= 1.
GenResult gen_choose_related(const ConsistentSet& set, const SimilarityProvider& sim, const DifficultyBand& band,
                             std::size_t n_distractors, const CandidatePool& pool, Rng& rng,
                             std::size_t max_attempts);

/// Mixes two word-disjoint sets; rejected if they overlap or if any cross
/// pair has relatedness >= eta2_cross.
GenResult gen_separate_topics(const ConsistentSet& first, const ConsistentSet& second,
                              const SimilarityProvider& sim, double eta2_cross);

// ---------------------------------------------------------------------------
// Puzzle banks

struct BankConfig {
  std::vector<PuzzleKind> kinds{PuzzleKind::odd_one_out};
  DifficultyBand band = beginner_band();
  std::size_t n_distractors = 3;
  /// Cap on cross-set relatedness for separate-topics; defaults to band.eta2.
  std::optional<double> eta2_cross;
  /// 0 selects default_max_attempts(vocabulary size).
  std::size_t max_attempts = 0;
  /// How many partner sets to try per separate-topics puzzle.
  std::size_t max_partner_tries = 10;
  std::uint64_t seed = 0;
};

struct BankEntry {
  Puzzle puzzle;
  Presentation presentation;
};

struct BankSummary {
  struct Outcome {
    PuzzleKind kind;
    std::size_t topic;
    GenStatus status;
    std::size_t attempts;
  };
  std::vector<Outcome> outcomes;

  std::size_t count(PuzzleKind kind, GenStatus status) const;
};

struct PuzzleBank {
  std::vector<BankEntry> entries;
  BankSummary summary;
};

/// Seed of the generator stream for one (set, kind) pair.
std::uint64_t puzzle_seed(std::uint64_t master, std::size_t topic, PuzzleKind kind);

/// One attempt per (set, kind) in set order. Every draw comes from a stream
/// seeded by puzzle_seed, so the bank does not depend on evaluation order.
PuzzleBank generate_bank(std::span<const ConsistentSet> sets, const SimilarityProvider& sim,
                         const CandidatePool& pool, const BankConfig& config);

/// Re-checks an emitted puzzle against the provider: sigma recomputed and
/// inside the band, source sets re-scoring above their delta, distinct
/// words, and the presentation resolving to the canonical solution.
/// Returns human-readable problems; empty when the puzzle is sound.
std::vector<std::string> verify_puzzle(const BankEntry& entry, std::span<const ConsistentSet> sets,
                                       const SimilarityProvider& sim);

/// JSON lines; `with_solutions = false` drops the solution field.
void write_puzzle_bank(std::ostream& out, const PuzzleBank& bank, std::span<const std::string> vocabulary,
                       bool with_solutions = true);

/// "vote election candidate voters sony" style one-line rendering.
std::string render_text(const Presentation& presentation, std::span<const std::string> vocabulary);

}  // namespace wordpuzzle
