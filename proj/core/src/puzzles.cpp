#include "wordpuzzle/puzzles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "wordpuzzle/errors.hpp"

namespace wordpuzzle {

using json = nlohmann::json;

namespace {

bool uses_bitmask(PuzzleKind kind) { return kind == PuzzleKind::separate_topics; }

bool contains(std::span<const WordId> words, WordId w) {
  return std::find(words.begin(), words.end(), w) != words.end();
}

double max_relatedness(std::span<const WordId> group, WordId w, const SimilarityProvider& sim) {
  double best = 0.0;
  for (WordId t : group) best = std::max(best, sim.relatedness(t, w));
  return best;
}

bool has_word_outside(const CandidatePool& pool, std::span<const WordId> excluded) {
  return std::any_of(pool.words().begin(), pool.words().end(),
                     [&](WordId w) { return !contains(excluded, w); });
}

std::string describe(const Puzzle& p) {
  std::ostringstream s;
  s << to_string(p.kind) << " puzzle from topic(s)";
  for (auto t : p.sources) s << ' ' << t;
  return s.str();
}

}  // namespace

std::string_view to_string(PuzzleKind kind) {
  switch (kind) {
    case PuzzleKind::odd_one_out:
      return "odd-one-out";
    case PuzzleKind::choose_related:
      return "choose-related";
    case PuzzleKind::separate_topics:
      return "separate-topics";
  }
  return "unknown";
}

PuzzleKind puzzle_kind_from_string(std::string_view s) {
  if (s == "odd-one-out") return PuzzleKind::odd_one_out;
  if (s == "choose-related") return PuzzleKind::choose_related;
  if (s == "separate-topics") return PuzzleKind::separate_topics;
  throw InputError("unknown puzzle kind '" + std::string(s) +
                   "' (expected odd-one-out, choose-related or separate-topics)");
}

void DifficultyBand::validate() const {
  if (!(eta1 >= 0.0 && eta1 < eta2 && eta2 <= 1.0)) {
    throw InputError("difficulty band '" + name + "' must satisfy 0 <= eta1 < eta2 <= 1");
  }
}

DifficultyBand beginner_band() { return {"beginner", 0.005, 0.02}; }
DifficultyBand intermediate_band() { return {"intermediate", 0.1, 0.2}; }

DifficultyBand band_from_name(std::string_view name) {
  if (name == "beginner") return beginner_band();
  if (name == "intermediate") return intermediate_band();
  throw InputError("unknown difficulty band '" + std::string(name) +
                   "' (expected beginner or intermediate, or give --eta1/--eta2)");
}

Presentation shuffle_and_render(const Puzzle& puzzle, Rng& rng) {
  Presentation shown;
  shown.kind = puzzle.kind;
  shown.stem = puzzle.stem;
  shown.order.resize(puzzle.words.size());
  std::iota(shown.order.begin(), shown.order.end(), std::size_t{0});
  rng.shuffle(shown.order);
  shown.words.reserve(puzzle.words.size());
  for (std::size_t canonical : shown.order) shown.words.push_back(puzzle.words[canonical]);

  if (uses_bitmask(puzzle.kind)) {
    for (std::size_t p = 0; p < shown.order.size(); ++p) {
      if ((puzzle.solution >> shown.order[p]) & 1U) shown.solution |= std::uint64_t{1} << p;
    }
  } else {
    auto it = std::find(shown.order.begin(), shown.order.end(), static_cast<std::size_t>(puzzle.solution));
    shown.solution = static_cast<std::uint64_t>(it - shown.order.begin());
  }
  return shown;
}

std::uint64_t resolve(const Presentation& presentation) {
  if (uses_bitmask(presentation.kind)) {
    std::uint64_t canonical = 0;
    for (std::size_t p = 0; p < presentation.order.size(); ++p) {
      if ((presentation.solution >> p) & 1U) canonical |= std::uint64_t{1} << presentation.order[p];
    }
    return canonical;
  }
  return presentation.order.at(static_cast<std::size_t>(presentation.solution));
}

CandidatePool::CandidatePool(std::vector<WordId> words, std::vector<double> weights) : words_(std::move(words)) {
  if (!weights.empty()) {
    if (weights.size() != words_.size()) throw InputError("candidate pool: one weight per word required");
    // Zero-weight words can never be drawn; dropping them keeps "is there any
    // drawable word outside C" a simple membership question.
    std::vector<WordId> kept;
    double total = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (!(weights[i] >= 0.0)) throw InputError("candidate pool: weights must be non-negative");
      if (weights[i] == 0.0) continue;
      total += weights[i];
      kept.push_back(words_[i]);
      cumulative_.push_back(total);
    }
    if (!(total > 0.0)) throw InputError("candidate pool: weights sum to zero");
    words_ = std::move(kept);
  }
}

CandidatePool CandidatePool::from_provider(const SimilarityProvider& sim) {
  std::vector<WordId> words;
  for (std::size_t w = 0; w < sim.vocabulary_size(); ++w) {
    if (sim.has_vector(static_cast<WordId>(w))) words.push_back(static_cast<WordId>(w));
  }
  return CandidatePool(std::move(words));
}

WordId CandidatePool::draw(Rng& rng) const {
  if (words_.empty()) throw InputError("candidate pool is empty");
  if (cumulative_.empty()) return words_[rng.below(words_.size())];
  const double u = rng.uniform() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return words_[static_cast<std::size_t>(it - cumulative_.begin())];
}

std::size_t default_max_attempts(std::size_t vocabulary_size) {
  const double scaled = std::ceil(10.0 * std::sqrt(static_cast<double>(vocabulary_size)));
  return static_cast<std::size_t>(std::clamp(scaled, 1.0, 5000.0));
}

GenResult gen_odd_one_out(const ConsistentSet& set, const SimilarityProvider& sim, const DifficultyBand& band,
                          const CandidatePool& pool, Rng& rng, std::size_t max_attempts) {
  band.validate();
  if (max_attempts < 1) throw InputError("max_attempts must be >= 1");
  GenResult result;
  if (!has_word_outside(pool, set.words)) return result;

  for (result.attempts = 1; result.attempts <= max_attempts; ++result.attempts) {
    WordId w = pool.draw(rng);
    while (contains(set.words, w)) w = pool.draw(rng);
    if (!sim.has_vector(w)) continue;
    const double sigma = max_relatedness(set.words, w, sim);
    if (!band.contains(sigma)) continue;

    Puzzle p;
    p.kind = PuzzleKind::odd_one_out;
    p.words = set.words;
    p.words.push_back(w);
    p.solution = set.words.size();
    p.band = band;
    p.sources = {set.topic};
    p.sigma = sigma;
    result.status = GenStatus::ok;
    result.puzzle = std::move(p);
    return result;
  }
  result.attempts = max_attempts;
  return result;
}

GenResult gen_choose_related(const ConsistentSet& set, const SimilarityProvider& sim, const DifficultyBand& band,
                             std::size_t n_distractors, const CandidatePool& pool, Rng& rng,
                             std::size_t max_attempts) {
  band.validate();
  if (set.words.size() < 3) throw InputError("choose-related needs a consistent set of at least 3 words");
  if (n_distractors < 1) throw InputError("choose-related needs at least one distractor");
  if (max_attempts < 1) throw InputError("max_attempts must be >= 1");

  const std::size_t held = rng.below(set.words.size());
  std::vector<WordId> stem;
  for (std::size_t i = 0; i < set.words.size(); ++i) {
    if (i != held) stem.push_back(set.words[i]);
  }

  GenResult result;
  if (!has_word_outside(pool, set.words)) return result;
  std::vector<WordId> distractors;
  std::vector<double> sigmas;
  for (result.attempts = 1; result.attempts <= max_attempts; ++result.attempts) {
    WordId w = pool.draw(rng);
    while (contains(set.words, w)) w = pool.draw(rng);
    if (contains(distractors, w) || !sim.has_vector(w)) continue;
    const double sigma = max_relatedness(stem, w, sim);
    if (!band.contains(sigma)) continue;
    distractors.push_back(w);
    sigmas.push_back(sigma);
    if (distractors.size() == n_distractors) {
      Puzzle p;
      p.kind = PuzzleKind::choose_related;
      p.stem = std::move(stem);
      p.words.push_back(set.words[held]);
      p.words.insert(p.words.end(), distractors.begin(), distractors.end());
      p.solution = 0;
      p.band = band;
      p.sources = {set.topic};
      p.sigma = *std::max_element(sigmas.begin(), sigmas.end());
      p.distractor_sigmas = std::move(sigmas);
      result.status = GenStatus::ok;
      result.puzzle = std::move(p);
      return result;
    }
  }
  result.attempts = max_attempts;
  return result;
}

GenResult gen_separate_topics(const ConsistentSet& first, const ConsistentSet& second,
                              const SimilarityProvider& sim, double eta2_cross) {
  if (!(eta2_cross > 0.0 && eta2_cross <= 1.0)) throw InputError("eta2_cross must lie in (0, 1]");
  if (first.words.size() + second.words.size() > 64) {
    throw InputError("separate-topics supports at most 64 words in total");
  }
  GenResult result;
  result.status = GenStatus::rejected;
  result.attempts = 1;
  for (WordId w : first.words) {
    if (contains(second.words, w)) return result;
  }
  double cross = 0.0;
  for (WordId u : first.words) cross = std::max(cross, max_relatedness(second.words, u, sim));
  if (!(cross < eta2_cross)) return result;

  Puzzle p;
  p.kind = PuzzleKind::separate_topics;
  p.words = first.words;
  p.words.insert(p.words.end(), second.words.begin(), second.words.end());
  p.solution = first.words.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << first.words.size()) - 1;
  p.band = {"cross-cap", 0.0, eta2_cross};
  p.sources = {first.topic, second.topic};
  p.sigma = cross;
  result.status = GenStatus::ok;
  result.puzzle = std::move(p);
  return result;
}

std::size_t BankSummary::count(PuzzleKind kind, GenStatus status) const {
  return static_cast<std::size_t>(std::count_if(outcomes.begin(), outcomes.end(), [&](const Outcome& o) {
    return o.kind == kind && o.status == status;
  }));
}

std::uint64_t puzzle_seed(std::uint64_t master, std::size_t topic, PuzzleKind kind) {
  return derive_seed(master, static_cast<std::uint64_t>(topic) * 4 + static_cast<std::uint64_t>(kind));
}

PuzzleBank generate_bank(std::span<const ConsistentSet> sets, const SimilarityProvider& sim,
                         const CandidatePool& pool, const BankConfig& config) {
  config.band.validate();
  const std::size_t attempts =
      config.max_attempts > 0 ? config.max_attempts : default_max_attempts(sim.vocabulary_size());
  const double cap = config.eta2_cross.value_or(config.band.eta2);

  PuzzleBank bank;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const ConsistentSet& set = sets[i];
    for (PuzzleKind kind : config.kinds) {
      const std::uint64_t seed = puzzle_seed(config.seed, set.topic, kind);
      Rng rng(seed);
      GenResult result;
      switch (kind) {
        case PuzzleKind::odd_one_out:
          result = gen_odd_one_out(set, sim, config.band, pool, rng, attempts);
          break;
        case PuzzleKind::choose_related:
          if (set.words.size() < 3) {
            result.status = GenStatus::rejected;
            break;
          }
          result = gen_choose_related(set, sim, config.band, config.n_distractors, pool, rng, attempts);
          break;
        case PuzzleKind::separate_topics: {
          std::vector<std::size_t> partners;
          for (std::size_t j = 0; j < sets.size(); ++j) {
            if (j != i) partners.push_back(j);
          }
          rng.shuffle(partners);
          result.status = GenStatus::rejected;
          const std::size_t tries = std::min(partners.size(), config.max_partner_tries);
          for (std::size_t t = 0; t < tries; ++t) {
            result = gen_separate_topics(set, sets[partners[t]], sim, cap);
            result.attempts = t + 1;
            if (result.status == GenStatus::ok) break;
          }
          break;
        }
      }
      bank.summary.outcomes.push_back({kind, set.topic, result.status, result.attempts});
      if (result.status == GenStatus::ok) {
        Puzzle puzzle = std::move(*result.puzzle);
        puzzle.seed = seed;
        if (kind != PuzzleKind::separate_topics) puzzle.band = config.band;
        Presentation shown = shuffle_and_render(puzzle, rng);
        bank.entries.push_back({std::move(puzzle), std::move(shown)});
      }
    }
  }
  return bank;
}

std::vector<std::string> verify_puzzle(const BankEntry& entry, std::span<const ConsistentSet> sets,
                                       const SimilarityProvider& sim) {
  std::vector<std::string> problems;
  const Puzzle& p = entry.puzzle;
  const Presentation& shown = entry.presentation;
  const std::string what = describe(p);

  auto find_set = [&](std::size_t topic) -> const ConsistentSet* {
    for (const auto& s : sets) {
      if (s.topic == topic) return &s;
    }
    return nullptr;
  };

  std::vector<WordId> all = p.words;
  all.insert(all.end(), p.stem.begin(), p.stem.end());
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) problems.push_back(what + ": repeated word");

  if (resolve(shown) != p.solution) problems.push_back(what + ": presentation does not resolve to the solution");
  if (shown.order.size() != p.words.size()) {
    problems.push_back(what + ": presentation has the wrong length");
  } else {
    for (std::size_t q = 0; q < shown.order.size(); ++q) {
      if (shown.order[q] >= p.words.size() || shown.words[q] != p.words[shown.order[q]]) {
        problems.push_back(what + ": presented words do not match the permutation");
        break;
      }
    }
  }

  std::vector<const ConsistentSet*> sources;
  for (std::size_t topic : p.sources) {
    const ConsistentSet* s = find_set(topic);
    if (!s) {
      problems.push_back(what + ": unknown source topic " + std::to_string(topic));
      return problems;
    }
    const double score = bottleneck_score(make_graph(s->words, sim));
    if (!(score > s->delta)) problems.push_back(what + ": source set no longer scores above delta");
    sources.push_back(s);
  }

  switch (p.kind) {
    case PuzzleKind::odd_one_out: {
      if (sources.size() != 1 || p.solution >= p.words.size()) {
        problems.push_back(what + ": malformed odd-one-out");
        break;
      }
      const WordId odd = p.words[p.solution];
      if (contains(sources[0]->words, odd)) problems.push_back(what + ": odd word belongs to the set");
      std::vector<WordId> rest;
      for (std::size_t q = 0; q < p.words.size(); ++q) {
        if (q != p.solution) rest.push_back(p.words[q]);
      }
      if (rest != sources[0]->words) problems.push_back(what + ": set words differ from the source set");
      const double sigma = max_relatedness(sources[0]->words, odd, sim);
      if (sigma != p.sigma) problems.push_back(what + ": recorded sigma differs from recomputation");
      if (!p.band.contains(sigma)) problems.push_back(what + ": sigma outside the difficulty band");
      break;
    }
    case PuzzleKind::choose_related: {
      if (sources.size() != 1 || p.solution >= p.words.size()) {
        problems.push_back(what + ": malformed choose-related");
        break;
      }
      const auto& c = sources[0]->words;
      std::vector<WordId> group = p.stem;
      group.push_back(p.words[p.solution]);
      std::vector<WordId> sorted_c = c;
      std::sort(group.begin(), group.end());
      std::sort(sorted_c.begin(), sorted_c.end());
      if (group != sorted_c) problems.push_back(what + ": stem plus answer differs from the source set");
      double largest = 0.0;
      for (std::size_t q = 0; q < p.words.size(); ++q) {
        if (q == p.solution) continue;
        if (contains(c, p.words[q])) problems.push_back(what + ": distractor belongs to the set");
        const double sigma = max_relatedness(p.stem, p.words[q], sim);
        largest = std::max(largest, sigma);
        if (!p.band.contains(sigma)) problems.push_back(what + ": distractor sigma outside the band");
      }
      if (largest != p.sigma) problems.push_back(what + ": recorded sigma differs from recomputation");
      break;
    }
    case PuzzleKind::separate_topics: {
      if (sources.size() != 2) {
        problems.push_back(what + ": malformed separate-topics");
        break;
      }
      std::vector<WordId> first, second;
      for (std::size_t q = 0; q < p.words.size(); ++q) {
        ((p.solution >> q) & 1U ? first : second).push_back(p.words[q]);
      }
      if (first != sources[0]->words || second != sources[1]->words) {
        problems.push_back(what + ": bipartition differs from the source sets");
      }
      double cross = 0.0;
      for (WordId u : sources[0]->words) cross = std::max(cross, max_relatedness(sources[1]->words, u, sim));
      if (cross != p.sigma) problems.push_back(what + ": recorded sigma differs from recomputation");
      if (!(cross < p.band.eta2)) problems.push_back(what + ": cross relatedness reaches the cap");
      break;
    }
  }
  return problems;
}

void write_puzzle_bank(std::ostream& out, const PuzzleBank& bank, std::span<const std::string> vocabulary,
                       bool with_solutions) {
  auto names = [&](std::span<const WordId> ids) {
    json a = json::array();
    for (WordId w : ids) a.push_back(vocabulary[w]);
    return a;
  };
  for (const auto& e : bank.entries) {
    const Puzzle& p = e.puzzle;
    json rec;
    rec["kind"] = to_string(p.kind);
    if (p.kind == PuzzleKind::choose_related) rec["stem"] = names(e.presentation.stem);
    rec["words"] = names(e.presentation.words);
    if (with_solutions) rec["solution"] = e.presentation.solution;
    rec["band"] = {{"name", p.band.name}, {"eta1", p.band.eta1}, {"eta2", p.band.eta2}};
    rec["sigma"] = p.sigma;
    if (p.kind == PuzzleKind::choose_related) rec["distractor_sigmas"] = p.distractor_sigmas;
    rec["sources"] = p.sources;
    rec["seed"] = p.seed;
    out << rec.dump() << '\n';
  }
}

std::string render_text(const Presentation& presentation, std::span<const std::string> vocabulary) {
  std::string line;
  if (!presentation.stem.empty()) {
    for (WordId w : presentation.stem) line += vocabulary[w] + ' ';
    line += "->";
  }
  for (WordId w : presentation.words) {
    if (!line.empty()) line += ' ';
    line += vocabulary[w];
  }
  return line;
}

}  // namespace wordpuzzle
