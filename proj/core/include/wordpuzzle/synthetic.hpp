#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "wordpuzzle/corpus.hpp"

namespace wordpuzzle {

/// Corpus with known ground truth: every document is drawn from exactly one
/// topic, and topics have disjoint vocabularies. Within a topic, word i is
/// drawn with probability proportional to 1 / (i + 1), so each topic has a
/// well-defined top-k.
struct PlantedCorpusConfig {
  std::size_t topics = 8;
  std::size_t words_per_topic = 10;
  std::size_t documents = 400;
  std::size_t document_length = 50;
  std::uint64_t seed = 0;
};

struct PlantedCorpus {
  std::vector<Document> documents;
  /// topic_words[t][i] is the i-th most probable word of topic t.
  std::vector<std::vector<std::string>> topic_words;
  std::vector<std::size_t> document_topic;
};

PlantedCorpus generate_planted_corpus(const PlantedCorpusConfig& config);

/// Concept repository matching a planted corpus: topic articles mention
/// mostly one topic's words, bridge articles mix two topics, and filler
/// words are spread thinly everywhere, so that cross-topic relatedness covers
/// a range of small values.
struct ConceptCorpusConfig {
  std::size_t articles_per_topic = 30;
  std::size_t bridge_articles = 60;
  std::size_t filler_words = 40;
  std::size_t filler_articles = 120;
  std::uint64_t seed = 1;
};

std::vector<Document> generate_concept_corpus(const PlantedCorpus& corpus, const ConceptCorpusConfig& config);

/// Documents of uniformly random words from a flat vocabulary: no topical
/// structure at all.
struct RandomCorpusConfig {
  std::size_t vocabulary = 60;
  std::size_t documents = 200;
  std::size_t document_length = 40;
  std::uint64_t seed = 0;
};

std::vector<Document> generate_random_corpus(const RandomCorpusConfig& config);

/// Alphabetic pseudo-word for (group, index); never a stopword.
std::string synthetic_word(std::string_view prefix, std::size_t group, std::size_t index);

}  // namespace wordpuzzle
