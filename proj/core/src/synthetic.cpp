#include "wordpuzzle/synthetic.hpp"

#include <algorithm>

#include "wordpuzzle/errors.hpp"
#include "wordpuzzle/rng.hpp"

namespace wordpuzzle {

namespace {

std::string letters(std::size_t n) {
  std::string s;
  do {
    s.insert(s.begin(), static_cast<char>('a' + n % 26));
    n /= 26;
  } while (n > 0);
  return s;
}

std::size_t draw_cumulative(const std::vector<double>& cumulative, Rng& rng) {
  const double u = rng.uniform() * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) --it;
  return static_cast<std::size_t>(it - cumulative.begin());
}

void append_word(std::string& text, const std::string& word, std::size_t times) {
  for (std::size_t r = 0; r < times; ++r) {
    if (!text.empty()) text += ' ';
    text += word;
  }
}

}  // namespace

std::string synthetic_word(std::string_view prefix, std::size_t group, std::size_t index) {
  return std::string(prefix) + letters(group) + "q" + letters(index);
}

PlantedCorpus generate_planted_corpus(const PlantedCorpusConfig& config) {
  if (config.topics < 1 || config.words_per_topic < 1 || config.document_length < 1) {
    throw InputError("planted corpus needs at least one topic, word and token");
  }
  Rng rng(config.seed);
  PlantedCorpus corpus;
  for (std::size_t t = 0; t < config.topics; ++t) {
    std::vector<std::string> words;
    for (std::size_t i = 0; i < config.words_per_topic; ++i) words.push_back(synthetic_word("top", t, i));
    corpus.topic_words.push_back(std::move(words));
  }
  std::vector<double> cumulative;
  double total = 0.0;
  for (std::size_t i = 0; i < config.words_per_topic; ++i) {
    total += 1.0 / static_cast<double>(i + 1);
    cumulative.push_back(total);
  }
  for (std::size_t d = 0; d < config.documents; ++d) {
    const std::size_t topic = rng.below(config.topics);
    std::string text;
    for (std::size_t n = 0; n < config.document_length; ++n) {
      append_word(text, corpus.topic_words[topic][draw_cumulative(cumulative, rng)], 1);
    }
    corpus.documents.push_back({"doc" + std::to_string(d), std::move(text)});
    corpus.document_topic.push_back(topic);
  }
  return corpus;
}

std::vector<Document> generate_concept_corpus(const PlantedCorpus& corpus, const ConceptCorpusConfig& config) {
  Rng rng(config.seed);
  const std::size_t topics = corpus.topic_words.size();
  std::vector<std::string> fillers;
  for (std::size_t f = 0; f < config.filler_words; ++f) fillers.push_back(synthetic_word("fil", 0, f));

  std::vector<Document> articles;
  auto add_fillers = [&](std::string& text, double rate) {
    for (const auto& f : fillers) {
      if (rng.uniform() < rate) append_word(text, f, 1);
    }
  };

  for (std::size_t t = 0; t < topics; ++t) {
    for (std::size_t a = 0; a < config.articles_per_topic; ++a) {
      std::string text;
      for (const auto& w : corpus.topic_words[t]) {
        if (rng.uniform() < 0.6) append_word(text, w, 1 + rng.below(5));
      }
      add_fillers(text, 0.03);
      if (text.empty()) append_word(text, corpus.topic_words[t][0], 1);
      articles.push_back({"topic" + std::to_string(t) + "-" + std::to_string(a), std::move(text)});
    }
  }
  for (std::size_t b = 0; b < config.bridge_articles && topics >= 2; ++b) {
    const std::size_t first = rng.below(topics);
    std::size_t second = rng.below(topics - 1);
    if (second >= first) ++second;
    std::string text;
    for (std::size_t n = 1 + rng.below(3); n > 0; --n) {
      append_word(text, corpus.topic_words[first][rng.below(corpus.topic_words[first].size())], 1 + rng.below(3));
    }
    for (std::size_t n = 1 + rng.below(2); n > 0; --n) {
      append_word(text, corpus.topic_words[second][rng.below(corpus.topic_words[second].size())], 1);
    }
    add_fillers(text, 0.05);
    articles.push_back({"bridge" + std::to_string(b), std::move(text)});
  }
  for (std::size_t a = 0; a < config.filler_articles && !fillers.empty(); ++a) {
    std::string text;
    add_fillers(text, 0.25);
    if (text.empty()) append_word(text, fillers[rng.below(fillers.size())], 1);
    articles.push_back({"filler" + std::to_string(a), std::move(text)});
  }
  return articles;
}

std::vector<Document> generate_random_corpus(const RandomCorpusConfig& config) {
  if (config.vocabulary < 1) throw InputError("random corpus needs a non-empty vocabulary");
  Rng rng(config.seed);
  std::vector<std::string> words;
  for (std::size_t i = 0; i < config.vocabulary; ++i) words.push_back(synthetic_word("rnd", 0, i));
  std::vector<Document> docs;
  for (std::size_t d = 0; d < config.documents; ++d) {
    std::string text;
    for (std::size_t n = 0; n < config.document_length; ++n) append_word(text, words[rng.below(words.size())], 1);
    docs.push_back({"rnd" + std::to_string(d), std::move(text)});
  }
  return docs;
}

}  // namespace wordpuzzle
