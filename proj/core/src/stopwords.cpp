#include "wordpuzzle/corpus.hpp"

#include <algorithm>

namespace wordpuzzle {

const std::vector<std::string>& default_stopwords() {
  static const std::vector<std::string> words = [] {
    std::vector<std::string> w = {
        "a", "about", "above", "after", "again", "against", "all", "also", "am", "an", "and",
        "any", "are", "aren", "as", "at", "be", "became", "because", "been", "before", "being",
        "below", "between", "both", "but", "by", "can", "cannot", "could", "couldn", "did",
        "didn", "do", "does", "doesn", "doing", "don", "down", "during", "each", "either",
        "else", "etc", "even", "ever", "every", "few", "for", "from", "further", "get", "gets",
        "got", "had", "hadn", "has", "hasn", "have", "haven", "having", "he", "her", "here",
        "hers", "herself", "him", "himself", "his", "how", "however", "i", "if", "in", "into",
        "is", "isn", "it", "its", "itself", "just", "least", "less", "let", "like", "ll", "made",
        "make", "many", "may", "me", "might", "more", "most", "much", "must", "mustn", "my",
        "myself", "neither", "no", "nor", "not", "now", "of", "off", "often", "on", "once",
        "one", "only", "or", "other", "others", "ought", "our", "ours", "ourselves", "out",
        "over", "own", "per", "quite", "rather", "re", "said", "same", "say", "says", "see",
        "seen", "shall", "shan", "she", "should", "shouldn", "since", "so", "some", "still",
        "such", "than", "that", "the", "their", "theirs", "them", "themselves", "then", "there",
        "these", "they", "this", "those", "though", "through", "thus", "to", "too", "under",
        "until", "up", "upon", "us", "ve", "very", "was", "wasn", "we", "well", "were", "weren",
        "what", "when", "where", "whether", "which", "while", "who", "whom", "whose", "why",
        "will", "with", "within", "without", "won", "would", "wouldn", "yet", "you", "your",
        "yours", "yourself", "yourselves"};
    std::sort(w.begin(), w.end());
    w.erase(std::unique(w.begin(), w.end()), w.end());
    return w;
  }();
  return words;
}

}  // namespace wordpuzzle
