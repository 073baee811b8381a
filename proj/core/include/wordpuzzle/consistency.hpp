#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wordpuzzle/corpus.hpp"
#include "wordpuzzle/esa.hpp"
#include "wordpuzzle/topic_models.hpp"

namespace wordpuzzle {

/// Complete graph over the words of a candidate set, weighted by relatedness.
struct WeightedGraph {
  std::vector<WordId> nodes;
  /// Symmetric |nodes| x |nodes| weights in [0, 1].
  Eigen::MatrixXd weights;

  std::size_t size() const { return nodes.size(); }
};

/// G = (m, S|m).
WeightedGraph make_graph(std::span<const WordId> words, const SimilarityProvider& sim);

struct TreeEdge {
  std::size_t u;
  std::size_t v;
  double weight;
};

struct SpanningTree {
  std::vector<TreeEdge> edges;

  double total_weight() const;
  double min_weight() const;
};

/// Kruskal on descending weights; equal weights prefer the lexicographically
/// smaller (u, v) node pair. Throws InputError for fewer than two nodes.
SpanningTree max_spanning_tree(const WeightedGraph& g);

/// Relatedness of the two most dissimilar words: the minimum over node pairs
/// of the widest-path value, which equals the lightest maximum-spanning-tree
/// edge. Throws InputError for fewer than two nodes.
double bottleneck_score(const WeightedGraph& g);

/// max over simple paths i -> j of the minimum edge weight, by exhaustive
/// path enumeration. Exponential; meant as a reference for small graphs
/// (at most kMaxWidestPathNodes nodes).
inline constexpr std::size_t kMaxWidestPathNodes = 10;
double widest_path_sim(const WeightedGraph& g, std::size_t i, std::size_t j);

struct ConsistentSet {
  std::size_t topic = 0;
  std::vector<WordId> words;
  double score = 0.0;
  double delta = 0.0;
};

/// Bottleneck score of every candidate set, in input order.
std::vector<double> score_sets(std::span<const TopicWordSet> sets, const SimilarityProvider& sim);

/// Keeps the sets whose bottleneck score is strictly greater than delta,
/// preserving topic order. Throws InputError unless 0 <= delta < 1.
std::vector<ConsistentSet> identify_consistent_sets(std::span<const TopicWordSet> sets,
                                                    const SimilarityProvider& sim, double delta);

/// JSON lines: {"topic", "words", "score", "delta"}, words as strings.
void write_consistent_sets(std::ostream& out, std::span<const ConsistentSet> sets,
                           std::span<const std::string> vocabulary);

struct ConsistentSetRecord {
  std::size_t topic = 0;
  std::vector<std::string> words;
  double score = 0.0;
  double delta = 0.0;
};

std::vector<ConsistentSetRecord> read_consistent_sets(std::istream& in);
std::vector<ConsistentSetRecord> read_consistent_sets(const std::filesystem::path& path);

}  // namespace wordpuzzle
