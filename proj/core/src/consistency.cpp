#include "wordpuzzle/consistency.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>

#include "json.hpp"
#include "wordpuzzle/errors.hpp"

namespace wordpuzzle {

using json = nlohmann::json;

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

void require_pair(const WeightedGraph& g, const char* what) {
  if (g.size() < 2) {
    throw InputError(std::string(what) + " needs at least two words (got " + std::to_string(g.size()) + ")");
  }
}

void widest_dfs(const Eigen::MatrixXd& w, std::size_t at, std::size_t target, double bottleneck,
                std::vector<bool>& visited, double& best) {
  if (at == target) {
    best = std::max(best, bottleneck);
    return;
  }
  for (std::size_t next = 0; next < visited.size(); ++next) {
    if (visited[next]) continue;
    visited[next] = true;
    widest_dfs(w, next, target, std::min(bottleneck, w(static_cast<Eigen::Index>(at), static_cast<Eigen::Index>(next))),
               visited, best);
    visited[next] = false;
  }
}

}  // namespace

WeightedGraph make_graph(std::span<const WordId> words, const SimilarityProvider& sim) {
  return {std::vector<WordId>(words.begin(), words.end()), sim.similarity_submatrix(words)};
}

double SpanningTree::total_weight() const {
  double total = 0.0;
  for (const auto& e : edges) total += e.weight;
  return total;
}

double SpanningTree::min_weight() const {
  double low = std::numeric_limits<double>::infinity();
  for (const auto& e : edges) low = std::min(low, e.weight);
  return low;
}

SpanningTree max_spanning_tree(const WeightedGraph& g) {
  require_pair(g, "max_spanning_tree");
  const std::size_t n = g.size();
  std::vector<TreeEdge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      edges.push_back({u, v, g.weights(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v))});
    }
  }
  std::stable_sort(edges.begin(), edges.end(), [](const TreeEdge& a, const TreeEdge& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });

  SpanningTree tree;
  DisjointSets components(n);
  for (const auto& e : edges) {
    if (components.unite(e.u, e.v)) {
      tree.edges.push_back(e);
      if (tree.edges.size() == n - 1) break;
    }
  }
  return tree;
}

double bottleneck_score(const WeightedGraph& g) {
  require_pair(g, "bottleneck_score");
  return max_spanning_tree(g).min_weight();
}

double widest_path_sim(const WeightedGraph& g, std::size_t i, std::size_t j) {
  if (i >= g.size() || j >= g.size()) throw InputError("widest_path_sim: node out of range");
  if (i == j) throw InputError("widest_path_sim: endpoints must differ");
  if (g.size() > kMaxWidestPathNodes) {
    throw InputError("widest_path_sim enumerates all paths and is limited to " +
                     std::to_string(kMaxWidestPathNodes) + " nodes");
  }
  std::vector<bool> visited(g.size(), false);
  visited[i] = true;
  double best = -std::numeric_limits<double>::infinity();
  widest_dfs(g.weights, i, j, std::numeric_limits<double>::infinity(), visited, best);
  return best;
}

std::vector<double> score_sets(std::span<const TopicWordSet> sets, const SimilarityProvider& sim) {
  std::vector<double> scores;
  scores.reserve(sets.size());
  for (const auto& set : sets) scores.push_back(bottleneck_score(make_graph(set.words, sim)));
  return scores;
}

std::vector<ConsistentSet> identify_consistent_sets(std::span<const TopicWordSet> sets,
                                                    const SimilarityProvider& sim, double delta) {
  if (!(delta >= 0.0 && delta < 1.0)) throw InputError("consistency threshold delta must lie in [0, 1)");
  std::vector<ConsistentSet> kept;
  for (const auto& set : sets) {
    const double score = bottleneck_score(make_graph(set.words, sim));
    if (score > delta) kept.push_back({set.topic, set.words, score, delta});
  }
  return kept;
}

void write_consistent_sets(std::ostream& out, std::span<const ConsistentSet> sets,
                           std::span<const std::string> vocabulary) {
  for (const auto& s : sets) {
    json words = json::array();
    for (WordId w : s.words) words.push_back(vocabulary[w]);
    out << json{{"topic", s.topic}, {"words", std::move(words)}, {"score", s.score}, {"delta", s.delta}}.dump()
        << '\n';
  }
}

std::vector<ConsistentSetRecord> read_consistent_sets(std::istream& in) {
  std::vector<ConsistentSetRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json obj = json::parse(line);
      records.push_back({obj.at("topic").get<std::size_t>(), obj.at("words").get<std::vector<std::string>>(),
                         obj.at("score").get<double>(), obj.at("delta").get<double>()});
    } catch (const json::exception& e) {
      throw InputError("consistent-set line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

std::vector<ConsistentSetRecord> read_consistent_sets(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return read_consistent_sets(in);
}

}  // namespace wordpuzzle
