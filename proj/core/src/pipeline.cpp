#include "wordpuzzle/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <ostream>

#include "format.hpp"
#include "wordpuzzle/errors.hpp"

namespace wordpuzzle {

namespace {

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

IngestReport run_ingest(const IngestOptions& options) {
  const auto docs = read_jsonl_documents(options.corpus);
  if (docs.empty()) throw InputError("'" + options.corpus.string() + "' contains no documents");

  IngestReport report;
  report.documents = docs.size();
  Vocabulary vocab = build_vocabulary(docs, options.filter, options.tokenizer);
  DocTermMatrix matrix = build_doc_term_matrix(docs, vocab, options.tokenizer, &report.dropped_ids);
  if (options.tfidf) matrix = tfidf_transform(matrix);
  report.vocabulary = vocab.size();
  report.corpus = {std::move(vocab), std::move(matrix)};
  save_corpus_matrix(options.output, report.corpus);
  return report;
}

TopicDictionary fit_model(ModelKind kind, const DocTermMatrix& x, const ModelSettings& settings) {
  switch (kind) {
    case ModelKind::lsa: {
      LsaConfig c = settings.lsa;
      c.topics = settings.topics;
      c.seed = settings.seed;
      return lsa_fit(x, c);
    }
    case ModelKind::lda: {
      LdaConfig c = settings.lda;
      c.topics = settings.topics;
      c.seed = settings.seed;
      return lda_fit(x, c);
    }
    case ModelKind::dictlearn: {
      DictLearnConfig c = settings.dictlearn;
      c.topics = settings.topics;
      c.seed = settings.seed;
      return dict_learn_fit(x, c);
    }
  }
  throw InputError("unknown topic model");
}

TopicDictionary run_train(const TrainOptions& options) {
  const CorpusMatrix corpus = load_corpus_matrix(options.matrix);
  TopicDictionary dict = fit_model(options.model, corpus.matrix, options.settings);
  save_topic_model(options.output, dict, corpus.vocab.words());
  return dict;
}

EsaIndex run_index(const IndexOptions& options) {
  const auto concepts = read_jsonl_documents(options.concepts);
  EsaIndex index = build_esa_index(concepts, options.esa);
  save_esa_index(options.output, index);
  return index;
}

std::vector<ConsistentSet> run_extract_sets(const ExtractOptions& options) {
  const TopicModelFile model = load_topic_model(options.model);
  auto index = std::make_shared<const EsaIndex>(load_esa_index(options.index));
  const EsaSimilarity sim(index, model.vocabulary);
  const auto candidates = extract_top_k(model.dict, options.k);
  auto sets = identify_consistent_sets(candidates, sim, options.delta);
  auto out = open_output(options.output);
  write_consistent_sets(out, sets, model.vocabulary);
  return sets;
}

PuzzleBank run_generate(const GenerateOptions& options) {
  auto index = std::make_shared<const EsaIndex>(load_esa_index(options.index));
  std::vector<std::string> vocabulary;
  std::vector<double> frequency;
  if (options.matrix) {
    const CorpusMatrix corpus = load_corpus_matrix(*options.matrix);
    vocabulary.assign(corpus.vocab.words().begin(), corpus.vocab.words().end());
    frequency.assign(corpus.vocab.size(), 0.0);
    const auto& m = corpus.matrix;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      auto rows = m.column_rows(j);
      auto vals = m.column_values(j);
      for (std::size_t p = 0; p < rows.size(); ++p) frequency[rows[p]] += vals[p];
    }
  } else {
    if (options.frequency_weighted) throw InputError("frequency-weighted sampling needs --matrix");
    vocabulary.assign(index->words().begin(), index->words().end());
  }
  const EsaSimilarity sim(index, vocabulary);

  std::vector<ConsistentSet> sets;
  for (const auto& record : read_consistent_sets(options.sets)) {
    ConsistentSet set{record.topic, {}, record.score, record.delta};
    for (const auto& word : record.words) {
      auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), word);
      if (it == vocabulary.end() || *it != word) {
        throw InputError("consistent-set word '" + word + "' is not in the vocabulary");
      }
      set.words.push_back(static_cast<WordId>(it - vocabulary.begin()));
    }
    sets.push_back(std::move(set));
  }

  std::vector<WordId> pool_words;
  std::vector<double> pool_weights;
  for (std::size_t w = 0; w < vocabulary.size(); ++w) {
    if (!sim.has_vector(static_cast<WordId>(w))) continue;
    pool_words.push_back(static_cast<WordId>(w));
    if (options.frequency_weighted) pool_weights.push_back(frequency[w]);
  }
  if (pool_words.empty()) throw InputError("no vocabulary word has an ESA representation");
  const CandidatePool pool(std::move(pool_words), std::move(pool_weights));

  PuzzleBank bank = generate_bank(sets, sim, pool, options.bank);
  for (const auto& entry : bank.entries) {
    const auto problems = verify_puzzle(entry, sets, sim);
    if (!problems.empty()) throw InvariantError("generated puzzle failed verification: " + problems.front());
  }

  auto out = open_output(options.output);
  write_puzzle_bank(out, bank, vocabulary, true);
  if (options.output_without_solutions) {
    auto hidden = open_output(*options.output_without_solutions);
    write_puzzle_bank(hidden, bank, vocabulary, false);
  }
  return bank;
}

bool YieldCurve::monotone() const {
  for (const auto& series : counts) {
    for (std::size_t d = 1; d < series.size(); ++d) {
      if (series[d] > series[d - 1]) return false;
    }
  }
  return true;
}

YieldCurve compute_yield_curve(const CorpusMatrix& corpus, const EsaIndex& index, std::span<const ModelKind> models,
                               const ModelSettings& settings, std::size_t k, std::span<const double> deltas) {
  if (deltas.empty()) throw InputError("the threshold grid is empty");
  for (std::size_t d = 0; d < deltas.size(); ++d) {
    if (!(deltas[d] >= 0.0 && deltas[d] < 1.0)) throw InputError("thresholds must lie in [0, 1)");
    if (d > 0 && !(deltas[d] > deltas[d - 1])) throw InputError("the threshold grid must be strictly increasing");
  }
  auto shared = std::make_shared<const EsaIndex>(index);
  const EsaSimilarity sim(shared, corpus.vocab.words());

  YieldCurve curve;
  curve.deltas.assign(deltas.begin(), deltas.end());
  for (ModelKind kind : models) {
    const TopicDictionary dict = fit_model(kind, corpus.matrix, settings);
    const auto scores = score_sets(extract_top_k(dict, k), sim);
    std::vector<std::size_t> series;
    for (double delta : deltas) {
      series.push_back(static_cast<std::size_t>(
          std::count_if(scores.begin(), scores.end(), [delta](double s) { return s > delta; })));
    }
    curve.models.emplace_back(to_string(kind));
    curve.counts.push_back(std::move(series));
  }
  return curve;
}

void write_yield_csv(std::ostream& out, const YieldCurve& curve) {
  out << "# consistent sets per model; a set counts at delta when its bottleneck score > delta\n";
  out << "delta";
  for (const auto& m : curve.models) out << ',' << m;
  out << '\n';
  for (std::size_t d = 0; d < curve.deltas.size(); ++d) {
    out << detail::format_double(curve.deltas[d]);
    for (const auto& series : curve.counts) out << ',' << series[d];
    out << '\n';
  }
}

YieldCurve run_eval_yield(const EvalYieldOptions& options) {
  const CorpusMatrix corpus = load_corpus_matrix(options.matrix);
  const EsaIndex index = load_esa_index(options.index);
  const std::vector<double> deltas = options.deltas.empty() ? delta_grid(0.05, 0.5) : options.deltas;
  YieldCurve curve = compute_yield_curve(corpus, index, options.models, options.settings, options.k, deltas);
  auto out = open_output(options.output);
  write_yield_csv(out, curve);
  if (!curve.monotone()) throw InvariantError("consistent-set counts increase along the threshold grid");
  return curve;
}

std::vector<double> delta_grid(double step, double last) {
  if (!(step > 0.0) || !(last >= 0.0)) throw InputError("threshold grid needs step > 0 and last >= 0");
  std::vector<double> grid;
  const auto n = static_cast<std::size_t>(std::floor(last / step + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) {
    grid.push_back(std::round(static_cast<double>(i) * step * 1e12) / 1e12);
  }
  return grid;
}

}  // namespace wordpuzzle
