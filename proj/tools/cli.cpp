#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wordpuzzle/errors.hpp"
#include "wordpuzzle/pipeline.hpp"
#include "wordpuzzle/synthetic.hpp"

namespace wordpuzzle::cli {

namespace {

using nlohmann::json;

// JSON config file. Top-level objects named after a subcommand hold that
// subcommand's options; top-level scalars and arrays apply to every
// subcommand that has an option of that name.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(std::vector<std::string> sections) : sections_(std::move(sections)) {}

  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    return dump(app, default_also).dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw CLI::ConversionError("config file must hold a JSON object");

    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : doc.items()) {
      if (value.is_object()) {
        for (const auto& [name, v] : value.items()) items.push_back({{key}, name, inputs(key + "." + name, v)});
      } else {
        for (const auto& section : sections_) items.push_back({{section}, key, inputs(key, value)});
      }
    }
    return items;
  }

 private:
  static std::vector<std::string> inputs(const std::string& name, const json& v) {
    if (v.is_array()) {
      std::vector<std::string> out;
      for (const auto& e : v) out.push_back(scalar(name, e));
      return out;
    }
    return {scalar(name, v)};
  }

  static std::string scalar(const std::string& name, const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw CLI::ConversionError("config entry '" + name + "' must be a string, number, boolean or array of those");
  }

  static json dump(const CLI::App* app, bool default_also) {
    json out = json::object();
    for (const CLI::Option* opt : app->get_options()) {
      if (!opt->get_configurable() || opt->get_lnames().empty()) continue;
      const auto& name = opt->get_lnames().front();
      if (opt->count() > 0) {
        const auto& r = opt->results();
        out[name] = r.size() == 1 ? json(r.front()) : json(r);
      } else if (default_also && !opt->get_default_str().empty()) {
        out[name] = opt->get_default_str();
      }
    }
    for (const CLI::App* sub : app->get_subcommands({})) {
      json nested = dump(sub, default_also);
      if (!nested.empty()) out[sub->get_name()] = std::move(nested);
    }
    return out;
  }

  std::vector<std::string> sections_;
};

struct TokenizerFlags {
  std::size_t min_length = 2;
  std::string pattern = "[A-Za-z]+";
  bool no_stopwords = false;
  std::string stopwords_file;

  void add(CLI::App* cmd) {
    cmd->add_option("--min-length", min_length, "Shortest token kept")->capture_default_str();
    cmd->add_option("--pattern", pattern, "Token regex (ECMAScript)")->capture_default_str();
    cmd->add_flag("--no-stopwords", no_stopwords, "Keep stopwords");
    cmd->add_option("--stopwords", stopwords_file, "Stopword file, one word per line (replaces the built-in list)")
        ->check(CLI::ExistingFile);
  }

  TokenizerConfig config() const {
    TokenizerConfig c;
    c.min_length = min_length;
    c.pattern = pattern;
    if (no_stopwords) {
      c.stopwords.clear();
    } else if (!stopwords_file.empty()) {
      c.stopwords.clear();
      std::ifstream in(stopwords_file);
      for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) c.stopwords.push_back(line);
      }
    }
    return c;
  }
};

struct ModelFlags {
  ModelSettings s;
  std::string penalty = "l1";

  void add(CLI::App* cmd) {
    cmd->add_option("--topics", s.topics, "Number of topics K")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--power-iterations", s.lsa.power_iterations, "LSA power iterations")->capture_default_str();
    cmd->add_option("--oversampling", s.lsa.oversampling, "LSA oversampling")->capture_default_str();
    cmd->add_option("--alpha", s.lda.alpha, "LDA document-topic prior")->capture_default_str();
    cmd->add_option("--beta", s.lda.beta, "LDA topic-word prior")->capture_default_str();
    cmd->add_option("--iterations", s.lda.iterations, "LDA Gibbs sweeps")->capture_default_str();
    cmd->add_option("--averaging-fraction", s.lda.averaging_fraction, "LDA fraction of final sweeps averaged")
        ->capture_default_str();
    cmd->add_option("--kappa", s.dictlearn.kappa, "Dictionary learning regularization weight")->capture_default_str();
    cmd->add_option("--rho", s.dictlearn.rho, "Dictionary learning forgetting exponent")->capture_default_str();
    cmd->add_option("--penalty", penalty, "Sparse-coding penalty")
        ->check(CLI::IsMember({"l1", "group-l2"}))
        ->capture_default_str();
    cmd->add_option("--group-size", s.dictlearn.regularizer.group_size, "Block size for group-l2")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--epochs", s.dictlearn.epochs, "Dictionary learning passes")->capture_default_str();
  }

  ModelSettings settings(std::uint64_t seed) const {
    ModelSettings out = s;
    out.seed = seed;
    out.dictlearn.regularizer.penalty = penalty_from_string(penalty);
    return out;
  }
};

void print_bank_summary(std::ostream& err, const PuzzleBank& bank, std::span<const PuzzleKind> kinds) {
  for (PuzzleKind kind : kinds) {
    err << to_string(kind) << ": " << bank.summary.count(kind, GenStatus::ok) << " ok, "
        << bank.summary.count(kind, GenStatus::exhausted) << " exhausted, "
        << bank.summary.count(kind, GenStatus::rejected) << " rejected\n";
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Topic-dictionary word puzzle generator", "wordpuzzle"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  auto add_seed = [&seed](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Master random seed")->capture_default_str();
  };

  // ingest
  IngestOptions ingest;
  TokenizerFlags ingest_tok;
  auto* c_ingest = app.add_subcommand("ingest", "Tokenize a JSONL corpus into a document-term matrix");
  c_ingest->add_option("--corpus", ingest.corpus, "JSONL corpus with id and text fields")
      ->required()
      ->check(CLI::ExistingFile);
  c_ingest->add_option("--output", ingest.output, "Matrix file to write")->required();
  c_ingest->add_option("--min-df", ingest.filter.min_df, "Minimum document frequency")->capture_default_str();
  c_ingest->add_option("--max-df-ratio", ingest.filter.max_df_ratio, "Maximum document frequency as a fraction of M")
      ->capture_default_str();
  c_ingest->add_flag("--tfidf", ingest.tfidf, "Store tf-idf weights instead of raw counts");
  ingest_tok.add(c_ingest);
  add_seed(c_ingest);

  // train
  TrainOptions train;
  std::string train_model;
  ModelFlags train_flags;
  auto* c_train = app.add_subcommand("train", "Fit a topic model to a document-term matrix");
  c_train->add_option("--model", train_model, "lsa, lda or dictlearn")
      ->required()
      ->check(CLI::IsMember({"lsa", "lda", "dictlearn"}));
  c_train->add_option("--matrix", train.matrix, "Matrix written by ingest")->required()->check(CLI::ExistingFile);
  c_train->add_option("--output", train.output, "Model file to write")->required();
  train_flags.add(c_train);
  add_seed(c_train);

  // index
  IndexOptions index;
  TokenizerFlags index_tok;
  auto* c_index = app.add_subcommand("index", "Build an ESA index from a JSONL concept corpus");
  c_index->add_option("--concepts", index.concepts, "JSONL concept documents")->required()->check(CLI::ExistingFile);
  c_index->add_option("--output", index.output, "Index file to write")->required();
  c_index->add_option("--truncation", index.esa.truncation, "Concepts kept per word")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  index_tok.add(c_index);
  add_seed(c_index);

  // extract-sets
  ExtractOptions extract;
  auto* c_extract = app.add_subcommand("extract-sets", "Keep the top-k topic word sets that pass the bottleneck test");
  c_extract->add_option("--model", extract.model, "Model written by train")->required()->check(CLI::ExistingFile);
  c_extract->add_option("--index", extract.index, "Index written by index")->required()->check(CLI::ExistingFile);
  c_extract->add_option("--output", extract.output, "JSONL consistent sets to write")->required();
  c_extract->add_option("-k,--k", extract.k, "Words per set")->check(CLI::PositiveNumber)->capture_default_str();
  c_extract->add_option("--delta", extract.delta, "Keep sets whose score is > delta")->capture_default_str();
  add_seed(c_extract);

  // generate
  GenerateOptions generate;
  std::string matrix_path, hidden_path, band_name = "beginner";
  std::optional<double> eta1, eta2;
  std::vector<std::string> kinds{"odd-one-out"};
  auto* c_generate = app.add_subcommand("generate", "Generate a puzzle bank from consistent sets");
  c_generate->add_option("--sets", generate.sets, "JSONL written by extract-sets")->required()->check(CLI::ExistingFile);
  c_generate->add_option("--index", generate.index, "Index written by index")->required()->check(CLI::ExistingFile);
  c_generate->add_option("--matrix", matrix_path, "Draw mixed-in words from this corpus vocabulary")
      ->check(CLI::ExistingFile);
  c_generate->add_option("--output", generate.output, "Puzzle bank with solutions")->required();
  c_generate->add_option("--no-solutions", hidden_path, "Also write the bank without solutions to this file");
  c_generate->add_option("--band", band_name, "beginner or intermediate")->capture_default_str();
  c_generate->add_option("--eta1", eta1, "Lower relatedness bound (overrides the band)");
  c_generate->add_option("--eta2", eta2, "Upper relatedness bound (overrides the band)");
  c_generate->add_option("--kinds", kinds, "odd-one-out, choose-related, separate-topics")
      ->delimiter(',')
      ->capture_default_str();
  c_generate->add_option("--distractors", generate.bank.n_distractors, "Distractors per choose-related puzzle")
      ->capture_default_str();
  c_generate->add_option("--eta2-cross", generate.bank.eta2_cross,
                         "Cross-set relatedness cap for separate-topics (default: the band's eta2)");
  c_generate->add_option("--max-attempts", generate.bank.max_attempts, "Draws per puzzle (0: 10 sqrt(N), at most 5000)")
      ->capture_default_str();
  c_generate->add_option("--partner-tries", generate.bank.max_partner_tries, "Partner sets tried for separate-topics")
      ->capture_default_str();
  c_generate->add_flag("--frequency-weighted", generate.frequency_weighted,
                       "Draw mixed-in words by corpus frequency (needs --matrix)");
  add_seed(c_generate);

  // eval-yield
  EvalYieldOptions yield;
  ModelFlags yield_flags;
  std::vector<std::string> yield_models{"lsa", "lda", "dictlearn"};
  double delta_step = 0.05, delta_max = 0.5;
  auto* c_yield = app.add_subcommand("eval-yield", "Count consistent sets per model over a delta grid (CSV)");
  c_yield->add_option("--matrix", yield.matrix, "Matrix written by ingest")->required()->check(CLI::ExistingFile);
  c_yield->add_option("--index", yield.index, "Index written by index")->required()->check(CLI::ExistingFile);
  c_yield->add_option("--output", yield.output, "CSV file to write")->required();
  c_yield->add_option("--models", yield_models, "Models to compare")
      ->delimiter(',')
      ->check(CLI::IsMember({"lsa", "lda", "dictlearn"}))
      ->capture_default_str();
  c_yield->add_option("-k,--k", yield.k, "Words per set")->check(CLI::PositiveNumber)->capture_default_str();
  c_yield->add_option("--deltas", yield.deltas, "Explicit strictly increasing delta grid")->delimiter(',');
  c_yield->add_option("--delta-step", delta_step, "Grid step when --deltas is absent")->capture_default_str();
  c_yield->add_option("--delta-max", delta_max, "Last grid value when --deltas is absent")->capture_default_str();
  yield_flags.add(c_yield);
  add_seed(c_yield);

  // synth
  PlantedCorpusConfig planted;
  ConceptCorpusConfig concepts_cfg;
  std::string synth_corpus, synth_concepts;
  auto* c_synth = app.add_subcommand("synth", "Write a planted-topic corpus and a matching concept corpus");
  c_synth->add_option("--corpus", synth_corpus, "JSONL corpus to write")->required();
  c_synth->add_option("--concepts", synth_concepts, "JSONL concept corpus to write")->required();
  c_synth->add_option("--topics", planted.topics, "Planted topics")->capture_default_str();
  c_synth->add_option("--words-per-topic", planted.words_per_topic, "Words per planted topic")->capture_default_str();
  c_synth->add_option("--documents", planted.documents, "Corpus documents")->capture_default_str();
  c_synth->add_option("--length", planted.document_length, "Tokens per document")->capture_default_str();
  add_seed(c_synth);

  std::vector<std::string> sections;
  for (const auto* sub : app.get_subcommands({})) sections.push_back(sub->get_name());
  app.config_formatter(std::make_shared<JsonConfig>(sections));
  app.set_config("--config", "", "JSON config file; command-line flags take precedence");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }

  try {
    if (*c_ingest) {
      ingest.tokenizer = ingest_tok.config();
      const auto report = run_ingest(ingest);
      for (const auto& id : report.dropped_ids) err << "warning: document '" << id << "' has no vocabulary words, dropped\n";
      err << "ingested " << report.corpus.matrix.cols() << " of " << report.documents << " documents, "
          << report.vocabulary << " words\n";
    } else if (*c_train) {
      train.model = model_kind_from_string(train_model);
      train.settings = train_flags.settings(seed);
      const auto dict = run_train(train);
      err << "trained " << train_model << ": " << dict.vocabulary_size() << " words x " << dict.topic_count()
          << " topics\n";
    } else if (*c_index) {
      index.esa.tokenizer = index_tok.config();
      const auto built = run_index(index);
      err << "indexed " << built.size() << " words over " << built.concept_count() << " concepts\n";
    } else if (*c_extract) {
      const auto sets = run_extract_sets(extract);
      err << sets.size() << " consistent sets at delta " << extract.delta << "\n";
    } else if (*c_generate) {
      if (!matrix_path.empty()) generate.matrix = matrix_path;
      if (!hidden_path.empty()) generate.output_without_solutions = hidden_path;
      DifficultyBand band = band_name == "custom" ? DifficultyBand{"custom", 0.0, 1.0} : band_from_name(band_name);
      if (eta1 || eta2) {
        band.name = "custom";
        if (eta1) band.eta1 = *eta1;
        if (eta2) band.eta2 = *eta2;
      }
      band.validate();
      generate.bank.band = band;
      generate.bank.kinds.clear();
      for (const auto& k : kinds) generate.bank.kinds.push_back(puzzle_kind_from_string(k));
      generate.bank.seed = seed;
      const auto bank = run_generate(generate);
      print_bank_summary(err, bank, generate.bank.kinds);
    } else if (*c_yield) {
      yield.models.clear();
      for (const auto& m : yield_models) yield.models.push_back(model_kind_from_string(m));
      yield.settings = yield_flags.settings(seed);
      if (yield.deltas.empty()) yield.deltas = delta_grid(delta_step, delta_max);
      const auto curve = run_eval_yield(yield);
      write_yield_csv(out, curve);
    } else if (*c_synth) {
      planted.seed = seed;
      concepts_cfg.seed = derive_seed(seed, 1);
      const auto corpus = generate_planted_corpus(planted);
      const auto concepts = generate_concept_corpus(corpus, concepts_cfg);
      std::ofstream a(synth_corpus), b(synth_concepts);
      if (!a || !b) throw InputError("cannot write the synthetic corpora");
      write_jsonl_documents(a, corpus.documents);
      write_jsonl_documents(b, concepts);
      err << "wrote " << corpus.documents.size() << " documents and " << concepts.size() << " concepts\n";
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const InvariantError& e) {
    err << "invariant violated: " << e.what() << "\n";
    return kInvariantError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInvariantError;
  }
  return kSuccess;
}

}  // namespace wordpuzzle::cli
