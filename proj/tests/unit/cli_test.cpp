#include <gtest/gtest.h>

#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "support.hpp"
#include "wordpuzzle/pipeline.hpp"
#include "wordpuzzle/synthetic.hpp"

using namespace wordpuzzle;
using testing_support::slurp;
using testing_support::TempDir;
using testing_support::write_file;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run wp(std::vector<std::string> args) {
  args.insert(args.begin(), "wordpuzzle");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<nlohmann::json> jsonl(const std::filesystem::path& p) {
  std::vector<nlohmann::json> out;
  std::istringstream in(slurp(p));
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  return out;
}

// Planted corpus, concept corpus, matrix and index in one directory.
class Workspace {
 public:
  Workspace() {
    EXPECT_EQ(wp({"synth", "--corpus", p("corpus.jsonl"), "--concepts", p("concepts.jsonl"), "--seed", "3"}).code, 0);
    EXPECT_EQ(wp({"ingest", "--corpus", p("corpus.jsonl"), "--output", p("matrix.json")}).code, 0);
    EXPECT_EQ(wp({"index", "--concepts", p("concepts.jsonl"), "--output", p("index.json")}).code, 0);
  }
  std::string p(const std::string& name) const { return (dir / name).string(); }

  TempDir dir;
};

}  // namespace

TEST(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(wp({"--help"}).code, 0);
  EXPECT_EQ(wp({"train", "--help"}).code, 0);
  EXPECT_EQ(wp({}).code, 2);
  EXPECT_EQ(wp({"frobnicate"}).code, 2);
  EXPECT_EQ(wp({"ingest", "--corpus", "/nonexistent/file.jsonl", "--output", "x"}).code, 2);
  EXPECT_EQ(wp({"train", "--model", "nmf", "--matrix", "x", "--output", "y"}).code, 2);
}

TEST(Ingest, ValidCorpus) {
  TempDir dir;
  write_file(dir / "c.jsonl",
             "{\"id\":\"a\",\"text\":\"Harry potter wizard\"}\n"
             "{\"id\":\"b\",\"text\":\"wizard wand\"}\n"
             "{\"id\":\"c\",\"text\":\"potter wand\"}\n");
  const auto r = wp({"ingest", "--corpus", (dir / "c.jsonl").string(), "--output", (dir / "m.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = load_corpus_matrix(dir / "m.json");
  EXPECT_EQ(m.matrix.cols(), 3u);
  EXPECT_EQ(m.vocab.size(), 4u);
}

TEST(Ingest, MalformedLineNamedAndEmptyFileRejected) {
  TempDir dir;
  write_file(dir / "bad.jsonl", "{\"id\":\"a\",\"text\":\"x y\"}\n{\"id\":\"b\"}\n");
  const auto r = wp({"ingest", "--corpus", (dir / "bad.jsonl").string(), "--output", (dir / "m.json").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
  write_file(dir / "empty.jsonl", "");
  EXPECT_EQ(wp({"ingest", "--corpus", (dir / "empty.jsonl").string(), "--output", (dir / "m.json").string()}).code,
            2);
}

TEST(Ingest, DroppedDocumentsAreReported) {
  TempDir dir;
  write_file(dir / "c.jsonl",
             "{\"id\":\"a\",\"text\":\"alpha beta\"}\n{\"id\":\"b\",\"text\":\"the of and\"}\n");
  const auto r = wp({"ingest", "--corpus", (dir / "c.jsonl").string(), "--output", (dir / "m.json").string()});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("'b'"), std::string::npos) << r.err;
  EXPECT_EQ(load_corpus_matrix(dir / "m.json").matrix.cols(), 1u);
}

TEST(Train, DeterministicAndValidated) {
  Workspace ws;
  for (const char* model : {"lsa", "lda", "dictlearn"}) {
    const std::vector<std::string> base{"train", "--model", model, "--matrix", ws.p("matrix.json"), "--topics", "8",
                                        "--iterations", "20", "--epochs", "2", "--seed", "5"};
    auto a = base, b = base;
    a.insert(a.end(), {"--output", ws.p("a.json")});
    b.insert(b.end(), {"--output", ws.p("b.json")});
    ASSERT_EQ(wp(a).code, 0) << model;
    ASSERT_EQ(wp(b).code, 0) << model;
    EXPECT_EQ(slurp(ws.dir / "a.json"), slurp(ws.dir / "b.json")) << model;
  }
  EXPECT_EQ(wp({"train", "--model", "lsa", "--matrix", ws.p("matrix.json"), "--output", ws.p("x.json"), "--topics",
                 "100000"})
                .code,
            2);
  ASSERT_EQ(wp({"ingest", "--corpus", ws.p("corpus.jsonl"), "--output", ws.p("tfidf.json"), "--tfidf"}).code, 0);
  const auto r = wp({"train", "--model", "lda", "--matrix", ws.p("tfidf.json"), "--output", ws.p("x.json"),
                      "--topics", "4"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("raw-count"), std::string::npos) << r.err;
}

TEST(ExtractSets, DeltaRecordedAndDefaults) {
  Workspace ws;
  ASSERT_EQ(wp({"train", "--model", "lda", "--matrix", ws.p("matrix.json"), "--output", ws.p("lda.json"),
                 "--topics", "8", "--seed", "1"})
                .code,
            0);
  ASSERT_EQ(wp({"extract-sets", "--model", ws.p("lda.json"), "--index", ws.p("index.json"), "--output",
                 ws.p("sets.jsonl")})
                .code,
            0);
  const auto sets = jsonl(ws.dir / "sets.jsonl");
  EXPECT_FALSE(sets.empty());
  for (const auto& s : sets) {
    EXPECT_EQ(s["delta"], 0.1);
    EXPECT_EQ(s["words"].size(), 4u);
    EXPECT_GT(s["score"].get<double>(), 0.1);
  }
  ASSERT_EQ(wp({"extract-sets", "--model", ws.p("lda.json"), "--index", ws.p("index.json"), "--output",
                 ws.p("sets3.jsonl"), "--delta", "0.25", "-k", "3"})
                .code,
            0);
  for (const auto& s : jsonl(ws.dir / "sets3.jsonl")) {
    EXPECT_EQ(s["delta"], 0.25);
    EXPECT_EQ(s["words"].size(), 3u);
  }
  EXPECT_EQ(wp({"extract-sets", "--model", ws.p("lda.json"), "--index", ws.p("index.json"), "--output",
                 ws.p("x.jsonl"), "--delta", "1.0"})
                .code,
            2);
}

TEST(ExtractSets, NearMaximalThresholdOnRandomVocabulary) {
  TempDir dir;
  std::ofstream(dir / "c.jsonl") << [] {
    std::ostringstream s;
    write_jsonl_documents(s, generate_random_corpus({60, 200, 40, 1}));
    return s.str();
  }();
  std::ofstream(dir / "k.jsonl") << [] {
    std::ostringstream s;
    write_jsonl_documents(s, generate_random_corpus({60, 300, 30, 2}));
    return s.str();
  }();
  auto p = [&](const char* n) { return (dir / n).string(); };
  ASSERT_EQ(wp({"ingest", "--corpus", p("c.jsonl"), "--output", p("m.json")}).code, 0);
  ASSERT_EQ(wp({"index", "--concepts", p("k.jsonl"), "--output", p("i.json")}).code, 0);
  ASSERT_EQ(wp({"train", "--model", "lda", "--matrix", p("m.json"), "--output", p("t.json"), "--topics", "10",
                 "--iterations", "30"})
                .code,
            0);
  ASSERT_EQ(wp({"extract-sets", "--model", p("t.json"), "--index", p("i.json"), "--output", p("s.jsonl"),
                 "--delta", "0.99"})
                .code,
            0);
  EXPECT_TRUE(jsonl(dir / "s.jsonl").empty());
}

TEST(Generate, ByteIdenticalBanksAndHiddenSolutions) {
  Workspace ws;
  ASSERT_EQ(wp({"train", "--model", "lda", "--matrix", ws.p("matrix.json"), "--output", ws.p("lda.json"),
                 "--topics", "8"})
                .code,
            0);
  ASSERT_EQ(wp({"extract-sets", "--model", ws.p("lda.json"), "--index", ws.p("index.json"), "--output",
                 ws.p("sets.jsonl")})
                .code,
            0);
  const std::vector<std::string> base{"generate", "--sets", ws.p("sets.jsonl"), "--index", ws.p("index.json"),
                                      "--kinds", "odd-one-out,choose-related,separate-topics", "--seed", "42"};
  auto a = base, b = base;
  a.insert(a.end(), {"--output", ws.p("a.jsonl"), "--no-solutions", ws.p("a-hidden.jsonl")});
  b.insert(b.end(), {"--output", ws.p("b.jsonl")});
  const auto r = wp(a);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("exhausted"), std::string::npos);  // per-kind summary
  ASSERT_EQ(wp(b).code, 0);
  EXPECT_EQ(slurp(ws.dir / "a.jsonl"), slurp(ws.dir / "b.jsonl"));
  const auto full = jsonl(ws.dir / "a.jsonl");
  const auto hidden = jsonl(ws.dir / "a-hidden.jsonl");
  ASSERT_EQ(full.size(), hidden.size());
  ASSERT_FALSE(full.empty());
  for (std::size_t i = 0; i < full.size(); ++i) {
    EXPECT_TRUE(full[i].contains("solution"));
    EXPECT_FALSE(hidden[i].contains("solution"));
    EXPECT_EQ(full[i]["band"]["name"], full[i]["kind"] == "separate-topics" ? "cross-cap" : "beginner");
  }

  auto custom = base;
  custom.insert(custom.end(), {"--output", ws.p("c.jsonl"), "--eta1", "0.3", "--eta2", "0.2"});
  EXPECT_EQ(wp(custom).code, 2);
  auto weighted = base;
  weighted.insert(weighted.end(), {"--output", ws.p("w.jsonl"), "--frequency-weighted"});
  EXPECT_EQ(wp(weighted).code, 2);  // needs --matrix
  weighted.insert(weighted.end(), {"--matrix", ws.p("matrix.json")});
  EXPECT_EQ(wp(weighted).code, 0);
}

TEST(EvalYield, MonotoneCsvAndAgreesWithExtractSets) {
  Workspace ws;
  const auto r = wp({"eval-yield", "--matrix", ws.p("matrix.json"), "--index", ws.p("index.json"), "--output",
                      ws.p("y.csv"), "--topics", "8", "--iterations", "40", "--epochs", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, slurp(ws.dir / "y.csv"));
  std::istringstream csv(r.out);
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line.rfind("# ", 0), 0u);
  std::getline(csv, line);
  EXPECT_EQ(line, "delta,lsa,lda,dictlearn");
  std::vector<std::vector<int>> rows;
  while (std::getline(csv, line)) {
    std::istringstream cells(line);
    std::string cell;
    std::vector<int> row;
    std::getline(cells, cell, ',');
    while (std::getline(cells, cell, ',')) row.push_back(std::stoi(cell));
    rows.push_back(row);
  }
  ASSERT_EQ(rows.size(), 11u);
  for (std::size_t d = 1; d < rows.size(); ++d)
    for (std::size_t m = 0; m < 3; ++m) EXPECT_LE(rows[d][m], rows[d - 1][m]);

  // Single model, single delta: same count as extract-sets.
  ASSERT_EQ(wp({"eval-yield", "--matrix", ws.p("matrix.json"), "--index", ws.p("index.json"), "--output",
                 ws.p("one.csv"), "--models", "lda", "--deltas", "0.1", "--topics", "8", "--seed", "9"})
                .code,
            0);
  ASSERT_EQ(wp({"train", "--model", "lda", "--matrix", ws.p("matrix.json"), "--output", ws.p("lda.json"),
                 "--topics", "8", "--seed", "9"})
                .code,
            0);
  ASSERT_EQ(wp({"extract-sets", "--model", ws.p("lda.json"), "--index", ws.p("index.json"), "--output",
                 ws.p("s.jsonl"), "--delta", "0.1"})
                .code,
            0);
  const auto one = slurp(ws.dir / "one.csv");
  EXPECT_NE(one.find("\n0.1," + std::to_string(jsonl(ws.dir / "s.jsonl").size()) + "\n"), std::string::npos) << one;

  EXPECT_EQ(wp({"eval-yield", "--matrix", ws.p("matrix.json"), "--index", ws.p("index.json"), "--output",
                 ws.p("bad.csv"), "--deltas", "0.2,0.1"})
                .code,
            2);
}

TEST(EvalYield, ZeroGridCountsPositiveBottlenecks) {
  Workspace ws;
  const auto corpus = load_corpus_matrix(ws.dir / "matrix.json");
  const auto index = load_esa_index(ws.dir / "index.json");
  ModelSettings settings;
  settings.topics = 8;
  const std::vector<ModelKind> models{ModelKind::lda};
  const std::vector<double> zero{0.0};
  const auto curve = compute_yield_curve(corpus, index, models, settings, 4, zero);
  const auto dict = fit_model(ModelKind::lda, corpus.matrix, settings);
  const EsaSimilarity sim(std::make_shared<const EsaIndex>(index), corpus.vocab.words());
  const auto scores = score_sets(extract_top_k(dict, 4), sim);
  EXPECT_EQ(curve.counts[0][0],
            static_cast<std::size_t>(std::count_if(scores.begin(), scores.end(), [](double s) { return s > 0; })));
}

TEST(Config, JsonFileWithFlagOverrides) {
  Workspace ws;
  write_file(ws.dir / "cfg.json",
             R"({"seed": 11, "train": {"model": "lda", "topics": 8, "iterations": 15}})");
  ASSERT_EQ(wp({"train", "--config", ws.p("cfg.json"), "--matrix", ws.p("matrix.json"), "--output",
                 ws.p("from-config.json")})
                .code,
            0);
  ASSERT_EQ(wp({"train", "--model", "lda", "--topics", "8", "--iterations", "15", "--seed", "11", "--matrix",
                 ws.p("matrix.json"), "--output", ws.p("from-flags.json")})
                .code,
            0);
  EXPECT_EQ(slurp(ws.dir / "from-config.json"), slurp(ws.dir / "from-flags.json"));

  ASSERT_EQ(wp({"train", "--config", ws.p("cfg.json"), "--topics", "5", "--matrix", ws.p("matrix.json"),
                 "--output", ws.p("override.json")})
                .code,
            0);
  EXPECT_EQ(load_topic_model(ws.dir / "override.json").dict.topic_count(), 5u);
  EXPECT_EQ(load_topic_model(ws.dir / "override.json").dict.seed, 11u);

  write_file(ws.dir / "broken.json", "{not json");
  EXPECT_EQ(wp({"train", "--config", ws.p("broken.json"), "--matrix", ws.p("matrix.json"), "--output",
                 ws.p("x.json")})
                .code,
            2);
}

TEST(DeltaGrid, Values) {
  const auto g = delta_grid(0.05, 0.5);
  ASSERT_EQ(g.size(), 11u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g[3], 0.15);
  EXPECT_EQ(g.back(), 0.5);
}
