#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cli.h"
#include "doctest.h"
#include "support/fixtures.h"
#include "unirank/report.h"

namespace fs = std::filesystem;
using unirank::Json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = unirank::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string &s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

// Scratch directory holding the ingested mini corpus.
struct Workdir {
  fs::path root;

  Workdir() {
    root = fs::temp_directory_path() / ("unirank_cli_" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);
    auto mini = fixtures::mini_dir();
    for (auto [split, file] : {std::pair{"train", "questions.train.tsv"},
                               std::pair{"dev", "questions.dev.tsv"}}) {
      auto r = run({"ingest", "--tables", (mini / "tables").string(), "--questions",
                    (mini / file).string(), "--split", split, "--out",
                    (root / (std::string(split) + ".json")).string()});
      REQUIRE(r.code == 0);
    }
  }
  ~Workdir() { fs::remove_all(root); }

  std::string train() const { return (root / "train.json").string(); }
  std::string dev() const { return (root / "dev.json").string(); }
  std::string path(const std::string &name) const { return (root / name).string(); }
};

}  // namespace

TEST_CASE("ingest writes a corpus and manifest") {
  Workdir w;
  auto corpus = unirank::load_corpus(w.train());
  CHECK(corpus.facts.size() == 24);
  CHECK(corpus.questions.size() == 8);
  auto m = Json::parse(slurp(w.train() + ".manifest.json"));
  CHECK(m["warnings"] == 0);
  CHECK(m["dangling_uids"] == 0);
  CHECK(m["facts"] == 24);
  CHECK(m["command"] == "ingest");
}

TEST_CASE("ingest reports a missing questions file as a usage error") {
  Workdir w;
  auto r = run({"ingest", "--tables", (fixtures::mini_dir() / "tables").string(), "--questions",
                "/no/such/questions.tsv", "--split", "dev", "--out", w.path("x.json")});
  CHECK(r.code == 2);
  CHECK(r.err.find("/no/such/questions.tsv") != std::string::npos);
  CHECK_FALSE(fs::exists(w.path("x.json")));
}

TEST_CASE("ingest counts a dangling explanation uid") {
  Workdir w;
  {
    std::ofstream q(w.path("dangling.tsv"));
    q << "QuestionID\tquestion\tAnswerKey\texplanation\n"
      << "Z1\tWhich force produces heat? (A) friction (B) gravity\tA\tk02|CENTRAL zz99|GROUNDING\n";
  }
  auto r = run({"ingest", "--tables", (fixtures::mini_dir() / "tables").string(), "--questions",
                w.path("dangling.tsv"), "--split", "train", "--out", w.path("d.json")});
  REQUIRE(r.code == 0);
  auto m = Json::parse(slurp(w.path("d.json") + ".manifest.json"));
  CHECK(m["warnings"] == 1);
  CHECK(m["dangling_uids"] == 1);
  CHECK(r.err.find("zz99") != std::string::npos);
}

TEST_CASE("usage errors exit with code 2") {
  Workdir w;
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"rank", "--train", w.train(), "--queries", w.dev(), "--out-dir", w.path("r"),
             "--qids", "NOPE"})
            .code == 2);
  CHECK(run({"rank", "--train", w.train(), "--queries", w.dev(), "--out-dir", w.path("r"),
             "--lambda1", "1.5"})
            .code == 2);
  CHECK(run({"rank", "--train", w.path("missing.json"), "--queries", w.dev(), "--out-dir",
             w.path("r")})
            .code == 2);
  CHECK(run({"--version"}).code == 0);
}

TEST_CASE("lambda1 of one ranks exactly like the relevance-only model") {
  Workdir w;
  auto a = run({"rank", "--train", w.train(), "--queries", w.dev(), "--out-dir", w.path("a"),
                "--lambda1", "1.0", "--full"});
  auto b = run({"rank", "--train", w.train(), "--queries", w.dev(), "--out-dir", w.path("b"),
                "--model", "rs", "--full"});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(slurp(w.path("a/submission.tsv")) == slurp(w.path("b/submission.tsv")));
  CHECK(slurp(w.path("a/ranking.tsv")) == slurp(w.path("b/ranking.tsv")));
  auto rows = lines(slurp(w.path("a/ranking.tsv")));
  CHECK(rows.size() == 1 + 3 * 24);
  CHECK(rows[0] == "qid\trank\tfact_uid\tcombined\trs\tus");
  auto m = Json::parse(slurp(w.path("a/manifest.json")));
  CHECK(m.contains("timings"));
}

TEST_CASE("evaluation output is reproducible") {
  Workdir w;
  for (const char *dir : {"e1", "e2"}) {
    auto r = run({"eval", "--train", w.train(), "--queries", w.dev(), "--out-dir", w.path(dir),
                  "--workers", dir[1] == '1' ? "1" : "4"});
    REQUIRE(r.code == 0);
  }
  CHECK(slurp(w.path("e1/report.json")) == slurp(w.path("e2/report.json")));
  CHECK(slurp(w.path("e1/figures/map_by_length.csv")) ==
        slurp(w.path("e2/figures/map_by_length.csv")));
  auto report = Json::parse(slurp(w.path("e1/report.json")));
  CHECK(report.dump().find("timing") == std::string::npos);
}

TEST_CASE("scoring a written submission matches in-process evaluation") {
  Workdir w;
  REQUIRE(run({"rank", "--train", w.train(), "--queries", w.dev(), "--out-dir", w.path("r"),
               "--full"})
              .code == 0);
  REQUIRE(run({"eval", "--train", w.train(), "--queries", w.dev(), "--out-dir", w.path("fused")})
              .code == 0);
  REQUIRE(run({"eval", "--train", w.train(), "--queries", w.dev(), "--out-dir", w.path("sub"),
               "--submission", w.path("r/submission.tsv")})
              .code == 0);
  auto fused = Json::parse(slurp(w.path("fused/report.json")));
  auto sub = Json::parse(slurp(w.path("sub/report.json")));
  double a = fused["models"][0]["report"]["overall_map"];
  double b = sub["models"][0]["report"]["overall_map"];
  CHECK(std::abs(a - b) <= 1e-12);
}

TEST_CASE("ablation and k sweep figures") {
  Workdir w;
  auto r = run({"eval", "--train", w.train(), "--queries", w.dev(), "--out-dir", w.path("ab"),
                "--ablate", "--sweep-k", "1,2,5"});
  REQUIRE(r.code == 0);
  auto report = Json::parse(slurp(w.path("ab/report.json")));
  REQUIRE(report["models"].size() == 8);
  CHECK(report["models"][0]["name"] == "RS TF-IDF");
  CHECK(report["models"][7]["name"] == "RS BM25 + US BM25");
  auto sweep = lines(slurp(w.path("ab/figures/knn_sweep.csv")));
  REQUIRE(sweep.size() == 4);
  CHECK(sweep[0] == "k,map");
  CHECK(sweep[1].rfind("1,", 0) == 0);
  auto pk = lines(slurp(w.path("ab/figures/precision_at_k.csv")));
  CHECK(pk[0] == "k,precision,model");
  CHECK(pk.size() == 1 + 8 * 12);

  auto s = run({"sweep", "--train", w.train(), "--queries", w.dev(), "--out-dir", w.path("sw"),
                "--k-values", "1,2,5"});
  REQUIRE(s.code == 0);
  CHECK(slurp(w.path("sw/knn_sweep.csv")) == slurp(w.path("ab/figures/knn_sweep.csv")));
}

TEST_CASE("export-qa writes one record per candidate answer") {
  Workdir w;
  auto r = run({"export-qa", "--train", w.train(), "--queries", w.dev(), "--out",
                w.path("qa.jsonl"), "--top-k", "3"});
  REQUIRE(r.code == 0);
  auto records = lines(slurp(w.path("qa.jsonl")));
  REQUIRE(records.size() == 3 * 4);
  std::size_t correct = 0;
  for (const auto &line : records) {
    auto j = Json::parse(line);
    CHECK(j["explanation"].size() == 3);
    CHECK(j["fact_uids"].size() == 3);
    if (j["is_correct"].get<bool>()) ++correct;
  }
  CHECK(correct == 3);
  auto first = Json::parse(records[0]);
  CHECK(first["qid"] == "D01");
  CHECK(first["label"] == "A");
  CHECK(run({"export-qa", "--train", w.train(), "--queries", w.dev(), "--out", w.path("x.jsonl"),
             "--top-k", "0"})
            .code == 2);
}

TEST_CASE("index persists statistics") {
  Workdir w;
  auto r = run({"index", "--train", w.train(), "--scheme", "bm25", "--out", w.path("idx.json")});
  REQUIRE(r.code == 0);
  auto idx = unirank::load_index(w.path("idx.json"));
  CHECK(idx.fact_uids.size() == 24);
  CHECK(idx.scheme == unirank::WeightingScheme::bm25());
}
