#include "cli.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "unirank/corpus.h"
#include "unirank/eval.h"
#include "unirank/parallel.h"
#include "unirank/ranker.h"
#include "unirank/report.h"
#include "unirank/sparse.h"

#ifndef UNIRANK_VERSION
#define UNIRANK_VERSION "0.0.0"
#endif
#ifndef UNIRANK_DATA_DIR
#define UNIRANK_DATA_DIR "data"
#endif

namespace unirank::cli {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::string format_score(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<std::size_t> parse_size_list(const std::string &text, const char *what) {
  std::vector<std::size_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    char *end = nullptr;
    long long v = std::strtoll(item.c_str(), &end, 10);
    if (*end != '\0' || v <= 0) throw UsageError(std::string("bad value in ") + what + ": " + item);
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw UsageError(std::string(what) + " needs at least one value");
  return out;
}

// Flags shared by every command that ranks.
struct RankerFlags {
  std::string train;
  std::string queries;
  std::string config_file;
  double lambda1 = 0.83;
  std::size_t k = 100;
  std::string rs_scheme = "bm25";
  std::string us_scheme = "bm25";
  std::string model = "joint";
  std::string normalization = "max";
  double k1 = 1.2;
  double b = 0.75;
  std::string stopwords;
  bool no_stopwords = false;
  std::string lemmas;
  std::string fit_scope = "facts+hypotheses";
  std::size_t workers = 0;

  CLI::Option *lambda1_opt = nullptr;
  CLI::Option *k_opt = nullptr;
  CLI::Option *rs_opt = nullptr;
  CLI::Option *us_opt = nullptr;
  CLI::Option *norm_opt = nullptr;
  CLI::Option *k1_opt = nullptr;
  CLI::Option *b_opt = nullptr;
  CLI::Option *stopwords_opt = nullptr;
  CLI::Option *lemmas_opt = nullptr;
  CLI::Option *fit_opt = nullptr;
};

void add_corpus_flags(CLI::App *cmd, RankerFlags &f, bool with_queries) {
  cmd->add_option("--train", f.train,
                  "Normalized train split JSON (default: $UNIRANK_CORPUS/train.json)");
  if (with_queries)
    cmd->add_option("--queries", f.queries,
                    "Normalized split JSON to rank, or a split name resolved under "
                    "$UNIRANK_CORPUS (default: dev)");
}

void add_preprocessing_flags(CLI::App *cmd, RankerFlags &f) {
  f.stopwords_opt = cmd->add_option("--stopwords", f.stopwords, "Stopword file (one per line)");
  cmd->add_flag("--no-stopwords", f.no_stopwords, "Disable stopword removal");
  f.lemmas_opt = cmd->add_option("--lemmas", f.lemmas, "Lemma map file (surface<TAB>lemma)");
  f.fit_opt = cmd->add_option("--fit-scope", f.fit_scope,
                              "Documents for idf statistics: facts+hypotheses or facts");
}

void add_ranker_flags(CLI::App *cmd, RankerFlags &f) {
  add_corpus_flags(cmd, f, true);
  cmd->add_option("--config", f.config_file, "JSON config; explicit flags override it");
  f.lambda1_opt = cmd->add_option("--lambda1", f.lambda1, "Relevance weight in [0,1]");
  f.k_opt = cmd->add_option("--k", f.k, "Nearest training hypotheses for the unification score");
  f.rs_opt = cmd->add_option("--rs-scheme", f.rs_scheme, "tfidf or bm25");
  f.us_opt = cmd->add_option("--us-scheme", f.us_scheme, "tfidf or bm25");
  cmd->add_option("--model", f.model, "joint, rs (lambda1=1) or us (lambda1=0)")
      ->check(CLI::IsMember({"joint", "rs", "us"}));
  f.norm_opt = cmd->add_option("--normalization", f.normalization, "max or none");
  f.k1_opt = cmd->add_option("--k1", f.k1, "BM25 k1");
  f.b_opt = cmd->add_option("--b", f.b, "BM25 b");
  add_preprocessing_flags(cmd, f);
  cmd->add_option("--workers", f.workers, "Worker threads (0 = all cores)");
}

RunConfig resolve_config(const RankerFlags &f) {
  RunConfig config;
  try {
    if (!f.config_file.empty()) config = load_run_config(f.config_file);
    auto given = [](const CLI::Option *o) { return o && o->count() > 0; };
    auto &r = config.ranker;
    if (given(f.lambda1_opt)) r.lambda1 = f.lambda1;
    if (given(f.k_opt)) r.k = f.k;
    const bool bm25_params = given(f.k1_opt) || given(f.b_opt);
    auto rebuild = [&](const WeightingScheme &current, const CLI::Option *opt,
                       const std::string &name) {
      double k1 = given(f.k1_opt) ? f.k1 : (current.kind() == WeightingScheme::Kind::kBm25 ? current.k1() : 1.2);
      double b = given(f.b_opt) ? f.b : (current.kind() == WeightingScheme::Kind::kBm25 ? current.b() : 0.75);
      if (given(opt)) return WeightingScheme::parse(name, k1, b);
      if (bm25_params && current.kind() == WeightingScheme::Kind::kBm25)
        return WeightingScheme::bm25(k1, b);
      return current;
    };
    r.rs_scheme = rebuild(r.rs_scheme, f.rs_opt, f.rs_scheme);
    r.us_scheme = rebuild(r.us_scheme, f.us_opt, f.us_scheme);
    if (given(f.norm_opt)) r.normalization = parse_normalization(f.normalization);
    if (f.model == "rs") r.lambda1 = 1.0;
    if (f.model == "us") r.lambda1 = 0.0;
    auto &p = config.preprocessing;
    if (given(f.stopwords_opt)) p.stopwords_file = f.stopwords;
    if (f.no_stopwords) p.use_stopwords = false;
    if (given(f.lemmas_opt)) p.lemma_file = f.lemmas;
    if (given(f.fit_opt)) p.fit_scope = parse_fit_scope(f.fit_scope);
    r.validate();
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
  return config;
}

fs::path resolve_corpus(const std::string &value, const char *default_split) {
  const char *root = std::getenv("UNIRANK_CORPUS");
  if (value.empty()) {
    if (!root)
      throw UsageError(std::string("no corpus given: pass a path or set UNIRANK_CORPUS (") +
                       default_split + ")");
    return fs::path(root) / (std::string(default_split) + ".json");
  }
  if (fs::exists(value)) return value;
  if (root && (value == "train" || value == "dev" || value == "test"))
    return fs::path(root) / (value + ".json");
  return value;
}

// Loaded corpora plus a ranker over the train split.
struct Workspace {
  fs::path train_path;
  fs::path queries_path;
  CorpusSplit train;
  CorpusSplit queries;
  RunConfig config;
  Diagnostics diag;
  std::unique_ptr<UnificationRanker> ranker;
  Json timings = Json::object();
};

std::unique_ptr<Workspace> open_workspace(const RankerFlags &f, bool with_queries) {
  auto ws = std::make_unique<Workspace>();
  ws->config = resolve_config(f);
  auto start = Clock::now();
  ws->train_path = resolve_corpus(f.train, "train");
  ws->train = load_corpus(ws->train_path);
  if (with_queries) {
    ws->queries_path = resolve_corpus(f.queries, "dev");
    ws->queries = load_corpus(ws->queries_path);
    if (ws->queries.facts.size() != ws->train.facts.size())
      ws->diag.warn("query corpus lists " + std::to_string(ws->queries.facts.size()) +
                    " facts, train corpus " + std::to_string(ws->train.facts.size()) +
                    "; ranking uses the train corpus facts");
  }
  ws->timings["load_ms"] = elapsed_ms(start);

  start = Clock::now();
  std::vector<Question> annotated;
  for (const auto &q : ws->train.questions)
    if (q.split == Split::kTrain) annotated.push_back(q);
  TextPipeline pipeline;
  try {
    pipeline = ws->config.preprocessing.build_pipeline();
  } catch (const std::exception &e) {
    throw UsageError(e.what());
  }
  auto ekb = build_explanation_kb(annotated, &ws->train.facts, ws->diag);
  ws->ranker = std::make_unique<UnificationRanker>(ws->train.facts, std::move(ekb),
                                                   std::move(pipeline),
                                                   ws->config.preprocessing.fit_scope);
  ws->timings["index_ms"] = elapsed_ms(start);
  return ws;
}

Json manifest(const std::string &command, const Workspace &ws, const Json &outputs) {
  Json inputs = Json::object();
  if (!ws.train_path.empty()) inputs[ws.train_path.string()] = file_checksum(ws.train_path);
  if (!ws.queries_path.empty()) inputs[ws.queries_path.string()] = file_checksum(ws.queries_path);
  return Json{{"tool", "unirank"},
              {"version", UNIRANK_VERSION},
              {"command", command},
              {"config", to_json(ws.config)},
              {"inputs", std::move(inputs)},
              {"warnings", ws.diag.count()},
              {"dangling_uids", ws.diag.dangling_uids.size()},
              {"outputs", outputs},
              {"timings", ws.timings}};
}

void print_warnings(const Diagnostics &diag, std::ostream &err, std::size_t limit = 20) {
  for (std::size_t i = 0; i < diag.warnings.size() && i < limit; ++i)
    err << "warning: " << diag.warnings[i] << "\n";
  if (diag.warnings.size() > limit)
    err << "warning: ... " << diag.warnings.size() - limit << " more\n";
}

// ---------------------------------------------------------------------------

int cmd_ingest(const std::string &tables, const std::string &questions, const std::string &split,
               const std::string &out_path, const std::string &inference_map,
               std::ostream &out, std::ostream &err) {
  auto start = Clock::now();
  Split which;
  try {
    which = parse_split(split);
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
  if (!fs::is_directory(tables)) throw UsageError("tables directory not found: " + tables);
  if (!fs::is_regular_file(questions)) throw UsageError("questions file not found: " + questions);

  Diagnostics diag;
  InferenceTypeMap types;
  fs::path map_path = inference_map.empty()
                          ? fs::path(UNIRANK_DATA_DIR) / "inference_types.tsv"
                          : fs::path(inference_map);
  if (fs::exists(map_path)) {
    types = InferenceTypeMap::load(map_path);
  } else if (!inference_map.empty()) {
    throw UsageError("inference map not found: " + inference_map);
  } else {
    diag.warn("no inference type map found; every fact is 'unknown'");
  }

  CorpusSplit corpus;
  corpus.split = which;
  corpus.facts = parse_fact_tables(tables, types, diag);
  corpus.questions = parse_questions(questions, which, diag);
  for (const auto &q : corpus.questions) {
    if (!q.explanation) continue;
    for (const auto &e : q.explanation->entries) {
      if (!corpus.facts.find(e.fact_uid)) {
        diag.warn(q.qid + ": explanation cites unknown fact " + e.fact_uid);
        diag.dangling_uids.push_back(e.fact_uid);
      }
    }
  }
  save_corpus(corpus, out_path);

  Json inputs = Json::object();
  inputs[questions] = file_checksum(questions);
  inputs[map_path.string()] = file_checksum(map_path);
  Json m{{"tool", "unirank"},
         {"version", UNIRANK_VERSION},
         {"command", "ingest"},
         {"split", split_name(which)},
         {"tables", tables},
         {"inputs", std::move(inputs)},
         {"facts", corpus.facts.size()},
         {"questions", corpus.questions.size()},
         {"warnings", diag.count()},
         {"dangling_uids", diag.dangling_uids.size()},
         {"outputs", Json::array({out_path})},
         {"timings", {{"total_ms", elapsed_ms(start)}}}};
  write_text_file(out_path + ".manifest.json", m.dump(2) + "\n");
  print_warnings(diag, err);
  out << "ingested " << corpus.facts.size() << " facts and " << corpus.questions.size()
      << " " << split_name(which) << " questions (" << diag.count() << " warnings) -> "
      << out_path << "\n";
  return kExitOk;
}

int cmd_index(RankerFlags &f, const std::string &scheme_name, const std::string &out_path,
              std::ostream &out, std::ostream &err) {
  auto ws = open_workspace(f, false);
  IndexArtifact index;
  try {
    index.scheme = WeightingScheme::parse(scheme_name, f.k1, f.b);
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
  index.stats = ws->ranker->stats();
  for (std::size_t i = 0; i < ws->ranker->facts().size(); ++i) {
    index.fact_uids.push_back(ws->ranker->facts()[i].uid);
    index.fact_vectors.push_back(ws->ranker->fact_vector(i, index.scheme));
  }
  save_index(index, out_path);
  write_text_file(out_path + ".manifest.json",
                  manifest("index", *ws, Json::array({out_path})).dump(2) + "\n");
  print_warnings(ws->diag, err);
  out << "indexed " << index.fact_uids.size() << " facts, vocabulary "
      << index.stats.vocabulary_size() << " (" << index.scheme.key() << ") -> " << out_path
      << "\n";
  return kExitOk;
}

int cmd_rank(RankerFlags &f, const std::string &out_dir, std::size_t top, bool full,
             const std::string &qid_filter, std::ostream &out, std::ostream &err) {
  auto ws = open_workspace(f, true);
  std::vector<const Question *> selected;
  if (qid_filter.empty()) {
    for (const auto &q : ws->queries.questions) selected.push_back(&q);
  } else {
    std::stringstream in(qid_filter);
    std::string qid;
    while (std::getline(in, qid, ',')) {
      auto it = std::find_if(ws->queries.questions.begin(), ws->queries.questions.end(),
                             [&](const Question &q) { return q.qid == qid; });
      if (it == ws->queries.questions.end()) throw UsageError("unknown qid: " + qid);
      selected.push_back(&*it);
    }
  }
  const std::size_t keep = full ? ws->ranker->facts().size() : top;
  if (keep == 0) throw UsageError("--top must be at least 1");

  auto start = Clock::now();
  std::vector<RankedList> lists(selected.size());
  std::vector<double> latency(selected.size());
  const auto &config = ws->config.ranker;
  parallel_for(selected.size(), f.workers, [&](std::size_t i) {
    auto t0 = Clock::now();
    lists[i] = ws->ranker->rank(build_hypothesis(*selected[i], selected[i]->answer_key), config);
    if (lists[i].records.size() > keep) lists[i].records.resize(keep);
    latency[i] = elapsed_ms(t0);
  });
  ws->timings["rank_ms"] = elapsed_ms(start);

  std::string ranking = "qid\trank\tfact_uid\tcombined\trs\tus\n";
  std::string submission;
  for (const auto &list : lists) {
    for (std::size_t r = 0; r < list.records.size(); ++r) {
      const auto &rec = list.records[r];
      ranking += list.query_qid + "\t" + std::to_string(r + 1) + "\t" + std::string(rec.fact_uid) +
                 "\t" + format_score(rec.combined) + "\t" + format_score(rec.rs) + "\t" +
                 format_score(rec.us) + "\n";
      submission += list.query_qid + "\t" + std::string(rec.fact_uid) + "\n";
    }
  }
  fs::path dir(out_dir);
  write_text_file(dir / "ranking.tsv", ranking);
  write_text_file(dir / "submission.tsv", submission);
  double mean_latency = 0.0;
  for (double l : latency) mean_latency += l;
  if (!latency.empty()) mean_latency /= static_cast<double>(latency.size());
  ws->timings["mean_question_ms"] = mean_latency;
  write_text_file(dir / "manifest.json",
                  manifest("rank", *ws,
                           Json::array({(dir / "ranking.tsv").string(),
                                        (dir / "submission.tsv").string()}))
                          .dump(2) +
                      "\n");
  print_warnings(ws->diag, err);
  char line[160];
  std::snprintf(line, sizeof line, "ranked %zu questions (%s); mean latency %.3f ms/question\n",
                selected.size(), config.model_name().c_str(), mean_latency);
  out << line;
  return kExitOk;
}

std::vector<RankerConfig> ablation_configs(const RankerConfig &base) {
  auto bm25 = base.rs_scheme.kind() == WeightingScheme::Kind::kBm25
                  ? base.rs_scheme
                  : (base.us_scheme.kind() == WeightingScheme::Kind::kBm25 ? base.us_scheme
                                                                          : WeightingScheme::bm25());
  auto tfidf = WeightingScheme::tfidf();
  auto make = [&](double lambda1, WeightingScheme rs, WeightingScheme us) {
    RankerConfig c = base;
    c.rs_scheme = rs;
    c.us_scheme = us;
    c.lambda1 = lambda1;
    return c;
  };
  const double joint = (base.lambda1 > 0.0 && base.lambda1 < 1.0) ? base.lambda1 : 0.83;
  return {make(1.0, tfidf, tfidf), make(1.0, bm25, bm25),   make(0.0, tfidf, tfidf),
          make(0.0, bm25, bm25),   make(joint, tfidf, tfidf), make(joint, tfidf, bm25),
          make(joint, bm25, tfidf), make(joint, bm25, bm25)};
}

int cmd_eval(RankerFlags &f, const std::string &out_dir, bool ablate, const std::string &sweep_k,
             const std::string &submission_path, const std::string &length_bins,
             const std::string &precision_ks, std::ostream &out, std::ostream &err) {
  auto ws = open_workspace(f, true);
  EvalOptions options;
  if (!length_bins.empty()) options.length_bounds = parse_size_list(length_bins, "--length-bins");
  if (!precision_ks.empty()) options.precision_ks = parse_size_list(precision_ks, "--precision-k");
  std::vector<std::size_t> sweep_values;
  if (!sweep_k.empty()) sweep_values = parse_size_list(sweep_k, "--sweep-k");

  auto gold = build_gold_sets(ws->queries.questions, ws->ranker->facts(),
                              ws->ranker->pipeline(), ws->diag);
  if (gold.empty())
    throw UsageError("no gold explanations in " + ws->queries_path.string());

  auto start = Clock::now();
  std::vector<ModelReport> models;
  if (!submission_path.empty()) {
    Submission submission;
    try {
      submission = load_submission(submission_path);
    } catch (const std::runtime_error &e) {
      throw UsageError(e.what());
    }
    std::size_t truncated = 0;
    auto ranks = gold_ranks_from_submission(gold, submission, ws->ranker->facts().size(),
                                            &truncated);
    if (truncated > 0)
      ws->diag.warn(std::to_string(truncated) +
                    " gold facts missing from the submission were given worst-case ranks");
    models.push_back({"submission", ws->config.ranker, evaluate(gold, ranks, options)});
  } else {
    std::vector<RankerConfig> configs =
        ablate ? ablation_configs(ws->config.ranker) : std::vector<RankerConfig>{ws->config.ranker};
    for (const auto &c : configs)
      models.push_back({c.model_name(), c, evaluate_model(*ws->ranker, gold, c, options, f.workers)});
  }
  ws->timings["eval_ms"] = elapsed_ms(start);

  fs::path dir(out_dir);
  Json outputs = Json::array();
  auto emit = [&](const fs::path &p, const std::string &content) {
    write_text_file(p, content);
    outputs.push_back(p.string());
  };
  emit(dir / "report.json",
       report_document(ws->config.preprocessing, split_name(ws->queries.split), models).dump(2) +
           "\n");
  emit(dir / "figures" / "map_by_length.csv", map_by_length_csv(models));
  emit(dir / "figures" / "precision_at_k.csv", precision_at_k_csv(models));
  if (!sweep_values.empty()) {
    start = Clock::now();
    auto sweep = knn_sweep(*ws->ranker, gold, ws->config.ranker, sweep_values, f.workers);
    ws->timings["sweep_ms"] = elapsed_ms(start);
    emit(dir / "figures" / "knn_sweep.csv", knn_sweep_csv(sweep));
    for (const auto &[k, map] : sweep) {
      char line[80];
      std::snprintf(line, sizeof line, "  k=%-5zu MAP %.2f\n", k, 100.0 * map);
      out << line;
    }
  }
  write_text_file(dir / "manifest.json", manifest("eval", *ws, outputs).dump(2) + "\n");
  print_warnings(ws->diag, err);

  out << "questions evaluated: " << gold.size() << "\n";
  for (const auto &m : models) {
    char line[160];
    std::snprintf(line, sizeof line, "%-24s MAP %.2f\n", m.name.c_str(),
                  100.0 * m.report.overall_map);
    out << line;
  }
  return kExitOk;
}

int cmd_sweep(RankerFlags &f, const std::string &out_dir, const std::string &ks,
              std::ostream &out, std::ostream &err) {
  auto values = parse_size_list(ks, "--k-values");
  auto ws = open_workspace(f, true);
  auto gold = build_gold_sets(ws->queries.questions, ws->ranker->facts(),
                              ws->ranker->pipeline(), ws->diag);
  if (gold.empty()) throw UsageError("no gold explanations in " + ws->queries_path.string());
  auto start = Clock::now();
  auto sweep = knn_sweep(*ws->ranker, gold, ws->config.ranker, values, f.workers);
  ws->timings["sweep_ms"] = elapsed_ms(start);
  fs::path csv = fs::path(out_dir) / "knn_sweep.csv";
  write_text_file(csv, knn_sweep_csv(sweep));
  write_text_file(fs::path(out_dir) / "manifest.json",
                  manifest("sweep", *ws, Json::array({csv.string()})).dump(2) + "\n");
  print_warnings(ws->diag, err);
  for (const auto &[k, map] : sweep) {
    char line[80];
    std::snprintf(line, sizeof line, "k=%-5zu MAP %.2f\n", k, 100.0 * map);
    out << line;
  }
  return kExitOk;
}

int cmd_export_qa(RankerFlags &f, const std::string &out_path, std::size_t top_k,
                  std::ostream &out, std::ostream &err) {
  if (top_k == 0) throw UsageError("--top-k must be at least 1");
  auto ws = open_workspace(f, true);
  const auto &questions = ws->queries.questions;
  std::vector<std::string> lines(questions.size());
  auto start = Clock::now();
  parallel_for(questions.size(), f.workers, [&](std::size_t i) {
    const auto &q = questions[i];
    for (const auto &choice : q.choices) {
      auto h = build_hypothesis(q, choice.label);
      auto top = ws->ranker->explain_topk(h, ws->config.ranker, top_k);
      Json sentences = Json::array();
      Json uids = Json::array();
      for (const auto &rec : top) {
        sentences.push_back(ws->ranker->facts()[rec.fact_index].text);
        uids.push_back(std::string(rec.fact_uid));
      }
      Json record{{"qid", q.qid},
                  {"label", choice.label},
                  {"question", q.stem},
                  {"candidate", choice.text},
                  {"is_correct", h.is_correct_candidate},
                  {"explanation", std::move(sentences)},
                  {"fact_uids", std::move(uids)}};
      lines[i] += record.dump() + "\n";
    }
  });
  ws->timings["export_ms"] = elapsed_ms(start);
  std::string content;
  std::size_t records = 0;
  for (const auto &l : lines) {
    content += l;
    records += static_cast<std::size_t>(std::count(l.begin(), l.end(), '\n'));
  }
  write_text_file(out_path, content);
  write_text_file(out_path + ".manifest.json",
                  manifest("export-qa", *ws, Json::array({out_path})).dump(2) + "\n");
  print_warnings(ws->diag, err);
  out << "exported " << records << " records (K=" << top_k << ") -> " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"unirank: explanation reconstruction by relevance and unification scoring"};
  app.set_version_flag("--version", UNIRANK_VERSION);
  app.require_subcommand(1);

  std::string tables, questions, split = "train", ingest_out, inference_map;
  auto *ingest = app.add_subcommand("ingest", "Parse corpus TSV files into normalized JSON");
  ingest->add_option("--tables", tables, "Directory of fact table TSV files")->required();
  ingest->add_option("--questions", questions, "Questions TSV file")->required();
  ingest->add_option("--split", split, "train, dev or test");
  ingest->add_option("--out", ingest_out, "Output JSON path")->required();
  ingest->add_option("--inference-map", inference_map,
                     "Table -> inference type map (default: data/inference_types.tsv)");

  RankerFlags index_flags;
  std::string index_scheme = "bm25", index_out;
  auto *index = app.add_subcommand("index", "Fit statistics and persist fact vectors");
  add_corpus_flags(index, index_flags, false);
  add_preprocessing_flags(index, index_flags);
  index->add_option("--scheme", index_scheme, "tfidf or bm25");
  index->add_option("--k1", index_flags.k1, "BM25 k1");
  index->add_option("--b", index_flags.b, "BM25 b");
  index->add_option("--out", index_out, "Output index path")->required();

  RankerFlags rank_flags;
  std::string rank_out, qids;
  std::size_t top = 500;
  bool full = false;
  auto *rank = app.add_subcommand("rank", "Rank the fact KB for every query question");
  add_ranker_flags(rank, rank_flags);
  rank->add_option("--out-dir", rank_out, "Output directory")->required();
  rank->add_option("--top", top, "Records kept per question (default 500)");
  rank->add_flag("--full", full, "Keep the full ranking");
  rank->add_option("--qids", qids, "Comma-separated question ids to rank");

  RankerFlags eval_flags;
  std::string eval_out, sweep_k, submission, length_bins, precision_ks;
  bool ablate = false;
  auto *eval = app.add_subcommand("eval", "Evaluate rankings (MAP, breakdowns, figures)");
  add_ranker_flags(eval, eval_flags);
  eval->add_option("--out-dir", eval_out, "Output directory")->required();
  eval->add_flag("--ablate", ablate, "Evaluate pure RS/US models and all joint scheme pairs");
  eval->add_option("--sweep-k", sweep_k, "Comma-separated k values for a k-NN sweep");
  eval->add_option("--submission", submission, "Score a qid<TAB>fact_uid file instead");
  eval->add_option("--length-bins", length_bins, "Lower bounds of explanation-length bins");
  eval->add_option("--precision-k", precision_ks, "K values for Precision@K");

  RankerFlags sweep_flags;
  std::string sweep_out, sweep_values = "1,2,5,10,20,50,100";
  auto *sweep = app.add_subcommand("sweep", "MAP as a function of k");
  add_ranker_flags(sweep, sweep_flags);
  sweep->add_option("--out-dir", sweep_out, "Output directory")->required();
  sweep->add_option("--k-values", sweep_values, "Comma-separated k values");

  RankerFlags export_flags;
  std::string export_out;
  std::size_t export_k = 3;
  auto *export_qa = app.add_subcommand("export-qa", "Export top-K explanations per answer choice");
  add_ranker_flags(export_qa, export_flags);
  export_qa->add_option("--out", export_out, "Output JSONL path")->required();
  export_qa->add_option("--top-k", export_k, "Explanation sentences per record");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion &) {
    out << UNIRANK_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*ingest) return cmd_ingest(tables, questions, split, ingest_out, inference_map, out, err);
    if (*index) return cmd_index(index_flags, index_scheme, index_out, out, err);
    if (*rank) return cmd_rank(rank_flags, rank_out, top, full, qids, out, err);
    if (*eval)
      return cmd_eval(eval_flags, eval_out, ablate, sweep_k, submission, length_bins,
                      precision_ks, out, err);
    if (*sweep) return cmd_sweep(sweep_flags, sweep_out, sweep_values, out, err);
    if (*export_qa) return cmd_export_qa(export_flags, export_out, export_k, out, err);
  } catch (const UsageError &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IngestError &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception &e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace unirank::cli
