#include <fstream>
#include <sstream>

#include "json.hpp"
#include "unirank/corpus.h"

namespace unirank {
namespace {

using nlohmann::ordered_json;

constexpr const char *kCorpusFormat = "unirank-corpus-v1";

ordered_json fact_json(const Fact &f) {
  return ordered_json{{"uid", f.uid},
                      {"text", f.text},
                      {"table", f.table_name},
                      {"inference_type", inference_type_name(f.inference_type)}};
}

ordered_json question_json(const Question &q) {
  ordered_json choices = ordered_json::array();
  for (const auto &c : q.choices) choices.push_back({{"label", c.label}, {"text", c.text}});
  ordered_json explanation = ordered_json::array();
  if (q.explanation)
    for (const auto &e : q.explanation->entries)
      explanation.push_back({{"uid", e.fact_uid}, {"role", role_name(e.role)}});
  return ordered_json{{"qid", q.qid},
                      {"stem", q.stem},
                      {"choices", std::move(choices)},
                      {"answer_key", q.answer_key},
                      {"explanation", std::move(explanation)}};
}

}  // namespace

std::string to_json(const CorpusSplit &corpus) {
  ordered_json facts = ordered_json::array();
  for (const auto &f : corpus.facts.facts()) facts.push_back(fact_json(f));
  ordered_json questions = ordered_json::array();
  for (const auto &q : corpus.questions) questions.push_back(question_json(q));
  ordered_json doc{{"format", kCorpusFormat},
                   {"split", split_name(corpus.split)},
                   {"facts", std::move(facts)},
                   {"questions", std::move(questions)}};
  return doc.dump(1) + "\n";
}

CorpusSplit corpus_from_json(std::string_view json) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json);
  } catch (const nlohmann::json::parse_error &e) {
    throw IngestError(std::string("corpus json: ") + e.what());
  }
  if (doc.value("format", "") != kCorpusFormat)
    throw IngestError(std::string("corpus json: expected format tag ") + kCorpusFormat);

  CorpusSplit corpus;
  try {
    corpus.split = parse_split(doc.at("split").get<std::string>());
    std::vector<Fact> facts;
    for (const auto &f : doc.at("facts")) {
      facts.push_back(Fact{f.at("uid").get<std::string>(), f.at("text").get<std::string>(),
                           f.at("table").get<std::string>(),
                           parse_inference_type(f.at("inference_type").get<std::string>())});
    }
    corpus.facts = FactKB(std::move(facts));
    for (const auto &jq : doc.at("questions")) {
      Question q;
      q.qid = jq.at("qid").get<std::string>();
      q.stem = jq.at("stem").get<std::string>();
      q.answer_key = jq.at("answer_key").get<std::string>();
      q.split = corpus.split;
      for (const auto &c : jq.at("choices"))
        q.choices.push_back({c.at("label").get<std::string>(), c.at("text").get<std::string>()});
      Explanation explanation;
      for (const auto &e : jq.at("explanation"))
        explanation.entries.push_back(
            {e.at("uid").get<std::string>(), parse_role(e.at("role").get<std::string>())});
      if (!explanation.empty()) q.explanation = std::move(explanation);
      corpus.questions.push_back(std::move(q));
    }
  } catch (const nlohmann::json::exception &e) {
    throw IngestError(std::string("corpus json: ") + e.what());
  } catch (const std::invalid_argument &e) {
    throw IngestError(std::string("corpus json: ") + e.what());
  }
  return corpus;
}

void save_corpus(const CorpusSplit &corpus, const std::filesystem::path &path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError("cannot write " + path.string());
  out << to_json(corpus);
}

CorpusSplit load_corpus(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("corpus file not found: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return corpus_from_json(buf.str());
}

}  // namespace unirank
