#ifndef UNIRANK_TESTS_FIXTURES_H_
#define UNIRANK_TESTS_FIXTURES_H_

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "unirank/corpus.h"
#include "unirank/ranker.h"

#ifndef UNIRANK_TEST_DATA_DIR
#error "UNIRANK_TEST_DATA_DIR must be defined"
#endif

namespace fixtures {

inline std::filesystem::path data_dir() { return UNIRANK_TEST_DATA_DIR; }
inline std::filesystem::path mini_dir() { return data_dir() / "mini"; }

struct MiniCorpus {
  unirank::FactKB facts;
  std::vector<unirank::Question> train;
  std::vector<unirank::Question> dev;
  unirank::Diagnostics diag;
};

// The bundled mini-corpus, ingested from its TSV files.
inline MiniCorpus load_mini() {
  MiniCorpus mini;
  auto types = unirank::InferenceTypeMap::load(data_dir() / "inference_types.tsv");
  mini.facts = unirank::parse_fact_tables(mini_dir() / "tables", types, mini.diag);
  mini.train = unirank::parse_questions(mini_dir() / "questions.train.tsv",
                                        unirank::Split::kTrain, mini.diag);
  mini.dev = unirank::parse_questions(mini_dir() / "questions.dev.tsv", unirank::Split::kDev,
                                      mini.diag);
  return mini;
}

inline unirank::UnificationRanker mini_ranker(const MiniCorpus &mini) {
  unirank::Diagnostics diag;
  return unirank::UnificationRanker(mini.facts,
                                    unirank::build_explanation_kb(mini.train, &mini.facts, diag),
                                    unirank::TextPipeline());
}

// Small random corpus for property tests: facts and hypotheses are short
// strings over a tiny vocabulary so that overlaps and ties are common.
struct RandomCorpus {
  unirank::FactKB facts;
  unirank::ExplanationKB explanations;
  std::vector<unirank::Hypothesis> queries;
};

inline std::string random_sentence(std::mt19937 &rng, std::size_t vocab, std::size_t min_len,
                                   std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_int_distribution<std::size_t> word(0, vocab - 1);
  std::string s;
  for (std::size_t i = 0, n = len(rng); i < n; ++i) {
    if (!s.empty()) s += ' ';
    s += "w" + std::to_string(word(rng));
  }
  return s;
}

inline RandomCorpus random_corpus(std::uint32_t seed, std::size_t n_facts = 30,
                                  std::size_t n_pairs = 20, std::size_t n_queries = 5,
                                  std::size_t vocab = 25) {
  std::mt19937 rng(seed);
  RandomCorpus c;
  // uid order differs from index order
  std::vector<std::size_t> ids(n_facts);
  for (std::size_t i = 0; i < n_facts; ++i) ids[i] = i;
  std::shuffle(ids.begin(), ids.end(), std::mt19937(seed ^ 0x5bd1e995u));
  std::vector<unirank::Fact> facts;
  for (std::size_t i = 0; i < n_facts; ++i) {
    char uid[32];
    std::snprintf(uid, sizeof uid, "f%03zu", ids[i]);
    facts.push_back({uid, random_sentence(rng, vocab, 2, 6), "T", unirank::InferenceType::kUnknown});
  }
  c.facts = unirank::FactKB(std::move(facts));
  std::uniform_int_distribution<std::size_t> pick(0, n_facts - 1);
  std::uniform_int_distribution<std::size_t> size(1, 5);
  std::vector<unirank::ExplanationPair> pairs;
  for (std::size_t i = 0; i < n_pairs; ++i) {
    unirank::ExplanationPair p;
    p.hypothesis = {"q" + std::to_string(100 + i), random_sentence(rng, vocab, 3, 8), true};
    for (std::size_t j = 0, n = size(rng); j < n; ++j) {
      const auto &uid = c.facts[pick(rng)].uid;
      if (!p.explanation.contains(uid)) p.explanation.entries.push_back({uid, unirank::Role::kCentral});
    }
    pairs.push_back(std::move(p));
  }
  c.explanations = unirank::ExplanationKB(std::move(pairs));
  for (std::size_t i = 0; i < n_queries; ++i)
    c.queries.push_back({"d" + std::to_string(i), random_sentence(rng, vocab, 3, 8), true});
  return c;
}

}  // namespace fixtures

#endif  // UNIRANK_TESTS_FIXTURES_H_
