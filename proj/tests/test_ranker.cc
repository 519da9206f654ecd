#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

#include "doctest.h"
#include "support/fixtures.h"
#include "support/oracles.h"
#include "unirank/ranker.h"

using namespace unirank;

namespace {

Fact fact(std::string uid, std::string text) {
  return {std::move(uid), std::move(text), "T", InferenceType::kUnknown};
}

ExplanationPair pair(std::string qid, std::string text, std::vector<std::string> uids) {
  ExplanationPair p;
  p.hypothesis = {std::move(qid), std::move(text), true};
  for (auto &u : uids) p.explanation.entries.push_back({std::move(u), Role::kCentral});
  return p;
}

std::vector<std::string> uids_of(const RankedList &list) {
  std::vector<std::string> out;
  for (const auto &r : list.records) out.emplace_back(r.fact_uid);
  return out;
}

std::vector<std::size_t> indices_of(const RankedList &list) {
  std::vector<std::size_t> out;
  for (const auto &r : list.records) out.push_back(r.fact_index);
  return out;
}

// Brute-force neighbour list: every pair scored with cosine, sorted by
// similarity then source qid, identical hypotheses dropped.
std::vector<std::pair<std::size_t, double>> brute_knn(const UnificationRanker &r,
                                                      const Hypothesis &h, std::size_t k,
                                                      const WeightingScheme &scheme) {
  auto q = r.vectorize_text(h.text, scheme);
  std::vector<std::pair<std::size_t, double>> all;
  for (std::size_t i = 0; i < r.explanations().size(); ++i) {
    if (r.explanations()[i].hypothesis.text == h.text) continue;
    all.push_back({i, cosine(q, r.hypothesis_vector(i, scheme))});
  }
  std::stable_sort(all.begin(), all.end(), [&](const auto &a, const auto &b) {
    if (a.second != b.second) return a.second > b.second;
    return r.explanations()[a.first].hypothesis.source_qid <
           r.explanations()[b.first].hypothesis.source_qid;
  });
  if (all.size() > k) all.resize(k);
  return all;
}

}  // namespace

TEST_CASE("relevance examples") {
  FactKB facts({fact("f1", "friction is a kind of force"), fact("f2", "the sun is a star"),
                fact("f3", "a magnet attracts iron")});
  UnificationRanker r(facts, ExplanationKB{}, TextPipeline());
  Hypothesis h{"q", "friction is a kind of force", true};
  for (auto scheme : {WeightingScheme::tfidf(), WeightingScheme::bm25()}) {
    auto rs = r.relevance_scores(h, scheme);
    CHECK(rs[0] == doctest::Approx(1.0));
    CHECK(rs[1] == 0.0);
    CHECK(rs[2] == 0.0);
  }
  RankerConfig rs_only;
  rs_only.lambda1 = 1.0;
  auto list = r.rank(h, rs_only);
  CHECK(list.records[0].fact_uid == "f1");
  // zero-score facts follow in uid order
  CHECK(uids_of(list) == std::vector<std::string>{"f1", "f2", "f3"});
}

TEST_CASE("relevance scores match the oracle on the mini corpus") {
  auto mini = fixtures::load_mini();
  auto ranker = fixtures::mini_ranker(mini);
  TextPipeline pipeline;
  std::vector<std::vector<std::string>> docs;
  for (const auto &f : mini.facts.facts()) docs.push_back(pipeline.terms(f.text));
  for (const auto &p : ranker.explanations().pairs()) docs.push_back(pipeline.terms(p.hypothesis.text));

  for (const auto &q : mini.dev) {
    auto h = build_hypothesis(q, q.answer_key);
    auto qt = pipeline.terms(h.text);
    auto rs_bm = ranker.relevance_scores(h, WeightingScheme::bm25());
    auto rs_tf = ranker.relevance_scores(h, WeightingScheme::tfidf());
    for (std::size_t i = 0; i < mini.facts.size(); ++i) {
      auto ft = pipeline.terms(mini.facts[i].text);
      double bm = oracle::cosine(oracle::bm25_weights(qt, docs, 1.2, 0.75),
                                 oracle::bm25_weights(ft, docs, 1.2, 0.75));
      double tf = oracle::cosine(oracle::tfidf_weights(qt, docs), oracle::tfidf_weights(ft, docs));
      CHECK(std::abs(rs_bm[i] - bm) <= 1e-9);
      CHECK(std::abs(rs_tf[i] - tf) <= 1e-9);
    }
  }
}

TEST_CASE("nearest hypotheses match exhaustive search") {
  for (std::uint32_t seed = 1; seed <= 15; ++seed) {
    auto c = fixtures::random_corpus(seed);
    UnificationRanker r(c.facts, c.explanations, TextPipeline());
    for (const auto &h : c.queries) {
      for (std::size_t k : {1u, 3u, 7u, 100u}) {
        for (auto scheme : {WeightingScheme::tfidf(), WeightingScheme::bm25()}) {
          auto got = r.knn_hypotheses(h, k, scheme);
          auto want = brute_knn(r, h, k, scheme);
          REQUIRE(got.size() == want.size());
          for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].pair_index == want[i].first);
            CHECK(got[i].similarity == want[i].second);
          }
        }
      }
    }
  }
}

TEST_CASE("a training hypothesis never retrieves itself") {
  auto c = fixtures::random_corpus(21);
  UnificationRanker r(c.facts, c.explanations, TextPipeline());
  for (std::size_t i = 0; i < c.explanations.size(); ++i) {
    const auto &h = c.explanations[i].hypothesis;
    for (const auto &n : r.knn_hypotheses(h, 100, WeightingScheme::bm25()))
      CHECK(r.explanations()[n.pair_index].hypothesis.text != h.text);
  }
}

TEST_CASE("contrived neighbourhood") {
  FactKB facts({fact("fa", "alpha beta"), fact("fb", "gamma delta"), fact("fc", "epsilon zeta")});
  ExplanationKB ekb({pair("z1", "heat friction rub", {"fa"}), pair("z2", "heat friction", {"fa", "fb"}),
                     pair("z3", "ocean whale", {"fc"})});
  UnificationRanker r(facts, ekb, TextPipeline());
  Hypothesis h{"q", "heat friction rub hands", true};
  auto nn = r.knn_hypotheses(h, 2, WeightingScheme::tfidf());
  REQUIRE(nn.size() == 2);
  CHECK(r.explanations()[nn[0].pair_index].hypothesis.source_qid == "z1");
  CHECK(r.explanations()[nn[1].pair_index].hypothesis.source_qid == "z2");
  CHECK(nn[0].similarity > nn[1].similarity);

  auto us = r.unification_scores(nn);
  CHECK(us[0] == doctest::Approx(nn[0].similarity + nn[1].similarity));
  CHECK(us[1] == doctest::Approx(nn[1].similarity));
  CHECK(us[2] == 0.0);
}

TEST_CASE("unification score edge cases") {
  FactKB facts({fact("fa", "alpha"), fact("fb", "beta")});
  ExplanationKB ekb({pair("z1", "heat", {"fa"})});
  UnificationRanker r(facts, ekb, TextPipeline());
  // disjoint vocabulary: zero similarity, zero score
  auto none = r.unification_scores(r.knn_hypotheses({"q", "ocean", true}, 5, WeightingScheme::bm25()));
  CHECK(none == std::vector<double>{0.0, 0.0});
  // one neighbour with cosine 1
  auto one = r.unification_scores(r.knn_hypotheses({"q", "heat heat", true}, 5, WeightingScheme::bm25()));
  CHECK(one[0] == doctest::Approx(1.0));
  CHECK(one[1] == 0.0);
  CHECK(r.unification_scores(std::vector<Neighbor>{}) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("unification scores match brute force and respect their bound") {
  for (std::uint32_t seed = 30; seed < 45; ++seed) {
    auto c = fixtures::random_corpus(seed);
    UnificationRanker r(c.facts, c.explanations, TextPipeline());
    for (const auto &h : c.queries) {
      for (std::size_t k : {1u, 4u, 50u}) {
        auto scheme = WeightingScheme::bm25();
        auto us = r.unification_scores(r.knn_hypotheses(h, k, scheme));
        auto nn = brute_knn(r, h, k, scheme);
        double bound = 0;
        for (const auto &[i, s] : nn) bound += s;
        for (std::size_t f = 0; f < c.facts.size(); ++f) {
          double expect = 0;
          for (const auto &[i, s] : nn)
            if (c.explanations[i].explanation.contains(c.facts[f].uid)) expect += s;
          CHECK(std::abs(us[f] - expect) <= 1e-12);
          CHECK(us[f] >= 0.0);
          CHECK(us[f] <= bound + 1e-12);
          CHECK(us[f] <= static_cast<double>(k) + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("unification scores grow with k") {
  for (std::uint32_t seed = 50; seed < 60; ++seed) {
    auto c = fixtures::random_corpus(seed);
    UnificationRanker r(c.facts, c.explanations, TextPipeline());
    for (const auto &h : c.queries) {
      auto small = r.unification_scores(r.knn_hypotheses(h, 3, WeightingScheme::bm25()));
      auto large = r.unification_scores(r.knn_hypotheses(h, 8, WeightingScheme::bm25()));
      for (std::size_t f = 0; f < small.size(); ++f) CHECK(large[f] >= small[f]);
    }
  }
}

TEST_CASE("lambda endpoints reduce to a single component") {
  for (std::uint32_t seed = 60; seed < 70; ++seed) {
    auto c = fixtures::random_corpus(seed);
    UnificationRanker r(c.facts, c.explanations, TextPipeline());
    for (const auto &h : c.queries) {
      for (auto norm : {Normalization::kMaxPerQuery, Normalization::kNone}) {
        RankerConfig cfg;
        cfg.k = 5;
        cfg.normalization = norm;
        cfg.lambda1 = 1.0;
        auto rs = r.relevance_scores(h, cfg.rs_scheme);
        CHECK(indices_of(r.rank(h, cfg)) == r.order_by(rs));
        cfg.lambda1 = 0.0;
        auto us = r.unification_scores(r.knn_hypotheses(h, cfg.k, cfg.us_scheme));
        CHECK(indices_of(r.rank(h, cfg)) == r.order_by(us));
      }
    }
  }
}

TEST_CASE("rankings are complete, ordered and deterministic") {
  auto c = fixtures::random_corpus(77, 60, 40, 8);
  UnificationRanker r(c.facts, c.explanations, TextPipeline());
  RankerConfig cfg;
  cfg.k = 10;
  for (const auto &h : c.queries) {
    auto a = r.rank(h, cfg);
    CHECK(a.query_qid == h.source_qid);
    REQUIRE(a.records.size() == c.facts.size());
    std::set<std::string> seen;
    for (const auto &rec : a.records) seen.insert(std::string(rec.fact_uid));
    CHECK(seen.size() == c.facts.size());
    for (std::size_t i = 1; i < a.records.size(); ++i) {
      const auto &x = a.records[i - 1], &y = a.records[i];
      CHECK(x.combined >= y.combined);
      if (x.combined == y.combined) CHECK(x.fact_uid < y.fact_uid);
    }
    auto b = r.rank(h, cfg);
    CHECK(uids_of(a) == uids_of(b));
  }

  // concurrent ranking sees the same results
  std::vector<std::vector<std::string>> serial, threaded(c.queries.size());
  for (const auto &h : c.queries) serial.push_back(uids_of(r.rank(h, cfg)));
  UnificationRanker fresh(c.facts, c.explanations, TextPipeline());
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < c.queries.size(); ++i)
    threads.emplace_back([&, i] { threaded[i] = uids_of(fresh.rank(c.queries[i], cfg)); });
  for (auto &t : threads) t.join();
  CHECK(serial == threaded);
}

TEST_CASE("config validation and names") {
  RankerConfig cfg;
  CHECK(cfg.model_name() == "RS BM25 + US BM25");
  cfg.us_scheme = WeightingScheme::tfidf();
  CHECK(cfg.model_name() == "RS BM25 + US TF-IDF");
  cfg.lambda1 = 1.0;
  CHECK(cfg.model_name() == "RS BM25");
  cfg.lambda1 = 0.0;
  CHECK(cfg.model_name() == "US TF-IDF");
  cfg.lambda1 = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.lambda1 = 0.5;
  cfg.k = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  CHECK(parse_normalization("max") == Normalization::kMaxPerQuery);
  CHECK(parse_fit_scope("facts") == FitScope::kFactsOnly);
  CHECK_THROWS(parse_normalization("softmax"));
}

TEST_CASE("explain_topk") {
  auto mini = fixtures::load_mini();
  auto r = fixtures::mini_ranker(mini);
  auto h = build_hypothesis(mini.dev[0], "A");
  RankerConfig cfg;
  auto full = r.rank(h, cfg);
  auto top3 = r.explain_topk(h, cfg, 3);
  REQUIRE(top3.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(top3[i].fact_uid == full.records[i].fact_uid);
  CHECK(r.explain_topk(h, cfg, 1000).size() == mini.facts.size());
  CHECK_THROWS_AS(r.explain_topk(h, cfg, 0), std::invalid_argument);
}

TEST_CASE("unification lifts the abstract friction fact") {
  auto mini = fixtures::load_mini();
  auto r = fixtures::mini_ranker(mini);
  auto h = build_hypothesis(mini.dev[0], "A");
  auto position = [&](const RankerConfig &cfg) {
    auto uids = uids_of(r.rank(h, cfg));
    return std::find(uids.begin(), uids.end(), "c01") - uids.begin() + 1;
  };
  RankerConfig joint;
  RankerConfig rs_only;
  rs_only.lambda1 = 1.0;
  RankerConfig us_only;
  us_only.lambda1 = 0.0;
  auto joint_rank = position(joint), rs_rank = position(rs_only);
  CHECK(joint_rank < rs_rank);
  // tied with a01 for the highest unification score, a01 first by uid
  CHECK(position(us_only) == 2);
}
