#ifndef UNIRANK_RANKER_H_
#define UNIRANK_RANKER_H_

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unirank/corpus.h"
#include "unirank/sparse.h"
#include "unirank/text.h"

namespace unirank {

enum class Normalization { kMaxPerQuery, kNone };

const char *normalization_name(Normalization n);
Normalization parse_normalization(std::string_view name);

// Which documents the vocabulary statistics are fitted on.
enum class FitScope { kFactsAndHypotheses, kFactsOnly };

const char *fit_scope_name(FitScope scope);
FitScope parse_fit_scope(std::string_view name);

struct RankerConfig {
  // Weight of the relevance score; the unification score gets 1 - lambda1.
  double lambda1 = 0.83;
  // Number of nearest training hypotheses feeding the unification score.
  std::size_t k = 100;
  WeightingScheme rs_scheme = WeightingScheme::bm25();
  WeightingScheme us_scheme = WeightingScheme::bm25();
  Normalization normalization = Normalization::kMaxPerQuery;

  // Throws std::invalid_argument unless 0 <= lambda1 <= 1 and k >= 1.
  void validate() const;
  // "RS BM25 + US BM25", "RS TF-IDF", "US BM25" (the last two at the
  // lambda1 endpoints).
  std::string model_name() const;
};

struct Neighbor {
  std::size_t pair_index = 0;  // into ExplanationKB::pairs()
  double similarity = 0.0;
};

struct RankedRecord {
  std::size_t fact_index = 0;
  std::string_view fact_uid;  // view into the ranker's FactKB
  double combined = 0.0;
  double rs = 0.0;  // raw relevance score
  double us = 0.0;  // raw unification score
};

// Every fact exactly once, by combined score descending, ties by uid.
struct RankedList {
  std::string query_qid;
  std::vector<RankedRecord> records;
};

// Scores facts for a hypothesis with
//   e(h, f) = lambda1 * rs(h, f) + (1 - lambda1) * us(h, f)
// where rs is the cosine between hypothesis and fact vectors and
//   us(h, f) = sum over (h_z, E_z) in kNN(h) of cos(h, h_z) * [f in E_z].
//
// Immutable after construction apart from an internal, mutex-guarded cache
// of per-scheme vectors; all const members are safe to call concurrently.
class UnificationRanker {
 public:
  UnificationRanker(FactKB facts, ExplanationKB explanations, TextPipeline pipeline,
                    FitScope scope = FitScope::kFactsAndHypotheses);
  // Reuses previously fitted statistics (e.g. from a persisted index).
  UnificationRanker(FactKB facts, ExplanationKB explanations, TextPipeline pipeline,
                    VocabularyStats stats);

  const FactKB &facts() const { return facts_; }
  const ExplanationKB &explanations() const { return explanations_; }
  const TextPipeline &pipeline() const { return pipeline_; }
  const VocabularyStats &stats() const { return stats_; }

  SparseVector vectorize_text(std::string_view text, const WeightingScheme &scheme) const;
  const SparseVector &fact_vector(std::size_t fact_index, const WeightingScheme &scheme) const;
  const SparseVector &hypothesis_vector(std::size_t pair_index,
                                        const WeightingScheme &scheme) const;
  // Explanation of pair `pair_index` resolved to fact indices; uids absent
  // from the FactKB are dropped.
  const std::vector<std::size_t> &explanation_facts(std::size_t pair_index) const {
    return explanation_facts_[pair_index];
  }

  // Indexed like facts().
  std::vector<double> relevance_scores(const Hypothesis &h, const WeightingScheme &scheme) const;
  // Top-k pairs by hypothesis cosine, ties by source qid. Pairs whose
  // hypothesis text equals h.text are skipped.
  std::vector<Neighbor> knn_hypotheses(const Hypothesis &h, std::size_t k,
                                       const WeightingScheme &scheme) const;
  // Indexed like facts().
  std::vector<double> unification_scores(std::span<const Neighbor> neighbors) const;

  RankedList rank(const Hypothesis &h, const RankerConfig &config) const;
  // First min(K, |facts|) records of rank(). Throws if K == 0.
  std::vector<RankedRecord> explain_topk(const Hypothesis &h, const RankerConfig &config,
                                         std::size_t top_k) const;

  // Orders raw component scores exactly as rank() does; used to compare the
  // combined ranking with a single component.
  std::vector<std::size_t> order_by(std::span<const double> scores) const;

 private:
  struct Space {
    InvertedIndex facts;
    InvertedIndex hypotheses;
  };

  void prepare();
  const Space &space(const WeightingScheme &scheme) const;

  FactKB facts_;
  ExplanationKB explanations_;
  TextPipeline pipeline_;
  VocabularyStats stats_;
  std::vector<TokenStream> fact_terms_;
  std::vector<TokenStream> hypothesis_terms_;
  std::vector<std::vector<std::size_t>> explanation_facts_;
  std::vector<std::size_t> uid_order_;  // position of each fact in uid order

  mutable std::mutex spaces_mutex_;
  mutable std::map<std::string, std::shared_ptr<const Space>> spaces_;
};

}  // namespace unirank

#endif  // UNIRANK_RANKER_H_
