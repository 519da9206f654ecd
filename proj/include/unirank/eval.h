#ifndef UNIRANK_EVAL_H_
#define UNIRANK_EVAL_H_

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unirank/corpus.h"
#include "unirank/ranker.h"
#include "unirank/text.h"

namespace unirank {

// ---------------------------------------------------------------------------
// Metrics over explicit ranked lists.

// (1/|gold|) * sum over gold facts g of precision@rank(g). Gold facts absent
// from `ranked` count as non-retrieved. Throws std::invalid_argument on an
// empty gold set.
double average_precision(std::span<const std::string> ranked, const std::set<std::string> &gold);

// Same quantity from the 1-based ranks of the gold facts.
double average_precision_from_ranks(std::vector<std::size_t> gold_ranks);

// |top-K intersect gold| / K. Throws if K == 0.
double precision_at_k(std::span<const std::string> ranked, const std::set<std::string> &gold,
                      std::size_t top_k);
double precision_at_k_from_ranks(std::span<const std::size_t> gold_ranks, std::size_t top_k);

// Unweighted mean; 0 for an empty list.
double mean_average_precision(std::span<const double> average_precisions);

// ---------------------------------------------------------------------------
// Gold annotations.

struct GoldFact {
  std::size_t fact_index = 0;
  std::string uid;
  Role role = Role::kOther;
  InferenceType inference_type = InferenceType::kUnknown;
  std::size_t overlap = 0;  // content_overlap_count with the hypothesis
};

struct GoldSet {
  std::string qid;
  Hypothesis hypothesis;  // question + correct answer
  std::vector<GoldFact> facts;
};

// One GoldSet per question with at least one resolvable gold fact. Dangling
// uids and questions left with empty gold are reported and skipped.
std::vector<GoldSet> build_gold_sets(const std::vector<Question> &questions, const FactKB &facts,
                                     const TextPipeline &pipeline, Diagnostics &diag);

// ---------------------------------------------------------------------------
// Aggregated report.

// Per question, the 1-based rank of each gold fact (aligned with
// GoldSet::facts).
using GoldRanks = std::vector<std::size_t>;

// Assigns a gold fact to a bucket, or nullopt to leave it out of every bucket.
using Partition = std::function<std::optional<std::string>(const GoldFact &)>;

Partition role_partition();
Partition overlap_partition();
Partition inference_partition();

// For each bucket: AP per question over the gold facts in that bucket (other
// gold facts stay in the ranking as non-relevant), averaged over questions
// having at least one such fact. Buckets with no facts are absent.
std::map<std::string, double> category_map(std::span<const GoldSet> gold,
                                           std::span<const GoldRanks> ranks,
                                           const Partition &partition);

// Explanation-length bins given by their lower bounds, e.g. {1, 3, 6} means
// 1-2, 3-5, 6+.
struct LengthBin {
  std::string label;
  std::size_t lower = 0;
  std::optional<std::size_t> upper;  // inclusive; open-ended when absent
};

std::vector<LengthBin> make_length_bins(std::span<const std::size_t> lower_bounds);

struct LengthBucketResult {
  LengthBin bin;
  std::size_t questions = 0;
  double map = 0.0;
};

// Questions bucketed by |gold|; empty bins are kept with questions == 0.
std::vector<LengthBucketResult> map_by_explanation_length(std::span<const GoldSet> gold,
                                                          std::span<const double> average_precisions,
                                                          std::span<const LengthBin> bins);

struct EvalOptions {
  std::vector<std::size_t> precision_ks{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 20, 50};
  std::vector<std::size_t> length_bounds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
};

struct EvalReport {
  std::size_t questions = 0;
  double overall_map = 0.0;
  std::map<std::string, double> map_by_role;
  std::map<std::string, double> map_by_overlap;
  std::map<std::string, double> map_by_inference;
  std::vector<LengthBucketResult> map_by_explanation_length;
  std::vector<std::pair<std::size_t, double>> precision_at_k;  // mean over questions
  std::vector<std::pair<std::string, double>> per_question;    // qid -> AP
};

EvalReport evaluate(std::span<const GoldSet> gold, std::span<const GoldRanks> ranks,
                    const EvalOptions &options = {});

// Gold ranks read off a full RankedList.
GoldRanks gold_ranks(const GoldSet &gold, const RankedList &ranking);

// Ranks every gold set's hypothesis with `workers` threads (0 = hardware
// concurrency) and returns gold ranks in input order.
std::vector<GoldRanks> rank_gold_sets(const UnificationRanker &ranker,
                                      std::span<const GoldSet> gold, const RankerConfig &config,
                                      std::size_t workers = 0);

EvalReport evaluate_model(const UnificationRanker &ranker, std::span<const GoldSet> gold,
                          const RankerConfig &config, const EvalOptions &options = {},
                          std::size_t workers = 0);

// Overall MAP of `base` with k replaced by each value.
std::vector<std::pair<std::size_t, double>> knn_sweep(const UnificationRanker &ranker,
                                                      std::span<const GoldSet> gold,
                                                      const RankerConfig &base,
                                                      std::span<const std::size_t> ks,
                                                      std::size_t workers = 0);

// ---------------------------------------------------------------------------
// Submission files: "qid<TAB>fact_uid" lines in rank order per question.

struct Submission {
  std::map<std::string, std::vector<std::string>> rankings;  // qid -> uids
};

Submission parse_submission(std::string_view content);
Submission load_submission(const std::filesystem::path &path);

// Gold facts missing from a (truncated) submission get the worst ranks still
// available in a knowledge base of `kb_size` facts, in gold order. Questions
// absent from the submission have all gold facts at the bottom.
// `truncated_gold` counts gold facts that had to be placed this way.
std::vector<GoldRanks> gold_ranks_from_submission(std::span<const GoldSet> gold,
                                                  const Submission &submission,
                                                  std::size_t kb_size,
                                                  std::size_t *truncated_gold = nullptr);

}  // namespace unirank

#endif  // UNIRANK_EVAL_H_
