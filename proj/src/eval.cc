#include "unirank/eval.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "unirank/parallel.h"

namespace unirank {

double average_precision_from_ranks(std::vector<std::size_t> gold_ranks) {
  if (gold_ranks.empty()) throw std::invalid_argument("average precision of an empty gold set");
  std::sort(gold_ranks.begin(), gold_ranks.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < gold_ranks.size(); ++i)
    sum += static_cast<double>(i + 1) / static_cast<double>(gold_ranks[i]);
  return sum / static_cast<double>(gold_ranks.size());
}

double average_precision(std::span<const std::string> ranked, const std::set<std::string> &gold) {
  if (gold.empty()) throw std::invalid_argument("average precision of an empty gold set");
  // Gold facts missing from `ranked` contribute zero precision.
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < ranked.size(); ++i)
    if (gold.count(ranked[i])) sum += static_cast<double>(++hits) / static_cast<double>(i + 1);
  return sum / static_cast<double>(gold.size());
}

double precision_at_k_from_ranks(std::span<const std::size_t> gold_ranks, std::size_t top_k) {
  if (top_k == 0) throw std::invalid_argument("precision@K needs K >= 1");
  auto hits = std::count_if(gold_ranks.begin(), gold_ranks.end(),
                            [&](std::size_t r) { return r <= top_k; });
  return static_cast<double>(hits) / static_cast<double>(top_k);
}

double precision_at_k(std::span<const std::string> ranked, const std::set<std::string> &gold,
                      std::size_t top_k) {
  if (top_k == 0) throw std::invalid_argument("precision@K needs K >= 1");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < std::min(top_k, ranked.size()); ++i)
    if (gold.count(ranked[i])) ++hits;
  return static_cast<double>(hits) / static_cast<double>(top_k);
}

double mean_average_precision(std::span<const double> average_precisions) {
  if (average_precisions.empty()) return 0.0;
  double sum = 0.0;
  for (double ap : average_precisions) sum += ap;
  return sum / static_cast<double>(average_precisions.size());
}

std::vector<GoldSet> build_gold_sets(const std::vector<Question> &questions, const FactKB &facts,
                                     const TextPipeline &pipeline, Diagnostics &diag) {
  std::vector<GoldSet> out;
  for (const auto &q : questions) {
    if (!q.explanation || q.explanation->empty()) {
      diag.warn(q.qid + ": no gold explanation, excluded from evaluation");
      continue;
    }
    GoldSet gold;
    gold.qid = q.qid;
    gold.hypothesis = build_hypothesis(q, q.answer_key);
    for (const auto &entry : q.explanation->entries) {
      auto idx = facts.index_of(entry.fact_uid);
      if (!idx) {
        diag.warn(q.qid + ": gold fact " + entry.fact_uid + " not in the knowledge base");
        diag.dangling_uids.push_back(entry.fact_uid);
        continue;
      }
      const Fact &fact = facts[*idx];
      gold.facts.push_back({*idx, fact.uid, entry.role, fact.inference_type,
                            content_overlap_count(gold.hypothesis.text, fact.text, pipeline)});
    }
    if (gold.facts.empty()) {
      diag.warn(q.qid + ": no resolvable gold facts, excluded from evaluation");
      continue;
    }
    out.push_back(std::move(gold));
  }
  return out;
}

Partition role_partition() {
  return [](const GoldFact &f) -> std::optional<std::string> {
    if (f.role == Role::kOther) return std::nullopt;
    return role_name(f.role);
  };
}

Partition overlap_partition() {
  return [](const GoldFact &f) -> std::optional<std::string> {
    return overlap_bucket_name(overlap_bucket(f.overlap));
  };
}

Partition inference_partition() {
  return [](const GoldFact &f) -> std::optional<std::string> {
    if (f.inference_type == InferenceType::kUnknown) return std::nullopt;
    return inference_type_name(f.inference_type);
  };
}

std::map<std::string, double> category_map(std::span<const GoldSet> gold,
                                           std::span<const GoldRanks> ranks,
                                           const Partition &partition) {
  if (gold.size() != ranks.size()) throw std::invalid_argument("gold/rank count mismatch");
  std::map<std::string, std::vector<double>> aps;
  for (std::size_t q = 0; q < gold.size(); ++q) {
    std::map<std::string, std::vector<std::size_t>> bucket_ranks;
    for (std::size_t i = 0; i < gold[q].facts.size(); ++i)
      if (auto bucket = partition(gold[q].facts[i])) bucket_ranks[*bucket].push_back(ranks[q][i]);
    for (auto &[bucket, r] : bucket_ranks)
      aps[bucket].push_back(average_precision_from_ranks(std::move(r)));
  }
  std::map<std::string, double> out;
  for (const auto &[bucket, values] : aps) out[bucket] = mean_average_precision(values);
  return out;
}

std::vector<LengthBin> make_length_bins(std::span<const std::size_t> lower_bounds) {
  std::vector<std::size_t> bounds(lower_bounds.begin(), lower_bounds.end());
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
  if (bounds.empty() || bounds.front() == 0)
    throw std::invalid_argument("length bins need positive lower bounds");
  std::vector<LengthBin> bins;
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    LengthBin bin;
    bin.lower = bounds[i];
    if (i + 1 < bounds.size()) {
      bin.upper = bounds[i + 1] - 1;
      bin.label = *bin.upper == bin.lower
                      ? std::to_string(bin.lower)
                      : std::to_string(bin.lower) + "-" + std::to_string(*bin.upper);
    } else {
      bin.label = std::to_string(bin.lower) + "+";
    }
    bins.push_back(std::move(bin));
  }
  return bins;
}

std::vector<LengthBucketResult> map_by_explanation_length(std::span<const GoldSet> gold,
                                                          std::span<const double> average_precisions,
                                                          std::span<const LengthBin> bins) {
  if (gold.size() != average_precisions.size())
    throw std::invalid_argument("gold/AP count mismatch");
  std::vector<std::vector<double>> per_bin(bins.size());
  for (std::size_t q = 0; q < gold.size(); ++q) {
    const std::size_t length = gold[q].facts.size();
    for (std::size_t b = 0; b < bins.size(); ++b) {
      if (length >= bins[b].lower && (!bins[b].upper || length <= *bins[b].upper)) {
        per_bin[b].push_back(average_precisions[q]);
        break;
      }
    }
  }
  std::vector<LengthBucketResult> out;
  for (std::size_t b = 0; b < bins.size(); ++b)
    out.push_back({bins[b], per_bin[b].size(), mean_average_precision(per_bin[b])});
  return out;
}

EvalReport evaluate(std::span<const GoldSet> gold, std::span<const GoldRanks> ranks,
                    const EvalOptions &options) {
  if (gold.size() != ranks.size()) throw std::invalid_argument("gold/rank count mismatch");
  EvalReport report;
  report.questions = gold.size();
  std::vector<double> aps;
  aps.reserve(gold.size());
  for (std::size_t q = 0; q < gold.size(); ++q) {
    aps.push_back(average_precision_from_ranks(ranks[q]));
    report.per_question.emplace_back(gold[q].qid, aps.back());
  }
  report.overall_map = mean_average_precision(aps);
  report.map_by_role = category_map(gold, ranks, role_partition());
  report.map_by_overlap = category_map(gold, ranks, overlap_partition());
  report.map_by_inference = category_map(gold, ranks, inference_partition());
  auto bins = make_length_bins(options.length_bounds);
  report.map_by_explanation_length = map_by_explanation_length(gold, aps, bins);
  for (std::size_t k : options.precision_ks) {
    double sum = 0.0;
    for (const auto &r : ranks) sum += precision_at_k_from_ranks(r, k);
    report.precision_at_k.emplace_back(k, ranks.empty() ? 0.0 : sum / ranks.size());
  }
  return report;
}

GoldRanks gold_ranks(const GoldSet &gold, const RankedList &ranking) {
  std::unordered_map<std::size_t, std::size_t> position;
  position.reserve(gold.facts.size());
  for (const auto &f : gold.facts) position.emplace(f.fact_index, 0);
  for (std::size_t r = 0; r < ranking.records.size(); ++r) {
    auto it = position.find(ranking.records[r].fact_index);
    if (it != position.end()) it->second = r + 1;
  }
  GoldRanks ranks;
  for (const auto &f : gold.facts) {
    auto r = position.at(f.fact_index);
    if (r == 0) throw std::logic_error("ranking does not cover gold fact " + f.uid);
    ranks.push_back(r);
  }
  return ranks;
}

std::vector<GoldRanks> rank_gold_sets(const UnificationRanker &ranker,
                                      std::span<const GoldSet> gold, const RankerConfig &config,
                                      std::size_t workers) {
  std::vector<GoldRanks> ranks(gold.size());
  parallel_for(gold.size(), workers, [&](std::size_t q) {
    ranks[q] = gold_ranks(gold[q], ranker.rank(gold[q].hypothesis, config));
  });
  return ranks;
}

EvalReport evaluate_model(const UnificationRanker &ranker, std::span<const GoldSet> gold,
                          const RankerConfig &config, const EvalOptions &options,
                          std::size_t workers) {
  auto ranks = rank_gold_sets(ranker, gold, config, workers);
  return evaluate(gold, ranks, options);
}

std::vector<std::pair<std::size_t, double>> knn_sweep(const UnificationRanker &ranker,
                                                      std::span<const GoldSet> gold,
                                                      const RankerConfig &base,
                                                      std::span<const std::size_t> ks,
                                                      std::size_t workers) {
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t k : ks) {
    RankerConfig config = base;
    config.k = k;
    auto ranks = rank_gold_sets(ranker, gold, config, workers);
    std::vector<double> aps;
    for (auto &r : ranks) aps.push_back(average_precision_from_ranks(r));
    out.emplace_back(k, mean_average_precision(aps));
  }
  return out;
}

Submission parse_submission(std::string_view content) {
  Submission submission;
  std::size_t start = 0, line_no = 0;
  while (start < content.size()) {
    auto nl = content.find('\n', start);
    auto end = nl == std::string_view::npos ? content.size() : nl;
    auto line = content.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0 || tab + 1 >= line.size())
      throw std::runtime_error("submission line " + std::to_string(line_no) +
                               ": expected qid<TAB>fact_uid");
    submission.rankings[std::string(line.substr(0, tab))].emplace_back(line.substr(tab + 1));
  }
  return submission;
}

Submission load_submission(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("submission file not found: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_submission(buf.str());
}

std::vector<GoldRanks> gold_ranks_from_submission(std::span<const GoldSet> gold,
                                                  const Submission &submission,
                                                  std::size_t kb_size,
                                                  std::size_t *truncated_gold) {
  std::size_t truncated = 0;
  std::vector<GoldRanks> out;
  out.reserve(gold.size());
  static const std::vector<std::string> kEmpty;
  for (const auto &g : gold) {
    auto it = submission.rankings.find(g.qid);
    const auto &listed = it == submission.rankings.end() ? kEmpty : it->second;
    std::unordered_map<std::string_view, std::size_t> position;
    for (std::size_t r = 0; r < listed.size(); ++r) position.emplace(listed[r], r + 1);

    std::size_t missing = 0;
    for (const auto &f : g.facts) missing += position.count(f.uid) ? 0 : 1;
    std::size_t next_worst = std::max(kb_size, listed.size() + missing) - missing + 1;
    GoldRanks ranks;
    for (const auto &f : g.facts) {
      if (auto p = position.find(f.uid); p != position.end()) {
        ranks.push_back(p->second);
      } else {
        ranks.push_back(next_worst++);
      }
    }
    truncated += missing;
    out.push_back(std::move(ranks));
  }
  if (truncated_gold) *truncated_gold = truncated;
  return out;
}

}  // namespace unirank
