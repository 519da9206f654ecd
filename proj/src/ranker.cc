#include "unirank/ranker.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace unirank {

const char *normalization_name(Normalization n) {
  return n == Normalization::kMaxPerQuery ? "max" : "none";
}

Normalization parse_normalization(std::string_view name) {
  if (name == "max" || name == "max-per-query") return Normalization::kMaxPerQuery;
  if (name == "none") return Normalization::kNone;
  throw std::invalid_argument("unknown normalization: " + std::string(name));
}

const char *fit_scope_name(FitScope scope) {
  return scope == FitScope::kFactsAndHypotheses ? "facts+hypotheses" : "facts";
}

FitScope parse_fit_scope(std::string_view name) {
  if (name == "facts+hypotheses" || name == "all") return FitScope::kFactsAndHypotheses;
  if (name == "facts") return FitScope::kFactsOnly;
  throw std::invalid_argument("unknown fit scope: " + std::string(name));
}

void RankerConfig::validate() const {
  if (!(lambda1 >= 0.0 && lambda1 <= 1.0))
    throw std::invalid_argument("lambda1 must lie in [0, 1]");
  if (k < 1) throw std::invalid_argument("k must be at least 1");
}

std::string RankerConfig::model_name() const {
  if (lambda1 == 1.0) return "RS " + rs_scheme.label();
  if (lambda1 == 0.0) return "US " + us_scheme.label();
  return "RS " + rs_scheme.label() + " + US " + us_scheme.label();
}

UnificationRanker::UnificationRanker(FactKB facts, ExplanationKB explanations,
                                     TextPipeline pipeline, FitScope scope)
    : facts_(std::move(facts)),
      explanations_(std::move(explanations)),
      pipeline_(std::move(pipeline)) {
  prepare();
  std::vector<TokenStream> documents = fact_terms_;
  if (scope == FitScope::kFactsAndHypotheses)
    documents.insert(documents.end(), hypothesis_terms_.begin(), hypothesis_terms_.end());
  stats_ = VocabularyStats::fit(documents);
}

UnificationRanker::UnificationRanker(FactKB facts, ExplanationKB explanations,
                                     TextPipeline pipeline, VocabularyStats stats)
    : facts_(std::move(facts)),
      explanations_(std::move(explanations)),
      pipeline_(std::move(pipeline)),
      stats_(std::move(stats)) {
  prepare();
}

void UnificationRanker::prepare() {
  if (facts_.empty()) throw std::invalid_argument("the fact knowledge base is empty");
  fact_terms_.reserve(facts_.size());
  for (const auto &f : facts_.facts()) fact_terms_.push_back(pipeline_.terms(f.text));
  hypothesis_terms_.reserve(explanations_.size());
  explanation_facts_.reserve(explanations_.size());
  for (const auto &pair : explanations_.pairs()) {
    hypothesis_terms_.push_back(pipeline_.terms(pair.hypothesis.text));
    std::vector<std::size_t> members;
    for (const auto &entry : pair.explanation.entries)
      if (auto idx = facts_.index_of(entry.fact_uid)) members.push_back(*idx);
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    explanation_facts_.push_back(std::move(members));
  }
  std::vector<std::size_t> by_uid(facts_.size());
  std::iota(by_uid.begin(), by_uid.end(), 0);
  std::sort(by_uid.begin(), by_uid.end(),
            [&](std::size_t a, std::size_t b) { return facts_[a].uid < facts_[b].uid; });
  uid_order_.resize(facts_.size());
  for (std::size_t pos = 0; pos < by_uid.size(); ++pos) uid_order_[by_uid[pos]] = pos;
}

const UnificationRanker::Space &UnificationRanker::space(const WeightingScheme &scheme) const {
  std::lock_guard<std::mutex> lock(spaces_mutex_);
  auto &slot = spaces_[scheme.key()];
  if (!slot) {
    std::vector<SparseVector> fact_vectors;
    fact_vectors.reserve(fact_terms_.size());
    for (const auto &terms : fact_terms_) fact_vectors.push_back(vectorize(terms, stats_, scheme));
    std::vector<SparseVector> hypothesis_vectors;
    hypothesis_vectors.reserve(hypothesis_terms_.size());
    for (const auto &terms : hypothesis_terms_)
      hypothesis_vectors.push_back(vectorize(terms, stats_, scheme));
    slot = std::make_shared<const Space>(
        Space{InvertedIndex(std::move(fact_vectors)), InvertedIndex(std::move(hypothesis_vectors))});
  }
  return *slot;
}

SparseVector UnificationRanker::vectorize_text(std::string_view text,
                                               const WeightingScheme &scheme) const {
  return vectorize(pipeline_.terms(text), stats_, scheme);
}

const SparseVector &UnificationRanker::fact_vector(std::size_t fact_index,
                                                   const WeightingScheme &scheme) const {
  return space(scheme).facts.document(fact_index);
}

const SparseVector &UnificationRanker::hypothesis_vector(std::size_t pair_index,
                                                         const WeightingScheme &scheme) const {
  return space(scheme).hypotheses.document(pair_index);
}

std::vector<double> UnificationRanker::relevance_scores(const Hypothesis &h,
                                                        const WeightingScheme &scheme) const {
  return space(scheme).facts.cosine_all(vectorize_text(h.text, scheme));
}

std::vector<Neighbor> UnificationRanker::knn_hypotheses(const Hypothesis &h, std::size_t k,
                                                        const WeightingScheme &scheme) const {
  auto similarities = space(scheme).hypotheses.cosine_all(vectorize_text(h.text, scheme));
  std::vector<Neighbor> candidates;
  candidates.reserve(similarities.size());
  for (std::size_t i = 0; i < similarities.size(); ++i) {
    if (explanations_[i].hypothesis.text == h.text) continue;
    candidates.push_back({i, similarities[i]});
  }
  auto before = [&](const Neighbor &a, const Neighbor &b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    const auto &qa = explanations_[a.pair_index].hypothesis.source_qid;
    const auto &qb = explanations_[b.pair_index].hypothesis.source_qid;
    if (qa != qb) return qa < qb;
    return a.pair_index < b.pair_index;
  };
  const std::size_t keep = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + keep, candidates.end(), before);
  candidates.resize(keep);
  return candidates;
}

std::vector<double> UnificationRanker::unification_scores(
    std::span<const Neighbor> neighbors) const {
  std::vector<double> scores(facts_.size(), 0.0);
  for (const auto &n : neighbors)
    for (std::size_t f : explanation_facts_.at(n.pair_index)) scores[f] += n.similarity;
  return scores;
}

std::vector<std::size_t> UnificationRanker::order_by(std::span<const double> scores) const {
  std::vector<std::size_t> order(facts_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return uid_order_[a] < uid_order_[b];
  });
  return order;
}

namespace {

std::vector<double> max_normalized(const std::vector<double> &scores) {
  const double top = scores.empty() ? 0.0 : *std::max_element(scores.begin(), scores.end());
  if (!(top > 0.0)) return scores;
  std::vector<double> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] / top;
  return out;
}

}  // namespace

RankedList UnificationRanker::rank(const Hypothesis &h, const RankerConfig &config) const {
  config.validate();
  const auto rs = relevance_scores(h, config.rs_scheme);
  const auto us = unification_scores(knn_hypotheses(h, config.k, config.us_scheme));

  std::vector<double> combined(facts_.size());
  if (config.normalization == Normalization::kMaxPerQuery) {
    const auto rs_n = max_normalized(rs);
    const auto us_n = max_normalized(us);
    for (std::size_t i = 0; i < combined.size(); ++i)
      combined[i] = config.lambda1 * rs_n[i] + (1.0 - config.lambda1) * us_n[i];
  } else {
    for (std::size_t i = 0; i < combined.size(); ++i)
      combined[i] = config.lambda1 * rs[i] + (1.0 - config.lambda1) * us[i];
  }

  RankedList list;
  list.query_qid = h.source_qid;
  list.records.reserve(facts_.size());
  for (std::size_t f : order_by(combined))
    list.records.push_back({f, facts_[f].uid, combined[f], rs[f], us[f]});
  return list;
}

std::vector<RankedRecord> UnificationRanker::explain_topk(const Hypothesis &h,
                                                          const RankerConfig &config,
                                                          std::size_t top_k) const {
  if (top_k == 0) throw std::invalid_argument("K must be at least 1");
  auto list = rank(h, config);
  if (list.records.size() > top_k) list.records.resize(top_k);
  return std::move(list.records);
}

}  // namespace unirank
