#include "unirank/sparse.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace unirank {

WeightingScheme WeightingScheme::bm25(double k1, double b) {
  if (!(k1 > 0.0)) throw std::invalid_argument("bm25 k1 must be positive");
  if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("bm25 b must lie in [0, 1]");
  return WeightingScheme(Kind::kBm25, k1, b);
}

WeightingScheme WeightingScheme::parse(std::string_view name, double k1, double b) {
  std::string lower(name);
  for (char &c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "tfidf" || lower == "tf-idf") return tfidf();
  if (lower == "bm25") return bm25(k1, b);
  throw std::invalid_argument("unknown weighting scheme: " + std::string(name));
}

std::string WeightingScheme::label() const {
  return kind_ == Kind::kTfIdf ? "TF-IDF" : "BM25";
}

std::string WeightingScheme::key() const {
  if (kind_ == Kind::kTfIdf) return "tfidf";
  std::ostringstream out;
  out << "bm25(k1=" << k1_ << ",b=" << b_ << ")";
  return out.str();
}

VocabularyStats VocabularyStats::fit(std::span<const TokenStream> documents) {
  if (documents.empty()) throw std::invalid_argument("cannot fit statistics on an empty corpus");
  std::map<std::string, std::uint32_t> df;
  std::size_t total_length = 0;
  for (const auto &doc : documents) {
    total_length += doc.size();
    std::set<std::string_view> distinct(doc.begin(), doc.end());
    for (auto term : distinct) ++df[std::string(term)];
  }
  std::vector<std::pair<std::string, std::uint32_t>> terms(df.begin(), df.end());
  return from_parts(std::move(terms), documents.size(),
                    static_cast<double>(total_length) / static_cast<double>(documents.size()));
}

VocabularyStats VocabularyStats::from_parts(
    std::vector<std::pair<std::string, std::uint32_t>> terms, std::size_t document_count,
    double average_length) {
  VocabularyStats stats;
  stats.document_count_ = document_count;
  stats.average_length_ = average_length;
  stats.lookup_.reserve(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto &[term, df] = terms[i];
    if (df < 1 || df > document_count)
      throw std::invalid_argument("document frequency of '" + term + "' out of range");
    if (!stats.lookup_.emplace(term, TermStats{static_cast<TermId>(i), df}).second)
      throw std::invalid_argument("duplicate term '" + term + "'");
  }
  stats.terms_ = std::move(terms);
  return stats;
}

const TermStats *VocabularyStats::find(const std::string &term) const {
  auto it = lookup_.find(term);
  return it == lookup_.end() ? nullptr : &it->second;
}

double idf_tfidf(std::size_t document_count, std::uint32_t document_frequency) {
  return std::log((static_cast<double>(document_count) + 1.0) /
                  (static_cast<double>(document_frequency) + 1.0)) +
         1.0;
}

double idf_bm25(std::size_t document_count, std::uint32_t document_frequency) {
  const double n = static_cast<double>(document_count);
  const double df = static_cast<double>(document_frequency);
  return std::max(0.0, std::log(1.0 + (n - df + 0.5) / (df + 0.5)));
}

SparseVector::SparseVector(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry &a, const Entry &b) { return a.first < b.first; });
  for (const auto &[id, w] : entries) {
    if (!entries_.empty() && entries_.back().first == id)
      entries_.back().second += w;
    else
      entries_.emplace_back(id, w);
  }
  std::erase_if(entries_, [](const Entry &e) { return e.second == 0.0; });
  norm_ = recompute_norm();
}

double SparseVector::weight(TermId id) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                             [](const Entry &e, TermId t) { return e.first < t; });
  return it != entries_.end() && it->first == id ? it->second : 0.0;
}

double SparseVector::recompute_norm() const {
  double sum = 0.0;
  for (const auto &[id, w] : entries_) sum += w * w;
  return std::sqrt(sum);
}

SparseVector SparseVector::scaled(double factor) const {
  std::vector<Entry> out = entries_;
  for (auto &e : out) e.second *= factor;
  return SparseVector(std::move(out));
}

SparseVector vectorize(const TokenStream &document, const VocabularyStats &stats,
                       const WeightingScheme &scheme) {
  std::map<TermId, std::pair<std::uint32_t, std::uint32_t>> counts;  // id -> (tf, df)
  for (const auto &token : document) {
    if (const TermStats *ts = stats.find(token)) {
      auto &slot = counts[ts->id];
      ++slot.first;
      slot.second = ts->document_frequency;
    }
  }
  const std::size_t n = stats.document_count();
  const double length = static_cast<double>(document.size());
  std::vector<SparseVector::Entry> entries;
  entries.reserve(counts.size());
  for (const auto &[id, tf_df] : counts) {
    const double tf = tf_df.first;
    double w;
    if (scheme.kind() == WeightingScheme::Kind::kTfIdf) {
      w = tf * idf_tfidf(n, tf_df.second);
    } else {
      const double avgdl = stats.average_document_length();
      const double length_ratio = avgdl > 0.0 ? length / avgdl : 0.0;
      const double k1 = scheme.k1();
      w = idf_bm25(n, tf_df.second) * tf * (k1 + 1.0) /
          (tf + k1 * (1.0 - scheme.b() + scheme.b() * length_ratio));
    }
    entries.emplace_back(id, w);
  }
  return SparseVector(std::move(entries));
}

double dot(const SparseVector &x, const SparseVector &y) {
  const auto &a = x.entries();
  const auto &b = y.entries();
  double sum = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) {
      ++i;
    } else if (b[j].first < a[i].first) {
      ++j;
    } else {
      sum += a[i].second * b[j].second;
      ++i;
      ++j;
    }
  }
  return sum;
}

double cosine(const SparseVector &x, const SparseVector &y) {
  if (x.norm() == 0.0 || y.norm() == 0.0) return 0.0;
  return std::clamp(dot(x, y) / (x.norm() * y.norm()), 0.0, 1.0);
}

InvertedIndex::InvertedIndex(std::vector<SparseVector> documents)
    : documents_(std::move(documents)) {
  for (std::uint32_t d = 0; d < documents_.size(); ++d)
    for (const auto &[id, w] : documents_[d].entries()) postings_[id].push_back({d, w});
}

std::vector<double> InvertedIndex::cosine_all(const SparseVector &query) const {
  std::vector<double> scores(documents_.size(), 0.0);
  if (query.norm() == 0.0) return scores;
  // Query terms are visited in id order, which is the order dot() sums in.
  for (const auto &[id, qw] : query.entries()) {
    auto it = postings_.find(id);
    if (it == postings_.end()) continue;
    for (const auto &p : it->second) scores[p.doc] += qw * p.weight;
  }
  for (std::size_t d = 0; d < scores.size(); ++d) {
    const double norm = documents_[d].norm();
    scores[d] = norm == 0.0 ? 0.0 : std::clamp(scores[d] / (query.norm() * norm), 0.0, 1.0);
  }
  return scores;
}

}  // namespace unirank
