#ifndef UNIRANK_SPARSE_H_
#define UNIRANK_SPARSE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "unirank/text.h"

namespace unirank {

using TermId = std::uint32_t;

class WeightingScheme {
 public:
  enum class Kind { kTfIdf, kBm25 };

  static WeightingScheme tfidf() { return WeightingScheme(Kind::kTfIdf, 0.0, 0.0); }
  // Throws std::invalid_argument unless k1 > 0 and 0 <= b <= 1.
  static WeightingScheme bm25(double k1 = 1.2, double b = 0.75);
  // "tfidf" or "bm25"; BM25 picks up the given parameters.
  static WeightingScheme parse(std::string_view name, double k1 = 1.2, double b = 0.75);

  Kind kind() const { return kind_; }
  double k1() const { return k1_; }
  double b() const { return b_; }
  // "TF-IDF" or "BM25".
  std::string label() const;
  // "tfidf" or "bm25(k1=1.2,b=0.75)"; unique per distinct scheme.
  std::string key() const;

  bool operator==(const WeightingScheme &) const = default;

 private:
  WeightingScheme(Kind kind, double k1, double b) : kind_(kind), k1_(k1), b_(b) {}
  Kind kind_;
  double k1_;
  double b_;
};

struct TermStats {
  TermId id = 0;
  std::uint32_t document_frequency = 0;
};

// Corpus statistics for the weighting schemes. Term ids follow the
// lexicographic order of the terms, so a fit is reproducible.
class VocabularyStats {
 public:
  // Throws std::invalid_argument on an empty corpus.
  static VocabularyStats fit(std::span<const TokenStream> documents);
  // Rebuilds stats from persisted parts: terms in id order with their df.
  static VocabularyStats from_parts(std::vector<std::pair<std::string, std::uint32_t>> terms,
                                    std::size_t document_count, double average_length);

  const TermStats *find(const std::string &term) const;
  std::size_t document_count() const { return document_count_; }
  double average_document_length() const { return average_length_; }
  std::size_t vocabulary_size() const { return terms_.size(); }
  // (term, df) in id order.
  const std::vector<std::pair<std::string, std::uint32_t>> &terms() const { return terms_; }

 private:
  std::vector<std::pair<std::string, std::uint32_t>> terms_;
  std::unordered_map<std::string, TermStats> lookup_;
  std::size_t document_count_ = 0;
  double average_length_ = 0.0;
};

double idf_tfidf(std::size_t document_count, std::uint32_t document_frequency);
double idf_bm25(std::size_t document_count, std::uint32_t document_frequency);

// Term id -> weight, sorted by id, zero weights dropped, Euclidean norm cached.
class SparseVector {
 public:
  using Entry = std::pair<TermId, double>;

  SparseVector() = default;
  // Entries may arrive unsorted; duplicate ids are summed.
  explicit SparseVector(std::vector<Entry> entries);

  const std::vector<Entry> &entries() const { return entries_; }
  double norm() const { return norm_; }
  bool empty() const { return entries_.empty(); }
  double weight(TermId id) const;
  double recompute_norm() const;
  SparseVector scaled(double factor) const;

  bool operator==(const SparseVector &) const = default;

 private:
  std::vector<Entry> entries_;
  double norm_ = 0.0;
};

// Out-of-vocabulary terms are ignored. The BM25 document length is the
// token count of `document`, including out-of-vocabulary tokens.
SparseVector vectorize(const TokenStream &document, const VocabularyStats &stats,
                       const WeightingScheme &scheme);

double dot(const SparseVector &x, const SparseVector &y);
// In [0, 1]; 0 when either vector has zero norm.
double cosine(const SparseVector &x, const SparseVector &y);

// Posting lists over a fixed document collection. `cosine_all` returns the
// same values as calling cosine(query, doc) for every document, bit for bit.
class InvertedIndex {
 public:
  InvertedIndex() = default;
  explicit InvertedIndex(std::vector<SparseVector> documents);

  std::size_t size() const { return documents_.size(); }
  const SparseVector &document(std::size_t i) const { return documents_[i]; }
  std::vector<double> cosine_all(const SparseVector &query) const;

 private:
  struct Posting {
    std::uint32_t doc;
    double weight;
  };
  std::vector<SparseVector> documents_;
  std::unordered_map<TermId, std::vector<Posting>> postings_;
};

// Persisted statistics plus fact vectors for one scheme, as written by
// `unirank index`.
struct IndexArtifact {
  WeightingScheme scheme = WeightingScheme::bm25();
  VocabularyStats stats;
  std::vector<std::string> fact_uids;
  std::vector<SparseVector> fact_vectors;
};

void save_index(const IndexArtifact &index, const std::filesystem::path &path);
IndexArtifact load_index(const std::filesystem::path &path);

}  // namespace unirank

#endif  // UNIRANK_SPARSE_H_
