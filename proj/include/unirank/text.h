#ifndef UNIRANK_TEXT_H_
#define UNIRANK_TEXT_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace unirank {

// Ordered list of normalized terms. Every token is non-empty and lowercase.
using TokenStream = std::vector<std::string>;

// Lowercases ASCII letters and splits on every byte that is not an ASCII
// letter or digit. Bytes >= 0x80 are kept inside tokens so UTF-8 words are
// not shredded.
TokenStream tokenize(std::string_view text);

class StopwordList {
 public:
  StopwordList() = default;
  explicit StopwordList(const std::vector<std::string>& terms);

  // The built-in list: determiners, prepositions, pronouns, auxiliaries,
  // conjunctions and question words.
  static StopwordList standard();
  // One term per line; '#' starts a comment; blank lines ignored.
  static StopwordList load(const std::filesystem::path& path);

  bool contains(std::string_view term) const;
  std::size_t size() const { return terms_.size(); }
  std::vector<std::string> sorted_terms() const;

 private:
  std::unordered_set<std::string> terms_;
};

// Surface form -> lemma. Chains are resolved on construction so every value
// is a fixed point of the map, which makes lookup idempotent.
class LemmaMap {
 public:
  LemmaMap() = default;
  explicit LemmaMap(std::unordered_map<std::string, std::string> entries);

  // surface<TAB>lemma per line.
  static LemmaMap load(const std::filesystem::path& path);

  const std::string& lookup(const std::string& term) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, std::string> entries_;
};

// Lemmatizes (when a map is given) and drops tokens whose surface form or
// lemma is a stopword. Order is preserved.
TokenStream normalize(const TokenStream& stream, const StopwordList& stopwords,
                      const LemmaMap* lemmas = nullptr);

// Shared preprocessing configuration: tokenize + normalize.
class TextPipeline {
 public:
  TextPipeline();
  TextPipeline(StopwordList stopwords, std::optional<LemmaMap> lemmas);

  TokenStream terms(std::string_view text) const;

  const StopwordList& stopwords() const { return stopwords_; }
  const LemmaMap* lemmas() const { return lemmas_ ? &*lemmas_ : nullptr; }

 private:
  StopwordList stopwords_;
  std::optional<LemmaMap> lemmas_;
};

// Number of distinct content terms (non-stopwords after normalization)
// shared by both texts. Stands in for the noun/verb/adjective/adverb overlap
// used to bucket gold facts.
std::size_t content_overlap_count(std::string_view hypothesis_text,
                                  std::string_view fact_text,
                                  const TextPipeline& pipeline);

enum class OverlapBucket { kNone, kOne, kMany };

OverlapBucket overlap_bucket(std::size_t overlap_count);
const char* overlap_bucket_name(OverlapBucket bucket);

}  // namespace unirank

#endif  // UNIRANK_TEXT_H_
