#include "unirank/text.h"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace unirank {
namespace {

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c >= 0x80;
}

char to_lower(unsigned char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a')
                                : static_cast<char>(c);
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char &c : out) c = to_lower(static_cast<unsigned char>(c));
  return out;
}

std::string_view trim(std::string_view s) {
  const char *ws = " \t\r\n";
  auto begin = s.find_first_not_of(ws);
  if (begin == std::string_view::npos) return {};
  auto end = s.find_last_not_of(ws);
  return s.substr(begin, end - begin + 1);
}

// Determiners, prepositions, pronouns, auxiliaries, conjunctions, question
// words and a handful of frequent function adverbs.
constexpr const char *kStandardStopwords[] = {
    "a", "about", "above", "after", "again", "against", "all", "also", "am",
    "an", "and", "any", "are", "as", "at", "be", "because", "been", "before",
    "being", "below", "between", "both", "but", "by", "can", "could", "did",
    "do", "does", "doing", "down", "during", "each", "either", "few", "for",
    "from", "further", "had", "has", "have", "having", "he", "her", "here",
    "hers", "herself", "him", "himself", "his", "how", "i", "if", "in", "into",
    "is", "it", "its", "itself", "just", "may", "me", "might", "more", "most",
    "must", "my", "myself", "neither", "no", "nor", "not", "of", "off", "on",
    "once", "only", "or", "other", "ought", "our", "ours", "ourselves", "out",
    "over", "own", "same", "shall", "she", "should", "so", "some", "such",
    "than", "that", "the", "their", "theirs", "them", "themselves", "then",
    "there", "these", "they", "this", "those", "through", "to", "too", "under",
    "until", "up", "upon", "us", "very", "was", "we", "were", "what", "when",
    "where", "whether", "which", "while", "who", "whom", "whose", "why",
    "will", "with", "within", "without", "would", "you", "your", "yours",
    "yourself", "yourselves", "s", "t", "across", "along", "among",
    "around", "behind", "beside", "beyond", "near", "toward", "towards",
    "onto", "per", "via", "yet", "however", "although", "though", "unless",
    "whereas", "every", "another", "many", "much", "several"};

}  // namespace

TokenStream tokenize(std::string_view text) {
  TokenStream tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !is_word_byte(static_cast<unsigned char>(text[i])))
      ++i;
    std::size_t start = i;
    while (i < text.size() && is_word_byte(static_cast<unsigned char>(text[i])))
      ++i;
    if (i > start) tokens.push_back(lowercase(text.substr(start, i - start)));
  }
  return tokens;
}

StopwordList::StopwordList(const std::vector<std::string> &terms) {
  for (const auto &t : terms) {
    if (!t.empty()) terms_.insert(lowercase(t));
  }
}

StopwordList StopwordList::standard() {
  std::vector<std::string> terms(std::begin(kStandardStopwords),
                                 std::end(kStandardStopwords));
  return StopwordList(terms);
}

StopwordList StopwordList::load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stopword file: " + path.string());
  std::vector<std::string> terms;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos)
      view = view.substr(0, hash);
    view = trim(view);
    if (!view.empty()) terms.emplace_back(view);
  }
  return StopwordList(terms);
}

bool StopwordList::contains(std::string_view term) const {
  return terms_.count(lowercase(term)) > 0;
}

std::vector<std::string> StopwordList::sorted_terms() const {
  std::vector<std::string> out(terms_.begin(), terms_.end());
  std::sort(out.begin(), out.end());
  return out;
}

LemmaMap::LemmaMap(std::unordered_map<std::string, std::string> entries) {
  // Follow chains (a->b, b->c) to their fixed point; a cycle has none.
  for (const auto &[surface, lemma] : entries) {
    std::string current = lemma;
    std::size_t steps = 0;
    for (auto it = entries.find(current);
         it != entries.end() && it->second != current;
         it = entries.find(current)) {
      current = it->second;
      if (++steps > entries.size())
        throw std::invalid_argument("lemma map contains a cycle through '" +
                                    surface + "'");
    }
    if (surface != current) entries_.emplace(surface, current);
  }
}

LemmaMap LemmaMap::load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lemma file: " + path.string());
  std::unordered_map<std::string, std::string> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto tab = view.find('\t');
    if (tab == std::string_view::npos)
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected surface<TAB>lemma");
    auto surface = lowercase(trim(view.substr(0, tab)));
    auto lemma = lowercase(trim(view.substr(tab + 1)));
    if (surface.empty() || lemma.empty()) continue;
    entries.emplace(std::move(surface), std::move(lemma));
  }
  return LemmaMap(std::move(entries));
}

const std::string &LemmaMap::lookup(const std::string &term) const {
  auto it = entries_.find(term);
  return it == entries_.end() ? term : it->second;
}

TokenStream normalize(const TokenStream &stream, const StopwordList &stopwords,
                      const LemmaMap *lemmas) {
  TokenStream out;
  out.reserve(stream.size());
  for (const auto &token : stream) {
    if (token.empty() || stopwords.contains(token)) continue;
    const std::string &lemma = lemmas ? lemmas->lookup(token) : token;
    if (lemma != token && stopwords.contains(lemma)) continue;
    out.push_back(lemma);
  }
  return out;
}

TextPipeline::TextPipeline() : stopwords_(StopwordList::standard()) {}

TextPipeline::TextPipeline(StopwordList stopwords, std::optional<LemmaMap> lemmas)
    : stopwords_(std::move(stopwords)), lemmas_(std::move(lemmas)) {}

TokenStream TextPipeline::terms(std::string_view text) const {
  return normalize(tokenize(text), stopwords_, lemmas());
}

std::size_t content_overlap_count(std::string_view hypothesis_text,
                                  std::string_view fact_text,
                                  const TextPipeline &pipeline) {
  auto a = pipeline.terms(hypothesis_text);
  auto b = pipeline.terms(fact_text);
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  std::vector<std::string> shared;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(shared));
  return shared.size();
}

OverlapBucket overlap_bucket(std::size_t overlap_count) {
  if (overlap_count == 0) return OverlapBucket::kNone;
  if (overlap_count == 1) return OverlapBucket::kOne;
  return OverlapBucket::kMany;
}

const char *overlap_bucket_name(OverlapBucket bucket) {
  switch (bucket) {
    case OverlapBucket::kNone: return "0";
    case OverlapBucket::kOne: return "1";
    case OverlapBucket::kMany: return "1+";
  }
  return "?";
}

}  // namespace unirank
