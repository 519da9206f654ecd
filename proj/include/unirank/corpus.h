#ifndef UNIRANK_CORPUS_H_
#define UNIRANK_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace unirank {

enum class InferenceType { kRetrieval, kInferenceSupporting, kComplexInference, kUnknown };
enum class Role { kCentral, kGrounding, kLexicalGlue, kOther };
enum class Split { kTrain, kDev, kTest };

const char *inference_type_name(InferenceType type);
InferenceType parse_inference_type(std::string_view name);
const char *role_name(Role role);
// CENTRAL, GROUNDING and LEXGLUE (any case) map to their roles; anything
// else, including BACKGROUND and NEG, is Other.
Role parse_role(std::string_view name);
const char *split_name(Split split);
Split parse_split(std::string_view name);

// Thrown for fatal ingest problems: unreadable files, a table without a UID
// column, duplicate fact UIDs.
class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-fatal problems found while parsing. Malformed rows, tokens and
// questions are skipped and recorded here.
struct Diagnostics {
  std::vector<std::string> warnings;
  std::vector<std::string> dangling_uids;

  void warn(std::string message) { warnings.push_back(std::move(message)); }
  std::size_t count() const { return warnings.size(); }
};

struct Fact {
  std::string uid;
  std::string text;
  std::string table_name;
  InferenceType inference_type = InferenceType::kUnknown;

  bool operator==(const Fact &) const = default;
};

struct ExplanationEntry {
  std::string fact_uid;
  Role role = Role::kOther;

  bool operator==(const ExplanationEntry &) const = default;
};

// Gold facts for one question, in annotation order, without duplicate uids.
struct Explanation {
  std::vector<ExplanationEntry> entries;

  bool empty() const { return entries.empty(); }
  bool contains(std::string_view uid) const;
  bool operator==(const Explanation &) const = default;
};

struct Choice {
  std::string label;
  std::string text;

  bool operator==(const Choice &) const = default;
};

struct Question {
  std::string qid;
  std::string stem;
  std::vector<Choice> choices;
  std::string answer_key;
  Split split = Split::kTrain;
  std::optional<Explanation> explanation;

  const Choice *find_choice(std::string_view label) const;
  bool operator==(const Question &) const = default;
};

struct Hypothesis {
  std::string source_qid;
  std::string text;
  bool is_correct_candidate = false;
};

// Uid-indexed, immutable after construction. Facts keep insertion order,
// which is the order rankings and score vectors refer to.
class FactKB {
 public:
  FactKB() = default;
  // Throws IngestError listing every duplicated uid.
  explicit FactKB(std::vector<Fact> facts);

  std::size_t size() const { return facts_.size(); }
  bool empty() const { return facts_.empty(); }
  const std::vector<Fact> &facts() const { return facts_; }
  const Fact &operator[](std::size_t i) const { return facts_[i]; }

  const Fact *find(std::string_view uid) const;
  std::optional<std::size_t> index_of(std::string_view uid) const;

 private:
  std::vector<Fact> facts_;
  std::unordered_map<std::string, std::size_t> by_uid_;
};

struct ExplanationPair {
  Hypothesis hypothesis;
  Explanation explanation;
};

class ExplanationKB {
 public:
  ExplanationKB() = default;
  explicit ExplanationKB(std::vector<ExplanationPair> pairs) : pairs_(std::move(pairs)) {}

  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  const std::vector<ExplanationPair> &pairs() const { return pairs_; }
  const ExplanationPair &operator[](std::size_t i) const { return pairs_[i]; }

 private:
  std::vector<ExplanationPair> pairs_;
};

// Table file stem -> inference type. Patterns ending in '*' match by prefix;
// exact names win over prefixes, longer prefixes over shorter ones.
class InferenceTypeMap {
 public:
  InferenceTypeMap() = default;
  // table<TAB>type per line, '#' comments. Types: retrieval,
  // inference_supporting, complex_inference.
  static InferenceTypeMap load(const std::filesystem::path &path);

  void add(std::string pattern, InferenceType type);
  InferenceType lookup(std::string_view table_name) const;

 private:
  std::map<std::string, InferenceType, std::less<>> exact_;
  std::vector<std::pair<std::string, InferenceType>> prefixes_;
};

// Reads every *.tsv file under `directory` (sorted by file name). Each table
// needs a header with exactly one "[SKIP] UID" column; other "[SKIP]" columns
// are left out of the fact text, which joins the remaining non-empty cells
// with single spaces.
FactKB parse_fact_tables(const std::filesystem::path &directory,
                         const InferenceTypeMap &types, Diagnostics &diag);

// Parses one table from memory; `table_name` labels the facts and messages.
std::vector<Fact> parse_fact_table(std::string_view content, std::string_view table_name,
                                   const InferenceTypeMap &types, Diagnostics &diag);

// Questions TSV with a header naming at least QuestionID, question and
// AnswerKey columns; an explanation column of "uid|ROLE" tokens is optional.
std::vector<Question> parse_questions(const std::filesystem::path &file, Split split,
                                      Diagnostics &diag);
std::vector<Question> parse_questions_tsv(std::string_view content, Split split,
                                          Diagnostics &diag,
                                          std::string_view source = "<memory>");

// Splits "stem (A) x (B) y" at sequential choice markers (A), (B), ... or
// (1), (2), ... Returns false when fewer than two choices are found.
bool split_choices(std::string_view text, std::string &stem, std::vector<Choice> &choices);

// Parses "uid|ROLE uid|ROLE"; malformed tokens and repeated uids are
// reported and skipped (first occurrence wins).
Explanation parse_explanation(std::string_view cell, std::string_view qid, Diagnostics &diag);

// stem + " " + choice text. Throws std::invalid_argument on an empty stem or
// an unknown label.
Hypothesis build_hypothesis(const Question &question, std::string_view choice_label);

// One (hypothesis, explanation) pair per annotated train question, built
// from the correct answer. Throws std::invalid_argument if a non-train
// question is passed. When `facts` is given, uids missing from it are
// reported but the pair is kept.
ExplanationKB build_explanation_kb(const std::vector<Question> &questions,
                                   const FactKB *facts, Diagnostics &diag);

// Normalized per-split corpus document: the facts plus one split's questions.
struct CorpusSplit {
  Split split = Split::kTrain;
  FactKB facts;
  std::vector<Question> questions;
};

std::string to_json(const CorpusSplit &corpus);
CorpusSplit corpus_from_json(std::string_view json);
void save_corpus(const CorpusSplit &corpus, const std::filesystem::path &path);
CorpusSplit load_corpus(const std::filesystem::path &path);

}  // namespace unirank

#endif  // UNIRANK_CORPUS_H_
