#include "unirank/corpus.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

namespace unirank {
namespace {

std::string to_upper(std::string_view s) {
  std::string out(s);
  for (char &c : out)
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  return out;
}

std::string_view trim(std::string_view s) {
  const char *ws = " \t\r\n";
  auto begin = s.find_first_not_of(ws);
  if (begin == std::string_view::npos) return {};
  auto end = s.find_last_not_of(ws);
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

// Lines without the trailing '\r'; a leading UTF-8 BOM is dropped.
std::vector<std::string_view> split_lines(std::string_view content) {
  if (content.substr(0, 3) == "\xEF\xBB\xBF") content.remove_prefix(3);
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < content.size()) {
    auto nl = content.find('\n', start);
    auto end = nl == std::string_view::npos ? content.size() : nl;
    auto line = content.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return lines;
}

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

const char *inference_type_name(InferenceType type) {
  switch (type) {
    case InferenceType::kRetrieval: return "retrieval";
    case InferenceType::kInferenceSupporting: return "inference_supporting";
    case InferenceType::kComplexInference: return "complex_inference";
    case InferenceType::kUnknown: return "unknown";
  }
  return "unknown";
}

InferenceType parse_inference_type(std::string_view name) {
  auto upper = to_upper(trim(name));
  std::replace(upper.begin(), upper.end(), '-', '_');
  if (upper == "RETRIEVAL") return InferenceType::kRetrieval;
  if (upper == "INFERENCE_SUPPORTING") return InferenceType::kInferenceSupporting;
  if (upper == "COMPLEX_INFERENCE") return InferenceType::kComplexInference;
  if (upper == "UNKNOWN") return InferenceType::kUnknown;
  throw std::invalid_argument("unknown inference type: " + std::string(name));
}

const char *role_name(Role role) {
  switch (role) {
    case Role::kCentral: return "CENTRAL";
    case Role::kGrounding: return "GROUNDING";
    case Role::kLexicalGlue: return "LEXGLUE";
    case Role::kOther: return "OTHER";
  }
  return "OTHER";
}

Role parse_role(std::string_view name) {
  auto upper = to_upper(trim(name));
  if (upper == "CENTRAL") return Role::kCentral;
  if (upper == "GROUNDING") return Role::kGrounding;
  if (upper == "LEXGLUE") return Role::kLexicalGlue;
  return Role::kOther;
}

const char *split_name(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
  }
  return "train";
}

Split parse_split(std::string_view name) {
  auto upper = to_upper(trim(name));
  if (upper == "TRAIN") return Split::kTrain;
  if (upper == "DEV") return Split::kDev;
  if (upper == "TEST") return Split::kTest;
  throw std::invalid_argument("unknown split: " + std::string(name));
}

bool Explanation::contains(std::string_view uid) const {
  return std::any_of(entries.begin(), entries.end(),
                     [&](const ExplanationEntry &e) { return e.fact_uid == uid; });
}

const Choice *Question::find_choice(std::string_view label) const {
  for (const auto &c : choices)
    if (c.label == label) return &c;
  return nullptr;
}

FactKB::FactKB(std::vector<Fact> facts) : facts_(std::move(facts)) {
  std::set<std::string> collisions;
  by_uid_.reserve(facts_.size());
  for (std::size_t i = 0; i < facts_.size(); ++i) {
    if (!by_uid_.emplace(facts_[i].uid, i).second) collisions.insert(facts_[i].uid);
  }
  if (!collisions.empty()) {
    std::string message = "duplicate fact uids:";
    for (const auto &uid : collisions) message += " " + uid;
    throw IngestError(message);
  }
}

const Fact *FactKB::find(std::string_view uid) const {
  auto idx = index_of(uid);
  return idx ? &facts_[*idx] : nullptr;
}

std::optional<std::size_t> FactKB::index_of(std::string_view uid) const {
  auto it = by_uid_.find(std::string(uid));
  if (it == by_uid_.end()) return std::nullopt;
  return it->second;
}

InferenceTypeMap InferenceTypeMap::load(const std::filesystem::path &path) {
  InferenceTypeMap map;
  auto content = read_file(path);
  std::size_t line_no = 0;
  for (auto line : split_lines(content)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto cells = split_tabs(line);
    if (cells.size() != 2)
      throw IngestError(path.string() + ":" + std::to_string(line_no) +
                        ": expected table<TAB>type");
    map.add(std::string(trim(cells[0])), parse_inference_type(cells[1]));
  }
  return map;
}

void InferenceTypeMap::add(std::string pattern, InferenceType type) {
  pattern = to_upper(pattern);
  if (!pattern.empty() && pattern.back() == '*') {
    pattern.pop_back();
    prefixes_.emplace_back(std::move(pattern), type);
    std::stable_sort(prefixes_.begin(), prefixes_.end(),
                     [](const auto &a, const auto &b) { return a.first.size() > b.first.size(); });
  } else {
    exact_[pattern] = type;
  }
}

InferenceType InferenceTypeMap::lookup(std::string_view table_name) const {
  auto upper = to_upper(table_name);
  if (auto it = exact_.find(upper); it != exact_.end()) return it->second;
  for (const auto &[prefix, type] : prefixes_)
    if (upper.compare(0, prefix.size(), prefix) == 0) return type;
  return InferenceType::kUnknown;
}

std::vector<Fact> parse_fact_table(std::string_view content, std::string_view table_name,
                                   const InferenceTypeMap &types, Diagnostics &diag) {
  auto lines = split_lines(content);
  if (lines.empty()) throw IngestError(std::string(table_name) + ": empty table file");

  auto header = split_tabs(lines.front());
  std::optional<std::size_t> uid_column;
  std::vector<bool> text_column(header.size(), true);
  for (std::size_t c = 0; c < header.size(); ++c) {
    auto name = to_upper(trim(header[c]));
    if (name.rfind("[SKIP]", 0) != 0) continue;
    text_column[c] = false;
    if (trim(std::string_view(name).substr(6)) == "UID") {
      if (uid_column)
        throw IngestError(std::string(table_name) + ": more than one [SKIP] UID column");
      uid_column = c;
    }
  }
  if (!uid_column) throw IngestError(std::string(table_name) + ": no [SKIP] UID column");

  const auto inference = types.lookup(table_name);
  std::vector<Fact> facts;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    if (trim(lines[row]).empty()) continue;
    auto cells = split_tabs(lines[row]);
    auto where = std::string(table_name) + ":" + std::to_string(row + 1);
    if (cells.size() <= *uid_column || trim(cells[*uid_column]).empty()) {
      diag.warn(where + ": row without uid skipped");
      continue;
    }
    std::string text;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c < text_column.size() && !text_column[c]) continue;
      auto cell = trim(cells[c]);
      if (cell.empty()) continue;
      if (!text.empty()) text += ' ';
      text += cell;
    }
    std::string uid(trim(cells[*uid_column]));
    if (text.empty()) {
      diag.warn(where + ": fact " + uid + " has no text, rejected");
      continue;
    }
    facts.push_back(Fact{std::move(uid), std::move(text), std::string(table_name), inference});
  }
  return facts;
}

FactKB parse_fact_tables(const std::filesystem::path &directory,
                         const InferenceTypeMap &types, Diagnostics &diag) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(directory))
    throw IngestError("tables directory not found: " + directory.string());
  std::vector<fs::path> files;
  for (const auto &entry : fs::directory_iterator(directory))
    if (entry.is_regular_file() && entry.path().extension() == ".tsv")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::vector<Fact> facts;
  for (const auto &file : files) {
    auto table = parse_fact_table(read_file(file), file.stem().string(), types, diag);
    std::move(table.begin(), table.end(), std::back_inserter(facts));
  }
  return FactKB(std::move(facts));
}

bool split_choices(std::string_view text, std::string &stem, std::vector<Choice> &choices) {
  static const std::string kLetters = "ABCDEFGH";
  static const std::string kDigits = "12345678";
  for (const auto *labels : {&kLetters, &kDigits}) {
    std::vector<std::size_t> starts;
    std::size_t from = 0;
    for (char label : *labels) {
      std::string marker = std::string("(") + label + ")";
      std::size_t pos = text.find(marker, from);
      // Markers must start a word so "(A)" inside a token does not count.
      while (pos != std::string_view::npos && pos > 0 && text[pos - 1] != ' ')
        pos = text.find(marker, pos + 1);
      if (pos == std::string_view::npos) break;
      starts.push_back(pos);
      from = pos + marker.size();
    }
    if (starts.size() < 2) continue;
    stem = std::string(trim(text.substr(0, starts.front())));
    choices.clear();
    for (std::size_t i = 0; i < starts.size(); ++i) {
      auto begin = starts[i] + 3;
      auto end = i + 1 < starts.size() ? starts[i + 1] : text.size();
      choices.push_back(Choice{std::string(1, (*labels)[i]),
                               std::string(trim(text.substr(begin, end - begin)))});
    }
    return true;
  }
  return false;
}

Explanation parse_explanation(std::string_view cell, std::string_view qid, Diagnostics &diag) {
  Explanation explanation;
  std::unordered_set<std::string> seen;
  std::size_t pos = 0;
  while (pos < cell.size()) {
    auto start = cell.find_first_not_of(" \t", pos);
    if (start == std::string_view::npos) break;
    auto end = cell.find_first_of(" \t", start);
    if (end == std::string_view::npos) end = cell.size();
    auto token = cell.substr(start, end - start);
    pos = end;

    auto bar = token.find('|');
    if (bar == std::string_view::npos || bar == 0 || bar + 1 >= token.size() ||
        token.find('|', bar + 1) != std::string_view::npos) {
      diag.warn(std::string(qid) + ": malformed explanation token '" + std::string(token) + "'");
      continue;
    }
    std::string uid(token.substr(0, bar));
    if (!seen.insert(uid).second) {
      diag.warn(std::string(qid) + ": duplicate explanation uid " + uid + " ignored");
      continue;
    }
    explanation.entries.push_back({std::move(uid), parse_role(token.substr(bar + 1))});
  }
  return explanation;
}

std::vector<Question> parse_questions_tsv(std::string_view content, Split split,
                                          Diagnostics &diag, std::string_view source) {
  auto lines = split_lines(content);
  if (lines.empty()) throw IngestError(std::string(source) + ": empty questions file");

  std::optional<std::size_t> qid_col, question_col, key_col, explanation_col;
  auto header = split_tabs(lines.front());
  for (std::size_t c = 0; c < header.size(); ++c) {
    auto name = to_upper(trim(header[c]));
    if (name == "QUESTIONID") qid_col = c;
    else if (name == "QUESTION") question_col = c;
    else if (name == "ANSWERKEY") key_col = c;
    else if (name == "EXPLANATION") explanation_col = c;
  }
  if (!qid_col || !question_col || !key_col)
    throw IngestError(std::string(source) +
                      ": header must name QuestionID, question and AnswerKey columns");

  std::vector<Question> questions;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    if (trim(lines[row]).empty()) continue;
    auto cells = split_tabs(lines[row]);
    auto cell = [&](std::optional<std::size_t> col) -> std::string_view {
      return col && *col < cells.size() ? trim(cells[*col]) : std::string_view{};
    };
    auto where = std::string(source) + ":" + std::to_string(row + 1);

    Question q;
    q.qid = std::string(cell(qid_col));
    q.split = split;
    q.answer_key = to_upper(cell(key_col));
    if (q.qid.empty()) {
      diag.warn(where + ": question without id skipped");
      continue;
    }
    if (!split_choices(cell(question_col), q.stem, q.choices)) {
      diag.warn(where + ": " + q.qid + " has no (A)/(B) choice markers, rejected");
      continue;
    }
    if (q.answer_key.empty() || !q.find_choice(q.answer_key)) {
      diag.warn(where + ": " + q.qid + " has a missing or unknown answer key, rejected");
      continue;
    }
    if (auto text = cell(explanation_col); !text.empty()) {
      auto explanation = parse_explanation(text, q.qid, diag);
      if (!explanation.empty()) q.explanation = std::move(explanation);
    }
    questions.push_back(std::move(q));
  }
  return questions;
}

std::vector<Question> parse_questions(const std::filesystem::path &file, Split split,
                                      Diagnostics &diag) {
  if (!std::filesystem::is_regular_file(file))
    throw IngestError("questions file not found: " + file.string());
  return parse_questions_tsv(read_file(file), split, diag, file.filename().string());
}

Hypothesis build_hypothesis(const Question &question, std::string_view choice_label) {
  if (trim(question.stem).empty())
    throw std::invalid_argument("question " + question.qid + " has an empty stem");
  const Choice *choice = question.find_choice(choice_label);
  if (!choice)
    throw std::invalid_argument("question " + question.qid + " has no choice '" +
                                std::string(choice_label) + "'");
  return Hypothesis{question.qid, question.stem + " " + choice->text,
                    choice->label == question.answer_key};
}

ExplanationKB build_explanation_kb(const std::vector<Question> &questions,
                                   const FactKB *facts, Diagnostics &diag) {
  std::vector<ExplanationPair> pairs;
  for (const auto &q : questions) {
    if (q.split != Split::kTrain)
      throw std::invalid_argument("question " + q.qid + " is not a train question; only " +
                                  "train explanations may enter the explanation bank");
    if (!q.explanation || q.explanation->empty()) {
      diag.warn(q.qid + ": no explanation, not added to the explanation bank");
      continue;
    }
    if (facts) {
      for (const auto &entry : q.explanation->entries) {
        if (!facts->find(entry.fact_uid)) {
          diag.warn(q.qid + ": explanation cites unknown fact " + entry.fact_uid);
          diag.dangling_uids.push_back(entry.fact_uid);
        }
      }
    }
    pairs.push_back({build_hypothesis(q, q.answer_key), *q.explanation});
  }
  return ExplanationKB(std::move(pairs));
}

}  // namespace unirank
