#ifndef UNIRANK_REPORT_H_
#define UNIRANK_REPORT_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "unirank/eval.h"
#include "unirank/ranker.h"
#include "unirank/text.h"

namespace unirank {

using Json = nlohmann::ordered_json;

struct PreprocessingConfig {
  bool use_stopwords = true;
  std::optional<std::string> stopwords_file;  // built-in list when absent
  std::optional<std::string> lemma_file;      // no lemmatization when absent
  FitScope fit_scope = FitScope::kFactsAndHypotheses;

  TextPipeline build_pipeline() const;
};

struct RunConfig {
  RankerConfig ranker;
  PreprocessingConfig preprocessing;
};

Json to_json(const WeightingScheme &scheme);
WeightingScheme scheme_from_json(const Json &j);
Json to_json(const RankerConfig &config);
Json to_json(const PreprocessingConfig &config);
Json to_json(const RunConfig &config);
// Missing keys keep their defaults. Keys: lambda1, k, rs_scheme, us_scheme,
// normalization, preprocessing{use_stopwords, stopwords, lemmas, fit_scope}.
RunConfig run_config_from_json(const Json &j);
RunConfig load_run_config(const std::filesystem::path &path);

struct ModelReport {
  std::string name;
  RankerConfig config;
  EvalReport report;
};

Json to_json(const EvalReport &report);
// report.json body: preprocessing, split, and one entry per model.
Json report_document(const PreprocessingConfig &preprocessing, const std::string &split,
                     std::span<const ModelReport> models);

// CSV figure data. The header of every file is its first line.
std::string map_by_length_csv(std::span<const ModelReport> models);
std::string precision_at_k_csv(std::span<const ModelReport> models);
std::string knn_sweep_csv(std::span<const std::pair<std::size_t, double>> sweep);

// FNV-1a 64 of a file's bytes, hex encoded; "missing" when unreadable.
std::string file_checksum(const std::filesystem::path &path);

void write_text_file(const std::filesystem::path &path, const std::string &content);

}  // namespace unirank

#endif  // UNIRANK_REPORT_H_
