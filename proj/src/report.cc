#include "unirank/report.h"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace unirank {
namespace {

std::string fixed(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

Json category_json(const std::map<std::string, double> &m) {
  Json j = Json::object();
  for (const auto &[k, v] : m) j[k] = v;
  return j;
}

}  // namespace

TextPipeline PreprocessingConfig::build_pipeline() const {
  StopwordList stopwords;
  if (use_stopwords)
    stopwords = stopwords_file ? StopwordList::load(*stopwords_file) : StopwordList::standard();
  std::optional<LemmaMap> lemmas;
  if (lemma_file) lemmas = LemmaMap::load(*lemma_file);
  return TextPipeline(std::move(stopwords), std::move(lemmas));
}

Json to_json(const WeightingScheme &scheme) {
  if (scheme.kind() == WeightingScheme::Kind::kTfIdf) return Json{{"type", "tfidf"}};
  return Json{{"type", "bm25"}, {"k1", scheme.k1()}, {"b", scheme.b()}};
}

WeightingScheme scheme_from_json(const Json &j) {
  if (j.is_string()) return WeightingScheme::parse(j.get<std::string>());
  return WeightingScheme::parse(j.at("type").get<std::string>(), j.value("k1", 1.2),
                                j.value("b", 0.75));
}

Json to_json(const RankerConfig &config) {
  return Json{{"model", config.model_name()},
              {"lambda1", config.lambda1},
              {"k", config.k},
              {"rs_scheme", to_json(config.rs_scheme)},
              {"us_scheme", to_json(config.us_scheme)},
              {"normalization", normalization_name(config.normalization)}};
}

Json to_json(const PreprocessingConfig &config) {
  return Json{{"use_stopwords", config.use_stopwords},
              {"stopwords", config.stopwords_file ? Json(*config.stopwords_file)
                                                  : Json(config.use_stopwords ? "builtin" : "none")},
              {"lemmas", config.lemma_file ? Json(*config.lemma_file) : Json(nullptr)},
              {"fit_scope", fit_scope_name(config.fit_scope)},
              {"tokenizer", "lowercase, split on non-alphanumeric"}};
}

Json to_json(const RunConfig &config) {
  Json j = to_json(config.ranker);
  j["preprocessing"] = to_json(config.preprocessing);
  return j;
}

RunConfig run_config_from_json(const Json &j) {
  RunConfig config;
  try {
    if (j.contains("lambda1")) config.ranker.lambda1 = j.at("lambda1").get<double>();
    if (j.contains("k")) config.ranker.k = j.at("k").get<std::size_t>();
    if (j.contains("rs_scheme")) config.ranker.rs_scheme = scheme_from_json(j.at("rs_scheme"));
    if (j.contains("us_scheme")) config.ranker.us_scheme = scheme_from_json(j.at("us_scheme"));
    if (j.contains("normalization"))
      config.ranker.normalization = parse_normalization(j.at("normalization").get<std::string>());
    if (j.contains("preprocessing")) {
      const auto &p = j.at("preprocessing");
      auto &pre = config.preprocessing;
      pre.use_stopwords = p.value("use_stopwords", true);
      if (p.contains("stopwords") && p.at("stopwords").is_string()) {
        auto s = p.at("stopwords").get<std::string>();
        if (s == "none") pre.use_stopwords = false;
        else if (s != "builtin") pre.stopwords_file = s;
      }
      if (p.contains("lemmas") && p.at("lemmas").is_string())
        pre.lemma_file = p.at("lemmas").get<std::string>();
      if (p.contains("fit_scope"))
        pre.fit_scope = parse_fit_scope(p.at("fit_scope").get<std::string>());
    }
  } catch (const nlohmann::json::exception &e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  config.ranker.validate();
  return config;
}

RunConfig load_run_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config file not found: " + path.string());
  try {
    return run_config_from_json(Json::parse(in));
  } catch (const nlohmann::json::parse_error &e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

Json to_json(const EvalReport &report) {
  Json lengths = Json::array();
  for (const auto &b : report.map_by_explanation_length)
    lengths.push_back({{"bucket", b.bin.label}, {"questions", b.questions}, {"map", b.map}});
  Json pak = Json::array();
  for (const auto &[k, p] : report.precision_at_k) pak.push_back({{"k", k}, {"precision", p}});
  Json per_question = Json::object();
  for (const auto &[qid, ap] : report.per_question) per_question[qid] = ap;
  return Json{{"questions", report.questions},
              {"overall_map", report.overall_map},
              {"map_by_role", category_json(report.map_by_role)},
              {"map_by_overlap", category_json(report.map_by_overlap)},
              {"map_by_inference", category_json(report.map_by_inference)},
              {"map_by_explanation_length", std::move(lengths)},
              {"precision_at_k", std::move(pak)},
              {"per_question_ap", std::move(per_question)}};
}

Json report_document(const PreprocessingConfig &preprocessing, const std::string &split,
                     std::span<const ModelReport> models) {
  Json list = Json::array();
  for (const auto &m : models)
    list.push_back({{"name", m.name}, {"config", to_json(m.config)}, {"report", to_json(m.report)}});
  return Json{{"split", split},
              {"preprocessing", to_json(preprocessing)},
              {"models", std::move(list)}};
}

std::string map_by_length_csv(std::span<const ModelReport> models) {
  std::string out = "length,map,model\n";
  for (const auto &m : models)
    for (const auto &b : m.report.map_by_explanation_length)
      if (b.questions > 0) out += b.bin.label + "," + fixed(b.map) + "," + m.name + "\n";
  return out;
}

std::string precision_at_k_csv(std::span<const ModelReport> models) {
  std::string out = "k,precision,model\n";
  for (const auto &m : models)
    for (const auto &[k, p] : m.report.precision_at_k)
      out += std::to_string(k) + "," + fixed(p) + "," + m.name + "\n";
  return out;
}

std::string knn_sweep_csv(std::span<const std::pair<std::size_t, double>> sweep) {
  std::string out = "k,map\n";
  for (const auto &[k, map] : sweep) out += std::to_string(k) + "," + fixed(map) + "\n";
  return out;
}

std::string file_checksum(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "missing";
  std::uint64_t hash = 1469598103934665603ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 1099511628211ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016" PRIx64, hash);
  return hex;
}

void write_text_file(const std::filesystem::path &path, const std::string &content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

}  // namespace unirank
