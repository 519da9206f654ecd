#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "unirank/sparse.h"

namespace unirank {
namespace {

using nlohmann::ordered_json;

constexpr const char *kIndexFormat = "unirank-index-v1";

}  // namespace

void save_index(const IndexArtifact &index, const std::filesystem::path &path) {
  if (index.fact_uids.size() != index.fact_vectors.size())
    throw std::invalid_argument("index has mismatched uid and vector counts");
  ordered_json scheme{{"type", index.scheme.kind() == WeightingScheme::Kind::kTfIdf ? "tfidf" : "bm25"}};
  if (index.scheme.kind() == WeightingScheme::Kind::kBm25) {
    scheme["k1"] = index.scheme.k1();
    scheme["b"] = index.scheme.b();
  }
  ordered_json terms = ordered_json::array();
  for (const auto &[term, df] : index.stats.terms()) terms.push_back(ordered_json::array({term, df}));
  ordered_json facts = ordered_json::array();
  for (std::size_t i = 0; i < index.fact_uids.size(); ++i) {
    ordered_json entries = ordered_json::array();
    for (const auto &[id, w] : index.fact_vectors[i].entries())
      entries.push_back(ordered_json::array({id, w}));
    facts.push_back({{"uid", index.fact_uids[i]}, {"vector", std::move(entries)}});
  }
  ordered_json doc{{"format", kIndexFormat},
                   {"scheme", std::move(scheme)},
                   {"document_count", index.stats.document_count()},
                   {"average_document_length", index.stats.average_document_length()},
                   {"terms", std::move(terms)},
                   {"facts", std::move(facts)}};
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump() << "\n";
}

IndexArtifact load_index(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("index file not found: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    auto doc = ordered_json::parse(buf.str());
    if (doc.value("format", "") != kIndexFormat)
      throw std::runtime_error(std::string("expected format tag ") + kIndexFormat);
    IndexArtifact index;
    const auto &scheme = doc.at("scheme");
    index.scheme = WeightingScheme::parse(scheme.at("type").get<std::string>(),
                                          scheme.value("k1", 1.2), scheme.value("b", 0.75));
    std::vector<std::pair<std::string, std::uint32_t>> terms;
    for (const auto &t : doc.at("terms"))
      terms.emplace_back(t.at(0).get<std::string>(), t.at(1).get<std::uint32_t>());
    index.stats = VocabularyStats::from_parts(std::move(terms),
                                              doc.at("document_count").get<std::size_t>(),
                                              doc.at("average_document_length").get<double>());
    for (const auto &f : doc.at("facts")) {
      index.fact_uids.push_back(f.at("uid").get<std::string>());
      std::vector<SparseVector::Entry> entries;
      for (const auto &e : f.at("vector"))
        entries.emplace_back(e.at(0).get<TermId>(), e.at(1).get<double>());
      index.fact_vectors.emplace_back(std::move(entries));
    }
    return index;
  } catch (const nlohmann::json::exception &e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

}  // namespace unirank
