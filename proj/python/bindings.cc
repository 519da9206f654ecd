#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>

#include "unirank/corpus.h"
#include "unirank/eval.h"
#include "unirank/ranker.h"
#include "unirank/report.h"
#include "unirank/text.h"

namespace py = pybind11;
using namespace unirank;

namespace {

// Hands nested report data to Python through the json module.
py::object to_python(const Json &j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

RankerConfig make_config(double lambda1, std::size_t k, const std::string &rs,
                         const std::string &us, const std::string &normalization, double k1,
                         double b) {
  RankerConfig c;
  c.lambda1 = lambda1;
  c.k = k;
  c.rs_scheme = WeightingScheme::parse(rs, k1, b);
  c.us_scheme = WeightingScheme::parse(us, k1, b);
  c.normalization = parse_normalization(normalization);
  c.validate();
  return c;
}

PreprocessingConfig make_preprocessing(bool stopwords, std::optional<std::string> stopwords_file,
                                       std::optional<std::string> lemma_file,
                                       const std::string &fit_scope) {
  PreprocessingConfig p;
  p.use_stopwords = stopwords;
  p.stopwords_file = std::move(stopwords_file);
  p.lemma_file = std::move(lemma_file);
  p.fit_scope = parse_fit_scope(fit_scope);
  return p;
}

// Ranker bound to one train split; queries are given as text or questions.
class PyRanker {
 public:
  PyRanker(const CorpusSplit &train, PreprocessingConfig pre) : pre_(std::move(pre)) {
    if (train.split != Split::kTrain) throw std::invalid_argument("ranker needs a train split");
    Diagnostics diag;
    auto ekb = build_explanation_kb(train.questions, &train.facts, diag);
    ranker_ = std::make_unique<UnificationRanker>(train.facts, std::move(ekb),
                                                  pre_.build_pipeline(), pre_.fit_scope);
  }

  std::vector<py::tuple> rank(const std::string &text, const RankerConfig &cfg,
                              std::optional<std::size_t> top) const {
    Hypothesis h{"", text, false};
    std::vector<RankedRecord> records;
    {
      py::gil_scoped_release release;
      records = top ? ranker_->explain_topk(h, cfg, *top) : ranker_->rank(h, cfg).records;
    }
    std::vector<py::tuple> out;
    out.reserve(records.size());
    for (const auto &r : records)
      out.push_back(py::make_tuple(std::string(r.fact_uid), r.combined, r.rs, r.us));
    return out;
  }

  py::object evaluate(const CorpusSplit &queries, const RankerConfig &cfg,
                      std::size_t workers) const {
    Diagnostics diag;
    auto gold = build_gold_sets(queries.questions, ranker_->facts(), ranker_->pipeline(), diag);
    EvalReport report;
    {
      py::gil_scoped_release release;
      report = evaluate_model(*ranker_, gold, cfg, {}, workers);
    }
    std::vector<ModelReport> models{{cfg.model_name(), cfg, std::move(report)}};
    return to_python(report_document(pre_, split_name(queries.split), models));
  }

  std::size_t fact_count() const { return ranker_->facts().size(); }
  std::size_t pair_count() const { return ranker_->explanations().size(); }

 private:
  PreprocessingConfig pre_;
  std::unique_ptr<UnificationRanker> ranker_;
};

}  // namespace

PYBIND11_MODULE(_unirank, m) {
  m.doc() = "Explanation reconstruction by relevance and unification scoring";

  py::register_exception<IngestError>(m, "IngestError", PyExc_ValueError);

  m.def("tokenize", [](const std::string &s) { return tokenize(s); }, py::arg("text"));
  m.def(
      "terms",
      [](const std::string &text, bool stopwords) {
        PreprocessingConfig p;
        p.use_stopwords = stopwords;
        return p.build_pipeline().terms(text);
      },
      py::arg("text"), py::arg("stopwords") = true);
  m.def(
      "content_overlap_count",
      [](const std::string &h, const std::string &f) {
        return content_overlap_count(h, f, TextPipeline());
      },
      py::arg("hypothesis"), py::arg("fact"));
  m.def(
      "overlap_bucket",
      [](std::size_t n) { return std::string(overlap_bucket_name(overlap_bucket(n))); },
      py::arg("count"));

  py::class_<Fact>(m, "Fact")
      .def_readonly("uid", &Fact::uid)
      .def_readonly("text", &Fact::text)
      .def_readonly("table_name", &Fact::table_name)
      .def_property_readonly("inference_type",
                             [](const Fact &f) { return inference_type_name(f.inference_type); })
      .def("__repr__", [](const Fact &f) { return "<Fact " + f.uid + ": " + f.text + ">"; });

  py::class_<Question>(m, "Question")
      .def_readonly("qid", &Question::qid)
      .def_readonly("stem", &Question::stem)
      .def_readonly("answer_key", &Question::answer_key)
      .def_property_readonly("choices",
                             [](const Question &q) {
                               std::vector<std::pair<std::string, std::string>> out;
                               for (const auto &c : q.choices) out.emplace_back(c.label, c.text);
                               return out;
                             })
      .def_property_readonly("explanation",
                             [](const Question &q) {
                               std::vector<std::pair<std::string, std::string>> out;
                               if (q.explanation)
                                 for (const auto &e : q.explanation->entries)
                                   out.emplace_back(e.fact_uid, role_name(e.role));
                               return out;
                             })
      .def(
          "hypothesis",
          [](const Question &q, std::optional<std::string> label) {
            return build_hypothesis(q, label.value_or(q.answer_key)).text;
          },
          py::arg("label") = py::none());

  py::class_<CorpusSplit>(m, "Corpus")
      .def_property_readonly("split", [](const CorpusSplit &c) { return split_name(c.split); })
      .def_property_readonly("facts", [](const CorpusSplit &c) { return c.facts.facts(); })
      .def_readonly("questions", &CorpusSplit::questions)
      .def("to_json", [](const CorpusSplit &c) { return to_json(c); })
      .def("save", [](const CorpusSplit &c, const std::filesystem::path &p) { save_corpus(c, p); });

  m.def("load_corpus", &load_corpus, py::arg("path"));
  m.def(
      "ingest",
      [](const std::filesystem::path &tables, const std::filesystem::path &questions,
         const std::string &split, std::optional<std::filesystem::path> inference_map) {
        Diagnostics diag;
        InferenceTypeMap types;
        if (inference_map) types = InferenceTypeMap::load(*inference_map);
        CorpusSplit c;
        c.split = parse_split(split);
        c.facts = parse_fact_tables(tables, types, diag);
        c.questions = parse_questions(questions, c.split, diag);
        return py::make_tuple(c, diag.warnings);
      },
      py::arg("tables"), py::arg("questions"), py::arg("split"),
      py::arg("inference_map") = py::none(),
      "Returns (corpus, warnings).");

  py::class_<RankerConfig>(m, "RankerConfig")
      .def(py::init(&make_config), py::arg("lambda1") = 0.83, py::arg("k") = 100,
           py::arg("rs_scheme") = "bm25", py::arg("us_scheme") = "bm25",
           py::arg("normalization") = "max", py::arg("k1") = 1.2, py::arg("b") = 0.75)
      .def_readonly("lambda1", &RankerConfig::lambda1)
      .def_readonly("k", &RankerConfig::k)
      .def_property_readonly("name", &RankerConfig::model_name);

  py::class_<PyRanker>(m, "Ranker")
      .def(py::init([](const CorpusSplit &train, bool stopwords,
                       std::optional<std::string> stopwords_file,
                       std::optional<std::string> lemma_file, const std::string &fit_scope) {
             return std::make_unique<PyRanker>(
                 train, make_preprocessing(stopwords, stopwords_file, lemma_file, fit_scope));
           }),
           py::arg("train"), py::arg("stopwords") = true, py::arg("stopwords_file") = py::none(),
           py::arg("lemma_file") = py::none(), py::arg("fit_scope") = "facts+hypotheses")
      .def("rank", &PyRanker::rank, py::arg("hypothesis"), py::arg("config") = RankerConfig{},
           py::arg("top") = py::none(),
           "List of (fact_uid, combined, rs, us), best first.")
      .def("evaluate", &PyRanker::evaluate, py::arg("queries"), py::arg("config") = RankerConfig{},
           py::arg("workers") = 0)
      .def_property_readonly("fact_count", &PyRanker::fact_count)
      .def_property_readonly("pair_count", &PyRanker::pair_count);

  m.def(
      "average_precision",
      [](const std::vector<std::string> &ranked, const std::set<std::string> &gold) {
        return average_precision(ranked, gold);
      },
      py::arg("ranked"), py::arg("gold"));
  m.def(
      "precision_at_k",
      [](const std::vector<std::string> &ranked, const std::set<std::string> &gold, std::size_t k) {
        return precision_at_k(ranked, gold, k);
      },
      py::arg("ranked"), py::arg("gold"), py::arg("k"));
  m.def(
      "mean_average_precision",
      [](const std::vector<double> &aps) { return mean_average_precision(aps); }, py::arg("aps"));
}
