#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "unirank/text.h"

using namespace unirank;

TEST_CASE("tokenize lowercases and splits on non-alphanumerics") {
  CHECK(tokenize("friction is a kind of force") ==
        TokenStream{"friction", "is", "a", "kind", "of", "force"});
  CHECK(tokenize("objects' surfaces move") == TokenStream{"objects", "surfaces", "move"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("Water freezes at 0 degrees; H2O!") ==
        TokenStream{"water", "freezes", "at", "0", "degrees", "h2o"});
}

TEST_CASE("normalize drops stopwords and applies lemmas") {
  auto stop = StopwordList::standard();
  CHECK(normalize({"friction", "is", "a", "kind", "of", "force"}, stop) ==
        TokenStream{"friction", "kind", "force"});
  CHECK(normalize({}, stop).empty());

  LemmaMap lemmas(std::unordered_map<std::string, std::string>{{"sticks", "stick"}});
  CHECK(normalize({"two", "sticks"}, stop, &lemmas) == TokenStream{"two", "stick"});
}

TEST_CASE("standard stopword list has the expected size and classes") {
  auto stop = StopwordList::standard();
  CHECK(stop.size() >= 140);
  CHECK(stop.size() <= 200);
  for (const char *w : {"the", "of", "is", "they", "and", "what", "could"}) CHECK(stop.contains(w));
  for (const char *w : {"force", "heat", "kind", "two", "0"}) CHECK_FALSE(stop.contains(w));
  CHECK(stop.contains("THE"));
}

TEST_CASE("stopword and lemma files") {
  auto dir = std::filesystem::temp_directory_path() / "unirank_text_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "stop.txt") << "# comment\nFoo\n\nbar  # trailing\n";
    std::ofstream(dir / "lemmas.tsv") << "ran\trun\nrunning\tran\nmice\tmouse\n";
  }
  auto stop = StopwordList::load(dir / "stop.txt");
  CHECK(stop.size() == 2);
  CHECK(stop.contains("foo"));
  CHECK(stop.contains("bar"));

  // running -> ran -> run is collapsed to a fixed point.
  auto lemmas = LemmaMap::load(dir / "lemmas.tsv");
  CHECK(lemmas.lookup("running") == "run");
  CHECK(lemmas.lookup(lemmas.lookup("running")) == "run");
  CHECK(lemmas.lookup("mouse") == "mouse");

  CHECK_THROWS_AS(StopwordList::load(dir / "missing.txt"), std::runtime_error);
  CHECK_THROWS_AS(LemmaMap(std::unordered_map<std::string, std::string>{{"a", "b"}, {"b", "a"}}),
                  std::invalid_argument);
  std::filesystem::remove_all(dir);
}

TEST_CASE("normalize is idempotent") {
  auto stop = StopwordList::standard();
  LemmaMap lemmas(std::unordered_map<std::string, std::string>{
      {"is", "be"}, {"sticks", "stick"}, {"went", "go"}, {"goes", "go"}});
  std::mt19937 rng(7);
  const std::vector<std::string> words{"is",  "be",   "sticks", "stick", "went", "go",
                                       "the", "heat", "a",      "goes",  "force"};
  for (int trial = 0; trial < 200; ++trial) {
    TokenStream s;
    for (int i = 0; i < 8; ++i) s.push_back(words[rng() % words.size()]);
    for (const LemmaMap *lm : std::initializer_list<const LemmaMap *>{nullptr, &lemmas}) {
      auto once = normalize(s, stop, lm);
      CHECK(normalize(once, stop, lm) == once);
    }
  }
}

TEST_CASE("content overlap on the friction example") {
  TextPipeline pipeline;
  const std::string h =
      "What is an example of a force producing heat? two sticks getting warm when rubbed together";
  auto shared_force = content_overlap_count(h, "friction is a kind of force", pipeline);
  CHECK(shared_force >= 1);
  CHECK(shared_force == 1);
  CHECK(overlap_bucket(shared_force) == OverlapBucket::kOne);

  auto abstract_fact =
      content_overlap_count(h, "friction causes the temperature of an object to increase", pipeline);
  CHECK(abstract_fact == 0);
  CHECK(overlap_bucket(abstract_fact) == OverlapBucket::kNone);

  // Self overlap counts distinct content terms.
  CHECK(content_overlap_count("force force heat of the", "force force heat of the", pipeline) == 2);
  CHECK(overlap_bucket(2) == OverlapBucket::kMany);
  CHECK(std::string(overlap_bucket_name(OverlapBucket::kMany)) == "1+");
}

TEST_CASE("content overlap is symmetric and monotone") {
  TextPipeline pipeline;
  std::mt19937 rng(11);
  const std::vector<std::string> words{"heat", "force", "the", "of",    "stick", "warm",
                                       "is",   "rub",   "ball", "water", "sun"};
  auto sentence = [&](int n) {
    std::string s;
    for (int i = 0; i < n; ++i) s += words[rng() % words.size()] + " ";
    return s;
  };
  for (int trial = 0; trial < 200; ++trial) {
    auto a = sentence(5), b = sentence(6);
    auto ab = content_overlap_count(a, b, pipeline);
    CHECK(ab == content_overlap_count(b, a, pipeline));
    auto b_terms = tokenize(b);
    if (b_terms.empty()) continue;
    auto extended = a + " " + b_terms[rng() % b_terms.size()];
    CHECK(content_overlap_count(extended, b, pipeline) >= ab);
  }
}
