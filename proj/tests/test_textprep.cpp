#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "sumfuse/textprep.hpp"

using namespace sumfuse;

TEST_CASE("tokenize basics") {
  CHECK(tokenize("The cat sat.") ==
        std::vector<std::string>{"the", "cat", "sat"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("   \t\n ").empty());
}

TEST_CASE("tokenize keeps internal periods only") {
  // golden rule-table behavior
  CHECK(tokenize("U.S. policy, 2004") ==
        std::vector<std::string>{"u.s", "policy", "2004"});
  CHECK(tokenize("e.g. this") == std::vector<std::string>{"e.g", "this"});
  CHECK(tokenize("end.") == std::vector<std::string>{"end"});
  CHECK(tokenize("3.14 is pi") == std::vector<std::string>{"3.14", "is", "pi"});
}

TEST_CASE("tokenize idempotence") {
  std::mt19937 rng(42);
  const std::string alphabet = "abcXYZ089 .,!?-'\"()";
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    int len = static_cast<int>(rng() % 60);
    for (int i = 0; i < len; ++i) text += alphabet[rng() % alphabet.size()];
    auto toks = tokenize(text);
    std::string joined;
    for (const auto& t : toks) {
      if (!joined.empty()) joined += ' ';
      joined += t;
    }
    CHECK(tokenize(joined) == toks);
  }
}

TEST_CASE("porter stemmer fixpoints and spec examples") {
  CHECK(porter_stem("running") == "run");
  CHECK(porter_stem("cat") == "cat");
  CHECK(porter_stem("caresses") == "caress");
}

TEST_CASE("porter stemmer golden vocabulary") {
  // pairs from the algorithm's published examples
  const std::pair<const char*, const char*> golden[] = {
      {"caresses", "caress"}, {"ponies", "poni"},       {"ties", "ti"},
      {"caress", "caress"},   {"cats", "cat"},          {"feed", "feed"},
      {"agreed", "agre"},     {"plastered", "plaster"}, {"bled", "bled"},
      {"motoring", "motor"},  {"sing", "sing"},         {"conflated", "conflat"},
      {"troubled", "troubl"}, {"sized", "size"},        {"hopping", "hop"},
      {"tanned", "tan"},      {"falling", "fall"},      {"hissing", "hiss"},
      {"fizzed", "fizz"},     {"failing", "fail"},      {"filing", "file"},
      {"happy", "happi"},     {"sky", "sky"},           {"relational", "relat"},
      {"conditional", "condit"}, {"rational", "ration"},
      {"digitizer", "digit"}, {"operator", "oper"},     {"feudalism", "feudal"},
      {"hopefulness", "hope"}, {"callousness", "callous"},
      {"formaliti", "formal"}, {"sensitiviti", "sensit"},
      {"triplicate", "triplic"}, {"formative", "form"}, {"formalize", "formal"},
      {"electriciti", "electr"}, {"electrical", "electr"},
      {"hopeful", "hope"},    {"goodness", "good"},     {"revival", "reviv"},
      {"allowance", "allow"}, {"inference", "infer"},   {"airliner", "airlin"},
      {"gyroscopic", "gyroscop"}, {"adjustable", "adjust"},
      {"defensible", "defens"}, {"irritant", "irrit"},
      {"replacement", "replac"}, {"adjustment", "adjust"},
      {"dependent", "depend"}, {"adoption", "adopt"},   {"communism", "commun"},
      {"activate", "activ"},  {"effective", "effect"},  {"roll", "roll"},
      {"generalization", "gener"}, {"oscillators", "oscil"},
  };
  for (const auto& [in, out] : golden) {
    CAPTURE(in);
    CHECK(porter_stem(in) == out);
  }
}

TEST_CASE("split_sentences basics") {
  CHECK(split_sentences("A. B? C!").size() == 3);
  CHECK(split_sentences("").empty());
  CHECK(split_sentences("   ").empty());
}

TEST_CASE("split_sentences abbreviation guard") {
  auto s = split_sentences("Mr. Smith left.");
  REQUIRE(s.size() == 1);
  CHECK(s[0] == "Mr. Smith left.");
  CHECK(split_sentences("Dr. Jones met Mrs. Lee. They talked.").size() == 2);
}

TEST_CASE("split_sentences covers all non-whitespace") {
  std::mt19937 rng(7);
  const std::string alphabet = "abc AB.?! ,x";
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    int len = static_cast<int>(rng() % 80);
    for (int i = 0; i < len; ++i) text += alphabet[rng() % alphabet.size()];
    auto parts = split_sentences(text);
    std::string all, joined;
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) all += c;
    for (const auto& p : parts)
      for (char c : p)
        if (!std::isspace(static_cast<unsigned char>(c))) joined += c;
    CHECK(all == joined);
  }
}

TEST_CASE("build_term_vector counting") {
  VectorOptions opts;
  opts.remove_stopwords = false;
  opts.stem = false;
  auto v = build_term_vector("cat cat dog", opts);
  CHECK(v.at("cat") == doctest::Approx(2.0));
  CHECK(v.at("dog") == doctest::Approx(1.0));
  CHECK(v.norm() == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("build_term_vector stopwords and stemming") {
  VectorOptions opts;
  CHECK(build_term_vector("the the the", opts).empty());
  auto v = build_term_vector("cats cat", opts);
  CHECK(v.at("cat") == doctest::Approx(2.0));
  CHECK(v.size() == 1);
}

TEST_CASE("build_term_vector empty input") {
  auto v = build_term_vector("");
  CHECK(v.empty());
  CHECK(v.norm() == 0.0);
}

TEST_CASE("term vector permutation invariance and norm cache") {
  std::mt19937 rng(11);
  std::vector<std::string> words = {"alpha", "beta",  "gamma", "delta",
                                    "omega", "sigma", "theta"};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> sample;
    int len = 1 + static_cast<int>(rng() % 15);
    for (int i = 0; i < len; ++i) sample.push_back(words[rng() % words.size()]);
    auto join = [](const std::vector<std::string>& w) {
      std::string s;
      for (const auto& x : w) {
        if (!s.empty()) s += ' ';
        s += x;
      }
      return s;
    };
    auto v1 = build_term_vector(join(sample));
    std::shuffle(sample.begin(), sample.end(), rng);
    auto v2 = build_term_vector(join(sample));
    CHECK(v1.weights() == v2.weights());

    double s = 0.0;
    for (const auto& [k, w] : v1.weights()) s += w * w;
    CHECK(v1.norm() == doctest::Approx(std::sqrt(s)).epsilon(1e-9));
  }
}

TEST_CASE("tf-idf requires idf map") {
  VectorOptions opts;
  opts.weighting = VectorOptions::Weighting::tf_idf;
  CHECK_THROWS_AS(build_term_vector("cat", opts), std::invalid_argument);
  std::map<std::string, double> idf = {{"cat", 2.0}};
  auto v = build_term_vector("cat cat", opts, &idf);
  CHECK(v.at("cat") == doctest::Approx(4.0));
}
