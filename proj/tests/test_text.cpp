#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "citepred/error.hpp"
#include "citepred/textmetrics.hpp"
#include "porter_published.hpp"

using namespace citepred;
using namespace citepred::text;

namespace {

std::vector<std::string> toks(std::initializer_list<const char*> words) { return {words.begin(), words.end()}; }

Lexicon small_lexicon() { return Lexicon({{"good", 1.9}, {"bad", -2.5}, {"great", 3.1}, {"poor", -2.1}}); }

StopWords english() { return StopWords::load_file(std::string(CITEPRED_DATA_DIR) + "/stopwords_en.txt"); }

}  // namespace

TEST(Porter, PublishedPairs) {
  for (const auto& [in, out] : kPorterPublishedPairs) EXPECT_EQ(porter_stem(in), out) << in;
  EXPECT_GE(std::size(kPorterPublishedPairs), 30u);
}

// Reference pairs were produced by tests/oracles/make_porter_vectors.py.
TEST(Porter, ReferenceVocabulary) {
  std::ifstream in(std::string(CITEPRED_TEST_DATA) + "/porter_vectors.tsv");
  ASSERT_TRUE(in);
  std::string word, stem;
  std::size_t checked = 0, wrong = 0;
  while (in >> word >> stem) {
    ++checked;
    if (porter_stem(word) != stem) {
      if (++wrong < 10) ADD_FAILURE() << word << " -> " << porter_stem(word) << ", expected " << stem;
    }
  }
  EXPECT_GT(checked, 7000u);
  EXPECT_EQ(wrong, 0u);
}

TEST(Porter, ShortWordsUntouched) {
  EXPECT_EQ(porter_stem("as"), "as");
  EXPECT_EQ(porter_stem("a"), "a");
  EXPECT_EQ(porter_stem(""), "");
}

TEST(Tokenize, SplitsOnNonAlphanumerics) {
  EXPECT_EQ(tokenize("The reaction, a CO2-based (x) step!"),
            toks({"the", "reaction", "co2", "based", "step"}));
  EXPECT_EQ(tokenize("caf\xc3\xa9 na\xc3\xafve"), toks({"caf", "na", "ve"}));
}

TEST(Preprocess, RemovesStopWordsAndStems) {
  auto sw = english();
  EXPECT_EQ(preprocess("The reaction", sw).tokens, toks({"reaction"}));
  auto p = preprocess("running runs", sw);
  EXPECT_EQ(p.tokens, toks({"run", "run"}));
  EXPECT_EQ(p.raw_tokens, toks({"running", "runs"}));
  auto empty = preprocess("", sw);
  EXPECT_EQ(empty.raw_char_count, 0u);
  EXPECT_TRUE(empty.tokens.empty());
}

TEST(StopWords, ShippedListLoads) {
  auto sw = english();
  EXPECT_GE(sw.size(), 170u);
  EXPECT_TRUE(sw.contains("the"));
  EXPECT_TRUE(sw.contains("not"));
  EXPECT_FALSE(sw.contains("reaction"));
}

TEST(Length, CountsCodePoints) {
  EXPECT_EQ(abstract_length("abc"), 3u);
  EXPECT_EQ(abstract_length(""), 0u);
  EXPECT_EQ(abstract_length(std::string(1000, 'x')), 1000u);
  EXPECT_EQ(abstract_length("na\xc3\xafve \xe2\x82\xac"), 7u);
}

TEST(Sentiment, FormulaValue) {
  const auto lex = small_lexicon();
  const double expected = 1.9 / std::sqrt(1.9 * 1.9 + 15.0);
  EXPECT_NEAR(sentiment(toks({"good"}), lex), expected, 1e-12);
  EXPECT_NEAR(sentiment(toks({"good"}), lex), 0.4404, 1e-4);
  EXPECT_NEAR(sentiment(toks({"not", "good"}), lex), -expected, 1e-12);
  EXPECT_EQ(sentiment(toks({"plain", "words"}), lex), 0.0);
  EXPECT_EQ(sentiment({}, lex), 0.0);
}

TEST(Sentiment, NegationWindowIsThreeTokens) {
  const auto lex = small_lexicon();
  const double g = sentiment(toks({"good"}), lex);
  EXPECT_NEAR(sentiment(toks({"not", "very", "really", "good"}), lex), -g, 1e-12);
  EXPECT_NEAR(sentiment(toks({"not", "a", "b", "c", "good"}), lex), g, 1e-12);
}

TEST(Sentiment, OddUnderLexiconNegation) {
  const auto lex = Lexicon::load_file(std::string(CITEPRED_DATA_DIR) + "/sentiment_lexicon.tsv");
  const auto neg = lex.negated();
  const auto tokens = tokenize("This is not a bad result, it is a great and useful advance without poor fits.");
  const double s = sentiment(tokens, lex);
  EXPECT_NE(s, 0.0);
  EXPECT_EQ(sentiment(tokens, neg), -s);
  EXPECT_GE(s, -1.0);
  EXPECT_LE(s, 1.0);
}

TEST(Sentiment, ShippedLexiconHasGood) {
  const auto lex = Lexicon::load_file(std::string(CITEPRED_DATA_DIR) + "/sentiment_lexicon.tsv");
  EXPECT_EQ(lex.valence("good"), 1.9);
  EXPECT_GT(lex.size(), 7000u);
}

TEST(Lexicon, MalformedLinesNameTheLine) {
  std::istringstream bad("good\t1.9\nbroken line\n");
  try {
    Lexicon::load(bad);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("2"), std::string::npos) << e.what();
  }
  std::istringstream out_of_range("wow\t7\n");
  EXPECT_THROW(Lexicon::load(out_of_range), DataError);
}

TEST(Complexity, Examples) {
  EXPECT_EQ(complexity(toks({"a", "b", "c"})), 0.0);
  EXPECT_DOUBLE_EQ(complexity(toks({"a", "a", "a", "b"})), 1.0);
  EXPECT_EQ(complexity({}), 0.0);
}

TEST(Diversity, Examples) {
  EXPECT_EQ(diversity(toks({"a", "b", "c"})), 1.0);
  EXPECT_DOUBLE_EQ(*diversity(toks({"run", "run", "run"})), 1.0 / 3.0);
  EXPECT_EQ(diversity(toks({"a", "b", "a", "c"})), 0.75);
  EXPECT_FALSE(diversity({}).has_value());
}

TEST(Commonness, TwoAbstractCorpus) {
  auto sw = english();
  auto a = preprocess("catalyst reaction", sw);
  auto b = preprocess("catalyst yield", sw);
  CorpusTermTable table;
  table.add(a.tokens);
  table.add(b.tokens);
  EXPECT_EQ(commonness(a.tokens, table), 1.5);
  EXPECT_EQ(commonness(b.tokens, table), 1.5);

  CorpusTermTable single;
  single.add(toks({"x", "y", "z"}));
  EXPECT_EQ(commonness(toks({"x", "y", "z"}), single), 1.0);
  EXPECT_THROW(commonness(toks({"unseen"}), single), DataError);
}

TEST(Commonness, MergeEqualsSequentialAdd) {
  CorpusTermTable a, b, all;
  a.add(toks({"x", "y"}));
  b.add(toks({"y", "z", "z"}));
  all.add(toks({"x", "y"}));
  all.add(toks({"y", "z", "z"}));
  a.merge(b);
  EXPECT_EQ(a.total(), all.total());
  for (const char* w : {"x", "y", "z"}) EXPECT_EQ(a.count(w), all.count(w));
}

TEST(TextProperties, RandomAbstracts) {
  auto sw = english();
  std::mt19937_64 eng(31);
  const std::vector<std::string> vocab{"alpha", "beta", "gamma", "delta", "epsilon", "zeta", "the", "of", "and"};
  std::vector<TokenizedAbstract> docs;
  CorpusTermTable table;
  for (int d = 0; d < 200; ++d) {
    std::string textbuf;
    const int len = 1 + static_cast<int>(eng() % 15);
    for (int i = 0; i < len; ++i) textbuf += vocab[eng() % vocab.size()] + " ";
    docs.push_back(preprocess(textbuf, sw));
    table.add(docs.back().tokens);
  }
  for (const auto& d : docs) {
    if (d.tokens.empty()) continue;
    const double div = *diversity(d.tokens);
    const double cx = complexity(d.tokens);
    EXPECT_GT(div, 0.0);
    EXPECT_LE(div, 1.0);
    // All stems distinct means all counts equal.
    if (div == 1.0) EXPECT_EQ(cx, 0.0);
    EXPECT_GE(commonness(d.tokens, table), 1.0);

    std::vector<std::string> twice = d.tokens;
    twice.insert(twice.end(), d.tokens.begin(), d.tokens.end());
    EXPECT_NEAR(complexity(twice), 2.0 * cx, 1e-12);
    EXPECT_NEAR(*diversity(twice), div / 2.0, 1e-12);
  }
}

TEST(TextMetrics, ComputeBundlesEverything) {
  auto sw = english();
  const std::string abs = "Good catalysts improve the reaction yield.";
  auto p = preprocess(abs, sw);
  CorpusTermTable table;
  table.add(p.tokens);
  auto m = compute_text_metrics(abs, p, small_lexicon(), table);
  EXPECT_EQ(m.length_chars, abs.size());
  EXPECT_NEAR(m.sentiment, 0.4404, 1e-4);
  EXPECT_EQ(m.diversity, 1.0);
  EXPECT_EQ(m.commonness, 1.0);
}
