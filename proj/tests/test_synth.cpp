#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "citepred/centrality.hpp"
#include "citepred/error.hpp"
#include "citepred/features.hpp"
#include "citepred/graph.hpp"
#include "citepred/stats.hpp"
#include "citepred/synth.hpp"

using namespace citepred;
using namespace citepred::synth;

namespace {

const text::Lexicon& lexicon() {
  static const auto lex = text::Lexicon::load_file(std::string(CITEPRED_DATA_DIR) + "/sentiment_lexicon.tsv");
  return lex;
}

const text::StopWords& stopwords() {
  static const auto sw = text::StopWords::load_file(std::string(CITEPRED_DATA_DIR) + "/stopwords_en.txt");
  return sw;
}

std::string serialize(const corpus::Corpus& c) {
  std::ostringstream out;
  corpus::write_corpus(out, c);
  return out.str();
}

SynthConfig small(int publications) {
  SynthConfig cfg;
  cfg.publications = publications;
  cfg.authors = 2 * publications;
  return cfg;
}

}  // namespace

TEST(Synth, SameSeedSameBytes) {
  auto cfg = small(900);
  const auto a = serialize(generate(cfg, lexicon(), stopwords()));
  EXPECT_EQ(a, serialize(generate(cfg, lexicon(), stopwords(), 4)));
  cfg.seed = 43;
  EXPECT_NE(a, serialize(generate(cfg, lexicon(), stopwords())));
}

TEST(Synth, CorpusInvariants) {
  auto cfg = small(1200);
  cfg.years = 4;
  const auto c = generate(cfg, lexicon(), stopwords());
  ASSERT_EQ(c.size(), 1200u);
  EXPECT_EQ(c.year_window(), (corpus::YearWindow{2010, 2013}));
  // Reparsing runs every corpus validation again.
  std::istringstream in(serialize(c));
  EXPECT_EQ(corpus::parse_corpus(in), c);
  EXPECT_EQ(corpus::filter_complete(c).report.dropped(), 0u);
  std::set<std::string> ids;
  for (const auto& r : c.records()) {
    ids.insert(r.pub_id);
    EXPECT_GE(r.author_ids.size(), 1u);
    EXPECT_LE(r.author_ids.size(), static_cast<std::size_t>(cfg.byline_max));
    EXPECT_GT(*r.sjr, 0.0);
    EXPECT_GE(*r.citations, 0);
  }
  EXPECT_EQ(ids.size(), c.size());
  EXPECT_EQ(corpus::describe(c).per_year.at(2010).publications, 300u);
}

TEST(Synth, BylineMeanWithinFivePercent) {
  for (double mean : {2.0, 3.0, 4.5}) {
    auto cfg = small(6000);
    cfg.byline_mean = mean;
    cfg.coefficients.clear();
    const auto c = generate(cfg, lexicon(), stopwords());
    EXPECT_NEAR(corpus::describe(c).total.authors_mean, mean, 0.05 * mean);
  }
}

TEST(Synth, PreferentialAttachmentConcentratesAuthorship) {
  auto cfg = small(3000);
  cfg.coefficients.clear();
  cfg.attachment = 0.0;
  const auto flat = corpus::describe(generate(cfg, lexicon(), stopwords())).total.unique_authors;
  cfg.attachment = 3.0;
  const auto skewed = corpus::describe(generate(cfg, lexicon(), stopwords())).total.unique_authors;
  EXPECT_LT(skewed, flat);
}

// Network features use the cheap metrics only; betweenness and closeness on
// 10k-node graphs are covered by the acceptance run.
TEST(Synth, NullModelHasNoSignal) {
  SynthConfig cfg;
  cfg.coefficients = {{"sjr", 0.0}, {"x9", 0.0}};
  const auto c = generate(cfg, lexicon(), stopwords());
  ASSERT_EQ(c.size(), 10000u);
  const auto years = graph::window_years(c);
  const auto pub = graph::build_publication_network(c, years);
  const auto author = graph::build_author_network(c, years);
  const Eigen::VectorXd pub_degree = centrality::degree_all(pub);
  const Eigen::VectorXd pub_constraint = centrality::constraint_all(pub);
  const Eigen::VectorXd author_degree = centrality::degree_all(author);
  const auto text = features::compute_text_inputs(c, lexicon(), stopwords());

  const auto n = static_cast<Eigen::Index>(c.size());
  Eigen::MatrixXd cols(n, 8);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = c[static_cast<std::size_t>(i)];
    const auto& tm = text.at(r.pub_id);
    double deg = 0.0;
    for (const auto& a : r.author_ids) deg += author_degree[*author.index_of(a)];
    cols.row(i) << static_cast<double>(*r.citations), *r.sjr, static_cast<double>(r.author_ids.size()),
        pub_degree[*pub.index_of(r.pub_id)], pub_constraint[*pub.index_of(r.pub_id)],
        deg / static_cast<double>(r.author_ids.size()), tm.sentiment, tm.commonness;
  }
  for (Eigen::Index f = 1; f < cols.cols(); ++f) {
    auto rho = stats::spearman(cols.col(0), cols.col(f));
    ASSERT_TRUE(rho.has_value());
    EXPECT_LT(std::abs(rho->rho), 0.05) << "column " << f;
  }
}

TEST(Synth, PlantedSjrCorrelates) {
  auto cfg = small(3000);
  cfg.coefficients = {{"sjr", 1.5}};
  const auto c = generate(cfg, lexicon(), stopwords());
  Eigen::VectorXd cites(3000), sjr(3000);
  for (Eigen::Index i = 0; i < 3000; ++i) {
    cites[i] = static_cast<double>(*c[static_cast<std::size_t>(i)].citations);
    sjr[i] = *c[static_cast<std::size_t>(i)].sjr;
  }
  EXPECT_GT(stats::spearman(cites, sjr)->rho, 0.6);
}

TEST(Synth, ConfigValidation) {
  SynthConfig cfg;
  cfg.authors = 5;
  cfg.byline_max = 12;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.coefficients = {{"x99", 1.0}};
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.coefficients = {{"sjr", std::nan("")}};
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.publications = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Synth, PseudoWordsAreDistinctTokens) {
  std::set<std::string> words;
  for (int i = 0; i < 4000; ++i) {
    const auto w = pseudo_word(i);
    EXPECT_EQ(text::tokenize(w), std::vector<std::string>{w});
    words.insert(w);
  }
  EXPECT_EQ(words.size(), 4000u);
}
