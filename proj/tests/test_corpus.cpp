#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "citepred/corpus.hpp"
#include "citepred/error.hpp"
#include "test_util.hpp"

using namespace citepred;
using namespace citepred::corpus;
using testutil::record;

namespace {

std::string line(const std::string& id, int year = 2010) {
  return R"({"pub_id": ")" + id + R"(", "year": )" + std::to_string(year) +
         R"(, "authors": ["a1"], "abstract": "text", "sjr": 1.0, "citations": 2})";
}

}  // namespace

TEST(Corpus, SharedAuthorIndexesBothPublications) {
  Corpus c({record("p1", 2010, {"a", "b"}), record("p2", 2011, {"b", "c"})});
  auto pubs = c.publications_of("b");
  ASSERT_EQ(pubs.size(), 2u);
  EXPECT_EQ(c[pubs[0]].pub_id, "p1");
  EXPECT_EQ(c[pubs[1]].pub_id, "p2");
  EXPECT_TRUE(c.publications_of("zz").empty());
  EXPECT_EQ(c.author_count(), 3u);
}

TEST(Corpus, DuplicateIdNamesTheLine) {
  std::ostringstream text;
  for (int i = 1; i <= 6; ++i) text << line("p" + std::to_string(i)) << '\n';
  text << line("p3") << '\n';
  std::istringstream in(text.str());
  try {
    parse_corpus(in);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 7"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("duplicate"), std::string::npos) << e.what();
  }
}

TEST(Corpus, EmptyStreamGivesEmptyCorpus) {
  std::istringstream in("");
  EXPECT_EQ(parse_corpus(in).size(), 0u);
  std::istringstream blank("\n  \n");
  EXPECT_TRUE(parse_corpus(blank).empty());
}

TEST(Corpus, ParseErrors) {
  auto fails = [](const std::string& text) {
    std::istringstream in(text);
    EXPECT_THROW(parse_corpus(in), DataError) << text;
  };
  fails("{not json}\n");
  fails(R"({"pub_id": "p1", "year": 2010, "authors": []})");
  fails(R"({"pub_id": "p1", "year": 2010, "authors": ["a", "a"]})");
  fails(R"({"pub_id": "p1", "year": 2010, "authors": ["a"], "sjr": -1})");
  fails(R"({"pub_id": "p1", "year": 2010, "authors": ["a"], "citations": -3})");
  fails(R"({"pub_id": "p1", "authors": ["a"]})");
  fails("[1, 2]");
}

TEST(Corpus, WindowRejectsOutsideYears) {
  std::istringstream in(line("p1", 2009));
  ParseOptions opts;
  opts.window = YearWindow{2010, 2012};
  EXPECT_THROW(parse_corpus(in, opts), DataError);
}

TEST(Corpus, CustomSchema) {
  std::istringstream in(R"({"id": "p1", "yr": 2011, "names": ["x"], "summary": "s", "rank": 0.5, "cites": 4})");
  ParseOptions opts;
  opts.schema.pub_id = "id";
  opts.schema.year = "yr";
  opts.schema.authors = "names";
  opts.schema.abstract_text = "summary";
  opts.schema.sjr = "rank";
  opts.schema.citations = "cites";
  auto c = parse_corpus(in, opts);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].citations, 4);
  EXPECT_EQ(c[0].sjr, 0.5);
}

TEST(Corpus, MissingFieldsSurviveParsing) {
  std::istringstream in(R"({"pub_id": "p1", "year": 2010, "authors": ["a"], "sjr": null})");
  auto c = parse_corpus(in);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_FALSE(c[0].sjr.has_value());
  EXPECT_FALSE(c[0].citations.has_value());
  EXPECT_TRUE(c[0].abstract_text.empty());
}

TEST(Corpus, RoundTrip) {
  Corpus c({record("p1", 2010, {"a", "b"}, "Ünïcode \"quoted\" text", 0.25, 7),
            record("p2", 2012, {"c"}, "", std::nullopt, std::nullopt),
            record("p3", 2011, {"b"}, "plain", 1.0 / 3.0, 0)});
  std::ostringstream out;
  write_corpus(out, c);
  std::istringstream in(out.str());
  EXPECT_EQ(parse_corpus(in), c);
}

TEST(Filter, DropsEmptyAbstract) {
  Corpus c({record("p1", 2010, {"a"}, ""), record("p2", 2010, {"a"})});
  auto r = filter_complete(c);
  EXPECT_EQ(r.corpus.size(), 1u);
  EXPECT_EQ(r.report.count(DropReason::missing_abstract), 1u);
  EXPECT_EQ(r.corpus[0], c[1]);
}

TEST(Filter, TenRecordsThreeIncomplete) {
  std::vector<PublicationRecord> rs;
  for (int i = 0; i < 7; ++i) rs.push_back(record("p" + std::to_string(i), 2010, {"a"}));
  rs.push_back(record("q1", 2010, {}, "x"));
  rs.push_back(record("q2", 2010, {"a"}, "x", 0.0));
  rs.push_back(record("q3", 2010, {"a"}, "x", 1.0, std::nullopt));
  auto r = filter_complete(Corpus(rs));
  EXPECT_EQ(r.corpus.size(), 7u);
  EXPECT_EQ(r.report.dropped(), 3u);
  EXPECT_EQ(r.report.kept, 7u);
  EXPECT_EQ(r.report.count(DropReason::empty_byline), 1u);
  EXPECT_EQ(r.report.count(DropReason::missing_sjr), 1u);
  EXPECT_EQ(r.report.count(DropReason::missing_citations), 1u);
}

TEST(Filter, ChargesFirstFailingReason) {
  auto r = filter_complete(Corpus({record("p1", 2010, {"a"}, "  ", std::nullopt, std::nullopt)}));
  EXPECT_EQ(r.report.count(DropReason::missing_abstract), 1u);
  EXPECT_EQ(r.report.dropped(), 1u);
}

TEST(Filter, Idempotent) {
  std::ifstream in(std::string(CITEPRED_TEST_DATA) + "/describe_100.jsonl");
  auto c = parse_corpus(in);
  std::vector<PublicationRecord> rs = c.records();
  rs[3].sjr.reset();
  rs[10].abstract_text.clear();
  rs[20].citations.reset();
  auto once = filter_complete(Corpus(rs));
  auto twice = filter_complete(once.corpus);
  EXPECT_EQ(once.report.dropped(), 3u);
  EXPECT_EQ(twice.corpus, once.corpus);
  EXPECT_EQ(twice.report.dropped(), 0u);
}

TEST(Describe, SoloShare) {
  Corpus c({record("p1", 2010, {"a"}), record("p2", 2010, {"a", "b"}), record("p3", 2010, {"b", "c"}),
            record("p4", 2010, {"a", "c", "d"})});
  EXPECT_DOUBLE_EQ(describe(c).total.solo_share, 0.25);
}

TEST(Describe, ConstantBylineSize) {
  Corpus c({record("p1", 2010, {"a", "b", "c"}), record("p2", 2011, {"d", "b", "c"}),
            record("p3", 2011, {"a", "e", "f"})});
  auto s = describe(c);
  EXPECT_DOUBLE_EQ(s.total.authors_mean, 3.0);
  EXPECT_DOUBLE_EQ(s.total.authors_sd, 0.0);
  EXPECT_EQ(s.total.unique_authors, 6u);
  EXPECT_EQ(s.per_year.at(2011).publications, 2u);
}

// Expected values were produced by tests/oracles/make_describe_fixture.py.
TEST(Describe, MatchesFrozenFixture) {
  std::ifstream in(std::string(CITEPRED_TEST_DATA) + "/describe_100.jsonl");
  const auto stats = describe(parse_corpus(in));

  std::ifstream expected(std::string(CITEPRED_TEST_DATA) + "/describe_100.expected.csv");
  std::string header_line, row;
  std::getline(expected, header_line);
  std::vector<std::string> columns;
  {
    std::istringstream h(header_line);
    std::string cell;
    std::getline(h, cell, ',');
    while (std::getline(h, cell, ',')) columns.push_back(cell);
  }
  ASSERT_EQ(columns.size(), 4u);
  int checked = 0;
  while (std::getline(expected, row)) {
    std::istringstream r(row);
    std::string name, cell;
    std::getline(r, name, ',');
    for (const auto& col : columns) {
      std::getline(r, cell, ',');
      const GroupStats& g = col == "total" ? stats.total : stats.per_year.at(std::stoi(col));
      const std::map<std::string, double> actual = {
          {"unique_authors", static_cast<double>(g.unique_authors)},
          {"publications", static_cast<double>(g.publications)},
          {"solo_author_share", g.solo_share},
          {"authors_mean", g.authors_mean},
          {"authors_max", g.authors_max},
          {"authors_sd", g.authors_sd},
          {"citations_mean", g.citations_mean},
          {"citations_max", g.citations_max},
          {"citations_sd", g.citations_sd},
      };
      EXPECT_NEAR(actual.at(name), std::stod(cell), 1e-12) << name << " " << col;
      ++checked;
    }
  }
  EXPECT_EQ(checked, 36);
}

TEST(Describe, AddingARecordTouchesOneYear) {
  std::ifstream in(std::string(CITEPRED_TEST_DATA) + "/describe_100.jsonl");
  auto c = parse_corpus(in);
  auto before = describe(c);
  auto rs = c.records();
  rs.push_back(record("extra", 2011, {"a01", "zz"}, "x", 1.0, 5));
  auto after = describe(Corpus(rs));
  EXPECT_EQ(after.per_year.at(2011).publications, before.per_year.at(2011).publications + 1);
  EXPECT_EQ(after.per_year.at(2010).publications, before.per_year.at(2010).publications);
  EXPECT_EQ(after.per_year.at(2012).publications, before.per_year.at(2012).publications);
  EXPECT_EQ(after.total.publications, before.total.publications + 1);
}

TEST(Describe, EmptyCorpusThrows) { EXPECT_THROW(describe(Corpus()), DataError); }
