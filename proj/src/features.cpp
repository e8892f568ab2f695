#include "citepred/features.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "citepred/error.hpp"
#include "citepred/graph.hpp"
#include "citepred/parallel.hpp"
#include "citepred/stats.hpp"

namespace citepred::features {

namespace {

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

double aggregate(std::span<const double> values, Aggregation how) {
  if (values.empty()) throw DataError("cannot aggregate an empty byline");
  switch (how) {
    case Aggregation::mean:
      return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    case Aggregation::max:
      return *std::max_element(values.begin(), values.end());
    case Aggregation::sum:
      return std::accumulate(values.begin(), values.end(), 0.0);
  }
  return 0.0;
}

std::string_view to_string(Aggregation a) {
  switch (a) {
    case Aggregation::mean: return "mean";
    case Aggregation::max: return "max";
    case Aggregation::sum: return "sum";
  }
  return "mean";
}

Aggregation parse_aggregation(std::string_view name) {
  if (name == "mean") return Aggregation::mean;
  if (name == "max") return Aggregation::max;
  if (name == "sum") return Aggregation::sum;
  throw ConfigError("unknown aggregation '" + std::string(name) + "' (expected mean, max or sum)");
}

std::string_view to_string(TieRule r) { return r == TieRule::strict ? "strict" : "inclusive"; }

TieRule parse_tie_rule(std::string_view name) {
  if (name == "strict") return TieRule::strict;
  if (name == "inclusive") return TieRule::inclusive;
  throw ConfigError("unknown tie rule '" + std::string(name) + "' (expected strict or inclusive)");
}

NetworkInputs compute_network_inputs(const corpus::Corpus& corpus, double oscillation_epsilon, unsigned threads) {
  if (corpus.empty()) throw DataError("cannot compute network metrics of an empty corpus");
  const auto years = graph::window_years(corpus);
  NetworkInputs out;
  out.publication = centrality::compute_all(graph::build_publication_network(corpus, years), threads);
  out.author = centrality::compute_all(graph::build_author_network(corpus, years), threads);
  out.leadership = centrality::leadership_table(graph::yearly_author_networks(corpus), oscillation_epsilon, threads);
  return out;
}

TextMetricMap compute_text_inputs(const corpus::Corpus& corpus, const text::Lexicon& lexicon,
                                  const text::StopWords& stopwords, unsigned threads) {
  std::vector<text::TokenizedAbstract> tokenized(corpus.size());
  parallel_for(corpus.size(), threads, [&](unsigned, std::size_t i) {
    tokenized[i] = text::preprocess(corpus[i].abstract_text, stopwords);
  });
  text::CorpusTermTable table;
  for (const auto& t : tokenized) table.add(t.tokens);
  std::vector<text::TextMetrics> metrics(corpus.size());
  parallel_for(corpus.size(), threads, [&](unsigned, std::size_t i) {
    metrics[i] = text::compute_text_metrics(corpus[i].abstract_text, tokenized[i], lexicon, table);
  });
  TextMetricMap out;
  for (std::size_t i = 0; i < corpus.size(); ++i) out.emplace(corpus[i].pub_id, metrics[i]);
  return out;
}

void write_text_metrics_csv(std::ostream& out, const TextMetricMap& metrics, const ConfigEcho& echo) {
  write_echo(out, echo);
  out << "pub_id,length_chars,sentiment,complexity,diversity,commonness\n";
  for (const auto& [id, m] : metrics) {
    out << id << ',' << m.length_chars << ',' << format_decimal(m.sentiment) << ','
        << format_decimal(m.complexity) << ',' << (m.diversity ? format_decimal(*m.diversity) : std::string())
        << ',' << format_decimal(m.commonness) << '\n';
  }
}

TextMetricMap read_text_metrics_csv(std::istream& in) {
  TextMetricMap out;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (line != "pub_id,length_chars,sentiment,complexity,diversity,commonness") {
        throw DataError("text metrics: unexpected header");
      }
      header = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 6) throw DataError("text metrics line " + std::to_string(line_no) + ": expected 6 columns");
    try {
      text::TextMetrics m;
      m.length_chars = static_cast<std::size_t>(std::stoull(cells[1]));
      m.sentiment = std::stod(cells[2]);
      m.complexity = std::stod(cells[3]);
      if (!cells[4].empty()) m.diversity = std::stod(cells[4]);
      m.commonness = std::stod(cells[5]);
      out.emplace(cells[0], m);
    } catch (const std::logic_error&) {
      throw DataError("text metrics line " + std::to_string(line_no) + ": malformed number");
    }
  }
  if (!header) throw DataError("text metrics: missing header");
  return out;
}

FeatureTable assemble(const corpus::Corpus& corpus, const centrality::MetricTable& publication_metrics,
                      const centrality::MetricTable& author_metrics, const std::map<std::string, int>& leadership,
                      const TextMetricMap& text_metrics, const AssembleOptions& options) {
  std::vector<std::size_t> selected;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& r = corpus[i];
    if (r.year != options.prediction_year) continue;
    if (r.author_ids.empty() || blank(r.abstract_text) || !r.sjr || *r.sjr <= 0.0 || !r.citations) continue;
    auto tm = text_metrics.find(r.pub_id);
    if (tm == text_metrics.end()) throw DataError("no text metrics for publication '" + r.pub_id + "'");
    if (!tm->second.diversity) continue;
    selected.push_back(i);
  }
  std::sort(selected.begin(), selected.end(),
            [&](std::size_t a, std::size_t b) { return corpus[a].pub_id < corpus[b].pub_id; });

  FeatureTable t;
  const auto n = static_cast<Eigen::Index>(selected.size());
  t.citations.resize(n);
  t.predictors.resize(n, kPredictorCount);
  std::vector<double> degree, constraint, closeness, betweenness, rotating;
  for (Eigen::Index row = 0; row < n; ++row) {
    const auto& r = corpus[selected[static_cast<std::size_t>(row)]];
    t.pub_ids.push_back(r.pub_id);
    t.citations[row] = static_cast<double>(*r.citations);

    auto p = publication_metrics.find(r.pub_id);
    if (!p) throw DataError("publication '" + r.pub_id + "' missing from the publication network metrics");

    degree.clear();
    constraint.clear();
    closeness.clear();
    betweenness.clear();
    rotating.clear();
    for (const auto& author : r.author_ids) {
      auto a = author_metrics.find(author);
      if (!a) throw DataError("author '" + author + "' missing from the author network metrics");
      auto rl = leadership.find(author);
      if (rl == leadership.end()) throw DataError("author '" + author + "' missing from the rotating leadership table");
      degree.push_back(author_metrics.degree[*a]);
      constraint.push_back(author_metrics.constraint[*a]);
      closeness.push_back(author_metrics.closeness[*a]);
      betweenness.push_back(author_metrics.betweenness[*a]);
      rotating.push_back(static_cast<double>(rl->second));
    }
    const auto& tm = text_metrics.at(r.pub_id);
    auto x = t.predictors.row(row);
    x[kSjr] = *r.sjr;
    x[kAuthors] = static_cast<double>(r.author_ids.size());
    x[kPubDegree] = publication_metrics.degree[*p];
    x[kPubConstraint] = publication_metrics.constraint[*p];
    x[kPubCloseness] = publication_metrics.closeness[*p];
    x[kPubBetweenness] = publication_metrics.betweenness[*p];
    x[kAuthorDegree] = aggregate(degree, options.centrality_aggregation);
    x[kAuthorConstraint] = aggregate(constraint, options.centrality_aggregation);
    x[kAuthorCloseness] = aggregate(closeness, options.centrality_aggregation);
    x[kAuthorBetweenness] = aggregate(betweenness, options.centrality_aggregation);
    x[kRotatingLeadership] = aggregate(rotating, options.leadership_aggregation);
    x[kAbstractLength] = static_cast<double>(tm.length_chars);
    x[kSentiment] = tm.sentiment;
    x[kComplexity] = tm.complexity;
    x[kDiversity] = *tm.diversity;
    x[kCommonness] = tm.commonness;
  }
  return t;
}

Eigen::VectorXi top_quantile_labels(const Eigen::VectorXd& values, double q, TieRule rule, LabelOutcome* outcome) {
  if (!(q > 0.0 && q < 1.0)) throw ConfigError("label quantile must lie in (0, 1)");
  if (values.size() == 0) throw DataError("cannot label an empty table");
  LabelOutcome result;
  result.threshold = stats::nearest_rank_quantile(values, 1.0 - q);
  Eigen::VectorXi labels(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    labels[i] = rule == TieRule::strict ? values[i] > result.threshold : values[i] >= result.threshold;
  }
  result.positives = labels.sum();
  if (values.minCoeff() == values.maxCoeff()) {
    result.warning = "all citation counts are equal; every label is identical";
  } else if (result.positives == 0 || result.positives == values.size()) {
    result.warning = "quantile labeling produced a single class";
  }
  if (outcome) *outcome = result;
  return labels;
}

LabelOutcome label_top_quantile(FeatureTable& table, double q, TieRule rule) {
  LabelOutcome outcome;
  table.labels = top_quantile_labels(table.citations, q, rule, &outcome);
  table.label_threshold = outcome.threshold;
  return outcome;
}

std::vector<ColumnSummary> summarize(const FeatureTable& table) {
  std::vector<ColumnSummary> out;
  auto add = [&](std::string name, std::string description, const Eigen::VectorXd& col) {
    ColumnSummary s{std::move(name), std::move(description), 0.0, 0.0};
    if (col.size() > 0) s.mean = col.mean();
    if (col.size() > 1) s.sd = std::sqrt((col.array() - s.mean).square().sum() / static_cast<double>(col.size() - 1));
    out.push_back(std::move(s));
  };
  add("citations", "Citations", table.citations);
  for (Eigen::Index c = 0; c < kPredictorCount; ++c) {
    add(predictor_names()[static_cast<std::size_t>(c)], predictor_descriptions()[static_cast<std::size_t>(c)],
        table.predictors.col(c));
  }
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<ColumnSummary>& rows, const ConfigEcho& echo) {
  write_echo(out, echo);
  out << "variable,description,mean,sd\n";
  for (const auto& r : rows) {
    out << r.name << ',' << r.description << ',' << format_decimal(r.mean) << ',' << format_decimal(r.sd) << '\n';
  }
}

}  // namespace citepred::features
