#pragma once

// Per-publication feature assembly: controls, network metrics (x1-x9) and
// text metrics (x10-x14), plus top-quantile citation labels.

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "citepred/centrality.hpp"
#include "citepred/corpus.hpp"
#include "citepred/feature_table.hpp"
#include "citepred/format.hpp"
#include "citepred/textmetrics.hpp"

namespace citepred::features {

enum class Aggregation { mean, max, sum };
std::string_view to_string(Aggregation a);
Aggregation parse_aggregation(std::string_view name);
// values must be non-empty.
double aggregate(std::span<const double> values, Aggregation how);

enum class TieRule {
  strict,     // label = citations > threshold
  inclusive,  // label = citations >= threshold
};
std::string_view to_string(TieRule r);
TieRule parse_tie_rule(std::string_view name);

struct AssembleOptions {
  int prediction_year = 0;
  Aggregation centrality_aggregation = Aggregation::mean;  // x5-x8
  Aggregation leadership_aggregation = Aggregation::sum;   // x9
};

// Metrics of the full-window publication and author networks, and the
// rotating leadership table built from the yearly author networks.
struct NetworkInputs {
  centrality::MetricTable publication;
  centrality::MetricTable author;
  centrality::LeadershipTable leadership;
};

NetworkInputs compute_network_inputs(const corpus::Corpus& corpus, double oscillation_epsilon, unsigned threads = 1);

using TextMetricMap = std::map<std::string, text::TextMetrics>;

// Text metrics for every record; the commonness term table spans all of them.
TextMetricMap compute_text_inputs(const corpus::Corpus& corpus, const text::Lexicon& lexicon,
                                  const text::StopWords& stopwords, unsigned threads = 1);

// "pub_id,length_chars,sentiment,complexity,diversity,commonness"; an empty
// diversity cell marks an abstract with no content words.
void write_text_metrics_csv(std::ostream& out, const TextMetricMap& metrics, const ConfigEcho& echo = {});
TextMetricMap read_text_metrics_csv(std::istream& in);

// Rows for prediction-year records with complete data (byline, abstract,
// positive SJR, citations, defined diversity), sorted by pub_id. Throws
// DataError when a publication or author is missing from the metric inputs.
FeatureTable assemble(const corpus::Corpus& corpus, const centrality::MetricTable& publication_metrics,
                      const centrality::MetricTable& author_metrics, const std::map<std::string, int>& leadership,
                      const TextMetricMap& text_metrics, const AssembleOptions& options);

struct LabelOutcome {
  double threshold = 0.0;
  Eigen::Index positives = 0;
  std::optional<std::string> warning;
};

// Threshold = nearest-rank (1 - q) quantile of the values.
Eigen::VectorXi top_quantile_labels(const Eigen::VectorXd& values, double q, TieRule rule, LabelOutcome* outcome = nullptr);

// Labels the table in place from its citation column.
LabelOutcome label_top_quantile(FeatureTable& table, double q = 0.25, TieRule rule = TieRule::strict);

struct ColumnSummary {
  std::string name;
  std::string description;
  double mean = 0.0;
  double sd = 0.0;
};

// Mean and sample standard deviation of citations and every predictor.
std::vector<ColumnSummary> summarize(const FeatureTable& table);
void write_summary_csv(std::ostream& out, const std::vector<ColumnSummary>& rows, const ConfigEcho& echo = {});

}  // namespace citepred::features
