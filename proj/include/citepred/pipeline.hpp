#pragma once

// File-based pipeline stages shared by the command-line tool.
//
// Every stage reads and writes fixed file names inside the work directory.
// Text outputs start with the config echo, which leaves out paths and the
// thread count so that reruns elsewhere or with other parallelism produce
// byte-identical files.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "citepred/features.hpp"
#include "citepred/format.hpp"
#include "citepred/gbt.hpp"
#include "citepred/synth.hpp"

namespace citepred::pipeline {

struct RunConfig {
  std::string corpus = "corpus.jsonl";
  std::string workdir = "citepred_out";
  std::string lexicon = std::string(CITEPRED_DATA_DIR) + "/sentiment_lexicon.tsv";
  std::string stopwords = std::string(CITEPRED_DATA_DIR) + "/stopwords_en.txt";
  std::optional<int> min_year;  // window defaults to the observed years
  std::optional<int> max_year;
  std::optional<int> prediction_year;  // defaults to the last window year
  double label_quantile = 0.25;
  features::TieRule tie_rule = features::TieRule::strict;
  features::Aggregation centrality_aggregation = features::Aggregation::mean;
  features::Aggregation leadership_aggregation = features::Aggregation::sum;
  double oscillation_epsilon = 0.10;
  int repetitions = 300;
  double train_fraction = 0.75;
  gbt::Hyperparameters hyperparameters;
  double low_sjr_quantile = 0.25;
  std::uint64_t seed = 42;
  unsigned threads = 0;
  synth::SynthConfig synth;

  // Throws ConfigError on out-of-range settings.
  void validate() const;
  // Analysis settings, in a fixed order.
  ConfigEcho echo() const;
};

namespace files {
inline constexpr const char* kCleanCorpus = "corpus.clean.jsonl";
inline constexpr const char* kDropReport = "drop_report.txt";
inline constexpr const char* kDescriptive = "descriptive.csv";
inline constexpr const char* kGraphDir = "graphs";
inline constexpr const char* kPublicationMetrics = "publication_metrics.txt";
inline constexpr const char* kAuthorMetrics = "author_metrics.txt";
inline constexpr const char* kLeadership = "rotating_leadership.tsv";
inline constexpr const char* kTextMetrics = "text_metrics.csv";
inline constexpr const char* kFeatures = "features.csv";
inline constexpr const char* kFeatureSummary = "feature_summary.csv";
inline constexpr const char* kCorrelations = "correlations.csv";
inline constexpr const char* kEvaluation = "evaluation.json";
inline constexpr const char* kImportances = "importances.json";
inline constexpr const char* kModel = "model.json";
inline constexpr const char* kGroups = "groups.csv";
inline constexpr const char* kReportDir = "report";
}  // namespace files

// Progress lines go to log (may be null).
void run_ingest(const RunConfig& config, std::ostream* log = nullptr);
void run_describe(const RunConfig& config, std::ostream* log = nullptr);
void run_graphs(const RunConfig& config, std::ostream* log = nullptr);
void run_metrics(const RunConfig& config, std::ostream* log = nullptr);
void run_features(const RunConfig& config, std::ostream* log = nullptr);
void run_correlate(const RunConfig& config, std::ostream* log = nullptr);
void run_train(const RunConfig& config, std::ostream* log = nullptr);
void run_compare_groups(const RunConfig& config, std::ostream* log = nullptr);
// Writes the synthetic corpus to config.corpus.
void run_synth(const RunConfig& config, std::ostream* log = nullptr);
// ingest through compare-groups, then copies the tables into report/.
void run_report(const RunConfig& config, std::ostream* log = nullptr);

}  // namespace citepred::pipeline
