#include "citepred/pipeline.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "citepred/centrality.hpp"
#include "citepred/corpus.hpp"
#include "citepred/error.hpp"
#include "citepred/evaluation.hpp"
#include "citepred/graph.hpp"
#include "citepred/stats.hpp"

namespace citepred::pipeline {

namespace fs = std::filesystem;

namespace {

fs::path in_workdir(const RunConfig& config, const char* name) { return fs::path(config.workdir) / name; }

std::ifstream open_input(const fs::path& path, std::string_view producer) {
  if (!fs::exists(path)) {
    throw DataError("missing input '" + path.string() + "' (run the " + std::string(producer) + " stage first)");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  return out;
}

void close_output(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

template <class Writer>
void write_file(const fs::path& path, Writer&& writer) {
  auto out = open_output(path);
  writer(out);
  close_output(out, path);
}

void note(std::ostream* log, const std::string& line) {
  if (log) *log << line << '\n';
}

corpus::Corpus load_clean(const RunConfig& config) {
  const auto path = in_workdir(config, files::kCleanCorpus);
  auto in = open_input(path, "ingest");
  try {
    return corpus::parse_corpus(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

features::FeatureTable load_features(const RunConfig& config) {
  const auto path = in_workdir(config, files::kFeatures);
  auto in = open_input(path, "features");
  try {
    return features::read_feature_csv(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

template <class T, class Reader>
T load(const RunConfig& config, const char* name, std::string_view producer, Reader&& reader) {
  const auto path = in_workdir(config, name);
  auto in = open_input(path, producer);
  try {
    return reader(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string years_label(const std::optional<int>& y) { return y ? std::to_string(*y) : std::string("auto"); }

}  // namespace

void RunConfig::validate() const {
  if (min_year && max_year && *min_year > *max_year) throw ConfigError("min_year exceeds max_year");
  if (!(label_quantile > 0.0 && label_quantile < 1.0)) throw ConfigError("label_quantile must lie in (0, 1)");
  if (!(oscillation_epsilon >= 0.0)) throw ConfigError("oscillation_epsilon must be non-negative");
  if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ConfigError("train_fraction must lie in (0, 1)");
  if (!(low_sjr_quantile >= 0.0 && low_sjr_quantile <= 0.75)) {
    throw ConfigError("low_sjr_quantile must lie in [0, 0.75]");
  }
  hyperparameters.validate();
}

ConfigEcho RunConfig::echo() const {
  const auto& hp = hyperparameters;
  return {
      {"seed", std::to_string(seed)},
      {"min_year", years_label(min_year)},
      {"max_year", years_label(max_year)},
      {"prediction_year", years_label(prediction_year)},
      {"label_quantile", format_decimal(label_quantile)},
      {"tie_rule", std::string(features::to_string(tie_rule))},
      {"centrality_aggregation", std::string(features::to_string(centrality_aggregation))},
      {"leadership_aggregation", std::string(features::to_string(leadership_aggregation))},
      {"oscillation_epsilon", format_decimal(oscillation_epsilon)},
      {"repetitions", std::to_string(repetitions)},
      {"train_fraction", format_decimal(train_fraction)},
      {"rounds", std::to_string(hp.rounds)},
      {"max_depth", std::to_string(hp.max_depth)},
      {"learning_rate", format_decimal(hp.learning_rate)},
      {"lambda", format_decimal(hp.lambda)},
      {"gamma", format_decimal(hp.gamma)},
      {"min_child_weight", format_decimal(hp.min_child_weight)},
      {"subsample", format_decimal(hp.subsample)},
      {"low_sjr_quantile", format_decimal(low_sjr_quantile)},
  };
}

void run_ingest(const RunConfig& config, std::ostream* log) {
  config.validate();
  corpus::ParseOptions options;
  if (config.min_year || config.max_year) {
    if (!config.min_year || !config.max_year) throw ConfigError("min_year and max_year must be given together");
    options.window = corpus::YearWindow{*config.min_year, *config.max_year};
  }
  const auto raw = corpus::read_corpus_file(config.corpus, options);
  const auto result = corpus::filter_complete(raw);
  const auto echo = config.echo();
  const auto clean_path = in_workdir(config, files::kCleanCorpus);
  write_file(clean_path, [&](std::ostream& out) { corpus::write_corpus(out, result.corpus); });
  write_file(in_workdir(config, files::kDropReport), [&](std::ostream& out) {
    write_echo(out, echo);
    corpus::write_drop_report(out, result.report);
  });
  note(log, "ingest: kept " + std::to_string(result.report.kept) + ", dropped " +
                std::to_string(result.report.dropped()));
}

void run_describe(const RunConfig& config, std::ostream* log) {
  config.validate();
  const auto stats = corpus::describe(load_clean(config));
  write_file(in_workdir(config, files::kDescriptive), [&](std::ostream& out) {
    write_echo(out, config.echo());
    corpus::write_descriptive_csv(out, stats);
  });
  note(log, "describe: wrote " + std::string(files::kDescriptive));
}

void run_graphs(const RunConfig& config, std::ostream* log) {
  config.validate();
  const auto corpus = load_clean(config);
  if (corpus.empty()) throw DataError("clean corpus is empty");
  const auto years = graph::window_years(corpus);
  const fs::path dir = in_workdir(config, files::kGraphDir);
  write_file(dir / "author_network.edges",
             [&](std::ostream& out) { graph::write_edge_list(out, graph::build_author_network(corpus, years)); });
  write_file(dir / "publication_network.edges",
             [&](std::ostream& out) { graph::write_edge_list(out, graph::build_publication_network(corpus, years)); });
  for (const auto& [year, g] : graph::yearly_author_networks(corpus)) {
    write_file(dir / ("author_network_" + std::to_string(year) + ".edges"),
               [&](std::ostream& out) { graph::write_edge_list(out, g); });
  }
  note(log, "graphs: wrote " + dir.string());
}

void run_metrics(const RunConfig& config, std::ostream* log) {
  config.validate();
  const auto corpus = load_clean(config);
  const auto lexicon = text::Lexicon::load_file(config.lexicon);
  const auto stopwords = text::StopWords::load_file(config.stopwords);
  const auto network = features::compute_network_inputs(corpus, config.oscillation_epsilon, config.threads);
  const auto text_metrics = features::compute_text_inputs(corpus, lexicon, stopwords, config.threads);
  const auto echo = config.echo();
  write_file(in_workdir(config, files::kPublicationMetrics),
             [&](std::ostream& out) { centrality::write_metric_dump(out, network.publication, echo); });
  write_file(in_workdir(config, files::kAuthorMetrics),
             [&](std::ostream& out) { centrality::write_metric_dump(out, network.author, echo); });
  write_file(in_workdir(config, files::kLeadership),
             [&](std::ostream& out) { centrality::write_leadership_table(out, network.leadership, echo); });
  write_file(in_workdir(config, files::kTextMetrics),
             [&](std::ostream& out) { features::write_text_metrics_csv(out, text_metrics, echo); });
  note(log, "metrics: " + std::to_string(network.publication.size()) + " publications, " +
                std::to_string(network.author.size()) + " authors");
}

void run_features(const RunConfig& config, std::ostream* log) {
  config.validate();
  const auto corpus = load_clean(config);
  if (corpus.empty()) throw DataError("clean corpus is empty");
  const auto pub = load<centrality::MetricTable>(config, files::kPublicationMetrics, "metrics",
                                                 [](std::istream& in) { return centrality::read_metric_dump(in); });
  const auto author = load<centrality::MetricTable>(config, files::kAuthorMetrics, "metrics",
                                                    [](std::istream& in) { return centrality::read_metric_dump(in); });
  const auto leadership = load<centrality::LeadershipTable>(
      config, files::kLeadership, "metrics", [](std::istream& in) { return centrality::read_leadership_table(in); });
  const auto text_metrics = load<features::TextMetricMap>(
      config, files::kTextMetrics, "metrics", [](std::istream& in) { return features::read_text_metrics_csv(in); });

  features::AssembleOptions options;
  options.prediction_year = config.prediction_year.value_or(corpus.year_window().max_year);
  if (!corpus.year_window().contains(options.prediction_year)) {
    throw ConfigError("prediction_year " + std::to_string(options.prediction_year) + " lies outside the corpus years");
  }
  options.centrality_aggregation = config.centrality_aggregation;
  options.leadership_aggregation = config.leadership_aggregation;
  auto table = features::assemble(corpus, pub, author, leadership.counts, text_metrics, options);
  if (table.rows() == 0) throw DataError("no complete publications in the prediction year");
  const auto outcome = features::label_top_quantile(table, config.label_quantile, config.tie_rule);
  if (outcome.warning) note(log, "features: warning: " + *outcome.warning);

  auto echo = config.echo();
  echo.emplace_back("resolved_prediction_year", std::to_string(options.prediction_year));
  write_file(in_workdir(config, files::kFeatures),
             [&](std::ostream& out) { features::write_feature_csv(out, table, echo); });
  write_file(in_workdir(config, files::kFeatureSummary),
             [&](std::ostream& out) { features::write_summary_csv(out, features::summarize(table), echo); });
  note(log, "features: " + std::to_string(table.rows()) + " rows, " + std::to_string(outcome.positives) +
                " positive");
}

void run_correlate(const RunConfig& config, std::ostream* log) {
  config.validate();
  const auto table = load_features(config);
  const auto matrix = stats::correlation_matrix(table);
  write_file(in_workdir(config, files::kCorrelations),
             [&](std::ostream& out) { stats::write_correlation_csv(out, matrix, config.echo()); });
  note(log, "correlate: wrote " + std::string(files::kCorrelations));
}

void run_train(const RunConfig& config, std::ostream* log) {
  config.validate();
  const auto table = load_features(config);
  evaluation::CvConfig cv;
  cv.repetitions = config.repetitions;
  cv.train_fraction = config.train_fraction;
  cv.hyperparameters = config.hyperparameters;
  cv.seed = config.seed;
  cv.threads = config.threads;
  const auto report = evaluation::monte_carlo_cv(table, cv);
  const auto echo = config.echo();
  write_file(in_workdir(config, files::kEvaluation),
             [&](std::ostream& out) { evaluation::write_evaluation_json(out, report, echo); });
  write_file(in_workdir(config, files::kImportances),
             [&](std::ostream& out) { evaluation::write_importances_json(out, report, echo); });
  const auto model = gbt::fit(table, config.hyperparameters, config.seed);
  write_file(in_workdir(config, files::kModel), [&](std::ostream& out) { out << gbt::to_json(model); });
  std::ostringstream line;
  line << "train: accuracy " << format_decimal(report.accuracy.mean) << ", kappa "
       << format_decimal(report.kappa.mean) << ", auc " << format_decimal(report.auc.mean);
  note(log, line.str());
}

void run_compare_groups(const RunConfig& config, std::ostream* log) {
  config.validate();
  const auto table = load_features(config);
  const auto groups = stats::split_exception_groups(table, config.low_sjr_quantile);
  const auto rows = stats::compare_groups(table, groups);
  write_file(in_workdir(config, files::kGroups),
             [&](std::ostream& out) { stats::write_group_csv(out, rows, groups, config.echo()); });
  note(log, "compare-groups: " + std::to_string(groups.low_sjr_high_cite.size()) + " vs " +
                std::to_string(groups.top_journal_high_cite.size()) + " publications");
}

void run_synth(const RunConfig& config, std::ostream* log) {
  auto settings = config.synth;
  settings.seed = config.seed;
  settings.oscillation_epsilon = config.oscillation_epsilon;
  settings.centrality_aggregation = config.centrality_aggregation;
  settings.leadership_aggregation = config.leadership_aggregation;
  settings.validate();
  const auto lexicon = text::Lexicon::load_file(config.lexicon);
  const auto stopwords = text::StopWords::load_file(config.stopwords);
  const auto corpus = synth::generate(settings, lexicon, stopwords, config.threads);
  const fs::path path(config.corpus);
  write_file(path, [&](std::ostream& out) { corpus::write_corpus(out, corpus); });
  note(log, "synth: wrote " + std::to_string(corpus.size()) + " publications to " + path.string());
}

void run_report(const RunConfig& config, std::ostream* log) {
  run_ingest(config, log);
  run_describe(config, log);
  run_metrics(config, log);
  run_features(config, log);
  run_correlate(config, log);
  run_train(config, log);
  run_compare_groups(config, log);
  const fs::path dir = in_workdir(config, files::kReportDir);
  fs::create_directories(dir);
  for (const char* name : {files::kDescriptive, files::kFeatureSummary, files::kCorrelations, files::kImportances,
                           files::kEvaluation, files::kGroups, files::kDropReport}) {
    fs::copy_file(in_workdir(config, name), dir / name, fs::copy_options::overwrite_existing);
  }
  note(log, "report: wrote " + dir.string());
}

}  // namespace citepred::pipeline
