// citepred: command-line front end for the pipeline stages.
//
// Exit status: 0 on success, 1 for usage or configuration errors, 2 for data
// errors (unreadable or inconsistent inputs, missing stage outputs).

#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "citepred/error.hpp"
#include "citepred/pipeline.hpp"

namespace {

using citepred::ConfigError;
using citepred::pipeline::RunConfig;

// "sjr:1.2,x9:0.6"
std::map<std::string, double> parse_coefficients(const std::string& spec) {
  std::map<std::string, double> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("coefficient '" + item + "' is not name:value");
    try {
      std::size_t used = 0;
      const std::string number = item.substr(colon + 1);
      const double v = std::stod(number, &used);
      if (used != number.size()) throw std::invalid_argument(number);
      out[item.substr(0, colon)] = v;
    } catch (const std::logic_error&) {
      throw ConfigError("coefficient '" + item + "' has no numeric value");
    }
  }
  return out;
}

std::string format_coefficients(const std::map<std::string, double>& coefs) {
  std::string out;
  for (const auto& [name, v] : coefs) {
    if (!out.empty()) out += ',';
    out += name + ':' + citepred::format_decimal(v);
  }
  return out;
}

std::string single_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig config;
  std::string tie_rule = "strict";
  std::string centrality_aggregation = "mean";
  std::string leadership_aggregation = "sum";
  std::string coefficients = format_coefficients(config.synth.coefficients);
  std::optional<int> min_year, max_year, prediction_year;

  CLI::App app{"Citation-impact prediction from co-authorship networks and abstract text"};
  app.set_config("--config", "", "Flat key=value file; every key matches a long option below");
  app.require_subcommand(1);
  app.fallthrough();

  auto& hp = config.hyperparameters;
  auto& sc = config.synth;
  app.add_option("--corpus", config.corpus, "Input corpus (JSONL); synth writes here")->capture_default_str();
  app.add_option("--workdir", config.workdir, "Directory for stage outputs")->capture_default_str();
  app.add_option("--lexicon", config.lexicon, "Sentiment lexicon (token<TAB>valence)")->capture_default_str();
  app.add_option("--stopwords", config.stopwords, "Stop-word list, one per line")->capture_default_str();
  app.add_option("--min_year", min_year, "First year of the corpus window");
  app.add_option("--max_year", max_year, "Last year of the corpus window");
  app.add_option("--prediction_year", prediction_year, "Year whose publications are classified (default: last)");
  app.add_option("--label_quantile", config.label_quantile, "Top citation share labeled positive")->capture_default_str();
  app.add_option("--tie_rule", tie_rule, "strict (citations > threshold) or inclusive (>=)")->capture_default_str();
  app.add_option("--centrality_aggregation", centrality_aggregation, "mean, max or sum over the byline (x5-x8)")
      ->capture_default_str();
  app.add_option("--leadership_aggregation", leadership_aggregation, "mean, max or sum over the byline (x9)")
      ->capture_default_str();
  app.add_option("--oscillation_epsilon", config.oscillation_epsilon, "Relative change for a leadership oscillation")
      ->capture_default_str();
  app.add_option("--repetitions", config.repetitions, "Monte-Carlo cross-validation repetitions")->capture_default_str();
  app.add_option("--train_fraction", config.train_fraction, "Training share of each split")->capture_default_str();
  app.add_option("--rounds", hp.rounds, "Boosting rounds")->capture_default_str();
  app.add_option("--max_depth", hp.max_depth, "Maximum tree depth")->capture_default_str();
  app.add_option("--learning_rate", hp.learning_rate, "Shrinkage")->capture_default_str();
  app.add_option("--lambda", hp.lambda, "L2 penalty on leaf weights")->capture_default_str();
  app.add_option("--gamma", hp.gamma, "Minimum split gain")->capture_default_str();
  app.add_option("--min_child_weight", hp.min_child_weight, "Minimum hessian sum per child")->capture_default_str();
  app.add_option("--subsample", hp.subsample, "Row fraction per boosting round")->capture_default_str();
  app.add_option("--low_sjr_quantile", config.low_sjr_quantile, "SJR quantile bounding the low-ranked group")
      ->capture_default_str();
  app.add_option("--seed", config.seed, "Master seed")->capture_default_str();
  app.add_option("--threads", config.threads, "Worker threads (0 = all cores); never changes outputs")
      ->capture_default_str();

  app.add_option("--synth_first_year", sc.first_year, "Synthetic: first year")->capture_default_str();
  app.add_option("--synth_years", sc.years, "Synthetic: number of years")->capture_default_str();
  app.add_option("--synth_publications", sc.publications, "Synthetic: total publications")
      ->capture_default_str();
  app.add_option("--synth_authors", sc.authors, "Synthetic: author pool size")->capture_default_str();
  app.add_option("--synth_byline_mean", sc.byline_mean, "Synthetic: mean byline size")->capture_default_str();
  app.add_option("--synth_byline_max", sc.byline_max, "Synthetic: maximum byline size")->capture_default_str();
  app.add_option("--synth_attachment", sc.attachment, "Synthetic: preferential attachment strength")
      ->capture_default_str();
  app.add_option("--synth_journals", sc.journals, "Synthetic: number of journals")->capture_default_str();
  app.add_option("--synth_vocabulary", sc.vocabulary, "Synthetic: pseudo-word vocabulary size")->capture_default_str();
  app.add_option("--synth_abstract_tokens", sc.abstract_tokens_mean, "Synthetic: mean abstract length in words")
      ->capture_default_str();
  app.add_option("--synth_coefficients", coefficients, "Synthetic: planted effects, name:value,...")
      ->capture_default_str();
  app.add_option("--synth_intercept", sc.intercept, "Synthetic: latent score intercept")->capture_default_str();
  app.add_option("--synth_noise", sc.noise, "Synthetic: latent score noise sd")->capture_default_str();

  using Stage = std::function<void(const RunConfig&, std::ostream*)>;
  const std::vector<std::tuple<const char*, const char*, Stage>> stages = {
      {"ingest", "Parse and filter the corpus", citepred::pipeline::run_ingest},
      {"describe", "Descriptive statistics per year", citepred::pipeline::run_describe},
      {"graphs", "Dump the author and publication networks as edge lists", citepred::pipeline::run_graphs},
      {"metrics", "Network centralities, rotating leadership and text metrics", citepred::pipeline::run_metrics},
      {"features", "Assemble and label the feature table", citepred::pipeline::run_features},
      {"correlate", "Spearman correlation matrix", citepred::pipeline::run_correlate},
      {"train", "Monte-Carlo cross-validation with SHAP importances", citepred::pipeline::run_train},
      {"compare-groups", "Welch tests: low-ranked versus top-journal highly cited papers",
       citepred::pipeline::run_compare_groups},
      {"synth", "Generate a synthetic corpus", citepred::pipeline::run_synth},
      {"report", "Run every analysis stage and bundle the tables", citepred::pipeline::run_report},
  };
  for (const auto& [name, help, stage] : stages) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "citepred: " << single_line(e.what()) << '\n';
    return 1;
  }

  try {
    config.min_year = min_year;
    config.max_year = max_year;
    config.prediction_year = prediction_year;
    config.tie_rule = citepred::features::parse_tie_rule(tie_rule);
    config.centrality_aggregation = citepred::features::parse_aggregation(centrality_aggregation);
    config.leadership_aggregation = citepred::features::parse_aggregation(leadership_aggregation);
    config.synth.coefficients = parse_coefficients(coefficients);
    for (const auto& [name, help, stage] : stages) {
      if (app.got_subcommand(name)) stage(config, &std::cerr);
    }
  } catch (const ConfigError& e) {
    std::cerr << "citepred: config error: " << single_line(e.what()) << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "citepred: data error: " << single_line(e.what()) << '\n';
    return 2;
  }
  return 0;
}
