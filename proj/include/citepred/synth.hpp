#pragma once

// Synthetic corpora with preferential-attachment bylines, Zipf abstracts and
// a planted citation signal.

#include <cstdint>
#include <map>
#include <string>

#include "citepred/corpus.hpp"
#include "citepred/features.hpp"
#include "citepred/textmetrics.hpp"

namespace citepred::synth {

struct SynthConfig {
  std::uint64_t seed = 42;
  int first_year = 2010;
  int years = 3;
  int publications = 10000;  // spread evenly over the years, earlier years first
  int authors = 20000;
  double byline_mean = 3.0;  // byline size is 1 + Poisson(mean - 1), capped
  int byline_max = 12;
  double attachment = 1.0;  // author weight = 1 + attachment * prior publications
  int journals = 300;
  double sjr_log_mean = -0.3;
  double sjr_log_sd = 0.8;
  int vocabulary = 4000;
  double zipf_exponent = 1.05;
  double abstract_tokens_mean = 120.0;
  double stopword_share = 0.35;
  double lexicon_share = 0.04;
  // Effects on the latent log-citation score, keyed by predictor name
  // (sjr, n_authors, x1..x14). Each feature enters rank-standardized.
  std::map<std::string, double> coefficients = {{"sjr", 1.2}, {"x9", 0.6}};
  double intercept = 1.5;
  double noise = 0.8;
  std::int64_t citation_cap = 100000;
  // Settings used when planted features are derived from the corpus itself.
  double oscillation_epsilon = 0.10;
  features::Aggregation centrality_aggregation = features::Aggregation::mean;
  features::Aggregation leadership_aggregation = features::Aggregation::sum;

  // Throws ConfigError for non-positive counts, unknown coefficient names or
  // a byline maximum above the author count.
  void validate() const;
};

// Deterministic for a given config; threads only speed up the feature pass.
corpus::Corpus generate(const SynthConfig& config, const text::Lexicon& lexicon, const text::StopWords& stopwords,
                        unsigned threads = 1);

// "ka", "lo", ... syllable word for a vocabulary index.
std::string pseudo_word(int index);

}  // namespace citepred::synth
