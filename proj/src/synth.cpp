#include "citepred/synth.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <limits>

#include "citepred/centrality.hpp"
#include "citepred/error.hpp"
#include "citepred/graph.hpp"
#include "citepred/random.hpp"
#include "citepred/stats.hpp"

namespace citepred::synth {

namespace {

// Binary indexed tree over integer weights, so removals and restorations
// are exact.
class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {}

  void add(std::size_t i, std::int64_t delta) {
    total_ += delta;
    for (++i; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
  }

  std::int64_t total() const { return total_; }

  // Smallest index whose inclusive prefix sum exceeds target.
  std::size_t find(std::int64_t target) const {
    std::size_t pos = 0;
    std::size_t step = std::bit_floor(tree_.size() - 1);
    for (; step > 0; step >>= 1) {
      if (pos + step < tree_.size() && tree_[pos + step] <= target) {
        pos += step;
        target -= tree_[pos];
      }
    }
    return pos;
  }

 private:
  std::vector<std::int64_t> tree_;
  std::int64_t total_ = 0;
};

// Weights are kept in thousandths.
std::int64_t author_weight(double attachment, int prior) {
  return 1000 + std::llround(1000.0 * attachment * prior);
}

std::string padded(char prefix, std::size_t value, int width) {
  std::string digits = std::to_string(value);
  if (static_cast<int>(digits.size()) < width) digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
  return prefix + digits;
}

class ZipfSampler {
 public:
  ZipfSampler(int size, double exponent) : cumulative_(static_cast<std::size_t>(size)) {
    double sum = 0.0;
    for (int k = 0; k < size; ++k) {
      sum += 1.0 / std::pow(k + 1.0, exponent);
      cumulative_[static_cast<std::size_t>(k)] = sum;
    }
  }

  int operator()(rng::Engine& eng) const {
    const double u = rng::uniform01(eng) * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return static_cast<int>(std::min<std::ptrdiff_t>(it - cumulative_.begin(),
                                                     static_cast<std::ptrdiff_t>(cumulative_.size()) - 1));
  }

 private:
  std::vector<double> cumulative_;
};

// (rank - mean rank) / sd of 1..m; entries that are NaN stay at 0.
Eigen::VectorXd rank_standardize(const Eigen::VectorXd& column) {
  std::vector<Eigen::Index> present;
  for (Eigen::Index i = 0; i < column.size(); ++i) {
    if (!std::isnan(column[i])) present.push_back(i);
  }
  Eigen::VectorXd z = Eigen::VectorXd::Zero(column.size());
  const auto m = static_cast<Eigen::Index>(present.size());
  if (m < 2) return z;
  Eigen::VectorXd values(m);
  for (Eigen::Index k = 0; k < m; ++k) values[k] = column[present[static_cast<std::size_t>(k)]];
  const Eigen::VectorXd ranks = stats::fractional_ranks(values);
  const double md = static_cast<double>(m);
  const double center = (md + 1.0) / 2.0;
  const double scale = std::sqrt((md * md - 1.0) / 12.0);
  for (Eigen::Index k = 0; k < m; ++k) z[present[static_cast<std::size_t>(k)]] = (ranks[k] - center) / scale;
  return z;
}

}  // namespace

void SynthConfig::validate() const {
  if (years < 1) throw ConfigError("synth years must be positive");
  if (publications < years) throw ConfigError("synth needs at least one publication per year");
  if (authors < 1) throw ConfigError("synth author count must be positive");
  if (byline_max < 1) throw ConfigError("synth byline maximum must be positive");
  if (byline_max > authors) throw ConfigError("synth byline maximum exceeds the author count");
  if (!(byline_mean >= 1.0 && byline_mean <= byline_max)) {
    throw ConfigError("synth byline mean must lie between 1 and the byline maximum");
  }
  if (!(attachment >= 0.0)) throw ConfigError("synth attachment strength must be non-negative");
  if (journals < 1) throw ConfigError("synth journal count must be positive");
  if (!(sjr_log_sd >= 0.0) || !std::isfinite(sjr_log_mean)) throw ConfigError("synth SJR distribution is invalid");
  if (vocabulary < 1) throw ConfigError("synth vocabulary must be positive");
  if (!(zipf_exponent >= 0.0)) throw ConfigError("synth Zipf exponent must be non-negative");
  if (!(abstract_tokens_mean >= 1.0)) throw ConfigError("synth abstract length must be at least 1");
  if (!(stopword_share >= 0.0 && lexicon_share >= 0.0 && stopword_share + lexicon_share <= 1.0)) {
    throw ConfigError("synth stop-word and lexicon shares must be non-negative and sum to at most 1");
  }
  for (const auto& [name, coef] : coefficients) {
    if (!features::predictor_index(name)) throw ConfigError("synth coefficient for unknown feature '" + name + "'");
    if (!std::isfinite(coef)) throw ConfigError("synth coefficient for '" + name + "' is not finite");
  }
  if (!std::isfinite(intercept) || !(noise >= 0.0)) throw ConfigError("synth latent score settings are invalid");
  if (citation_cap < 0) throw ConfigError("synth citation cap must be non-negative");
  if (!(oscillation_epsilon >= 0.0)) throw ConfigError("synth oscillation epsilon must be non-negative");
}

std::string pseudo_word(int index) {
  static constexpr std::string_view consonants = "bdfgklmnprstvz";
  static constexpr std::string_view vowels = "aeiou";
  const int base = static_cast<int>(consonants.size() * vowels.size());
  std::string word;
  int v = index;
  do {
    const int syllable = v % base;
    word += consonants[static_cast<std::size_t>(syllable) / vowels.size()];
    word += vowels[static_cast<std::size_t>(syllable) % vowels.size()];
    v /= base;
  } while (v > 0);
  // Trailing consonant keeps short words clear of common stop words.
  word += 'x';
  return word;
}

corpus::Corpus generate(const SynthConfig& config, const text::Lexicon& lexicon, const text::StopWords& stopwords,
                        unsigned threads) {
  config.validate();
  rng::Engine eng(config.seed);

  std::vector<double> journal_sjr(static_cast<std::size_t>(config.journals));
  for (auto& s : journal_sjr) {
    const double raw = std::exp(rng::normal(eng, config.sjr_log_mean, config.sjr_log_sd));
    s = std::max(0.001, std::round(raw * 1000.0) / 1000.0);
  }

  std::vector<std::string> vocabulary(static_cast<std::size_t>(config.vocabulary));
  for (int k = 0; k < config.vocabulary; ++k) vocabulary[static_cast<std::size_t>(k)] = pseudo_word(k);
  const ZipfSampler zipf(config.vocabulary, config.zipf_exponent);
  const auto stop_list = stopwords.words();
  const auto lexicon_list = lexicon.tokens();

  const auto n_authors = static_cast<std::size_t>(config.authors);
  std::vector<int> prior(n_authors, 0);
  Fenwick weights(n_authors);
  for (std::size_t a = 0; a < n_authors; ++a) weights.add(a, author_weight(config.attachment, 0));
  const int id_width = static_cast<int>(std::to_string(n_authors).size());
  const auto total_pubs = static_cast<std::size_t>(config.publications);
  const int pub_width = static_cast<int>(std::to_string(total_pubs).size());

  std::vector<corpus::PublicationRecord> records;
  records.reserve(total_pubs);
  std::vector<std::size_t> byline;
  for (int y = 0; y < config.years; ++y) {
    const int in_year = config.publications / config.years + (y < config.publications % config.years ? 1 : 0);
    for (int k = 0; k < in_year; ++k) {
      corpus::PublicationRecord r;
      r.pub_id = padded('P', records.size() + 1, pub_width);
      r.year = config.first_year + y;
      r.sjr = journal_sjr[rng::below(eng, journal_sjr.size())];

      const auto size = std::min<std::uint64_t>(1 + rng::poisson(eng, config.byline_mean - 1.0),
                                                static_cast<std::uint64_t>(config.byline_max));
      byline.clear();
      for (std::uint64_t s = 0; s < size; ++s) {
        const std::size_t a = weights.find(static_cast<std::int64_t>(rng::below(eng, static_cast<std::uint64_t>(weights.total()))));
        byline.push_back(a);
        weights.add(a, -author_weight(config.attachment, prior[a]));
      }
      for (const std::size_t a : byline) {
        ++prior[a];
        weights.add(a, author_weight(config.attachment, prior[a]));
        r.author_ids.push_back(padded('A', a + 1, id_width));
      }

      const auto length = std::max<std::uint64_t>(5, rng::poisson(eng, config.abstract_tokens_mean));
      for (std::uint64_t t = 0; t < length; ++t) {
        const double u = rng::uniform01(eng);
        std::string_view word;
        if (u < config.stopword_share && !stop_list.empty()) {
          word = stop_list[rng::below(eng, stop_list.size())];
        } else if (u < config.stopword_share + config.lexicon_share && !lexicon_list.empty()) {
          word = lexicon_list[rng::below(eng, lexicon_list.size())];
        } else {
          word = vocabulary[static_cast<std::size_t>(zipf(eng))];
        }
        if (t > 0) r.abstract_text += ' ';
        r.abstract_text += word;
      }
      r.abstract_text += '.';
      r.abstract_text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(r.abstract_text[0])));
      r.citations = 0;
      records.push_back(std::move(r));
    }
  }

  // Feature values for every record; NaN where a derived feature is undefined.
  const auto n = static_cast<Eigen::Index>(records.size());
  Eigen::MatrixXd values = Eigen::MatrixXd::Constant(n, features::kPredictorCount, std::numeric_limits<double>::quiet_NaN());
  auto planted = [&](Eigen::Index first, Eigen::Index last) {
    for (const auto& [name, coef] : config.coefficients) {
      const auto f = *features::predictor_index(name);
      if (coef != 0.0 && f >= first && f <= last) return true;
    }
    return false;
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = records[static_cast<std::size_t>(i)];
    values(i, features::kSjr) = *r.sjr;
    values(i, features::kAuthors) = static_cast<double>(r.author_ids.size());
  }
  // Only the feature groups that carry a planted effect are computed.
  const corpus::Corpus draft(records);
  const auto years = graph::window_years(draft);
  if (planted(features::kPubDegree, features::kPubBetweenness)) {
    const auto m = centrality::compute_all(graph::build_publication_network(draft, years), threads);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto k = *m.find(records[static_cast<std::size_t>(i)].pub_id);
      values(i, features::kPubDegree) = m.degree[k];
      values(i, features::kPubConstraint) = m.constraint[k];
      values(i, features::kPubCloseness) = m.closeness[k];
      values(i, features::kPubBetweenness) = m.betweenness[k];
    }
  }
  std::vector<double> per_author;
  auto over_byline = [&](Eigen::Index i, features::Aggregation how, auto&& value_of) {
    per_author.clear();
    for (const auto& a : records[static_cast<std::size_t>(i)].author_ids) per_author.push_back(value_of(a));
    return features::aggregate(per_author, how);
  };
  if (planted(features::kAuthorDegree, features::kAuthorBetweenness)) {
    const auto m = centrality::compute_all(graph::build_author_network(draft, years), threads);
    const std::array<std::pair<Eigen::Index, const Eigen::VectorXd*>, 4> columns = {{
        {features::kAuthorDegree, &m.degree},
        {features::kAuthorConstraint, &m.constraint},
        {features::kAuthorCloseness, &m.closeness},
        {features::kAuthorBetweenness, &m.betweenness},
    }};
    for (Eigen::Index i = 0; i < n; ++i) {
      for (const auto& [col, metric] : columns) {
        values(i, col) = over_byline(i, config.centrality_aggregation,
                                     [&](const std::string& a) { return (*metric)[*m.find(a)]; });
      }
    }
  }
  if (planted(features::kRotatingLeadership, features::kRotatingLeadership)) {
    const auto table = centrality::leadership_table(graph::yearly_author_networks(draft), config.oscillation_epsilon,
                                                    threads);
    for (Eigen::Index i = 0; i < n; ++i) {
      values(i, features::kRotatingLeadership) =
          over_byline(i, config.leadership_aggregation,
                      [&](const std::string& a) { return static_cast<double>(table.counts.at(a)); });
    }
  }
  if (planted(features::kAbstractLength, features::kCommonness)) {
    const auto text_metrics = features::compute_text_inputs(draft, lexicon, stopwords, threads);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& m = text_metrics.at(records[static_cast<std::size_t>(i)].pub_id);
      values(i, features::kAbstractLength) = static_cast<double>(m.length_chars);
      values(i, features::kSentiment) = m.sentiment;
      values(i, features::kComplexity) = m.complexity;
      if (m.diversity) values(i, features::kDiversity) = *m.diversity;
      values(i, features::kCommonness) = m.commonness;
    }
  }

  Eigen::VectorXd latent = Eigen::VectorXd::Constant(n, config.intercept);
  for (const auto& [name, coef] : config.coefficients) {
    if (coef == 0.0) continue;
    latent += coef * rank_standardize(values.col(*features::predictor_index(name)));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const double score = latent[i] + config.noise * rng::normal(eng);
    const double cites = std::floor(std::exp(std::min(score, 700.0)));
    records[static_cast<std::size_t>(i)].citations =
        cites >= static_cast<double>(config.citation_cap) ? config.citation_cap : static_cast<std::int64_t>(cites);
  }
  return corpus::Corpus(std::move(records));
}

}  // namespace citepred::synth
