#pragma once

// Abstract-level text variables: length, lexicon sentiment, complexity,
// lexical diversity and corpus commonness.

#include <algorithm>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace citepred::text {

std::string porter_stem(std::string_view word);

class StopWords {
 public:
  StopWords() = default;
  explicit StopWords(std::unordered_set<std::string> words) : words_(std::move(words)) {}

  // One token per line; blank lines and '#' comments are ignored.
  static StopWords load(std::istream& in);
  static StopWords load_file(const std::string& path);

  bool contains(std::string_view token) const { return words_.contains(std::string(token)); }
  std::size_t size() const { return words_.size(); }
  // Sorted, for deterministic iteration.
  std::vector<std::string> words() const {
    std::vector<std::string> out(words_.begin(), words_.end());
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::unordered_set<std::string> words_;
};

// token -> valence in [-4, 4].
class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(std::unordered_map<std::string, double> valences);

  // "token<TAB>valence" per line. Throws DataError naming the line on
  // malformed input or out-of-range valence.
  static Lexicon load(std::istream& in);
  static Lexicon load_file(const std::string& path);

  std::optional<double> valence(std::string_view token) const;
  std::size_t size() const { return valences_.size(); }
  // Sorted entries, for deterministic iteration.
  std::vector<std::string> tokens() const;
  Lexicon negated() const;

 private:
  std::unordered_map<std::string, double> valences_;
};

// Negation cues looked up in the three tokens before a lexicon hit.
const std::unordered_set<std::string>& negators();

struct TokenizedAbstract {
  std::size_t raw_char_count = 0;
  // Lowercase words before stop-word removal and stemming.
  std::vector<std::string> raw_tokens;
  // Stems of the non-stop-words.
  std::vector<std::string> tokens;
};

// Lowercase ASCII alphanumeric runs of length >= 2; every other byte
// separates tokens.
std::vector<std::string> tokenize(std::string_view text);

TokenizedAbstract preprocess(std::string_view text, const StopWords& stopwords);

// Unicode scalar values in UTF-8 text.
std::size_t abstract_length(std::string_view text);

// Sum of lexicon valences, sign flipped when one of the three preceding
// tokens is a negator, mapped to s / sqrt(s^2 + 15). 0 with no hits.
double sentiment(std::span<const std::string> raw_tokens, const Lexicon& lexicon);

// Population standard deviation of the per-stem occurrence counts.
double complexity(std::span<const std::string> tokens);

// Distinct stems over token count; nullopt for an empty abstract.
std::optional<double> diversity(std::span<const std::string> tokens);

class CorpusTermTable {
 public:
  void add(std::span<const std::string> tokens);
  void merge(const CorpusTermTable& other);
  std::optional<std::uint64_t> count(std::string_view stem) const;
  std::uint64_t total() const { return total_; }
  std::size_t size() const { return counts_.size(); }

 private:
  std::unordered_map<std::string, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

// Mean corpus-wide count over the abstract's token occurrences. Throws
// DataError for a token the table has never seen. 0 for an empty abstract.
double commonness(std::span<const std::string> tokens, const CorpusTermTable& table);

struct TextMetrics {
  std::size_t length_chars = 0;
  double sentiment = 0.0;
  double complexity = 0.0;
  std::optional<double> diversity;
  double commonness = 0.0;
};

TextMetrics compute_text_metrics(std::string_view text, const TokenizedAbstract& tokenized,
                                 const Lexicon& lexicon, const CorpusTermTable& table);

}  // namespace citepred::text
