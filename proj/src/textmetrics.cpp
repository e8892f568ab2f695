#include "citepred/textmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "citepred/error.hpp"

namespace citepred::text {

namespace {

bool is_token_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::map<std::string_view, std::size_t> stem_counts(std::span<const std::string> tokens) {
  std::map<std::string_view, std::size_t> counts;
  for (const auto& t : tokens) ++counts[t];
  return counts;
}

}  // namespace

StopWords StopWords::load(std::istream& in) {
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::string w(t);
    std::transform(w.begin(), w.end(), w.begin(), lower);
    words.insert(std::move(w));
  }
  return StopWords(std::move(words));
}

StopWords StopWords::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open stop-word list '" + path + "'");
  return load(in);
}

Lexicon::Lexicon(std::unordered_map<std::string, double> valences) : valences_(std::move(valences)) {
  for (const auto& [token, v] : valences_) {
    if (!(v >= -4.0 && v <= 4.0)) throw DataError("valence for '" + token + "' outside [-4, 4]");
  }
}

Lexicon Lexicon::load(std::istream& in) {
  std::unordered_map<std::string, double> valences;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    auto fail = [&](const std::string& what) {
      return DataError("lexicon line " + std::to_string(line_no) + ": " + what);
    };
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) throw fail("expected token<TAB>valence");
    std::string token = line.substr(0, tab);
    const std::string rest(trim(std::string_view(line).substr(tab + 1)));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(rest, &used);
    } catch (const std::exception&) {
      throw fail("valence is not a number");
    }
    if (used != rest.size()) throw fail("trailing characters after valence");
    if (!(v >= -4.0 && v <= 4.0)) throw fail("valence outside [-4, 4]");
    if (!valences.emplace(std::move(token), v).second) throw fail("duplicate token");
  }
  return Lexicon(std::move(valences));
}

Lexicon Lexicon::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open lexicon '" + path + "'");
  return load(in);
}

std::optional<double> Lexicon::valence(std::string_view token) const {
  auto it = valences_.find(std::string(token));
  if (it == valences_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> Lexicon::tokens() const {
  std::vector<std::string> out;
  out.reserve(valences_.size());
  for (const auto& [token, v] : valences_) out.push_back(token);
  std::sort(out.begin(), out.end());
  return out;
}

Lexicon Lexicon::negated() const {
  auto copy = valences_;
  for (auto& [token, v] : copy) v = -v;
  return Lexicon(std::move(copy));
}

const std::unordered_set<std::string>& negators() {
  // Contractions appear split at the apostrophe ("isn't" -> "isn").
  static const std::unordered_set<std::string> words = {
      "not",     "no",     "never",   "none",    "nobody",  "nothing", "neither", "nor",
      "nowhere", "cannot", "cant",    "without", "rarely",  "seldom",  "hardly",  "aint",
      "arent",   "aren",   "couldnt", "couldn",  "didnt",   "didn",    "doesnt",  "doesn",
      "dont",    "don",    "hadnt",   "hadn",    "hasnt",   "hasn",    "havent",  "haven",
      "isnt",    "isn",    "mightnt", "mightn",  "mustnt",  "mustn",   "neednt",  "needn",
      "shouldnt", "shouldn", "wasnt",  "wasn",    "werent",  "weren",   "wont",    "won",
      "wouldnt", "wouldn", "nope",    "despite"};
  return words;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    if (current.size() >= 2) out.push_back(current);
    current.clear();
  };
  for (char c : text) {
    if (is_token_char(c)) {
      current.push_back(lower(c));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

TokenizedAbstract preprocess(std::string_view text, const StopWords& stopwords) {
  TokenizedAbstract out;
  out.raw_char_count = abstract_length(text);
  out.raw_tokens = tokenize(text);
  for (const auto& w : out.raw_tokens) {
    if (!stopwords.contains(w)) out.tokens.push_back(porter_stem(w));
  }
  return out;
}

std::size_t abstract_length(std::string_view text) {
  return static_cast<std::size_t>(std::count_if(text.begin(), text.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  }));
}

double sentiment(std::span<const std::string> raw_tokens, const Lexicon& lexicon) {
  constexpr std::size_t kNegationWindow = 3;
  constexpr double kAlpha = 15.0;
  const auto& neg = negators();
  double sum = 0.0;
  bool hit = false;
  for (std::size_t i = 0; i < raw_tokens.size(); ++i) {
    auto v = lexicon.valence(raw_tokens[i]);
    if (!v) continue;
    hit = true;
    bool negated = false;
    for (std::size_t back = 1; back <= kNegationWindow && back <= i; ++back) {
      if (neg.contains(raw_tokens[i - back])) {
        negated = true;
        break;
      }
    }
    sum += negated ? -*v : *v;
  }
  if (!hit) return 0.0;
  return sum / std::sqrt(sum * sum + kAlpha);
}

double complexity(std::span<const std::string> tokens) {
  if (tokens.empty()) return 0.0;
  const auto counts = stem_counts(tokens);
  const double k = static_cast<double>(counts.size());
  const double mean = static_cast<double>(tokens.size()) / k;
  double ss = 0.0;
  for (const auto& [stem, c] : counts) ss += (static_cast<double>(c) - mean) * (static_cast<double>(c) - mean);
  return std::sqrt(ss / k);
}

std::optional<double> diversity(std::span<const std::string> tokens) {
  if (tokens.empty()) return std::nullopt;
  const auto counts = stem_counts(tokens);
  return static_cast<double>(counts.size()) / static_cast<double>(tokens.size());
}

void CorpusTermTable::add(std::span<const std::string> tokens) {
  for (const auto& t : tokens) ++counts_[t];
  total_ += tokens.size();
}

void CorpusTermTable::merge(const CorpusTermTable& other) {
  for (const auto& [stem, c] : other.counts_) counts_[stem] += c;
  total_ += other.total_;
}

std::optional<std::uint64_t> CorpusTermTable::count(std::string_view stem) const {
  auto it = counts_.find(std::string(stem));
  if (it == counts_.end()) return std::nullopt;
  return it->second;
}

double commonness(std::span<const std::string> tokens, const CorpusTermTable& table) {
  if (tokens.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& t : tokens) {
    auto c = table.count(t);
    if (!c) throw DataError("stem '" + t + "' missing from the corpus term table");
    sum += static_cast<double>(*c);
  }
  return sum / static_cast<double>(tokens.size());
}

TextMetrics compute_text_metrics(std::string_view text, const TokenizedAbstract& tokenized,
                                 const Lexicon& lexicon, const CorpusTermTable& table) {
  TextMetrics m;
  m.length_chars = abstract_length(text);
  m.sentiment = sentiment(tokenized.raw_tokens, lexicon);
  m.complexity = complexity(tokenized.tokens);
  m.diversity = diversity(tokenized.tokens);
  m.commonness = commonness(tokenized.tokens, table);
  return m;
}

}  // namespace citepred::text
