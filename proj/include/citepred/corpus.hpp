#pragma once

// Bibliographic corpus: JSONL parsing, completeness filtering, indexing and
// descriptive statistics.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace citepred::corpus {

struct PublicationRecord {
  std::string pub_id;
  int year = 0;
  std::vector<std::string> author_ids;
  std::string abstract_text;
  std::optional<double> sjr;
  std::optional<std::int64_t> citations;

  bool operator==(const PublicationRecord&) const = default;
};

struct YearWindow {
  int min_year = 0;
  int max_year = -1;

  bool contains(int year) const { return year >= min_year && year <= max_year; }
  bool empty() const { return max_year < min_year; }
  std::vector<int> years() const;
  bool operator==(const YearWindow&) const = default;
};

// Immutable collection of records with an author -> publications index.
//
// The constructor validates every record invariant (unique pub ids, no
// repeated author within a byline, non-negative sjr/citations, year inside
// the window) and throws DataError on violation. Without an explicit window
// the window spans the observed years.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<PublicationRecord> records,
                  std::optional<YearWindow> window = std::nullopt);

  const std::vector<PublicationRecord>& records() const { return records_; }
  const PublicationRecord& operator[](std::size_t i) const { return records_[i]; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const YearWindow& year_window() const { return window_; }

  // Record indices (in corpus order) listing the author; empty if unknown.
  std::span<const std::size_t> publications_of(std::string_view author_id) const;
  std::optional<std::size_t> find(std::string_view pub_id) const;
  std::size_t author_count() const { return author_index_.size(); }
  // Sorted list of distinct author ids.
  std::vector<std::string> authors() const;

  bool operator==(const Corpus& other) const {
    return records_ == other.records_ && window_ == other.window_;
  }

 private:
  std::vector<PublicationRecord> records_;
  YearWindow window_;
  std::unordered_map<std::string, std::vector<std::size_t>> author_index_;
  std::unordered_map<std::string, std::size_t> id_index_;
};

// JSON keys for each record field.
struct FieldSchema {
  std::string pub_id = "pub_id";
  std::string year = "year";
  std::string authors = "authors";
  std::string abstract_text = "abstract";
  std::string sjr = "sjr";
  std::string citations = "citations";
};

struct ParseOptions {
  FieldSchema schema;
  std::optional<YearWindow> window;
};

// One JSON object per line; blank lines are skipped and unknown keys ignored.
// Missing or null abstract/sjr/citations are kept as missing so that
// filter_complete can account for them. Errors carry the 1-based line number.
Corpus parse_corpus(std::istream& in, const ParseOptions& options = {});
Corpus read_corpus_file(const std::string& path, const ParseOptions& options = {});

void write_corpus(std::ostream& out, const Corpus& corpus, const FieldSchema& schema = {});

enum class DropReason : std::size_t {
  empty_byline = 0,
  missing_abstract,
  missing_sjr,
  missing_citations,
};
inline constexpr std::size_t kDropReasonCount = 4;
std::string_view to_string(DropReason reason);

struct DropReport {
  std::array<std::size_t, kDropReasonCount> counts{};
  std::size_t kept = 0;

  std::size_t dropped() const;
  std::size_t count(DropReason reason) const { return counts[static_cast<std::size_t>(reason)]; }
};

// Plain-text "reason count" lines followed by totals.
void write_drop_report(std::ostream& out, const DropReport& report);

struct FilterResult {
  Corpus corpus;
  DropReport report;
};

// Drops records lacking a byline, an abstract, a positive SJR or a citation
// count. Each dropped record is charged to the first failing reason in
// DropReason order, so the per-reason counts sum to the number dropped.
FilterResult filter_complete(const Corpus& corpus);

struct GroupStats {
  std::size_t publications = 0;
  std::size_t unique_authors = 0;
  double solo_share = 0.0;
  double authors_mean = 0.0;
  double authors_max = 0.0;
  double authors_sd = 0.0;
  // Citation statistics cover records with a citation count only.
  std::size_t cited_records = 0;
  double citations_mean = 0.0;
  double citations_max = 0.0;
  double citations_sd = 0.0;
};

struct DescriptiveStats {
  std::map<int, GroupStats> per_year;
  GroupStats total;
};

// Per-year and pooled statistics; standard deviations use the n-1 divisor.
DescriptiveStats describe(const Corpus& corpus);

void write_descriptive_csv(std::ostream& out, const DescriptiveStats& stats);

}  // namespace citepred::corpus
