#include "citepred/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "citepred/error.hpp"
#include "citepred/format.hpp"

namespace citepred::corpus {

namespace {

bool valid_id(std::string_view id) {
  if (id.empty() || id.front() == '#') return false;
  return std::none_of(id.begin(), id.end(), [](unsigned char c) { return std::isspace(c); });
}

bool blank(std::string_view text) {
  return std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); });
}

struct Moments {
  double mean = 0.0;
  double max = 0.0;
  double sd = 0.0;
};

Moments moments(const std::vector<double>& values) {
  Moments m;
  if (values.empty()) return m;
  double sum = 0.0;
  m.max = values.front();
  for (double v : values) {
    sum += v;
    m.max = std::max(m.max, v);
  }
  m.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - m.mean) * (v - m.mean);
    m.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return m;
}

GroupStats group_stats(const std::vector<const PublicationRecord*>& group) {
  GroupStats s;
  s.publications = group.size();
  std::unordered_set<std::string_view> authors;
  std::vector<double> byline;
  std::vector<double> cites;
  std::size_t solo = 0;
  for (const auto* r : group) {
    for (const auto& a : r->author_ids) authors.insert(a);
    byline.push_back(static_cast<double>(r->author_ids.size()));
    if (r->author_ids.size() == 1) ++solo;
    if (r->citations) cites.push_back(static_cast<double>(*r->citations));
  }
  s.unique_authors = authors.size();
  s.solo_share = static_cast<double>(solo) / static_cast<double>(group.size());
  const Moments b = moments(byline);
  s.authors_mean = b.mean;
  s.authors_max = b.max;
  s.authors_sd = b.sd;
  const Moments c = moments(cites);
  s.cited_records = cites.size();
  s.citations_mean = c.mean;
  s.citations_max = c.max;
  s.citations_sd = c.sd;
  return s;
}

}  // namespace

std::vector<int> YearWindow::years() const {
  std::vector<int> out;
  for (int y = min_year; y <= max_year; ++y) out.push_back(y);
  return out;
}

Corpus::Corpus(std::vector<PublicationRecord> records, std::optional<YearWindow> window)
    : records_(std::move(records)) {
  if (window) {
    window_ = *window;
  } else if (!records_.empty()) {
    auto [lo, hi] = std::minmax_element(records_.begin(), records_.end(),
                                        [](const auto& a, const auto& b) { return a.year < b.year; });
    window_ = {lo->year, hi->year};
  }
  id_index_.reserve(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if (!valid_id(r.pub_id)) throw DataError("invalid pub_id '" + r.pub_id + "'");
    if (!id_index_.emplace(r.pub_id, i).second) throw DataError("duplicate pub_id '" + r.pub_id + "'");
    if (!window_.contains(r.year)) {
      throw DataError("publication '" + r.pub_id + "' year " + std::to_string(r.year) +
                      " outside window " + std::to_string(window_.min_year) + "-" +
                      std::to_string(window_.max_year));
    }
    if (r.sjr && !(*r.sjr >= 0.0 && std::isfinite(*r.sjr))) {
      throw DataError("publication '" + r.pub_id + "' has invalid sjr");
    }
    if (r.citations && *r.citations < 0) {
      throw DataError("publication '" + r.pub_id + "' has negative citations");
    }
    for (std::size_t a = 0; a < r.author_ids.size(); ++a) {
      const auto& author = r.author_ids[a];
      if (!valid_id(author)) throw DataError("publication '" + r.pub_id + "' has invalid author id");
      auto& pubs = author_index_[author];
      if (!pubs.empty() && pubs.back() == i) {
        throw DataError("publication '" + r.pub_id + "' lists author '" + author + "' twice");
      }
      pubs.push_back(i);
    }
  }
}

std::span<const std::size_t> Corpus::publications_of(std::string_view author_id) const {
  auto it = author_index_.find(std::string(author_id));
  if (it == author_index_.end()) return {};
  return it->second;
}

std::optional<std::size_t> Corpus::find(std::string_view pub_id) const {
  auto it = id_index_.find(std::string(pub_id));
  if (it == id_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> Corpus::authors() const {
  std::vector<std::string> out;
  out.reserve(author_index_.size());
  for (const auto& [id, pubs] : author_index_) out.push_back(id);
  std::sort(out.begin(), out.end());
  return out;
}

Corpus parse_corpus(std::istream& in, const ParseOptions& options) {
  const auto& schema = options.schema;
  std::vector<PublicationRecord> records;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    auto fail = [&](const std::string& what) -> DataError {
      return DataError("line " + std::to_string(line_no) + ": " + what);
    };
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      throw fail("malformed JSON");
    }
    if (!obj.is_object()) throw fail("record is not a JSON object");

    PublicationRecord r;
    auto id = obj.find(schema.pub_id);
    if (id == obj.end() || !id->is_string()) throw fail("missing string field '" + schema.pub_id + "'");
    r.pub_id = id->get<std::string>();
    if (!valid_id(r.pub_id)) throw fail("invalid pub_id '" + r.pub_id + "'");
    if (!seen.insert(r.pub_id).second) throw fail("duplicate pub_id '" + r.pub_id + "'");

    auto year = obj.find(schema.year);
    if (year == obj.end() || !year->is_number_integer()) throw fail("missing integer field '" + schema.year + "'");
    r.year = year->get<int>();
    if (options.window && !options.window->contains(r.year)) {
      throw fail("year " + std::to_string(r.year) + " outside configured window");
    }

    auto authors = obj.find(schema.authors);
    if (authors == obj.end() || !authors->is_array()) throw fail("missing array field '" + schema.authors + "'");
    if (authors->empty()) throw fail("empty author list");
    std::set<std::string> unique;
    for (const auto& a : *authors) {
      if (!a.is_string()) throw fail("author ids must be strings");
      auto author = a.get<std::string>();
      if (!valid_id(author)) throw fail("invalid author id '" + author + "'");
      if (!unique.insert(author).second) throw fail("author '" + author + "' listed twice");
      r.author_ids.push_back(std::move(author));
    }

    if (auto abs = obj.find(schema.abstract_text); abs != obj.end() && !abs->is_null()) {
      if (!abs->is_string()) throw fail("field '" + schema.abstract_text + "' must be a string");
      r.abstract_text = abs->get<std::string>();
    }
    if (auto sjr = obj.find(schema.sjr); sjr != obj.end() && !sjr->is_null()) {
      if (!sjr->is_number()) throw fail("field '" + schema.sjr + "' must be a number");
      const double v = sjr->get<double>();
      if (!(v >= 0.0) || !std::isfinite(v)) throw fail("negative or non-finite sjr");
      r.sjr = v;
    }
    if (auto cites = obj.find(schema.citations); cites != obj.end() && !cites->is_null()) {
      if (!cites->is_number_integer()) throw fail("field '" + schema.citations + "' must be an integer");
      const auto v = cites->get<std::int64_t>();
      if (v < 0) throw fail("negative citation count");
      r.citations = v;
    }
    records.push_back(std::move(r));
  }
  return Corpus(std::move(records), options.window);
}

Corpus read_corpus_file(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file '" + path + "'");
  try {
    return parse_corpus(in, options);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

void write_corpus(std::ostream& out, const Corpus& corpus, const FieldSchema& schema) {
  for (const auto& r : corpus.records()) {
    nlohmann::ordered_json obj;
    obj[schema.pub_id] = r.pub_id;
    obj[schema.year] = r.year;
    obj[schema.authors] = r.author_ids;
    obj[schema.abstract_text] = r.abstract_text;
    obj[schema.sjr] = r.sjr ? nlohmann::ordered_json(*r.sjr) : nlohmann::ordered_json(nullptr);
    obj[schema.citations] = r.citations ? nlohmann::ordered_json(*r.citations) : nlohmann::ordered_json(nullptr);
    out << obj.dump() << '\n';
  }
}

std::string_view to_string(DropReason reason) {
  switch (reason) {
    case DropReason::empty_byline: return "empty_byline";
    case DropReason::missing_abstract: return "missing_abstract";
    case DropReason::missing_sjr: return "missing_sjr";
    case DropReason::missing_citations: return "missing_citations";
  }
  return "unknown";
}

std::size_t DropReport::dropped() const {
  std::size_t total = 0;
  for (auto c : counts) total += c;
  return total;
}

void write_drop_report(std::ostream& out, const DropReport& report) {
  for (std::size_t i = 0; i < kDropReasonCount; ++i) {
    out << to_string(static_cast<DropReason>(i)) << ' ' << report.counts[i] << '\n';
  }
  out << "dropped " << report.dropped() << '\n';
  out << "kept " << report.kept << '\n';
}

FilterResult filter_complete(const Corpus& corpus) {
  FilterResult result;
  std::vector<PublicationRecord> kept;
  kept.reserve(corpus.size());
  for (const auto& r : corpus.records()) {
    std::optional<DropReason> reason;
    if (r.author_ids.empty()) {
      reason = DropReason::empty_byline;
    } else if (blank(r.abstract_text)) {
      reason = DropReason::missing_abstract;
    } else if (!r.sjr || *r.sjr <= 0.0) {
      reason = DropReason::missing_sjr;
    } else if (!r.citations) {
      reason = DropReason::missing_citations;
    }
    if (reason) {
      ++result.report.counts[static_cast<std::size_t>(*reason)];
    } else {
      kept.push_back(r);
    }
  }
  result.report.kept = kept.size();
  result.corpus = Corpus(std::move(kept), corpus.year_window());
  return result;
}

DescriptiveStats describe(const Corpus& corpus) {
  if (corpus.empty()) throw DataError("cannot describe an empty corpus");
  DescriptiveStats stats;
  std::map<int, std::vector<const PublicationRecord*>> by_year;
  std::vector<const PublicationRecord*> all;
  all.reserve(corpus.size());
  for (const auto& r : corpus.records()) {
    by_year[r.year].push_back(&r);
    all.push_back(&r);
  }
  for (const auto& [year, group] : by_year) stats.per_year[year] = group_stats(group);
  stats.total = group_stats(all);
  return stats;
}

void write_descriptive_csv(std::ostream& out, const DescriptiveStats& stats) {
  out << "statistic";
  for (const auto& [year, s] : stats.per_year) out << ',' << year;
  out << ",total\n";
  auto row = [&](std::string_view name, auto field) {
    out << name;
    for (const auto& [year, s] : stats.per_year) out << ',' << format_decimal(field(s));
    out << ',' << format_decimal(field(stats.total)) << '\n';
  };
  row("unique_authors", [](const GroupStats& s) { return static_cast<double>(s.unique_authors); });
  row("publications", [](const GroupStats& s) { return static_cast<double>(s.publications); });
  row("solo_author_share", [](const GroupStats& s) { return s.solo_share; });
  row("authors_mean", [](const GroupStats& s) { return s.authors_mean; });
  row("authors_max", [](const GroupStats& s) { return s.authors_max; });
  row("authors_sd", [](const GroupStats& s) { return s.authors_sd; });
  row("citations_mean", [](const GroupStats& s) { return s.citations_mean; });
  row("citations_max", [](const GroupStats& s) { return s.citations_max; });
  row("citations_sd", [](const GroupStats& s) { return s.citations_sd; });
}

}  // namespace citepred::corpus
