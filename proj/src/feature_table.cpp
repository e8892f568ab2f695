#include "citepred/feature_table.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "citepred/error.hpp"

namespace citepred::features {

const std::array<std::string, kPredictorCount>& predictor_names() {
  static const std::array<std::string, kPredictorCount> names = {
      "sjr", "n_authors", "x1", "x2",  "x3",  "x4",  "x5",  "x6",
      "x7",  "x8",        "x9", "x10", "x11", "x12", "x13", "x14"};
  return names;
}

const std::array<std::string, kPredictorCount>& predictor_descriptions() {
  static const std::array<std::string, kPredictorCount> names = {
      "SJR",
      "Number of authors",
      "Degree - publication network",
      "Constraint - publication network",
      "Closeness - publication network",
      "Betweenness - publication network",
      "Degree - author network",
      "Constraint - author network",
      "Closeness - author network",
      "Betweenness - author network",
      "Rotating leadership",
      "Abstract length",
      "Sentiment",
      "Complexity",
      "Diversity",
      "Commonness"};
  return names;
}

std::optional<Eigen::Index> predictor_index(std::string_view name) {
  const auto& names = predictor_names();
  for (Eigen::Index i = 0; i < kPredictorCount; ++i) {
    if (names[static_cast<std::size_t>(i)] == name) return i;
  }
  return std::nullopt;
}

FeatureTable FeatureTable::take(std::span<const Eigen::Index> row_indices) const {
  FeatureTable out;
  const auto n = static_cast<Eigen::Index>(row_indices.size());
  out.pub_ids.reserve(row_indices.size());
  out.citations.resize(n);
  out.predictors.resize(n, kPredictorCount);
  if (labeled()) out.labels.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index r = row_indices[static_cast<std::size_t>(k)];
    out.pub_ids.push_back(pub_ids[static_cast<std::size_t>(r)]);
    out.citations[k] = citations[r];
    out.predictors.row(k) = predictors.row(r);
    if (labeled()) out.labels[k] = labels[r];
  }
  out.label_threshold = label_threshold;
  return out;
}

void write_feature_csv(std::ostream& out, const FeatureTable& table, const ConfigEcho& echo) {
  write_echo(out, echo);
  if (table.label_threshold) out << "# label_threshold=" << format_decimal(*table.label_threshold) << '\n';
  out << "pub_id,label,citations";
  for (const auto& name : predictor_names()) out << ',' << name;
  out << '\n';
  const bool labeled = table.labeled();
  for (Eigen::Index r = 0; r < table.rows(); ++r) {
    out << table.pub_ids[static_cast<std::size_t>(r)] << ',';
    if (labeled) out << table.labels[r];
    out << ',' << format_decimal(table.citations[r]);
    for (Eigen::Index c = 0; c < kPredictorCount; ++c) out << ',' << format_decimal(table.predictors(r, c));
    out << '\n';
  }
}

FeatureTable read_feature_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  std::vector<std::string> ids;
  std::vector<double> cites;
  std::vector<int> labels;
  std::vector<std::array<double, kPredictorCount>> rows;
  std::optional<double> threshold;
  std::size_t labeled_rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view key = "# label_threshold=";
      if (line.starts_with(key)) threshold = std::stod(line.substr(key.size()));
      continue;
    }
    auto fail = [&](const std::string& what) {
      return DataError("feature table line " + std::to_string(line_no) + ": " + what);
    };
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (!header) {
      std::vector<std::string> expected = {"pub_id", "label", "citations"};
      for (const auto& n : predictor_names()) expected.push_back(n);
      if (cells != expected) throw fail("unexpected header");
      header = true;
      continue;
    }
    if (cells.size() != static_cast<std::size_t>(kPredictorCount) + 3) throw fail("wrong number of columns");
    try {
      ids.push_back(cells[0]);
      if (cells[1].empty()) {
        labels.push_back(0);
      } else {
        if (cells[1] != "0" && cells[1] != "1") throw fail("label must be 0 or 1");
        labels.push_back(cells[1] == "1" ? 1 : 0);
        ++labeled_rows;
      }
      cites.push_back(std::stod(cells[2]));
      std::array<double, kPredictorCount> row{};
      for (std::size_t c = 0; c < row.size(); ++c) {
        row[c] = std::stod(cells[c + 3]);
        if (!std::isfinite(row[c])) throw fail("non-finite value");
      }
      rows.push_back(row);
    } catch (const std::invalid_argument&) {
      throw fail("cell is not a number");
    } catch (const std::out_of_range&) {
      throw fail("number out of range");
    }
  }
  if (!header) throw DataError("feature table: missing header");
  if (labeled_rows != 0 && labeled_rows != ids.size()) throw DataError("feature table: partially labeled");

  FeatureTable t;
  const auto n = static_cast<Eigen::Index>(ids.size());
  t.pub_ids = std::move(ids);
  t.citations = Eigen::Map<const Eigen::VectorXd>(cites.data(), n);
  t.predictors.resize(n, kPredictorCount);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < kPredictorCount; ++c) t.predictors(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  }
  if (labeled_rows > 0) t.labels = Eigen::Map<const Eigen::VectorXi>(labels.data(), n);
  t.label_threshold = threshold;
  return t;
}

}  // namespace citepred::features
