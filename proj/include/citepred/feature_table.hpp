#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "citepred/format.hpp"

namespace citepred::features {

inline constexpr Eigen::Index kPredictorCount = 16;

// Predictor columns in table order: the two controls, then x1..x14.
enum Predictor : Eigen::Index {
  kSjr = 0,
  kAuthors,
  kPubDegree,            // x1
  kPubConstraint,        // x2
  kPubCloseness,         // x3
  kPubBetweenness,       // x4
  kAuthorDegree,         // x5
  kAuthorConstraint,     // x6
  kAuthorCloseness,      // x7
  kAuthorBetweenness,    // x8
  kRotatingLeadership,   // x9
  kAbstractLength,       // x10
  kSentiment,            // x11
  kComplexity,           // x12
  kDiversity,            // x13
  kCommonness,           // x14
};

// Canonical column names: sjr, n_authors, x1..x14.
const std::array<std::string, kPredictorCount>& predictor_names();
// Readable names for reports ("Rotating leadership", ...).
const std::array<std::string, kPredictorCount>& predictor_descriptions();
std::optional<Eigen::Index> predictor_index(std::string_view name);

// One row per publication, sorted by pub_id.
struct FeatureTable {
  std::vector<std::string> pub_ids;
  Eigen::VectorXd citations;
  Eigen::MatrixXd predictors;  // rows x kPredictorCount
  Eigen::VectorXi labels;      // 0/1 per row once labeled, otherwise empty
  std::optional<double> label_threshold;

  Eigen::Index rows() const { return static_cast<Eigen::Index>(pub_ids.size()); }
  bool labeled() const { return labels.size() == rows() && rows() > 0; }
  FeatureTable take(std::span<const Eigen::Index> row_indices) const;
};

// Header: pub_id,label,citations,sjr,n_authors,x1..x14. Label is 0/1 or
// empty when unlabeled; decimals carry 12 significant digits.
void write_feature_csv(std::ostream& out, const FeatureTable& table, const ConfigEcho& echo = {});
FeatureTable read_feature_csv(std::istream& in);

}  // namespace citepred::features
