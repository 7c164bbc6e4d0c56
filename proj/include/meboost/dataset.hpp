#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "meboost/common.hpp"

namespace meboost {

/// Dense binary-labelled dataset. Immutable once constructed.
///
/// Every row carries an instance id. Ids survive subsetting, so partitions
/// produced by the split functions can be checked for disjointness by
/// identity rather than by value.
class Dataset {
 public:
  Dataset() = default;

  /// `features` is row-major with `n_features` columns. Throws
  /// InvalidArgument on shape mismatch or non-finite values. When `ids` is
  /// empty the rows are numbered 0..n-1.
  Dataset(std::vector<double> features, std::size_t n_features, std::vector<Label> labels,
          std::vector<std::string> feature_names, std::string positive_class_name,
          std::string negative_class_name, std::vector<std::uint64_t> ids = {});

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  std::size_t n_features() const { return n_features_; }

  std::span<const double> row(std::size_t i) const {
    return {features_.data() + i * n_features_, n_features_};
  }
  double value(std::size_t i, std::size_t feature) const {
    return features_[i * n_features_ + feature];
  }
  Label label(std::size_t i) const { return labels_[i]; }

  const std::vector<double>& features() const { return features_; }
  const std::vector<Label>& labels() const { return labels_; }
  const std::vector<std::uint64_t>& ids() const { return ids_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::string& positive_class_name() const { return positive_class_name_; }
  const std::string& negative_class_name() const { return negative_class_name_; }

  std::size_t count(Label label) const;
  bool has_both_classes() const {
    return count(Label::positive) > 0 && count(Label::negative) > 0;
  }

  /// Rows in the given order, ids preserved.
  Dataset subset(std::span<const std::size_t> rows) const;

  /// Copy of this dataset with extra rows appended.
  Dataset with_rows(std::span<const double> features, std::span<const Label> labels,
                    std::span<const std::uint64_t> ids) const;

 private:
  std::vector<double> features_;
  std::size_t n_features_ = 0;
  std::vector<Label> labels_;
  std::vector<std::uint64_t> ids_;
  std::vector<std::string> feature_names_;
  std::string positive_class_name_;
  std::string negative_class_name_;
};

struct ImbalanceSummary {
  std::size_t n_instances = 0;
  std::size_t n_features = 0;
  std::size_t n_majority = 0;
  std::size_t n_minority = 0;
  double imbalance_ratio = 1.0;
};

/// Throws InvalidArgument for a single-class dataset.
ImbalanceSummary summarize(const Dataset& d);

// ---------------------------------------------------------------------------
// Ingestion

/// Reads a KEEL `.dat` file. Header keywords are case-insensitive and `%`
/// lines are comments. Without an `@outputs` line the last attribute is the
/// class. The less frequent class becomes `positive`.
Dataset parse_keel(std::istream& in);
Dataset parse_keel_file(const std::filesystem::path& path);

/// Label column given by header name or zero-based index.
using LabelColumn = std::variant<std::string, std::size_t>;

/// Rectangular CSV with a header row. The label column must hold exactly two
/// distinct tokens, one of which is `positive_label`.
Dataset parse_csv(std::istream& in, const LabelColumn& label_column,
                  const std::string& positive_label);
Dataset parse_csv_file(const std::filesystem::path& path, const LabelColumn& label_column,
                       const std::string& positive_label);

/// Writes features plus a trailing `class` column holding the class names.
/// Values are written with round-trip precision.
void write_csv(const Dataset& d, std::ostream& out);

// ---------------------------------------------------------------------------
// Splitting

struct SplitPlan {
  double validation_fraction = 0.05;
  std::size_t folds = 5;
  std::size_t repeats = 10;
  std::uint64_t seed = 0;

  /// Throws InvalidArgument if the plan cannot be applied to `d`.
  void validate(const Dataset& d) const;
};

struct Partition {
  Dataset train;
  Dataset test;
};

/// Row indices of a stratified holdout, sorted ascending.
///
/// The holdout size is ceil(fraction * n). Per-class quotas use the largest
/// remainder rule with ties ordered by a seeded shuffle; afterwards every
/// class is given at least one holdout row and keeps at least one remaining
/// row, moving the adjustment from the other class. Throws InvalidArgument
/// when that is impossible.
std::vector<std::size_t> stratified_holdout_indices(std::span<const Label> labels,
                                                    double fraction, std::uint64_t seed);

/// `test` is the holdout.
Partition stratified_holdout(const Dataset& d, double fraction, std::uint64_t seed);

/// Fold membership per row (values in [0, k)). Each class is shuffled and
/// dealt round-robin starting at a seeded offset; the next class continues
/// where the previous one stopped, which keeps fold sizes within one. A class
/// with fewer than k rows simply leaves some folds without it.
std::vector<std::size_t> stratified_fold_assignment(std::span<const Label> labels,
                                                    std::size_t k, std::uint64_t seed);

std::vector<Partition> stratified_kfold(const Dataset& d, std::size_t k, std::uint64_t seed);

}  // namespace meboost
