#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "meboost/common.hpp"

namespace meboost {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
};

/// Counts with "score > threshold" predicting positive.
ConfusionCounts confusion(std::span<const double> scores, std::span<const Label> labels,
                          double threshold);

/// TP / (TP + FN). Throws InvalidArgument when there are no positives.
double tpr(const ConfusionCounts& c);
/// FP / (FP + TN). Throws InvalidArgument when there are no negatives.
double fpr(const ConfusionCounts& c);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

/// ROC points from (0,0) to (1,1), one per distinct score. `thresholds[i]`
/// is the score cutoff reaching point i (instances with score >= cutoff are
/// positive); the first is +infinity.
struct RocCurve {
  std::vector<RocPoint> points;
  std::vector<double> thresholds;
};

RocCurve roc_curve(std::span<const double> scores, std::span<const Label> labels);

/// Mann-Whitney statistic via average ranks; tied pairs count one half.
double auroc(std::span<const double> scores, std::span<const Label> labels);

/// Trapezoidal area under the ROC curve, accumulated in integer counts.
double auroc_trapezoid(std::span<const double> scores, std::span<const Label> labels);

/// Trapezoidal area of an already-built curve.
double area_under(const RocCurve& curve);

/// Two-column CSV with a `fpr,tpr` header.
void write_roc_csv(const RocCurve& curve, std::ostream& out);

}  // namespace meboost
