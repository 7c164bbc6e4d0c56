#include "meboost/metrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <ostream>

namespace meboost {

namespace {

void check_inputs(std::span<const double> scores, std::span<const Label> labels) {
  if (scores.size() != labels.size()) throw InvalidArgument("scores and labels differ in length");
  const auto pos = std::count(labels.begin(), labels.end(), Label::positive);
  if (pos == 0 || static_cast<std::size_t>(pos) == labels.size()) {
    throw InvalidArgument("ROC analysis needs both classes");
  }
}

std::vector<std::size_t> descending_order(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

// Cumulative (fp, tp) after each block of equal scores, descending.
struct CountStep {
  std::size_t fp;
  std::size_t tp;
  double threshold;
};

std::vector<CountStep> count_steps(std::span<const double> scores, std::span<const Label> labels) {
  const auto order = descending_order(scores);
  std::vector<CountStep> steps;
  std::size_t fp = 0;
  std::size_t tp = 0;
  for (std::size_t k = 0; k < order.size();) {
    const double s = scores[order[k]];
    while (k < order.size() && scores[order[k]] == s) {
      (labels[order[k]] == Label::positive ? tp : fp) += 1;
      ++k;
    }
    steps.push_back({fp, tp, s});
  }
  return steps;
}

}  // namespace

ConfusionCounts confusion(std::span<const double> scores, std::span<const Label> labels,
                          double threshold) {
  if (scores.size() != labels.size()) throw InvalidArgument("scores and labels differ in length");
  ConfusionCounts c;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] > threshold;
    if (labels[i] == Label::positive) {
      (predicted ? c.tp : c.fn) += 1;
    } else {
      (predicted ? c.fp : c.tn) += 1;
    }
  }
  return c;
}

double tpr(const ConfusionCounts& c) {
  if (c.tp + c.fn == 0) throw InvalidArgument("TPR undefined without positive instances");
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

double fpr(const ConfusionCounts& c) {
  if (c.fp + c.tn == 0) throw InvalidArgument("FPR undefined without negative instances");
  return static_cast<double>(c.fp) / static_cast<double>(c.fp + c.tn);
}

RocCurve roc_curve(std::span<const double> scores, std::span<const Label> labels) {
  check_inputs(scores, labels);
  const auto steps = count_steps(scores, labels);
  const auto p = static_cast<double>(steps.back().tp);
  const auto n = static_cast<double>(steps.back().fp);
  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  curve.thresholds.push_back(std::numeric_limits<double>::infinity());
  for (const auto& s : steps) {
    curve.points.push_back({static_cast<double>(s.fp) / n, static_cast<double>(s.tp) / p});
    curve.thresholds.push_back(s.threshold);
  }
  return curve;
}

double auroc(std::span<const double> scores, std::span<const Label> labels) {
  check_inputs(scores, labels);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Rank sum of positives with average ranks over ties, kept doubled so it
  // stays an integer.
  std::size_t doubled_rank_sum = 0;
  std::size_t n_pos = 0;
  for (std::size_t k = 0; k < order.size();) {
    std::size_t end = k;
    std::size_t pos_in_block = 0;
    while (end < order.size() && scores[order[end]] == scores[order[k]]) {
      pos_in_block += labels[order[end]] == Label::positive ? 1 : 0;
      ++end;
    }
    // Ranks k+1..end average to (k + 1 + end) / 2.
    doubled_rank_sum += pos_in_block * (k + 1 + end);
    n_pos += pos_in_block;
    k = end;
  }
  const std::size_t n_neg = scores.size() - n_pos;
  const std::size_t doubled_u = doubled_rank_sum - n_pos * (n_pos + 1);
  return static_cast<double>(doubled_u) / (2.0 * static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double auroc_trapezoid(std::span<const double> scores, std::span<const Label> labels) {
  check_inputs(scores, labels);
  const auto steps = count_steps(scores, labels);
  // Twice the area in count units: sum of dfp * (tp_prev + tp).
  std::size_t doubled_area = 0;
  std::size_t fp_prev = 0;
  std::size_t tp_prev = 0;
  for (const auto& s : steps) {
    doubled_area += (s.fp - fp_prev) * (s.tp + tp_prev);
    fp_prev = s.fp;
    tp_prev = s.tp;
  }
  return static_cast<double>(doubled_area) /
         (2.0 * static_cast<double>(steps.back().tp) * static_cast<double>(steps.back().fp));
}

double area_under(const RocCurve& curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }
  return area;
}

void write_roc_csv(const RocCurve& curve, std::ostream& out) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "fpr,tpr\n";
  for (const auto& p : curve.points) out << p.fpr << ',' << p.tpr << '\n';
  out.precision(old_precision);
}

}  // namespace meboost
