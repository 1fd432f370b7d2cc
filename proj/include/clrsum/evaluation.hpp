#pragma once

// Threshold-free scoring of a reconstructed network against ground truth.

#include <compare>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "clrsum/types.hpp"

namespace clrsum {

struct Link {
  Index source = 0;
  Index target = 0;

  friend auto operator<=>(const Link&, const Link&) = default;
};

struct LabeledLink {
  Link link;
  double score = 0.0;
  bool positive = false;
};

using LabeledScores = std::vector<LabeledLink>;

/// Presence/absence labels for every link of an N-neuron network.
class LinkLabels {
 public:
  LinkLabels(Index neuron_count, bool undirected);

  Index neuron_count() const noexcept { return positive_.rows(); }
  bool undirected() const noexcept { return undirected_; }
  bool is_positive(Index i, Index j) const { return positive_(i, j); }
  void mark(Index i, Index j);
  Index positive_count() const;

 private:
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> positive_;
  bool undirected_;
};

/// Undirected mode: pair {i, j} is positive iff some edge joins them with
/// weight +1 (any weight when include_inhibitory). Directed mode labels
/// ordered pairs the same way.
LinkLabels make_labels(const GroundTruthNetwork& truth, bool undirected,
                       bool include_inhibitory = false);

/// One entry per unordered pair (i < j) in undirected mode, per ordered pair
/// otherwise. In undirected mode a non-symmetric matrix contributes the
/// larger of its two directions.
LabeledScores label_scores(const ScoreMatrix& scores, const LinkLabels& labels);

/// P(score_pos > score_neg) + P(tie) / 2. Throws SingleClass.
double roc_auc(const LabeledScores& ls);

/// Step-wise area under the precision-recall curve from a descending sweep;
/// tied scores enter as one block. Throws SingleClass without positives.
double aupr(const LabeledScores& ls);

/// Share of roc_auc owed to each positive link:
/// (#negatives below + #tied / 2) / (P * N). Sums to roc_auc.
std::map<Link, double> auc_contributions(const LabeledScores& ls);

/// Share of aupr owed to each positive link: the precision at its tie block
/// divided by P. Sums to aupr.
std::map<Link, double> aupr_contributions(const LabeledScores& ls);

struct EvaluationReport {
  std::string dataset;
  std::string method;
  double auc = 0.0;
  double aupr = 0.0;
  std::map<Link, double> per_link_contrib;  // AUC contributions of positives
};

EvaluationReport evaluate(const ScoreMatrix& scores, const LinkLabels& labels,
                          const std::string& dataset);

struct WilcoxonResult {
  double p_value = 1.0;
  double statistic = 0.0;  // W+: rank sum of positive differences
  Index nonzero = 0;       // differences left after dropping zeros
  bool exact = true;
};

/// Two-sided Wilcoxon signed-rank test on a - b. Zero differences are
/// dropped and tied magnitudes share mean ranks. Exact null distribution for
/// up to 25 nonzero differences, normal approximation with continuity
/// correction beyond. No nonzero differences gives p = 1.
WilcoxonResult wilcoxon_test(const std::vector<double>& a, const std::vector<double>& b);
double wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b);

inline constexpr Index kWilcoxonExactLimit = 25;
inline constexpr double kSignificanceLevel = 0.05;

/// Wilcoxon test between two methods on the per-link AUC contributions of
/// the positive links they share.
WilcoxonResult compare_contributions(const EvaluationReport& a, const EvaluationReport& b);

/// "dataset,method,auc,aupr" rows with a header line.
std::string report_csv(const std::vector<EvaluationReport>& reports);
/// "dataset,method,source,target,contribution" rows, 1-based indices.
std::string contributions_csv(const std::vector<EvaluationReport>& reports);

}  // namespace clrsum
