#include "clrsum/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "clrsum/io.hpp"

namespace clrsum {
namespace {

struct TieBlock {
  std::size_t begin = 0;  // positions in the sorted order
  std::size_t end = 0;
  std::int64_t positives = 0;
  std::int64_t negatives = 0;
};

// Indices of `ls` sorted by score (ascending or descending), grouped into
// blocks of exactly equal score.
std::vector<TieBlock> tie_blocks(const LabeledScores& ls, bool descending,
                                 std::vector<std::size_t>& order) {
  order.resize(ls.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return descending ? ls[a].score > ls[b].score : ls[a].score < ls[b].score;
  });
  std::vector<TieBlock> blocks;
  std::size_t start = 0;
  while (start < order.size()) {
    TieBlock block{start, start, 0, 0};
    while (block.end < order.size() && ls[order[block.end]].score == ls[order[start]].score) {
      (ls[order[block.end]].positive ? block.positives : block.negatives) += 1;
      ++block.end;
    }
    blocks.push_back(block);
    start = block.end;
  }
  return blocks;
}

struct ClassCounts {
  std::int64_t positives = 0;
  std::int64_t negatives = 0;
};

ClassCounts count_classes(const LabeledScores& ls) {
  ClassCounts c;
  for (const auto& e : ls) {
    require(std::isfinite(e.score), ErrorCode::InvalidArgument, "non-finite score");
    (e.positive ? c.positives : c.negatives) += 1;
  }
  return c;
}

ClassCounts require_both_classes(const LabeledScores& ls) {
  const ClassCounts c = count_classes(ls);
  require(c.positives > 0 && c.negatives > 0, ErrorCode::SingleClass,
          "ROC analysis needs at least one positive and one negative link");
  return c;
}

}  // namespace

LinkLabels::LinkLabels(Index neuron_count, bool undirected)
    : positive_(Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(
          neuron_count, neuron_count, false)),
      undirected_(undirected) {}

void LinkLabels::mark(Index i, Index j) {
  positive_(i, j) = true;
  if (undirected_) positive_(j, i) = true;
}

Index LinkLabels::positive_count() const {
  Index count = 0;
  for (Index j = 0; j < positive_.cols(); ++j)
    for (Index i = 0; i < positive_.rows(); ++i)
      if (i != j && positive_(i, j) && (!undirected_ || i < j)) ++count;
  return count;
}

LinkLabels make_labels(const GroundTruthNetwork& truth, bool undirected,
                       bool include_inhibitory) {
  LinkLabels labels(truth.neuron_count(), undirected);
  for (const Edge& e : truth.edges()) {
    if (e.weight == 1 || include_inhibitory) labels.mark(e.source, e.target);
  }
  return labels;
}

LabeledScores label_scores(const ScoreMatrix& scores, const LinkLabels& labels) {
  require(scores.size() == labels.neuron_count(), ErrorCode::DimensionMismatch,
          "score matrix has " + std::to_string(scores.size()) + " neurons, truth has " +
              std::to_string(labels.neuron_count()));
  const Index n = scores.size();
  LabeledScores out;
  if (labels.undirected()) {
    out.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        const double s = scores.symmetric() ? scores(i, j) : std::max(scores(i, j), scores(j, i));
        out.push_back({{i, j}, s, labels.is_positive(i, j)});
      }
    }
  } else {
    out.reserve(static_cast<std::size_t>(n * (n - 1)));
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (i != j) out.push_back({{i, j}, scores(i, j), labels.is_positive(i, j)});
  }
  return out;
}

double roc_auc(const LabeledScores& ls) {
  const ClassCounts c = require_both_classes(ls);
  std::vector<std::size_t> order;
  // Twice the Mann-Whitney U: each positive gets 2 per negative below it and
  // 1 per tied negative. Integer-valued, so exact.
  std::int64_t twice_u = 0, negatives_below = 0;
  for (const TieBlock& b : tie_blocks(ls, false, order)) {
    twice_u += b.positives * (2 * negatives_below + b.negatives);
    negatives_below += b.negatives;
  }
  const std::int64_t pairs = c.positives * c.negatives;
  const auto denom = static_cast<double>(2 * pairs);
  // Below one half, evaluated as 1 - complement: auc(s) + auc(-s) == 1 exactly.
  if (twice_u >= pairs) return static_cast<double>(twice_u) / denom;
  return 1.0 - static_cast<double>(2 * pairs - twice_u) / denom;
}

std::map<Link, double> auc_contributions(const LabeledScores& ls) {
  const ClassCounts c = require_both_classes(ls);
  const auto denom = static_cast<double>(2 * c.positives * c.negatives);
  std::vector<std::size_t> order;
  std::map<Link, double> out;
  std::int64_t negatives_below = 0;
  for (const TieBlock& b : tie_blocks(ls, false, order)) {
    const double share = static_cast<double>(2 * negatives_below + b.negatives) / denom;
    for (std::size_t p = b.begin; p < b.end; ++p) {
      const LabeledLink& e = ls[order[p]];
      if (e.positive) out[e.link] = share;
    }
    negatives_below += b.negatives;
  }
  return out;
}

double aupr(const LabeledScores& ls) {
  const ClassCounts c = count_classes(ls);
  require(c.positives > 0, ErrorCode::SingleClass, "AUPR needs at least one positive link");
  std::vector<std::size_t> order;
  std::int64_t tp = 0, fp = 0;
  double area = 0.0;
  for (const TieBlock& b : tie_blocks(ls, true, order)) {
    tp += b.positives;
    fp += b.negatives;
    if (b.positives == 0) continue;
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    area += precision * static_cast<double>(b.positives) / static_cast<double>(c.positives);
  }
  return area;
}

std::map<Link, double> aupr_contributions(const LabeledScores& ls) {
  const ClassCounts c = count_classes(ls);
  require(c.positives > 0, ErrorCode::SingleClass, "AUPR needs at least one positive link");
  std::vector<std::size_t> order;
  std::map<Link, double> out;
  std::int64_t tp = 0, fp = 0;
  for (const TieBlock& b : tie_blocks(ls, true, order)) {
    tp += b.positives;
    fp += b.negatives;
    const double share = static_cast<double>(tp) / static_cast<double>(tp + fp) /
                         static_cast<double>(c.positives);
    for (std::size_t p = b.begin; p < b.end; ++p) {
      const LabeledLink& e = ls[order[p]];
      if (e.positive) out[e.link] = share;
    }
  }
  return out;
}

EvaluationReport evaluate(const ScoreMatrix& scores, const LinkLabels& labels,
                          const std::string& dataset) {
  const LabeledScores ls = label_scores(scores, labels);
  EvaluationReport r;
  r.dataset = dataset;
  r.method = scores.name();
  r.auc = roc_auc(ls);
  r.aupr = aupr(ls);
  r.per_link_contrib = auc_contributions(ls);
  return r;
}

WilcoxonResult compare_contributions(const EvaluationReport& a, const EvaluationReport& b) {
  std::vector<double> xa, xb;
  for (const auto& [link, value] : a.per_link_contrib) {
    if (auto it = b.per_link_contrib.find(link); it != b.per_link_contrib.end()) {
      xa.push_back(value);
      xb.push_back(it->second);
    }
  }
  return wilcoxon_test(xa, xb);
}

std::string report_csv(const std::vector<EvaluationReport>& reports) {
  std::string out = "dataset,method,auc,aupr\n";
  for (const auto& r : reports) {
    out += r.dataset + ',' + r.method + ',' + io::format_double(r.auc) + ',' +
           io::format_double(r.aupr) + '\n';
  }
  return out;
}

std::string contributions_csv(const std::vector<EvaluationReport>& reports) {
  std::string out = "dataset,method,source,target,contribution\n";
  for (const auto& r : reports) {
    for (const auto& [link, value] : r.per_link_contrib) {
      out += r.dataset + ',' + r.method + ',' + std::to_string(link.source + 1) + ',' +
             std::to_string(link.target + 1) + ',' + io::format_double(value) + '\n';
    }
  }
  return out;
}

}  // namespace clrsum
