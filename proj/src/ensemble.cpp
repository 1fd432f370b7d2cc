#include "clrsum/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "clrsum/parallel.hpp"

namespace clrsum {
namespace {

void check_members(const std::vector<ScoreMatrix>& members) {
  require(!members.empty(), ErrorCode::InvalidArgument, "ensemble needs at least one network");
  const Index n = members.front().size();
  for (const ScoreMatrix& m : members) {
    require(m.size() == n, ErrorCode::DimensionMismatch,
            "ensemble members differ in size: " + std::to_string(n) + " vs " +
                std::to_string(m.size()));
    require(m.symmetric(), ErrorCode::NotSymmetric,
            "ensemble member '" + m.name() + "' is not symmetric");
  }
}

std::string joined_names(const std::vector<ScoreMatrix>& members) {
  std::string out;
  for (const auto& m : members) {
    if (!out.empty()) out += '+';
    out += m.name();
  }
  return out;
}

}  // namespace

ScoreMatrix clr(const ScoreMatrix& s, unsigned workers) {
  require(s.symmetric() && ScoreMatrix::is_exactly_symmetric(s.values()),
          ErrorCode::NotSymmetric, "clr requires a symmetric score matrix");
  const Index n = s.size();
  const Eigen::MatrixXd& v = s.values();

  // z(i, j): standardized score of link (i, j) within row i, clamped at 0.
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, n);
  parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t r) {
    const auto i = static_cast<Index>(r);
    if (n < 2) return;
    double sum = 0.0;
    for (Index j = 0; j < n; ++j)
      if (j != i) sum += v(i, j);
    const double mean = sum / static_cast<double>(n - 1);
    double ss = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = v(i, j) - mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd == 0.0) return;
    for (Index j = 0; j < n; ++j)
      if (j != i) z(i, j) = std::max(0.0, (v(i, j) - mean) / sd);
  });

  Eigen::MatrixXd out(n, n);
  for (Index j = 0; j < n; ++j) {
    out(j, j) = 0.0;
    for (Index i = j + 1; i < n; ++i) {
      const double a = z(i, j);
      const double b = z(j, i);
      const double combined = std::sqrt(a * a + b * b);
      out(i, j) = combined;
      out(j, i) = combined;
    }
  }
  return ScoreMatrix(std::move(out), true, "clr(" + s.name() + ")");
}

ScoreMatrix clr_sum(const std::vector<ScoreMatrix>& members, unsigned workers) {
  check_members(members);
  const Index n = members.front().size();
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(n, n);
  for (const ScoreMatrix& m : members) total += clr(m, workers).values();
  return ScoreMatrix(std::move(total), true, "clrsum(" + joined_names(members) + ")");
}

Eigen::VectorXd descending_ranks(const Eigen::Ref<const Eigen::VectorXd>& scores) {
  const Index count = scores.size();
  std::vector<Index> order(static_cast<std::size_t>(count));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return scores(a) > scores(b); });
  Eigen::VectorXd ranks(count);
  std::size_t start = 0;
  while (start < order.size()) {
    std::size_t end = start + 1;
    while (end < order.size() && scores(order[end]) == scores(order[start])) ++end;
    // Positions start+1 .. end (1-based) share their mean.
    const double mean_rank = 0.5 * static_cast<double>(start + 1 + end);
    for (std::size_t p = start; p < end; ++p) ranks(order[p]) = mean_rank;
    start = end;
  }
  return ranks;
}

ScoreMatrix rank_sum(const std::vector<ScoreMatrix>& members) {
  check_members(members);
  const Index n = members.front().size();
  const Index links = n * (n - 1) / 2;
  Eigen::VectorXd rank_total = Eigen::VectorXd::Zero(links);
  Eigen::VectorXd scores(links);
  for (const ScoreMatrix& m : members) {
    Index l = 0;
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j) scores(l++) = m(i, j);
    rank_total += descending_ranks(scores);
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  Index l = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      out(i, j) = -rank_total(l);
      out(j, i) = -rank_total(l);
      ++l;
    }
  }
  return ScoreMatrix(std::move(out), true, "ranksum(" + joined_names(members) + ")");
}

}  // namespace clrsum
