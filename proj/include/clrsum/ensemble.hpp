#pragma once

#include <vector>

#include "clrsum/types.hpp"

namespace clrsum {

/// Context likelihood of relatedness. Each row i is standardized with the
/// population mean and std of its off-diagonal entries, negative z-scores are
/// clamped to 0, and the two directions combine as sqrt(z_i^2 + z_j^2).
/// Rows with zero spread contribute z = 0. Throws NotSymmetric.
ScoreMatrix clr(const ScoreMatrix& s, unsigned workers = 0);

/// Elementwise sum of clr() over all members, in list order.
ScoreMatrix clr_sum(const std::vector<ScoreMatrix>& members, unsigned workers = 0);

/// Rank aggregation baseline. Upper-triangle links are ranked per member,
/// descending (rank 1 = strongest, ties share the mean rank), and each link
/// scores minus its rank sum.
ScoreMatrix rank_sum(const std::vector<ScoreMatrix>& members);

/// Descending mean ranks of `scores` (rank 1 = largest).
Eigen::VectorXd descending_ranks(const Eigen::Ref<const Eigen::VectorXd>& scores);

}  // namespace clrsum
