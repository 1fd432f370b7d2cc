#pragma once

// Symmetric pairwise feature networks computed from a fluorescence recording.
// Every network has a zero diagonal and is exactly symmetric. Pairs whose
// statistic is undefined (constant signals, too few selected frames) score 0.
//
// `workers` = 0 uses all hardware threads. Results do not depend on it.

#include "clrsum/types.hpp"

namespace clrsum {

struct FeatureConfig {
  double alpha_pct = 0.1;  // upper-tail quantile level, in percent
  Index range_k = 10;      // extreme values averaged at each end by rd_network

  void validate() const {
    require(alpha_pct > 0.0 && alpha_pct < 100.0, ErrorCode::InvalidArgument,
            "alpha_pct must lie in (0, 100)");
    require(range_k >= 1, ErrorCode::InvalidArgument, "range_k must be >= 1");
  }
};

/// Plain Pearson correlation between every pair of neurons.
ScoreMatrix corr_network(const Recording& rec, unsigned workers = 0);

/// Correlation restricted to the frames where either neuron is at or above
/// its own upper alpha% quantile.
ScoreMatrix ct_network(const Recording& rec, const FeatureConfig& cfg, unsigned workers = 0);

/// Mean squared difference of the standardized signals over the frames where
/// one signal most exceeds the other (upper alpha% of the difference). The
/// two directions select different frames; the smaller mean is kept.
ScoreMatrix md_network(const Recording& rec, const FeatureConfig& cfg, unsigned workers = 0);

/// Robust range of the raw difference signal: mean of its range_k largest
/// values minus mean of its range_k smallest. Inverted as max(R) - R, with
/// the max taken off the diagonal, so that small ranges score high.
ScoreMatrix rd_network(const Recording& rec, const FeatureConfig& cfg, unsigned workers = 0);

/// The un-inverted range matrix R used by rd_network (zero diagonal).
Eigen::MatrixXd difference_range(const Recording& rec, Index range_k, unsigned workers = 0);

}  // namespace clrsum
