#pragma once

// Elementary statistics over Eigen vector expressions. All variances use the
// population (divide-by-n) convention.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

#include "clrsum/error.hpp"

namespace clrsum {

struct SummaryStats {
  double mean = 0.0;
  double std = 0.0;
  Eigen::Index count = 0;
};

template <typename Derived>
SummaryStats summary_stats(const Eigen::DenseBase<Derived>& x) {
  const Eigen::Index n = x.size();
  require(n >= 1, ErrorCode::InvalidArgument, "summary_stats of empty sequence");
  double sum = 0.0;
  for (Eigen::Index t = 0; t < n; ++t) sum += x(t);
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double d = x(t) - mean;
    ss += d * d;
  }
  return {mean, std::sqrt(ss / static_cast<double>(n)), n};
}

/// Pearson correlation. Throws DegenerateInput when either side is constant.
template <typename DerivedX, typename DerivedY>
double pearson(const Eigen::DenseBase<DerivedX>& x, const Eigen::DenseBase<DerivedY>& y) {
  const Eigen::Index n = x.size();
  require(n == y.size(), ErrorCode::DimensionMismatch, "pearson: length mismatch");
  require(n >= 2, ErrorCode::InvalidArgument, "pearson: need at least 2 samples");
  double sx = 0.0, sy = 0.0;
  for (Eigen::Index t = 0; t < n; ++t) {
    sx += x(t);
    sy += y(t);
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double cxy = 0.0, cxx = 0.0, cyy = 0.0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double dx = x(t) - mx;
    const double dy = y(t) - my;
    cxy += dx * dy;
    cxx += dx * dx;
    cyy += dy * dy;
  }
  if (cxx == 0.0 || cyy == 0.0) fail(ErrorCode::DegenerateInput, "pearson: zero variance");
  const double r = cxy / std::sqrt(cxx * cyy);
  return std::clamp(r, -1.0, 1.0);
}

/// Number of samples allowed strictly above the upper alpha% quantile.
inline Eigen::Index quantile_tail_count(Eigen::Index n, double alpha_pct) {
  require(alpha_pct > 0.0 && alpha_pct < 100.0, ErrorCode::InvalidArgument,
          "alpha_pct must lie in (0, 100)");
  // The epsilon absorbs representation error in products like 0.1 * 1000 / 100.
  const double allowed = alpha_pct * static_cast<double>(n) / 100.0;
  auto m = static_cast<Eigen::Index>(std::floor(allowed + 1e-9));
  return std::min(m, n - 1);
}

/// Smallest element v of x with (#samples > v) / n <= alpha_pct / 100.
/// Exact order statistic, no interpolation. `scratch` is reused storage.
template <typename Derived>
double upper_quantile(const Eigen::DenseBase<Derived>& x, double alpha_pct,
                      std::vector<double>& scratch) {
  const Eigen::Index n = x.size();
  require(n >= 1, ErrorCode::InvalidArgument, "upper_quantile of empty sequence");
  const Eigen::Index m = quantile_tail_count(n, alpha_pct);
  scratch.resize(static_cast<std::size_t>(n));
  for (Eigen::Index t = 0; t < n; ++t) scratch[static_cast<std::size_t>(t)] = x(t);
  auto kth = scratch.begin() + (n - 1 - m);
  std::nth_element(scratch.begin(), kth, scratch.end());
  return *kth;
}

template <typename Derived>
double upper_quantile(const Eigen::DenseBase<Derived>& x, double alpha_pct) {
  std::vector<double> scratch;
  return upper_quantile(x, alpha_pct, scratch);
}

/// (x - mean) / std, or all zeros when x is constant.
template <typename Derived>
Eigen::VectorXd standardize(const Eigen::DenseBase<Derived>& x) {
  require(x.size() >= 2, ErrorCode::InvalidArgument, "standardize: need at least 2 samples");
  const SummaryStats s = summary_stats(x);
  Eigen::VectorXd out(x.size());
  if (s.std == 0.0) {
    out.setZero();
    return out;
  }
  for (Eigen::Index t = 0; t < x.size(); ++t) out(t) = (x(t) - s.mean) / s.std;
  return out;
}

}  // namespace clrsum
