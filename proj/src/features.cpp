#include "clrsum/features.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "clrsum/parallel.hpp"
#include "clrsum/stats.hpp"

namespace clrsum {
namespace {

Eigen::MatrixXd standardized_columns(const Recording& rec) {
  Eigen::MatrixXd z(rec.frame_count(), rec.neuron_count());
  for (Index i = 0; i < rec.neuron_count(); ++i) z.col(i) = standardize(rec.neuron(i));
  return z;
}

// Fills the lower triangle from the upper one and zeroes the diagonal.
void mirror_upper(Eigen::MatrixXd& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    m(j, j) = 0.0;
    for (Index i = j + 1; i < m.rows(); ++i) m(i, j) = m(j, i);
  }
}

// Mean of f^2 over the frames where f is at or above its upper quantile.
double upper_tail_mean_square(const std::vector<double>& f, double alpha_pct,
                              std::vector<double>& scratch) {
  const Eigen::Map<const Eigen::VectorXd> view(f.data(), static_cast<Index>(f.size()));
  const double q = upper_quantile(view, alpha_pct, scratch);
  double sum = 0.0;
  std::size_t count = 0;
  for (double v : f) {
    if (v >= q) {
      sum += v * v;
      ++count;
    }
  }
  return sum / static_cast<double>(count);
}

}  // namespace

ScoreMatrix corr_network(const Recording& rec, unsigned workers) {
  const Index n = rec.neuron_count();
  const Index frames = rec.frame_count();
  Eigen::MatrixXd centered(frames, n);
  Eigen::VectorXd sum_squares(n);
  for (Index i = 0; i < n; ++i) {
    const SummaryStats s = summary_stats(rec.neuron(i));
    double ss = 0.0;
    for (Index t = 0; t < frames; ++t) {
      const double d = rec.samples()(t, i) - s.mean;
      centered(t, i) = d;
      ss += d * d;
    }
    sum_squares(i) = ss;
  }

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  const PairIndex pairs(n);
  parallel_for(pairs.pairs.size(), workers, [&](std::size_t k) {
    const auto [i, j] = pairs.pairs[k];
    if (sum_squares(i) == 0.0 || sum_squares(j) == 0.0) return;
    const double* x = centered.col(i).data();
    const double* y = centered.col(j).data();
    double cross = 0.0;
    for (Index t = 0; t < frames; ++t) cross += x[t] * y[t];
    out(i, j) = std::clamp(cross / std::sqrt(sum_squares(i) * sum_squares(j)), -1.0, 1.0);
  });
  mirror_upper(out);
  return ScoreMatrix(std::move(out), true, "corr");
}

ScoreMatrix ct_network(const Recording& rec, const FeatureConfig& cfg, unsigned workers) {
  cfg.validate();
  const Index n = rec.neuron_count();
  const Index frames = rec.frame_count();

  std::vector<std::vector<Index>> extrema(static_cast<std::size_t>(n));
  {
    std::vector<double> scratch;
    for (Index i = 0; i < n; ++i) {
      const double q = upper_quantile(rec.neuron(i), cfg.alpha_pct, scratch);
      auto& sel = extrema[static_cast<std::size_t>(i)];
      for (Index t = 0; t < frames; ++t)
        if (rec.samples()(t, i) >= q) sel.push_back(t);
    }
  }

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  const PairIndex pairs(n);
  parallel_for(pairs.pairs.size(), workers, [&](std::size_t k) {
    const auto [i, j] = pairs.pairs[k];
    const auto& a = extrema[static_cast<std::size_t>(i)];
    const auto& b = extrema[static_cast<std::size_t>(j)];
    std::vector<Index> frames_union;
    frames_union.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(frames_union));
    if (frames_union.size() < 2) return;
    const auto idx = Eigen::Map<const Eigen::Matrix<Index, Eigen::Dynamic, 1>>(
        frames_union.data(), static_cast<Index>(frames_union.size()));
    try {
      out(i, j) = pearson(rec.neuron(i)(idx), rec.neuron(j)(idx));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateInput) throw;
    }
  });
  mirror_upper(out);
  return ScoreMatrix(std::move(out), true, "ct");
}

ScoreMatrix md_network(const Recording& rec, const FeatureConfig& cfg, unsigned workers) {
  cfg.validate();
  const Index n = rec.neuron_count();
  const auto frames = static_cast<std::size_t>(rec.frame_count());
  const Eigen::MatrixXd z = standardized_columns(rec);

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  const PairIndex pairs(n);
  parallel_for(pairs.pairs.size(), workers, [&](std::size_t k) {
    const auto [i, j] = pairs.pairs[k];
    std::vector<double> diff(frames), scratch;
    for (std::size_t t = 0; t < frames; ++t) {
      diff[t] = z(static_cast<Index>(t), i) - z(static_cast<Index>(t), j);
    }
    const double forward = upper_tail_mean_square(diff, cfg.alpha_pct, scratch);
    for (double& v : diff) v = -v;
    const double backward = upper_tail_mean_square(diff, cfg.alpha_pct, scratch);
    out(i, j) = std::min(forward, backward);
  });
  mirror_upper(out);
  return ScoreMatrix(std::move(out), true, "md");
}

Eigen::MatrixXd difference_range(const Recording& rec, Index range_k, unsigned workers) {
  require(range_k >= 1, ErrorCode::InvalidArgument, "range_k must be >= 1");
  const Index n = rec.neuron_count();
  const Index frames = rec.frame_count();
  const auto k = static_cast<std::size_t>(std::min(range_k, frames));

  Eigen::MatrixXd range = Eigen::MatrixXd::Zero(n, n);
  const PairIndex pairs(n);
  parallel_for(pairs.pairs.size(), workers, [&](std::size_t p) {
    const auto [i, j] = pairs.pairs[p];
    std::vector<double> diff(static_cast<std::size_t>(frames));
    for (Index t = 0; t < frames; ++t) {
      diff[static_cast<std::size_t>(t)] = rec.samples()(t, i) - rec.samples()(t, j);
    }
    auto top = diff.end() - static_cast<std::ptrdiff_t>(k);
    std::nth_element(diff.begin(), top, diff.end());
    std::sort(top, diff.end());
    double top_sum = 0.0;
    for (auto it = top; it != diff.end(); ++it) top_sum += *it;
    // Everything before `top` is <= every top element; the bottom k of the
    // whole sequence therefore lies in [begin, top) unless k > frames - k.
    auto bottom_end = diff.begin() + static_cast<std::ptrdiff_t>(k);
    if (2 * k <= diff.size()) {
      std::nth_element(diff.begin(), bottom_end - 1, top);
    } else {
      std::sort(diff.begin(), diff.end());
    }
    std::sort(diff.begin(), bottom_end);
    double bottom_sum = 0.0;
    for (auto it = diff.begin(); it != bottom_end; ++it) bottom_sum += *it;
    range(i, j) = (top_sum - bottom_sum) / static_cast<double>(k);
  });
  mirror_upper(range);
  return range;
}

ScoreMatrix rd_network(const Recording& rec, const FeatureConfig& cfg, unsigned workers) {
  cfg.validate();
  Eigen::MatrixXd range = difference_range(rec, cfg.range_k, workers);
  const Index n = range.rows();
  double max_off = range(0, 1);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i)
      if (i != j) max_off = std::max(max_off, range(i, j));
  Eigen::MatrixXd inverted = (max_off - range.array()).matrix();
  inverted.diagonal().setZero();
  return ScoreMatrix(std::move(inverted), true, "rd");
}

}  // namespace clrsum
