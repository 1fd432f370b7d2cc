#include "clrsum/gte.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "clrsum/parallel.hpp"

namespace clrsum {
namespace {

constexpr std::int64_t kMaxJointStates = std::int64_t{1} << 22;

std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int e = 0; e < exp; ++e) r *= base;
  return r;
}

// Per-signal symbol codes for every transition t -> t+1 (t = k-1 .. L-2),
// and the transitions whose window is fully retained by the mask.
class TransitionCodes {
 public:
  TransitionCodes(Index length, const FrameMask& mask, const GteConfig& cfg)
      : k_(cfg.markov_order),
        bins_(cfg.bins),
        source_symbols_(cfg.markov_order + (cfg.instant_feedback ? 1 : 0)),
        dest_states_(ipow(cfg.bins, cfg.markov_order + 1)),
        source_states_(ipow(cfg.bins, source_symbols_)) {
    require(mask.size() == length, ErrorCode::DimensionMismatch,
            "mask length must match the signal length");
    // A window covers frames t-k+1 .. t+1.
    Index run = 0;
    for (Index f = 0; f < length; ++f) {
      run = mask(f) ? run + 1 : 0;
      if (f >= k_ && run >= k_ + 1) valid_.push_back(f - 1);
    }
  }

  // dst part: history code * B + next symbol, in [0, B^(k+1)).
  std::vector<std::int32_t> dest_codes(const Eigen::Ref<const Eigen::VectorXi>& d) const {
    std::vector<std::int32_t> out(valid_.size());
    for (std::size_t v = 0; v < valid_.size(); ++v) {
      const Index t = valid_[v];
      std::int32_t code = 0;
      for (Index f = t - k_ + 1; f <= t + 1; ++f) code = code * bins_ + d(f);
      out[v] = code;
    }
    return out;
  }

  std::vector<std::int32_t> source_codes(const Eigen::Ref<const Eigen::VectorXi>& s) const {
    std::vector<std::int32_t> out(valid_.size());
    const Index last = t_offset_last();
    for (std::size_t v = 0; v < valid_.size(); ++v) {
      const Index t = valid_[v];
      std::int32_t code = 0;
      for (Index f = t - k_ + 1; f <= t + last; ++f) code = code * bins_ + s(f);
      out[v] = code;
    }
    return out;
  }

  std::size_t transitions() const { return valid_.size(); }
  std::int64_t dest_states() const { return dest_states_; }
  std::int64_t source_states() const { return source_states_; }
  int bins() const { return bins_; }

 private:
  Index t_offset_last() const { return source_symbols_ > k_ ? 1 : 0; }

  int k_;
  int bins_;
  int source_symbols_;
  std::int64_t dest_states_;
  std::int64_t source_states_;
  std::vector<Index> valid_;
};

// Plug-in TE from joint counts over (source code, dest code) where dest code
// packs (history, next). Summation order is fixed by the loop nest.
class TeAccumulator {
 public:
  explicit TeAccumulator(const TransitionCodes& codes)
      : bins_(codes.bins()),
        histories_(codes.dest_states() / codes.bins()),
        dest_states_(codes.dest_states()),
        source_states_(codes.source_states()),
        joint_(static_cast<std::size_t>(codes.dest_states() * codes.source_states())),
        history_next_(static_cast<std::size_t>(dest_states_)),
        history_(static_cast<std::size_t>(histories_)),
        history_source_(static_cast<std::size_t>(histories_)) {}

  double compute(const std::vector<std::int32_t>& src, const std::vector<std::int32_t>& dst) {
    std::fill(joint_.begin(), joint_.end(), 0u);
    std::fill(history_next_.begin(), history_next_.end(), 0u);
    std::fill(history_.begin(), history_.end(), 0u);
    const std::size_t total = dst.size();
    for (std::size_t v = 0; v < total; ++v) {
      ++joint_[static_cast<std::size_t>(src[v]) * static_cast<std::size_t>(dest_states_) +
               static_cast<std::size_t>(dst[v])];
      ++history_next_[static_cast<std::size_t>(dst[v])];
    }
    for (std::int64_t d = 0; d < dest_states_; ++d)
      history_[static_cast<std::size_t>(d / bins_)] += history_next_[static_cast<std::size_t>(d)];

    double te = 0.0;
    for (std::int64_t s = 0; s < source_states_; ++s) {
      const std::uint32_t* row = joint_.data() + s * dest_states_;
      std::fill(history_source_.begin(), history_source_.end(), 0u);
      for (std::int64_t d = 0; d < dest_states_; ++d)
        history_source_[static_cast<std::size_t>(d / bins_)] += row[d];
      for (std::int64_t d = 0; d < dest_states_; ++d) {
        const std::uint32_t c = row[d];
        if (c == 0) continue;
        const std::int64_t h = d / bins_;
        const double ratio =
            (static_cast<double>(c) * static_cast<double>(history_[static_cast<std::size_t>(h)])) /
            (static_cast<double>(history_source_[static_cast<std::size_t>(h)]) *
             static_cast<double>(history_next_[static_cast<std::size_t>(d)]));
        te += static_cast<double>(c) * std::log2(ratio);
      }
    }
    te /= static_cast<double>(total);
    return std::max(te, 0.0);
  }

 private:
  int bins_;
  std::int64_t histories_;
  std::int64_t dest_states_;
  std::int64_t source_states_;
  std::vector<std::uint32_t> joint_;
  std::vector<std::uint32_t> history_next_;
  std::vector<std::uint32_t> history_;
  std::vector<std::uint32_t> history_source_;
};

Eigen::VectorXd population_average(const Recording& rec) {
  return rec.samples().rowwise().mean();
}

}  // namespace

void GteConfig::validate() const {
  require(markov_order >= 1, ErrorCode::InvalidArgument, "markov_order must be >= 1");
  require(bins >= 2, ErrorCode::InvalidArgument, "bins must be >= 2");
  const int symbols = 1 + 2 * markov_order + (instant_feedback ? 1 : 0);
  std::int64_t states = 1;
  for (int s = 0; s < symbols && states <= kMaxJointStates; ++s) states *= bins;
  require(states <= kMaxJointStates, ErrorCode::InvalidArgument,
          "bins^(2k+2) joint states exceed the supported table size");
  for (double g : conditioning_levels) {
    require(!std::isnan(g), ErrorCode::InvalidArgument, "conditioning level is NaN");
  }
}

Eigen::VectorXi discretize(const Eigen::Ref<const Eigen::VectorXd>& x, int bins) {
  require(x.size() >= 1, ErrorCode::InvalidArgument, "discretize: empty sequence");
  require(bins >= 2, ErrorCode::InvalidArgument, "discretize: bins must be >= 2");
  Eigen::VectorXi out = Eigen::VectorXi::Zero(x.size());
  const double lo = x.minCoeff();
  const double hi = x.maxCoeff();
  if (!(hi > lo)) return out;
  const double width = hi - lo;
  for (Index t = 0; t < x.size(); ++t) {
    const auto b = static_cast<int>(std::floor((x(t) - lo) / width * bins));
    out(t) = std::clamp(b, 0, bins - 1);
  }
  return out;
}

FrameMask conditioning_mask(const Recording& rec, double level, int markov_order) {
  require(markov_order >= 1, ErrorCode::InvalidArgument, "markov_order must be >= 1");
  require(!std::isnan(level), ErrorCode::InvalidArgument, "conditioning level is NaN");
  FrameMask mask(rec.frame_count());
  if (level == kConditioningDisabled) {
    mask.setConstant(true);
  } else {
    mask = population_average(rec).array() < level;
  }
  Index run = 0, longest = 0;
  for (Index t = 0; t < mask.size(); ++t) {
    run = mask(t) ? run + 1 : 0;
    longest = std::max(longest, run);
  }
  if (longest < markov_order + 1) {
    fail(ErrorCode::EmptyConditioning,
         "conditioning level " + std::to_string(level) + " retains no window of " +
             std::to_string(markov_order + 1) + " consecutive frames");
  }
  return mask;
}

double transfer_entropy(const Eigen::Ref<const Eigen::VectorXi>& src,
                        const Eigen::Ref<const Eigen::VectorXi>& dst, const FrameMask& mask,
                        const GteConfig& cfg) {
  cfg.validate();
  require(src.size() == dst.size(), ErrorCode::DimensionMismatch,
          "transfer_entropy: length mismatch");
  require(src.size() >= cfg.markov_order + 1, ErrorCode::InsufficientData,
          "transfer_entropy: sequence shorter than one window");
  for (Index t = 0; t < src.size(); ++t) {
    require(src(t) >= 0 && src(t) < cfg.bins && dst(t) >= 0 && dst(t) < cfg.bins,
            ErrorCode::InvalidArgument, "transfer_entropy: symbol outside [0, bins)");
  }
  const TransitionCodes codes(src.size(), mask, cfg);
  if (codes.transitions() == 0) {
    fail(ErrorCode::InsufficientData, "transfer_entropy: no transition inside the mask");
  }
  TeAccumulator acc(codes);
  return acc.compute(codes.source_codes(src), codes.dest_codes(dst));
}

ScoreMatrix gte_network(const Recording& rec, const GteConfig& cfg, unsigned workers) {
  cfg.validate();
  const Index n = rec.neuron_count();
  const Index frames = rec.frame_count();
  const Index length = cfg.use_difference_signal ? frames - 1 : frames;
  require(length >= cfg.markov_order + 1, ErrorCode::InsufficientData,
          "recording too short for the configured markov order");

  std::vector<Eigen::VectorXi> symbols(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    Eigen::VectorXd signal = rec.neuron(i);
    if (cfg.use_difference_signal) {
      signal = rec.neuron(i).tail(frames - 1) - rec.neuron(i).head(frames - 1);
    }
    symbols[static_cast<std::size_t>(i)] = discretize(signal, cfg.bins);
  }

  std::vector<double> levels = cfg.conditioning_levels;
  if (levels.empty()) levels.push_back(kConditioningDisabled);

  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(n, n);
  for (double level : levels) {
    const FrameMask frame_mask = conditioning_mask(rec, level, cfg.markov_order);
    // Difference sample u spans frames u and u+1; it is retained with frame u+1.
    const FrameMask mask = cfg.use_difference_signal ? FrameMask(frame_mask.tail(length))
                                                     : frame_mask;
    const TransitionCodes codes(length, mask, cfg);
    if (codes.transitions() == 0) {
      fail(ErrorCode::EmptyConditioning, "conditioning level " + std::to_string(level) +
                                             " leaves no usable transition");
    }
    std::vector<std::vector<std::int32_t>> dest(static_cast<std::size_t>(n));
    std::vector<std::vector<std::int32_t>> source(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
      dest[static_cast<std::size_t>(i)] = codes.dest_codes(symbols[static_cast<std::size_t>(i)]);
      source[static_cast<std::size_t>(i)] =
          codes.source_codes(symbols[static_cast<std::size_t>(i)]);
    }
    Eigen::MatrixXd level_te = Eigen::MatrixXd::Zero(n, n);
    // One task per destination column; the accumulator is reused across sources.
    parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t j) {
      TeAccumulator acc(codes);
      for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
        if (i == j) continue;
        level_te(static_cast<Index>(i), static_cast<Index>(j)) =
            acc.compute(source[i], dest[j]);
      }
    });
    total += level_te;
  }
  total /= static_cast<double>(levels.size());
  total.diagonal().setZero();
  return ScoreMatrix(std::move(total), false, "gte");
}

ScoreMatrix symmetrize_min(const ScoreMatrix& m) {
  const Index n = m.size();
  Eigen::MatrixXd out(n, n);
  for (Index j = 0; j < n; ++j) {
    out(j, j) = 0.0;
    for (Index i = j + 1; i < n; ++i) {
      const double v = std::min(m(i, j), m(j, i));
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return ScoreMatrix(std::move(out), true, m.name() + "_sym");
}

}  // namespace clrsum
