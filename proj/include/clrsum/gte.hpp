#pragma once

// Generalized transfer entropy: a plug-in transfer-entropy estimator on
// discretized signals with an optional same-frame source term and
// conditioning on frames of low population activity.

#include <limits>
#include <vector>

#include "clrsum/types.hpp"

namespace clrsum {

using FrameMask = Eigen::Array<bool, Eigen::Dynamic, 1>;

inline constexpr double kConditioningDisabled = std::numeric_limits<double>::infinity();

struct GteConfig {
  int markov_order = 2;  // history length k of both signals
  int bins = 3;          // equal-width bins per signal
  // Population-average fluorescence thresholds. Frames at or above a level
  // are excluded; the network is the mean over levels. Empty means a single
  // unconditioned pass.
  std::vector<double> conditioning_levels;
  bool instant_feedback = true;       // append the source's same-frame symbol
  bool use_difference_signal = true;  // work on X(t+1) - X(t)

  void validate() const;
};

/// Equal-width binning over [min(x), max(x)]; constant input maps to bin 0.
Eigen::VectorXi discretize(const Eigen::Ref<const Eigen::VectorXd>& x, int bins);

/// mask[t] = mean over neurons of frame t < level. Throws EmptyConditioning
/// unless some run of markov_order + 1 consecutive frames is retained.
FrameMask conditioning_mask(const Recording& rec, double level, int markov_order);

/// Transfer entropy src -> dst in bits. Only transitions whose whole window
/// (k history frames plus the predicted frame) lies inside `mask` count.
double transfer_entropy(const Eigen::Ref<const Eigen::VectorXi>& src,
                        const Eigen::Ref<const Eigen::VectorXi>& dst, const FrameMask& mask,
                        const GteConfig& cfg);

/// Directed network: values(i, j) = TE from neuron i to neuron j.
ScoreMatrix gte_network(const Recording& rec, const GteConfig& cfg, unsigned workers = 0);

/// out(i, j) = out(j, i) = min(m(i, j), m(j, i)).
ScoreMatrix symmetrize_min(const ScoreMatrix& m);

}  // namespace clrsum
