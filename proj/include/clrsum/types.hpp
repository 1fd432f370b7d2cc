#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clrsum/error.hpp"

namespace clrsum {

using Index = Eigen::Index;

/// Fluorescence samples, one column per neuron and one row per frame.
class Recording {
 public:
  Recording() = default;

  explicit Recording(Eigen::MatrixXd samples,
                     std::optional<Eigen::MatrixX2d> positions = std::nullopt)
      : samples_(std::move(samples)), positions_(std::move(positions)) {
    require(samples_.rows() >= 2, ErrorCode::InvalidArgument,
            "recording needs at least 2 frames");
    require(samples_.cols() >= 2, ErrorCode::InvalidArgument,
            "recording needs at least 2 neurons");
    require(samples_.allFinite(), ErrorCode::InvalidArgument,
            "recording contains non-finite samples");
    if (positions_) {
      require(positions_->rows() == samples_.cols(), ErrorCode::DimensionMismatch,
              "positions must have one row per neuron");
      require(positions_->allFinite(), ErrorCode::InvalidArgument,
              "positions contain non-finite values");
    }
  }

  const Eigen::MatrixXd& samples() const noexcept { return samples_; }
  Index frame_count() const noexcept { return samples_.rows(); }
  Index neuron_count() const noexcept { return samples_.cols(); }
  auto neuron(Index i) const { return samples_.col(i); }

  const std::optional<Eigen::MatrixX2d>& positions() const noexcept { return positions_; }

 private:
  Eigen::MatrixXd samples_;
  std::optional<Eigen::MatrixX2d> positions_;
};

/// N x N pairwise link scores. Higher always means a stronger link.
class ScoreMatrix {
 public:
  ScoreMatrix() = default;

  ScoreMatrix(Eigen::MatrixXd values, bool symmetric, std::string name)
      : values_(std::move(values)), symmetric_(symmetric), name_(std::move(name)) {
    require(values_.rows() == values_.cols(), ErrorCode::DimensionMismatch,
            "score matrix must be square");
    require(values_.allFinite(), ErrorCode::InvalidArgument,
            "score matrix contains non-finite entries");
    for (Index i = 0; i < values_.rows(); ++i) {
      require(values_(i, i) == 0.0, ErrorCode::InvalidArgument,
              "score matrix diagonal must be zero");
    }
    if (symmetric_) {
      require(is_exactly_symmetric(values_), ErrorCode::NotSymmetric,
              "score matrix flagged symmetric but is not");
    }
  }

  const Eigen::MatrixXd& values() const noexcept { return values_; }
  double operator()(Index i, Index j) const { return values_(i, j); }
  Index size() const noexcept { return values_.rows(); }
  bool symmetric() const noexcept { return symmetric_; }
  const std::string& name() const noexcept { return name_; }

  static bool is_exactly_symmetric(const Eigen::MatrixXd& m) {
    for (Index j = 0; j < m.cols(); ++j)
      for (Index i = j + 1; i < m.rows(); ++i)
        if (m(i, j) != m(j, i)) return false;
    return true;
  }

 private:
  Eigen::MatrixXd values_;
  bool symmetric_ = false;
  std::string name_;
};

struct Edge {
  Index source = 0;  // 0-based
  Index target = 0;
  int weight = 1;    // +1 excitatory, -1 inhibitory/blocked

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Directed ground-truth connectivity, used only for evaluation.
class GroundTruthNetwork {
 public:
  GroundTruthNetwork() = default;

  GroundTruthNetwork(Index neuron_count, std::vector<Edge> edges)
      : neuron_count_(neuron_count), edges_(std::move(edges)) {
    require(neuron_count_ >= 1, ErrorCode::InvalidArgument,
            "network needs at least one neuron");
    for (const Edge& e : edges_) {
      require(e.source >= 0 && e.source < neuron_count_ && e.target >= 0 &&
                  e.target < neuron_count_,
              ErrorCode::InvalidArgument, "edge index out of range");
      require(e.source != e.target, ErrorCode::InvalidArgument,
              "self-loops are not allowed");
      require(e.weight == 1 || e.weight == -1, ErrorCode::InvalidArgument,
              "edge weight must be -1 or +1");
    }
  }

  Index neuron_count() const noexcept { return neuron_count_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

 private:
  Index neuron_count_ = 0;
  std::vector<Edge> edges_;
};

}  // namespace clrsum
