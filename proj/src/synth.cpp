#include "clrsum/synth.hpp"

#include <cmath>
#include <random>
#include <string>

#include "clrsum/io.hpp"

namespace clrsum {
namespace {

// One explicit engine; every draw happens in a fixed sequence position.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return std::generate_canonical<double, 53>(engine_); }
  bool bernoulli(double p) { return uniform() < p; }
  double normal(double sd) {
    std::normal_distribution<double> dist(0.0, sd);
    return dist(engine_);
  }

 private:
  std::mt19937_64 engine_;
};

void check_probability(double p, const char* name) {
  require(p >= 0.0 && p <= 1.0, ErrorCode::InvalidArgument,
          std::string(name) + " must lie in [0, 1]");
}

SynthDataset run(const SynthConfig& cfg, const GroundTruthNetwork& truth, Stream& rng) {
  const Index n = cfg.neuron_count;
  const Index frames = cfg.frame_count;

  Eigen::MatrixX2d positions(n, 2);
  for (Index i = 0; i < n; ++i) {
    positions(i, 0) = rng.uniform();
    positions(i, 1) = rng.uniform();
  }

  Eigen::VectorXd decay(n);
  for (Index i = 0; i < n; ++i) {
    decay(i) = cfg.calcium_decay + cfg.decay_jitter * (2.0 * rng.uniform() - 1.0);
  }

  Eigen::VectorXd noise(n);
  for (Index i = 0; i < n; ++i) {
    noise(i) = cfg.noise_std * (1.0 + cfg.noise_jitter * (2.0 * rng.uniform() - 1.0));
  }

  std::vector<std::vector<Index>> presynaptic(static_cast<std::size_t>(n));
  for (const Edge& e : truth.edges()) presynaptic[static_cast<std::size_t>(e.target)].push_back(e.source);

  // Spikes propagate one simulation step after the presynaptic spike; a
  // frame spans `substeps` steps, so relayed spikes can land in the same frame.
  const double step_rate = cfg.spike_rate / static_cast<double>(cfg.substeps);
  std::vector<char> spiked(static_cast<std::size_t>(n), 0), next(static_cast<std::size_t>(n), 0);
  Eigen::VectorXd calcium = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd frame_spikes(n);
  Eigen::MatrixXd clean(frames, n);
  for (Index t = 0; t < frames; ++t) {
    for (Index i = 0; i < n; ++i) {
      const double c = calcium(i);
      clean(t, i) = c / (c + cfg.saturation);
    }
    frame_spikes.setZero();
    for (int step = 0; step < cfg.substeps; ++step) {
      for (Index i = 0; i < n; ++i) {
        bool fire = rng.bernoulli(step_rate);
        for (Index pre : presynaptic[static_cast<std::size_t>(i)]) {
          if (spiked[static_cast<std::size_t>(pre)] && rng.bernoulli(cfg.coupling)) fire = true;
        }
        next[static_cast<std::size_t>(i)] = fire ? 1 : 0;
      }
      spiked.swap(next);
      for (Index i = 0; i < n; ++i) frame_spikes(i) += spiked[static_cast<std::size_t>(i)];
    }
    calcium = decay.cwiseProduct(calcium) + frame_spikes;
  }

  Eigen::MatrixXd observed = clean;
  if (cfg.scatter_radius > 0.0) {
    Eigen::MatrixXd mix = Eigen::MatrixXd::Identity(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        if (i == j) continue;
        const double d = (positions.row(i) - positions.row(j)).norm();
        if (d < cfg.scatter_radius) mix(j, i) = cfg.scatter_strength * (1.0 - d / cfg.scatter_radius);
      }
    }
    // Column i of `mix` holds the weights neuron i receives; normalizing each
    // column keeps the mixture a convex combination.
    for (Index i = 0; i < n; ++i) mix.col(i) /= mix.col(i).sum();
    observed = clean * mix;
  }

  if (cfg.noise_std > 0.0) {
    for (Index t = 0; t < frames; ++t)
      for (Index i = 0; i < n; ++i) observed(t, i) += rng.normal(noise(i));
  }
  return {truth, Recording(std::move(observed), std::move(positions))};
}

}  // namespace

void SynthConfig::validate() const {
  require(neuron_count >= 2, ErrorCode::InvalidArgument, "neuron_count must be >= 2");
  require(frame_count >= 2, ErrorCode::InvalidArgument, "frame_count must be >= 2");
  check_probability(connection_prob, "connection_prob");
  check_probability(spike_rate, "spike_rate");
  check_probability(coupling, "coupling");
  require(calcium_decay > 0.0 && calcium_decay < 1.0, ErrorCode::InvalidArgument,
          "calcium_decay must lie in (0, 1)");
  require(noise_std >= 0.0 && std::isfinite(noise_std), ErrorCode::InvalidArgument,
          "noise_std must be finite and >= 0");
  require(scatter_radius >= 0.0 && std::isfinite(scatter_radius), ErrorCode::InvalidArgument,
          "scatter_radius must be finite and >= 0");
  require(scatter_strength >= 0.0 && std::isfinite(scatter_strength),
          ErrorCode::InvalidArgument, "scatter_strength must be finite and >= 0");
  require(decay_jitter >= 0.0 && calcium_decay - decay_jitter > 0.0 &&
              calcium_decay + decay_jitter < 1.0,
          ErrorCode::InvalidArgument, "calcium_decay +/- decay_jitter must stay inside (0, 1)");
  require(noise_jitter >= 0.0 && noise_jitter <= 1.0, ErrorCode::InvalidArgument,
          "noise_jitter must lie in [0, 1]");
  require(substeps >= 1, ErrorCode::InvalidArgument, "substeps must be >= 1");
  require(saturation > 0.0 && std::isfinite(saturation), ErrorCode::InvalidArgument,
          "saturation must be finite and > 0");
}

SynthConfig SynthConfig::from_key_values(const KeyValues& kv) {
  SynthConfig cfg;
  for (const auto& [key, value] : kv) {
    if (key == "neuron_count") cfg.neuron_count = parse_integer(value, key);
    else if (key == "frame_count") cfg.frame_count = parse_integer(value, key);
    else if (key == "connection_prob") cfg.connection_prob = parse_double(value, key);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_integer(value, key));
    else if (key == "spike_rate") cfg.spike_rate = parse_double(value, key);
    else if (key == "coupling") cfg.coupling = parse_double(value, key);
    else if (key == "calcium_decay") cfg.calcium_decay = parse_double(value, key);
    else if (key == "noise_std") cfg.noise_std = parse_double(value, key);
    else if (key == "scatter_radius") cfg.scatter_radius = parse_double(value, key);
    else if (key == "scatter_strength") cfg.scatter_strength = parse_double(value, key);
    else if (key == "saturation") cfg.saturation = parse_double(value, key);
    else if (key == "decay_jitter") cfg.decay_jitter = parse_double(value, key);
    else if (key == "noise_jitter") cfg.noise_jitter = parse_double(value, key);
    else if (key == "substeps") cfg.substeps = static_cast<int>(parse_integer(value, key));
    else fail(ErrorCode::InvalidArgument, "unknown simulation key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

KeyValues SynthConfig::to_key_values() const {
  return {
      {"neuron_count", std::to_string(neuron_count)},
      {"frame_count", std::to_string(frame_count)},
      {"connection_prob", io::format_double(connection_prob)},
      {"seed", std::to_string(seed)},
      {"spike_rate", io::format_double(spike_rate)},
      {"coupling", io::format_double(coupling)},
      {"calcium_decay", io::format_double(calcium_decay)},
      {"noise_std", io::format_double(noise_std)},
      {"scatter_radius", io::format_double(scatter_radius)},
      {"scatter_strength", io::format_double(scatter_strength)},
      {"saturation", io::format_double(saturation)},
      {"substeps", std::to_string(substeps)},
      {"decay_jitter", io::format_double(decay_jitter)},
      {"noise_jitter", io::format_double(noise_jitter)},
  };
}

SynthDataset generate(const SynthConfig& cfg) {
  cfg.validate();
  Stream rng(cfg.seed);
  std::vector<Edge> edges;
  for (Index i = 0; i < cfg.neuron_count; ++i) {
    for (Index j = 0; j < cfg.neuron_count; ++j) {
      if (i == j) continue;
      if (rng.bernoulli(cfg.connection_prob)) edges.push_back({i, j, 1});
    }
  }
  return run(cfg, GroundTruthNetwork(cfg.neuron_count, std::move(edges)), rng);
}

SynthDataset simulate(const SynthConfig& cfg, const GroundTruthNetwork& truth) {
  cfg.validate();
  require(truth.neuron_count() == cfg.neuron_count, ErrorCode::DimensionMismatch,
          "network size does not match neuron_count");
  Stream rng(cfg.seed);
  return run(cfg, truth, rng);
}

GroundTruthNetwork chain_network(Index neuron_count, Index chains) {
  require(chains >= 0 && 3 * chains <= neuron_count, ErrorCode::InvalidArgument,
          "not enough neurons for the requested chains");
  std::vector<Edge> edges;
  for (Index c = 0; c < chains; ++c) {
    edges.push_back({3 * c, 3 * c + 1, 1});
    edges.push_back({3 * c + 1, 3 * c + 2, 1});
  }
  return GroundTruthNetwork(neuron_count, std::move(edges));
}

}  // namespace clrsum
