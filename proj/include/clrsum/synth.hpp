#pragma once

// Seeded synthetic calcium-imaging data: a probabilistic spike branching
// process on a random directed graph, a leaky calcium integrator, a
// saturating fluorescence readout, optional optical crosstalk between nearby
// neurons, and Gaussian measurement noise. It is a stand-in for a full
// neuron simulator and shares only its qualitative structure.

#include <cstdint>
#include <utility>
#include <vector>

#include "clrsum/config.hpp"
#include "clrsum/types.hpp"

namespace clrsum {

struct SynthConfig {
  Index neuron_count = 100;
  Index frame_count = 10000;
  double connection_prob = 0.05;  // per ordered pair
  std::uint64_t seed = 42;
  double spike_rate = 0.01;       // spontaneous spikes per neuron and frame
  double coupling = 0.3;          // per presynaptic spike, fires one frame later
  double calcium_decay = 0.9;     // C(t+1) = decay * C(t) + spikes(t)
  double decay_jitter = 0.0;      // per-neuron decay drawn in calcium_decay +/- jitter
  double noise_std = 0.03;
  double noise_jitter = 0.0;      // per-neuron noise std drawn in noise_std * (1 +/- jitter)
  double scatter_radius = 0.0;    // 0 disables crosstalk
  double scatter_strength = 0.15; // weight of a neighbor at zero distance
  double saturation = 1.0;        // F = C / (C + saturation)
  int substeps = 1;               // simulation steps per imaging frame

  void validate() const;

  /// Reads fields by name; unknown keys are rejected.
  static SynthConfig from_key_values(const KeyValues& kv);
  KeyValues to_key_values() const;
};

struct SynthDataset {
  GroundTruthNetwork truth;
  Recording recording;  // carries the drawn neuron positions
};

/// Draws the graph, then simulates it. Deterministic in the config.
SynthDataset generate(const SynthConfig& cfg);

/// Simulates activity on a given network; connection_prob is ignored.
SynthDataset simulate(const SynthConfig& cfg, const GroundTruthNetwork& truth);

/// `chains` disjoint A -> B -> C chains on neurons (3c, 3c+1, 3c+2); any
/// remaining neurons are unconnected.
GroundTruthNetwork chain_network(Index neuron_count, Index chains);

}  // namespace clrsum
