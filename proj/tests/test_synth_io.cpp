#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "clrsum/config.hpp"
#include "clrsum/io.hpp"
#include "clrsum/synth.hpp"

using namespace clrsum;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("clrsum_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

SynthConfig small_config() {
  SynthConfig cfg;
  cfg.neuron_count = 12;
  cfg.frame_count = 800;
  cfg.connection_prob = 0.2;
  cfg.seed = 5;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(Synth, DeterministicInTheSeed) {
  const SynthConfig cfg = small_config();
  const SynthDataset a = generate(cfg);
  const SynthDataset b = generate(cfg);
  EXPECT_EQ(a.recording.samples(), b.recording.samples());
  EXPECT_EQ(*a.recording.positions(), *b.recording.positions());
  ASSERT_EQ(a.truth.edges().size(), b.truth.edges().size());
  SynthConfig other = cfg;
  other.seed = 6;
  EXPECT_NE(generate(other).recording.samples(), a.recording.samples());
}

TEST(Synth, NoiselessFluorescenceIsBounded) {
  SynthConfig cfg = small_config();
  cfg.noise_std = 0.0;
  const SynthDataset ds = generate(cfg);
  EXPECT_GE(ds.recording.samples().minCoeff(), 0.0);
  EXPECT_LT(ds.recording.samples().maxCoeff(), 1.0);
  EXPECT_GT(ds.recording.samples().maxCoeff(), 0.0);
  const Eigen::MatrixX2d& pos = *ds.recording.positions();
  EXPECT_GE(pos.minCoeff(), 0.0);
  EXPECT_LT(pos.maxCoeff(), 1.0);
}

TEST(Synth, ConnectionProbabilityExtremes) {
  SynthConfig cfg = small_config();
  cfg.connection_prob = 0.0;
  EXPECT_TRUE(generate(cfg).truth.edges().empty());
  cfg.connection_prob = 1.0;
  const SynthDataset full = generate(cfg);
  EXPECT_EQ(full.truth.edges().size(), 12U * 11U);
  for (const Edge& e : full.truth.edges()) {
    EXPECT_NE(e.source, e.target);
    EXPECT_EQ(e.weight, 1);
  }
}

TEST(Synth, SilentNetworkIsZero) {
  SynthConfig cfg = small_config();
  cfg.coupling = 0.0;
  cfg.noise_std = 0.0;
  cfg.spike_rate = 0.0;
  EXPECT_TRUE(generate(cfg).recording.samples().isZero(0.0));
}

TEST(Synth, FluorescenceWithinNoiseBand) {
  SynthConfig cfg = small_config();
  cfg.noise_std = 0.05;
  cfg.scatter_radius = 0.3;
  const SynthDataset ds = generate(cfg);
  EXPECT_GE(ds.recording.samples().minCoeff(), -6.0 * cfg.noise_std);
  EXPECT_LE(ds.recording.samples().maxCoeff(), 1.0 + 6.0 * cfg.noise_std);
}

TEST(Synth, ChainDirectBeatsIndirectCorrelation) {
  SynthConfig cfg = small_config();
  cfg.neuron_count = 3;
  cfg.frame_count = 10000;
  cfg.coupling = 0.9;
  const SynthDataset ds = simulate(cfg, chain_network(3, 1));
  const auto& x = ds.recording.samples();
  const auto c = [&](Index i, Index j) {
    const Eigen::VectorXd a = x.col(i).array() - x.col(i).mean();
    const Eigen::VectorXd b = x.col(j).array() - x.col(j).mean();
    return a.dot(b) / (a.norm() * b.norm());
  };
  EXPECT_GT(c(0, 1), c(0, 2));
}

TEST(Synth, ChainNetwork) {
  const GroundTruthNetwork net = chain_network(10, 3);
  ASSERT_EQ(net.edges().size(), 6U);
  EXPECT_EQ(net.edges()[0].source, 0);
  EXPECT_EQ(net.edges()[0].target, 1);
  EXPECT_EQ(net.edges()[5].source, 7);
  EXPECT_EQ(net.edges()[5].target, 8);
  EXPECT_THROW(chain_network(8, 3), Error);
}

TEST(Synth, CouplingPropagatesActivity) {
  SynthConfig cfg = small_config();
  cfg.neuron_count = 3;
  cfg.frame_count = 20000;
  cfg.coupling = 0.9;
  cfg.substeps = 4;
  const SynthDataset ds = simulate(cfg, GroundTruthNetwork(3, {{0, 1, 1}}));
  const auto& x = ds.recording.samples();
  const auto c = [&](Index i, Index j) {
    const Eigen::VectorXd a = x.col(i).array() - x.col(i).mean();
    const Eigen::VectorXd b = x.col(j).array() - x.col(j).mean();
    return a.dot(b) / (a.norm() * b.norm());
  };
  EXPECT_GT(c(0, 1), 0.5);
  EXPECT_LT(std::abs(c(0, 2)), 0.1);
}

TEST(SynthConfig, KeyValueRoundTrip) {
  SynthConfig cfg = small_config();
  cfg.scatter_radius = 0.25;
  cfg.substeps = 3;
  const SynthConfig back = SynthConfig::from_key_values(cfg.to_key_values());
  EXPECT_EQ(back.to_key_values(), cfg.to_key_values());
  EXPECT_EQ(back.substeps, 3);
}

TEST(SynthConfig, RejectsInvalidValues) {
  EXPECT_THROW(SynthConfig::from_key_values({{"neuron_cont", "5"}}), Error);
  EXPECT_THROW(SynthConfig::from_key_values({{"coupling", "1.5"}}), Error);
  EXPECT_THROW(SynthConfig::from_key_values({{"neuron_count", "x"}}), Error);
  EXPECT_THROW(SynthConfig::from_key_values({{"calcium_decay", "1"}}), Error);
}

TEST(Config, ParsesKeyValues) {
  const KeyValues kv = parse_key_values("# comment\n a = 1 \n\nb=two # trailing\n", "t");
  EXPECT_EQ(kv.at("a"), "1");
  EXPECT_EQ(kv.at("b"), "two");
  EXPECT_THROW(parse_key_values("novalue\n", "t"), Error);
  EXPECT_EQ(parse_double_list("0.1, inf", "g"), (std::vector<double>{0.1, INFINITY}));
  EXPECT_EQ(split_list("gte_sym, ct,md"), (std::vector<std::string>{"gte_sym", "ct", "md"}));
  EXPECT_TRUE(parse_bool("true", "k"));
  EXPECT_FALSE(parse_bool("false", "k"));
  EXPECT_THROW(parse_bool("maybe", "k"), Error);
  EXPECT_THROW(parse_integer("1.5", "k"), Error);
}

TEST(Io, RecordingRoundTripIsExact) {
  const fs::path dir = scratch_dir("recording");
  const SynthDataset ds = generate(small_config());
  io::write_fluorescence(dir / "f.csv", ds.recording);
  io::write_positions(dir / "p.csv", *ds.recording.positions());
  const Recording back = io::read_recording(dir / "f.csv", dir / "p.csv");
  EXPECT_EQ(back.samples(), ds.recording.samples());
  EXPECT_EQ(*back.positions(), *ds.recording.positions());
}

TEST(Io, NetworkRoundTrip) {
  const fs::path dir = scratch_dir("network");
  const GroundTruthNetwork net(5, {{0, 4, 1}, {3, 1, -1}});
  io::write_network(dir / "n.csv", net);
  EXPECT_EQ(slurp(dir / "n.csv"), "1,5,1\n4,2,-1\n");
  const GroundTruthNetwork back = io::read_network(dir / "n.csv");
  EXPECT_EQ(back.neuron_count(), 5);
  EXPECT_EQ(back.edges()[1].weight, -1);
  EXPECT_EQ(io::read_network(dir / "n.csv", 9).neuron_count(), 9);
  EXPECT_THROW(io::read_network(dir / "n.csv", 3), Error);
}

TEST(Io, RejectsMalformedFiles) {
  const fs::path dir = scratch_dir("malformed");
  io::write_text_file(dir / "ragged.csv", "1,2\n3\n");
  io::write_text_file(dir / "text.csv", "1,a\n");
  io::write_text_file(dir / "weight.csv", "1,2,2\n");
  io::write_text_file(dir / "index.csv", "0,2,1\n");
  EXPECT_THROW(io::read_csv_matrix(dir / "ragged.csv"), Error);
  EXPECT_THROW(io::read_csv_matrix(dir / "text.csv"), Error);
  EXPECT_THROW(io::read_csv_matrix(dir / "missing.csv"), Error);
  EXPECT_THROW(io::read_network(dir / "weight.csv"), Error);
  EXPECT_THROW(io::read_network(dir / "index.csv"), Error);
}

TEST(Io, ScoreMatrixRoundTripWithSidecar) {
  const fs::path dir = scratch_dir("score");
  Eigen::Matrix3d v;
  v << 0, 0.1, 1.0 / 3.0, 0.2, 0, 1e-300, 0.5, -2.5, 0;
  io::write_score_matrix(dir / "g.csv", ScoreMatrix(v, false, "gte"), {{"bins", "3"}});
  const ScoreMatrix back = io::read_score_matrix(dir / "g.csv");
  EXPECT_EQ(back.values(), Eigen::MatrixXd(v));
  EXPECT_FALSE(back.symmetric());
  EXPECT_EQ(back.name(), "gte");
  EXPECT_EQ(io::read_metadata(io::metadata_path(dir / "g.csv")).at("bins"), "3");
}

TEST(Io, ChallengeExport) {
  Eigen::Matrix2d v;
  v << 0, 0.25, 0.75, 0;
  const std::string text = io::challenge_csv(ScoreMatrix(v, false, "x"), "valid");
  EXPECT_EQ(text, "valid_1_2,0.25\nvalid_2_1,0.75\n");

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd m(6, 6);
  for (auto& e : m.reshaped()) e = u(rng);
  m.diagonal().setZero();
  const Eigen::MatrixXd back =
      io::parse_challenge_csv(io::challenge_csv(ScoreMatrix(m, false, "x"), "net_a"), 6);
  EXPECT_EQ(back, m);
}
