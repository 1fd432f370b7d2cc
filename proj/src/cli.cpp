#include "clrsum/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <optional>
#include <ostream>
#include <set>

#include "clrsum/config.hpp"
#include "clrsum/ensemble.hpp"
#include "clrsum/evaluation.hpp"
#include "clrsum/features.hpp"
#include "clrsum/gte.hpp"
#include "clrsum/io.hpp"
#include "clrsum/synth.hpp"

namespace clrsum::cli {
namespace {

namespace fs = std::filesystem;

const std::vector<std::string> kFeatureNames = {"corr", "ct", "md", "rd", "gte", "gte_sym"};
const std::vector<std::string> kDefaultMembers = {"gte_sym", "ct", "md", "rd"};

void require_file(const fs::path& p, const std::string& what) {
  require(fs::is_regular_file(p), ErrorCode::Io, what + " not found: " + p.string());
}

// Feature and GTE parameters: config file first, flags on top.
struct FeatureOptions {
  std::optional<std::string> config;
  std::optional<double> alpha_pct;
  std::optional<Index> range_k;
  std::optional<int> markov_order;
  std::optional<int> bins;
  std::optional<std::string> conditioning;
  std::optional<bool> instant_feedback;
  std::optional<bool> difference_signal;
  std::optional<unsigned> workers;

  void add_to(CLI::App& app) {
    app.add_option("--config", config, "key = value parameter file");
    app.add_option("--alpha", alpha_pct, "upper quantile level in percent (default 0.1)");
    app.add_option("--range-k", range_k, "extreme values averaged by rd (default 10)");
    app.add_option("--markov-order", markov_order, "GTE history length (default 2)");
    app.add_option("--bins", bins, "GTE bins per signal (default 3)");
    app.add_option("--conditioning", conditioning,
                   "GTE conditioning levels, comma separated; 'inf' disables");
    app.add_option("--instant-feedback", instant_feedback, "GTE same-frame term (true/false)");
    app.add_option("--difference-signal", difference_signal,
                   "GTE on X(t+1) - X(t) (true/false)");
    app.add_option("--workers", workers, "worker threads (0 = all cores)");
  }

  KeyValues file_values() const { return config ? read_key_values(*config) : KeyValues{}; }
};

struct ResolvedParams {
  FeatureConfig feature;
  GteConfig gte;
  unsigned workers = 0;
  KeyValues rest;  // keys not consumed here
};

ResolvedParams resolve(const FeatureOptions& opt) {
  ResolvedParams r;
  for (const auto& [key, value] : opt.file_values()) {
    if (key == "alpha_pct") r.feature.alpha_pct = parse_double(value, key);
    else if (key == "range_k") r.feature.range_k = parse_integer(value, key);
    else if (key == "markov_order") r.gte.markov_order = static_cast<int>(parse_integer(value, key));
    else if (key == "bins") r.gte.bins = static_cast<int>(parse_integer(value, key));
    else if (key == "conditioning_levels") r.gte.conditioning_levels = parse_double_list(value, key);
    else if (key == "instant_feedback") r.gte.instant_feedback = parse_bool(value, key);
    else if (key == "use_difference_signal") r.gte.use_difference_signal = parse_bool(value, key);
    else if (key == "workers") r.workers = static_cast<unsigned>(parse_integer(value, key));
    else r.rest[key] = value;
  }
  if (opt.alpha_pct) r.feature.alpha_pct = *opt.alpha_pct;
  if (opt.range_k) r.feature.range_k = *opt.range_k;
  if (opt.markov_order) r.gte.markov_order = *opt.markov_order;
  if (opt.bins) r.gte.bins = *opt.bins;
  if (opt.conditioning) r.gte.conditioning_levels = parse_double_list(*opt.conditioning, "--conditioning");
  if (opt.instant_feedback) r.gte.instant_feedback = *opt.instant_feedback;
  if (opt.difference_signal) r.gte.use_difference_signal = *opt.difference_signal;
  if (opt.workers) r.workers = *opt.workers;
  r.feature.validate();
  r.gte.validate();
  return r;
}

io::Metadata params_metadata(const ResolvedParams& p) {
  std::string levels;
  for (double g : p.gte.conditioning_levels) {
    if (!levels.empty()) levels += ',';
    levels += io::format_double(g);
  }
  return {
      {"alpha_pct", io::format_double(p.feature.alpha_pct)},
      {"range_k", std::to_string(p.feature.range_k)},
      {"markov_order", std::to_string(p.gte.markov_order)},
      {"bins", std::to_string(p.gte.bins)},
      {"conditioning_levels", levels.empty() ? "inf" : levels},
      {"instant_feedback", p.gte.instant_feedback ? "true" : "false"},
      {"use_difference_signal", p.gte.use_difference_signal ? "true" : "false"},
  };
}

// Computes the named features, sharing the directed GTE network between
// "gte" and "gte_sym".
std::map<std::string, ScoreMatrix> compute_features(const Recording& rec,
                                                    const std::vector<std::string>& names,
                                                    const ResolvedParams& p) {
  std::map<std::string, ScoreMatrix> out;
  std::optional<ScoreMatrix> gte;
  for (const std::string& name : names) {
    if (out.count(name)) continue;
    if (name == "corr") out.emplace(name, corr_network(rec, p.workers));
    else if (name == "ct") out.emplace(name, ct_network(rec, p.feature, p.workers));
    else if (name == "md") out.emplace(name, md_network(rec, p.feature, p.workers));
    else if (name == "rd") out.emplace(name, rd_network(rec, p.feature, p.workers));
    else if (name == "gte" || name == "gte_sym") {
      if (!gte) gte = gte_network(rec, p.gte, p.workers);
      out.emplace(name, name == "gte" ? *gte : symmetrize_min(*gte));
    } else {
      fail(ErrorCode::InvalidArgument, "unknown feature '" + name +
                                           "' (expected corr, ct, md, rd, gte or gte_sym)");
    }
  }
  return out;
}

int cmd_simulate(const std::optional<std::string>& config, const std::vector<std::string>& sets,
                 const std::optional<std::uint64_t>& seed, const fs::path& out_dir,
                 std::ostream& out) {
  KeyValues kv = config ? read_key_values(*config) : KeyValues{};
  for (const std::string& s : sets) {
    const KeyValues one = parse_key_values(s, "--set");
    kv.insert_or_assign(one.begin()->first, one.begin()->second);
  }
  if (seed) kv["seed"] = std::to_string(*seed);
  const SynthConfig cfg = SynthConfig::from_key_values(kv);
  const SynthDataset ds = generate(cfg);

  fs::create_directories(out_dir);
  io::write_fluorescence(out_dir / "fluorescence.csv", ds.recording);
  io::write_network(out_dir / "network.csv", ds.truth);
  io::write_positions(out_dir / "positions.csv", *ds.recording.positions());
  std::string cfg_text;
  for (const auto& [k, v] : cfg.to_key_values()) cfg_text += k + " = " + v + '\n';
  io::write_text_file(out_dir / "simulation.cfg", cfg_text);
  out << "simulated " << cfg.neuron_count << " neurons x " << cfg.frame_count << " frames, "
      << ds.truth.edges().size() << " edges -> " << out_dir.string() << '\n';
  return 0;
}

int cmd_feature(const std::string& name, const fs::path& fluorescence,
                const std::optional<std::string>& positions, const fs::path& output,
                const FeatureOptions& opt, std::ostream& out) {
  require(std::find(kFeatureNames.begin(), kFeatureNames.end(), name) != kFeatureNames.end(),
          ErrorCode::InvalidArgument,
          "unknown feature '" + name + "' (expected corr, ct, md, rd, gte or gte_sym)");
  require_file(fluorescence, "fluorescence file");
  if (positions) require_file(*positions, "positions file");
  const ResolvedParams params = resolve(opt);
  const Recording rec = io::read_recording(
      fluorescence, positions ? std::optional<fs::path>(*positions) : std::nullopt);
  const auto features = compute_features(rec, {name}, params);
  io::Metadata meta = params_metadata(params);
  meta["source"] = fluorescence.filename().string();
  if (output.has_parent_path()) fs::create_directories(output.parent_path());
  io::write_score_matrix(output, features.at(name), meta);
  out << "wrote " << name << " (" << rec.neuron_count() << " neurons) -> " << output.string()
      << '\n';
  return 0;
}

int cmd_ensemble(const std::string& method, const std::vector<std::string>& inputs,
                 const fs::path& output, unsigned workers, std::ostream& out) {
  require(method == "clrsum" || method == "ranksum" || method == "clr",
          ErrorCode::InvalidArgument,
          "unknown ensemble method '" + method + "' (expected clrsum, ranksum or clr)");
  require(!inputs.empty(), ErrorCode::InvalidArgument, "no input matrices");
  std::vector<ScoreMatrix> members;
  for (const std::string& path : inputs) {
    require_file(path, "score matrix");
    members.push_back(io::read_score_matrix(path));
  }
  ScoreMatrix result;
  if (method == "clr") {
    require(members.size() == 1, ErrorCode::InvalidArgument, "clr takes exactly one matrix");
    result = clr(members.front(), workers);
  } else if (method == "clrsum") {
    result = clr_sum(members, workers);
  } else {
    result = rank_sum(members);
  }
  if (output.has_parent_path()) fs::create_directories(output.parent_path());
  io::write_score_matrix(output, result, {{"method", method}});
  out << "wrote " << result.name() << " -> " << output.string() << '\n';
  return 0;
}

struct ScoreOptions {
  bool directed = false;
  bool include_inhibitory = false;
  std::string dataset = "dataset";
};

std::string wilcoxon_csv(const std::string& dataset, const std::vector<EvaluationReport>& reports) {
  std::string out = "dataset,method_a,method_b,p_value,n,significant\n";
  for (std::size_t a = 0; a < reports.size(); ++a) {
    for (std::size_t b = a + 1; b < reports.size(); ++b) {
      const WilcoxonResult w = compare_contributions(reports[a], reports[b]);
      out += dataset + ',' + reports[a].method + ',' + reports[b].method + ',' +
             io::format_double(w.p_value) + ',' + std::to_string(w.nonzero) + ',' +
             (w.p_value < kSignificanceLevel ? "true" : "false") + '\n';
    }
  }
  return out;
}

int cmd_score(const std::vector<std::string>& matrices, const fs::path& network,
              const fs::path& output, const std::optional<std::string>& contributions,
              const std::optional<std::string>& wilcoxon, const ScoreOptions& opt,
              std::ostream& out) {
  require_file(network, "network file");
  std::vector<ScoreMatrix> scored;
  for (const std::string& path : matrices) {
    require_file(path, "score matrix");
    scored.push_back(io::read_score_matrix(path));
  }
  const GroundTruthNetwork truth = io::read_network(network, scored.front().size());
  const LinkLabels labels = make_labels(truth, !opt.directed, opt.include_inhibitory);
  std::vector<EvaluationReport> reports;
  for (const ScoreMatrix& m : scored) reports.push_back(evaluate(m, labels, opt.dataset));

  const std::string report = report_csv(reports);
  const std::string wil = wilcoxon ? wilcoxon_csv(opt.dataset, reports) : std::string{};
  if (output.has_parent_path()) fs::create_directories(output.parent_path());
  io::write_text_file(output, report);
  if (contributions) io::write_text_file(*contributions, contributions_csv(reports));
  if (wilcoxon) io::write_text_file(*wilcoxon, wil);
  out << report;
  return 0;
}

int cmd_export(const fs::path& matrix, const fs::path& output, const std::string& net_id,
               bool header, std::ostream& out) {
  require_file(matrix, "score matrix");
  const ScoreMatrix m = io::read_score_matrix(matrix);
  std::string text = header ? "NET_neuronI_neuronJ,Strength\n" : std::string{};
  text += io::challenge_csv(m, net_id);
  if (output.has_parent_path()) fs::create_directories(output.parent_path());
  io::write_text_file(output, text);
  out << "wrote " << m.size() * (m.size() - 1) << " rows -> " << output.string() << '\n';
  return 0;
}

struct PipelineOptions {
  std::string fluorescence;
  std::optional<std::string> network;
  std::optional<std::string> positions;
  std::string out_dir;
  std::optional<std::string> members;
  std::optional<std::string> dataset;
  bool include_inhibitory = false;
};

int cmd_pipeline(const PipelineOptions& po, const FeatureOptions& fo, std::ostream& out) {
  require_file(po.fluorescence, "fluorescence file");
  if (po.network) require_file(*po.network, "network file");
  if (po.positions) require_file(*po.positions, "positions file");
  ResolvedParams params = resolve(fo);

  std::vector<std::string> members = kDefaultMembers;
  std::string dataset = fs::path(po.fluorescence).stem().string();
  bool include_inhibitory = po.include_inhibitory;
  for (const auto& [key, value] : params.rest) {
    if (key == "members") members = split_list(value);
    else if (key == "dataset") dataset = value;
    else if (key == "include_inhibitory") include_inhibitory = parse_bool(value, key);
    else fail(ErrorCode::InvalidArgument, "unknown pipeline key '" + key + "'");
  }
  if (po.members) members = split_list(*po.members);
  if (po.dataset) dataset = *po.dataset;
  require(!members.empty(), ErrorCode::InvalidArgument, "member list is empty");

  const Recording rec = io::read_recording(
      po.fluorescence, po.positions ? std::optional<fs::path>(*po.positions) : std::nullopt);
  std::optional<GroundTruthNetwork> truth;
  if (po.network) truth = io::read_network(*po.network, rec.neuron_count());

  std::vector<std::string> names = kFeatureNames;
  for (const auto& m : members) {
    if (std::find(names.begin(), names.end(), m) == names.end()) names.push_back(m);
  }
  const auto features = compute_features(rec, names, params);

  std::vector<ScoreMatrix> ensemble_members;
  for (const auto& m : members) {
    const ScoreMatrix& f = features.at(m);
    require(f.symmetric(), ErrorCode::NotSymmetric,
            "ensemble member '" + m + "' is directed; use gte_sym");
    ensemble_members.push_back(f);
  }
  const ScoreMatrix cs = clr_sum(ensemble_members, params.workers);
  const ScoreMatrix rs = rank_sum(ensemble_members);

  std::vector<std::pair<std::string, const ScoreMatrix*>> outputs;
  for (const auto& name : kFeatureNames) outputs.emplace_back(name, &features.at(name));
  outputs.emplace_back("clrsum", &cs);
  outputs.emplace_back("ranksum", &rs);

  std::string report, contrib, wil;
  if (truth) {
    const LinkLabels labels = make_labels(*truth, true, include_inhibitory);
    std::vector<EvaluationReport> reports;
    for (const auto& [name, m] : outputs) {
      reports.push_back(evaluate(*m, labels, dataset));
      reports.back().method = name;
    }
    report = report_csv(reports);
    contrib = contributions_csv(reports);
    wil = wilcoxon_csv(dataset, reports);
  }

  const fs::path dir(po.out_dir);
  fs::create_directories(dir);
  io::Metadata meta = params_metadata(params);
  meta["source"] = fs::path(po.fluorescence).filename().string();
  for (const auto& [name, m] : outputs) io::write_score_matrix(dir / (name + ".csv"), *m, meta);
  if (truth) {
    io::write_text_file(dir / "report.csv", report);
    io::write_text_file(dir / "contributions.csv", contrib);
    io::write_text_file(dir / "wilcoxon.csv", wil);
    out << report;
  }
  out << "pipeline outputs -> " << dir.string() << '\n';
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Network reconstruction from fluorescence time series", "clrsum"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate a seeded synthetic dataset");
  std::optional<std::string> sim_config;
  std::vector<std::string> sim_sets;
  std::optional<std::uint64_t> sim_seed;
  std::string sim_out;
  sim->add_option("--config", sim_config, "key = value simulation file");
  sim->add_option("--set", sim_sets, "override one key, e.g. --set frame_count=5000");
  sim->add_option("--seed", sim_seed, "random seed");
  sim->add_option("--out", sim_out, "output directory")->required();

  // feature
  auto* feat = app.add_subcommand("feature", "compute one pairwise feature network");
  std::string feat_name, feat_fluo, feat_out;
  std::optional<std::string> feat_pos;
  FeatureOptions feat_opts;
  feat->add_option("name", feat_name, "corr | ct | md | rd | gte | gte_sym")->required();
  feat->add_option("--fluorescence", feat_fluo, "fluorescence CSV")->required();
  feat->add_option("--positions", feat_pos, "positions CSV");
  feat->add_option("--out", feat_out, "output matrix CSV")->required();
  feat_opts.add_to(*feat);

  // ensemble
  auto* ens = app.add_subcommand("ensemble", "combine symmetric score matrices");
  std::string ens_method, ens_out;
  std::vector<std::string> ens_inputs;
  unsigned ens_workers = 0;
  ens->add_option("method", ens_method, "clrsum | ranksum | clr")->required();
  ens->add_option("matrices", ens_inputs, "input matrix CSVs")->required();
  ens->add_option("--out", ens_out, "output matrix CSV")->required();
  ens->add_option("--workers", ens_workers, "worker threads (0 = all cores)");

  // score
  auto* score = app.add_subcommand("score", "evaluate score matrices against ground truth");
  std::vector<std::string> score_matrices;
  std::string score_network, score_out;
  std::optional<std::string> score_contrib, score_wilcoxon;
  ScoreOptions score_opts;
  score->add_option("matrices", score_matrices, "score matrix CSVs")->required();
  score->add_option("--network", score_network, "ground-truth network CSV")->required();
  score->add_option("--out", score_out, "report CSV")->required();
  score->add_option("--contributions", score_contrib, "per-link AUC contribution CSV");
  score->add_option("--wilcoxon", score_wilcoxon, "pairwise Wilcoxon p-value CSV");
  score->add_option("--dataset", score_opts.dataset, "dataset label");
  score->add_flag("--directed", score_opts.directed, "score ordered pairs");
  score->add_flag("--include-inhibitory", score_opts.include_inhibitory,
                  "count -1 edges as positives");

  // export-challenge
  auto* exp = app.add_subcommand("export-challenge", "write a challenge submission CSV");
  std::string exp_matrix, exp_out, exp_net = "NET";
  bool exp_header = false;
  exp->add_option("matrix", exp_matrix, "score matrix CSV")->required();
  exp->add_option("--out", exp_out, "submission CSV")->required();
  exp->add_option("--net-id", exp_net, "network identifier prefix");
  exp->add_flag("--header", exp_header, "emit the NET_neuronI_neuronJ,Strength header");

  // pipeline
  auto* pipe = app.add_subcommand("pipeline", "features, CLR, sum and scoring in one run");
  PipelineOptions pipe_opts;
  FeatureOptions pipe_feat;
  pipe->add_option("--fluorescence", pipe_opts.fluorescence, "fluorescence CSV")->required();
  pipe->add_option("--network", pipe_opts.network, "ground-truth network CSV");
  pipe->add_option("--positions", pipe_opts.positions, "positions CSV");
  pipe->add_option("--out", pipe_opts.out_dir, "output directory")->required();
  pipe->add_option("--members", pipe_opts.members, "ensemble members (default gte_sym,ct,md,rd)");
  pipe->add_option("--dataset", pipe_opts.dataset, "dataset label");
  pipe->add_flag("--include-inhibitory", pipe_opts.include_inhibitory,
                 "count -1 edges as positives");
  pipe_feat.add_to(*pipe);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*sim) return cmd_simulate(sim_config, sim_sets, sim_seed, sim_out, out);
    if (*feat) return cmd_feature(feat_name, feat_fluo, feat_pos, feat_out, feat_opts, out);
    if (*ens) return cmd_ensemble(ens_method, ens_inputs, ens_out, ens_workers, out);
    if (*score) {
      return cmd_score(score_matrices, score_network, score_out, score_contrib, score_wilcoxon,
                       score_opts, out);
    }
    if (*exp) return cmd_export(exp_matrix, exp_out, exp_net, exp_header, out);
    if (*pipe) return cmd_pipeline(pipe_opts, pipe_feat, out);
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace clrsum::cli
