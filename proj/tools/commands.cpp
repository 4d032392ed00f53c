#include "commands.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tabmem/association.hpp"
#include "tabmem/augment.hpp"
#include "tabmem/error.hpp"
#include "tabmem/fidelity.hpp"
#include "tabmem/memorization.hpp"
#include "tabmem/parallel.hpp"
#include "tabmem/report.hpp"
#include "tabmem/scorelab.hpp"
#include "tabmem/table.hpp"

namespace tabmem::cli {
namespace {

using nlohmann::json;

struct GlobalOptions {
  std::uint64_t seed = 42;
  std::size_t threads = 0;
  bool pretty = false;
};

struct AuditOptions {
  std::string train, synthetic, schema, out, histogram_csv;
  double threshold = kDefaultMemorizationThreshold;
  std::size_t bins = kDefaultHistogramBins;
};

struct AugmentOptions {
  std::string train, schema, out, mode = "cutmix", eta = "sqrt";
  double ratio = 0.3;
  double cluster_threshold = kDefaultClusterThreshold;
};

struct FidelityOptions {
  std::string real, synthetic, schema, holdout, out;
};

struct ClusterOptions {
  std::string data, schema, out, eta = "sqrt";
  double threshold = kDefaultClusterThreshold;
};

struct SimulateOptions {
  std::size_t n_latents = 16, dim = 2, steps = 10000, trajectories = 256;
  double horizon = 1.0, tolerance = 1e-2;
  std::string noise = "product", emit_trajectories, out;
};

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

/// Canonical, fully resolved argument list for a command. Thread count and
/// --pretty are left out: they do not affect any output file.
class RunConfig {
 public:
  RunConfig(std::string command, std::uint64_t seed) : command_(std::move(command)), seed_(seed) {}

  void add(const std::string& flag, const std::string& value) {
    if (value.empty()) return;
    args_.push_back("--" + flag);
    args_.push_back(value);
    options_[flag] = value;
  }
  void add(const std::string& flag, double value) {
    args_.push_back("--" + flag);
    args_.push_back(format_double(value));
    options_[flag] = value;
  }
  void add(const std::string& flag, std::size_t value) {
    args_.push_back("--" + flag);
    args_.push_back(std::to_string(value));
    options_[flag] = value;
  }

  json to_json() const {
    std::vector<std::string> argv{command_};
    argv.insert(argv.end(), args_.begin(), args_.end());
    argv.push_back("--seed");
    argv.push_back(std::to_string(seed_));
    return {{"command", command_}, {"seed", seed_}, {"options", options_}, {"argv", argv}};
  }

 private:
  std::string command_;
  std::uint64_t seed_;
  std::vector<std::string> args_;
  json options_ = json::object();
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoFailure, "cannot open " + path + " for writing");
  out << text;
  if (!out) fail(ErrorCode::IoFailure, "write failed for " + path);
}

std::string render(const json& doc) { return doc.dump(2) + "\n"; }

EtaScale parse_eta(const std::string& text) {
  if (text == "sqrt") return EtaScale::Sqrt;
  if (text == "squared") return EtaScale::Squared;
  fail(ErrorCode::InvalidArgument, "unknown eta scale '" + text + "'");
}

std::string percent(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(1) << 100.0 * v << "%";
  return s.str();
}

// ---------------------------------------------------------------------------

int cmd_audit(const AuditOptions& o, const GlobalOptions& g, std::ostream& out) {
  const auto schema = Schema::load(o.schema);
  const auto train = load_csv(o.train, schema);
  const auto synthetic = load_csv(o.synthetic, schema);
  const auto report = audit(synthetic, train, o.threshold, o.bins);

  RunConfig rc("audit", g.seed);
  rc.add("train", o.train);
  rc.add("synthetic", o.synthetic);
  rc.add("schema", o.schema);
  rc.add("threshold", o.threshold);
  rc.add("bins", o.bins);
  rc.add("out", o.out);
  rc.add("histogram-csv", o.histogram_csv);

  json doc = to_json(report);
  doc["kind"] = "audit";
  doc["n_train"] = train.row_count();
  doc["run_config"] = rc.to_json();
  write_text(o.out, render(doc));
  if (!o.histogram_csv.empty()) write_text(o.histogram_csv, histogram_csv(report.histogram));

  out << "mem_ratio: " << percent(report.mem_ratio) << "\n";
  out << "mem_auc: " << format_double(report.mem_auc) << "\n";
  if (g.pretty) {
    out << "threshold: " << format_double(report.threshold) << "\n"
        << "generated rows: " << report.ratios.size() << ", train rows: " << train.row_count() << "\n";
  }
  return kExitOk;
}

int cmd_augment(const AugmentOptions& o, const GlobalOptions& g, std::ostream& out) {
  const auto schema = Schema::load(o.schema);
  const auto train = load_csv(o.train, schema);
  AugmentConfig config;
  config.mode = parse_augment_mode(o.mode);
  config.ratio = o.ratio;
  config.seed = g.seed;
  config.cluster_threshold = o.cluster_threshold;
  config.eta = parse_eta(o.eta);
  const auto result = augment(train, config);
  write_csv(result, o.out);

  RunConfig rc("augment", g.seed);
  rc.add("train", o.train);
  rc.add("schema", o.schema);
  rc.add("mode", o.mode);
  rc.add("ratio", o.ratio);
  rc.add("cluster-threshold", o.cluster_threshold);
  rc.add("eta", o.eta);
  rc.add("out", o.out);

  json doc = {{"kind", "augment"},
              {"mode", o.mode},
              {"input_rows", train.row_count()},
              {"augmented_rows", result.row_count() - train.row_count()},
              {"output_rows", result.row_count()},
              {"run_config", rc.to_json()}};
  if (config.mode == AugmentMode::CutMixPlus) {
    const auto clusters = cluster_features(association_matrix(train, config.eta), config.cluster_threshold);
    doc["clusters"] = to_json(clusters, schema)["clusters"];
  }
  write_text(o.out + ".run.json", render(doc));
  out << "wrote " << result.row_count() << " rows (" << (result.row_count() - train.row_count())
      << " augmented) to " << o.out << "\n";
  return kExitOk;
}

int cmd_fidelity(const FidelityOptions& o, const GlobalOptions& g, std::ostream& out) {
  const auto schema = Schema::load(o.schema);
  const auto real = load_csv(o.real, schema);
  const auto synthetic = load_csv(o.synthetic, schema);
  std::optional<Table> holdout;
  if (!o.holdout.empty()) holdout = load_csv(o.holdout, schema);
  const auto report = evaluate_fidelity(real, synthetic, holdout ? &*holdout : nullptr, g.seed);

  RunConfig rc("fidelity", g.seed);
  rc.add("real", o.real);
  rc.add("synthetic", o.synthetic);
  rc.add("schema", o.schema);
  rc.add("holdout", o.holdout);
  rc.add("out", o.out);

  json doc = to_json(report);
  doc["kind"] = "fidelity";
  doc["run_config"] = rc.to_json();
  write_text(o.out, render(doc));
  if (g.pretty) {
    out << "shape score:     " << format_double(report.shape_score) << "\n"
        << "trend score:     " << format_double(report.trend_score) << "\n"
        << "c2st score:      " << format_double(report.c2st_score) << "\n"
        << "alpha-precision: " << format_double(report.alpha_precision) << "\n"
        << "beta-recall:     " << format_double(report.beta_recall) << "\n";
    if (report.dcr_probability) out << "dcr probability: " << format_double(*report.dcr_probability) << "\n";
  }
  return kExitOk;
}

int cmd_cluster(const ClusterOptions& o, const GlobalOptions& g, std::ostream& out) {
  const auto schema = Schema::load(o.schema);
  const auto data = load_csv(o.data, schema);
  const auto clusters = cluster_features(association_matrix(data, parse_eta(o.eta)), o.threshold);

  RunConfig rc("cluster", g.seed);
  rc.add("data", o.data);
  rc.add("schema", o.schema);
  rc.add("threshold", o.threshold);
  rc.add("eta", o.eta);
  rc.add("out", o.out);

  json doc = to_json(clusters, schema);
  doc["run_config"] = rc.to_json();
  if (o.out.empty())
    out << render(doc);
  else
    write_text(o.out, render(doc));
  if (g.pretty && !o.out.empty()) {
    for (const auto& c : doc["clusters"]) out << c.dump() << "\n";
  }
  return kExitOk;
}

int cmd_simulate(const SimulateOptions& o, const GlobalOptions& g, std::ostream& out) {
  Rng latent_rng = make_stream(g.seed, ~std::uint64_t{0});
  const auto latents = LatentSet::uniform(o.n_latents, o.dim, latent_rng);
  const auto schedule = SigmaSchedule::linear(o.horizon);
  SdeConfig config;
  config.steps = o.steps;
  config.seed = g.seed;
  config.trajectories = o.trajectories;
  config.noise = parse_noise_form(o.noise);
  const bool keep = !o.emit_trajectories.empty();
  const auto study = replication_study(latents, schedule, config, o.tolerance, keep);

  RunConfig rc("simulate", g.seed);
  rc.add("n-latents", o.n_latents);
  rc.add("dim", o.dim);
  rc.add("steps", o.steps);
  rc.add("trajectories", o.trajectories);
  rc.add("horizon", o.horizon);
  rc.add("tolerance", o.tolerance);
  rc.add("noise", o.noise);
  rc.add("emit-trajectories", o.emit_trajectories);
  rc.add("out", o.out);

  json doc = to_json(study);
  doc["kind"] = "simulate";
  doc["run_config"] = rc.to_json();
  if (keep) write_text(o.emit_trajectories, trajectories_csv(study, schedule, o.steps));
  if (o.out.empty())
    out << render(doc);
  else
    write_text(o.out, render(doc));
  if (g.pretty && !o.out.empty()) out << "replication fraction: " << percent(study.replication_fraction) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

json load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoFailure, "cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidArgument, path + " is not valid JSON: " + e.what());
  }
  if (!doc.contains("run_config") || !doc["run_config"].contains("argv"))
    fail(ErrorCode::InvalidArgument, path + " has no embedded run_config");
  return doc["run_config"];
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Memorization auditing, augmentation and fidelity scoring for synthetic tabular data", "tabmem"};
  app.fallthrough();
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (default: TABMEM_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--pretty", g.pretty, "Print a human-readable summary");

  AuditOptions audit_o;
  auto* audit_cmd = app.add_subcommand("audit", "Measure memorization of a synthetic table against its training data");
  audit_cmd->add_option("--train", audit_o.train, "Training CSV")->required()->check(CLI::ExistingFile);
  audit_cmd->add_option("--synthetic", audit_o.synthetic, "Synthetic CSV")->required()->check(CLI::ExistingFile);
  audit_cmd->add_option("--schema", audit_o.schema, "Schema JSON")->required()->check(CLI::ExistingFile);
  audit_cmd->add_option("--threshold", audit_o.threshold, "Distance-ratio threshold")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  audit_cmd->add_option("--bins", audit_o.bins, "Histogram bins")->capture_default_str()->check(CLI::PositiveNumber);
  audit_cmd->add_option("--out", audit_o.out, "Report JSON path")->required();
  audit_cmd->add_option("--histogram-csv", audit_o.histogram_csv, "Optional ratio histogram CSV path");

  AugmentOptions aug_o;
  auto* aug_cmd = app.add_subcommand("augment", "Append augmented rows to a training table");
  aug_cmd->add_option("--train", aug_o.train, "Training CSV")->required()->check(CLI::ExistingFile);
  aug_cmd->add_option("--schema", aug_o.schema, "Schema JSON")->required()->check(CLI::ExistingFile);
  aug_cmd->add_option("--mode", aug_o.mode, "cutmix | cutmixplus | ijf")
      ->capture_default_str()
      ->check(CLI::IsMember({"cutmix", "cutmixplus", "ijf"}));
  aug_cmd->add_option("--ratio", aug_o.ratio, "Augmented rows as a fraction of the training rows")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  aug_cmd->add_option("--cluster-threshold", aug_o.cluster_threshold, "Dissimilarity cut for feature clusters")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  aug_cmd->add_option("--eta", aug_o.eta, "Numerical-categorical association: sqrt | squared")
      ->capture_default_str()
      ->check(CLI::IsMember({"sqrt", "squared"}));
  aug_cmd->add_option("--out", aug_o.out, "Output CSV path")->required();

  FidelityOptions fid_o;
  auto* fid_cmd = app.add_subcommand("fidelity", "Score a synthetic table against real data");
  fid_cmd->add_option("--real", fid_o.real, "Real (training) CSV")->required()->check(CLI::ExistingFile);
  fid_cmd->add_option("--synthetic", fid_o.synthetic, "Synthetic CSV")->required()->check(CLI::ExistingFile);
  fid_cmd->add_option("--schema", fid_o.schema, "Schema JSON")->required()->check(CLI::ExistingFile);
  fid_cmd->add_option("--holdout", fid_o.holdout, "Holdout CSV; enables the DCR probability")
      ->check(CLI::ExistingFile);
  fid_cmd->add_option("--out", fid_o.out, "Report JSON path")->required();

  ClusterOptions cl_o;
  auto* cl_cmd = app.add_subcommand("cluster", "Show the feature clusters used by cutmixplus");
  cl_cmd->add_option("--data", cl_o.data, "CSV")->required()->check(CLI::ExistingFile);
  cl_cmd->add_option("--schema", cl_o.schema, "Schema JSON")->required()->check(CLI::ExistingFile);
  cl_cmd->add_option("--threshold", cl_o.threshold, "Dissimilarity cut")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  cl_cmd->add_option("--eta", cl_o.eta, "sqrt | squared")
      ->capture_default_str()
      ->check(CLI::IsMember({"sqrt", "squared"}));
  cl_cmd->add_option("--out", cl_o.out, "JSON path (default: standard output)");

  SimulateOptions sim_o;
  auto* sim_cmd = app.add_subcommand("simulate", "Backward SDE with the optimal score on random latents");
  sim_cmd->add_option("--n-latents", sim_o.n_latents, "Number of training latents")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--dim", sim_o.dim, "Latent dimension")->capture_default_str()->check(CLI::PositiveNumber);
  sim_cmd->add_option("--steps", sim_o.steps, "Euler steps")->capture_default_str()->check(CLI::PositiveNumber);
  sim_cmd->add_option("--trajectories", sim_o.trajectories, "Independent samples")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--horizon", sim_o.horizon, "T, with sigma(t) = t")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--tolerance", sim_o.tolerance, "Replication radius relative to the latent diameter")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--noise", sim_o.noise, "product | euler-maruyama")
      ->capture_default_str()
      ->check(CLI::IsMember({"product", "euler-maruyama"}));
  sim_cmd->add_option("--emit-trajectories", sim_o.emit_trajectories, "Optional per-step trajectory CSV path");
  sim_cmd->add_option("--out", sim_o.out, "JSON path (default: standard output)");

  std::string replay_from;
  auto* replay_cmd = app.add_subcommand("replay", "Re-run the command recorded in a report's run_config");
  replay_cmd->add_option("--from", replay_from, "Report or .run.json file")->required()->check(CLI::ExistingFile);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  if (g.threads > 0) set_thread_count(g.threads);

  try {
    if (*audit_cmd) return cmd_audit(audit_o, g, out);
    if (*aug_cmd) return cmd_augment(aug_o, g, out);
    if (*fid_cmd) return cmd_fidelity(fid_o, g, out);
    if (*cl_cmd) return cmd_cluster(cl_o, g, out);
    if (*sim_cmd) return cmd_simulate(sim_o, g, out);
    if (*replay_cmd) {
      const auto rc = load_run_config(replay_from);
      auto argv = rc["argv"].get<std::vector<std::string>>();
      if (!argv.empty() && argv.front() == "replay") fail(ErrorCode::InvalidArgument, "cannot replay a replay");
      if (g.threads > 0) {
        argv.push_back("--threads");
        argv.push_back(std::to_string(g.threads));
      }
      if (g.pretty) argv.push_back("--pretty");
      return run(argv, out, err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitUsage;
}

}  // namespace tabmem::cli
