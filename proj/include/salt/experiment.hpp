#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "salt/dataio.hpp"
#include "salt/mlp.hpp"
#include "salt/trace.hpp"
#include "salt/tuning.hpp"
#include "salt/types.hpp"

namespace salt {

extern const std::vector<std::string> kMethodNames;

struct DatasetSpec {
  std::string kind = "scenario";  // "scenario" | "csv"
  // scenario
  std::string name = "three_class_easy";
  long stream_size = 3000;
  long test_size = 1000;
  // csv
  std::string path;
  std::string schema_path;
  double test_fraction = 0.2;

  std::string display_name() const;
};

// A fully resolved experiment description. Free-standing defaults are desk
// scale (small networks, few iterations) so a full run finishes in minutes
// on one core; larger studies can set their own values in the config file.
struct ExperimentConfig {
  std::string method = "sl2s";
  DatasetSpec dataset;
  double budget = 0.3;     // fraction of the stream length
  long seed_size = 300;
  double target_initial_accuracy = -1.0;  // < 0: use seed_size as given
  long repetitions = 5;
  std::uint64_t master_seed = 1;
  std::string out_dir = "results";
  double threshold = -1.0;  // resolved to a per-method default when < 0
  int k = 50;
  int ensemble_size = 9;
  long batch_size = 100;
  long checkpoint_every = 50;
  double variable_step = 0.01;
  double query_threshold = 0.7;  // preliminary preset only
  NetworkConfig network;
  bool network_given = false;
  bool disable_prior_filter = false;
  bool disable_lambda_reduction = false;
  bool disable_self_labeling = false;
  bool disable_bootstrap = false;
  // tuner block (tune command)
  bool tuner_given = false;
  double tuner_lo = 0.0;
  double tuner_hi = 1.0;
  int tuner_num_samples = 20;
  int tuner_seeds_per_sample = 3;

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig load(const std::string& path);
  std::string to_json_text() const;  // canonical resolved form
  std::string hash() const;          // FNV-1a of the canonical form
  void validate() const;
};

// Seed candidates + stream + test split for one repetition. Stream samples
// carry the hidden ground truth needed by the oracle and the label-quality
// metrics. Seed rows beyond the requested size exist only in the
// grow-until-target mode.
struct PreparedData {
  MatrixXd seed_X;
  VectorXi seed_y;
  std::vector<Sample> stream;
  MatrixXd test_X;
  VectorXi test_y;
  int num_classes = 0;
};

PreparedData prepare_data(const ExperimentConfig& config, long repetition);

// One repetition end to end: prepare data, train the learner on the seed
// pool, run the method's stream loop, return the trace (not yet saved).
ExperimentTrace run_single(const ExperimentConfig& config, long repetition);

struct SummaryRow {
  std::string method;
  std::string dataset;
  double budget = 0.0;
  long seed_size = 0;
  double mean_bacc = 0.0;
  double std_bacc = 0.0;  // sample standard deviation
  double queries_used = 0.0;    // means across repetitions
  double self_labels = 0.0;
  double wrong_fraction = 0.0;
  std::string config_hash;

  static std::string csv_header();
  std::string to_csv_row() const;
};

// Pure function of the traces, so summaries can be recomputed offline.
SummaryRow summarize_traces(const std::vector<ExperimentTrace>& traces);

// All repetitions: one trace file per run plus a row appended to
// <out_dir>/summary.csv; the resolved config is saved alongside.
SummaryRow run_experiment(const ExperimentConfig& config);

// Random-search tuning of the method threshold; every evaluation is one full
// run scored by final test balanced accuracy. The score table is persisted
// to <out_dir>/tuning_<method>.json as it grows.
TuneResult run_tuning(const ExperimentConfig& config);

}  // namespace salt
