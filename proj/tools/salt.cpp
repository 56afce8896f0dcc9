// Command-line front end: run experiments, tune thresholds, and export the
// synthetic scenarios.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "salt/dataio.hpp"
#include "salt/experiment.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Overrides {
  std::string method;
  double budget = 0.0;
  long seed_size = 0;
  double tau = 0.0;
  int k = 0;
  int ensemble_size = 0;
  long batch_size = 0;
  long reps = 0;
  std::uint64_t master_seed = 0;
  std::string out_dir;
  bool no_prior_filter = false;
  bool no_lambda_reduction = false;
  bool no_self_labeling = false;
  bool no_bootstrap = false;
};

void add_override_flags(CLI::App* cmd, std::string& config_path,
                        Overrides& ov) {
  cmd->add_option("--config", config_path, "JSON config file");
  cmd->add_option("--method", ov.method, "method to run");
  cmd->add_option("--budget", ov.budget, "oracle budget as a stream fraction");
  cmd->add_option("--seed-size", ov.seed_size, "initial labeled set size");
  cmd->add_option("--tau", ov.tau, "decision threshold (tau for sl2s)");
  cmd->add_option("--k", ov.k, "prior window length");
  cmd->add_option("--ensemble-size", ov.ensemble_size, "committee size");
  cmd->add_option("--batch-size", ov.batch_size, "retrain batch size");
  cmd->add_option("--reps", ov.reps, "number of repetitions");
  cmd->add_option("--master-seed", ov.master_seed, "master RNG seed");
  cmd->add_option("--out-dir", ov.out_dir, "output directory");
  cmd->add_flag("--no-prior-filter", ov.no_prior_filter,
                "disable the prior filter");
  cmd->add_flag("--no-lambda-reduction", ov.no_lambda_reduction,
                "keep lambda above 1 after budget exhaustion");
  cmd->add_flag("--no-self-labeling", ov.no_self_labeling,
                "query-only ablation");
  cmd->add_flag("--no-bootstrap", ov.no_bootstrap,
                "train members on the full pool");
}

salt::ExperimentConfig build_config(const CLI::App* cmd,
                                    const std::string& config_path,
                                    const Overrides& ov) {
  json j = json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in)
      throw std::invalid_argument("config: cannot open " + config_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
      j = json::parse(buf.str());
    } catch (const json::parse_error& e) {
      throw std::invalid_argument(std::string("config: ") + e.what());
    }
    if (!j.is_object())
      throw std::invalid_argument("config: top level must be an object");
  }

  if (cmd->count("--method")) j["method"] = ov.method;
  if (cmd->count("--budget")) j["budget"] = ov.budget;
  if (cmd->count("--seed-size")) j["seed_size"] = ov.seed_size;
  if (cmd->count("--tau")) j["threshold"] = ov.tau;
  if (cmd->count("--k")) j["k"] = ov.k;
  if (cmd->count("--ensemble-size")) j["ensemble_size"] = ov.ensemble_size;
  if (cmd->count("--batch-size")) j["batch_size"] = ov.batch_size;
  if (cmd->count("--reps")) j["repetitions"] = ov.reps;
  if (cmd->count("--master-seed")) j["master_seed"] = ov.master_seed;
  if (cmd->count("--out-dir")) j["out_dir"] = ov.out_dir;
  if (ov.no_prior_filter) j["ablation"]["disable_prior_filter"] = true;
  if (ov.no_lambda_reduction) j["ablation"]["disable_lambda_reduction"] = true;
  if (ov.no_self_labeling) j["ablation"]["disable_self_labeling"] = true;
  if (ov.no_bootstrap) j["ablation"]["disable_bootstrap"] = true;

  return salt::ExperimentConfig::from_json_text(j.dump());
}

int cmd_run(const CLI::App* cmd, const std::string& config_path,
            const Overrides& ov) {
  const salt::ExperimentConfig config = build_config(cmd, config_path, ov);
  const salt::SummaryRow row = salt::run_experiment(config);
  std::cout << salt::SummaryRow::csv_header() << '\n'
            << row.to_csv_row() << '\n';
  return 0;
}

int cmd_tune(const CLI::App* cmd, const std::string& config_path,
             const Overrides& ov) {
  const salt::ExperimentConfig config = build_config(cmd, config_path, ov);
  const salt::TuneResult result = salt::run_tuning(config);
  std::cout << "best_threshold " << result.best_threshold << '\n'
            << "best_score " << result.best_score << '\n';
  return 0;
}

int cmd_scenario(const std::string& name, long seed_size, long stream_size,
                 long test_size, std::uint64_t master_seed,
                 const std::string& out_dir) {
  salt::SyntheticScenario scenario;
  scenario.kind = salt::scenario_kind_from_name(name);
  scenario.seed_size = seed_size;
  scenario.stream_size = stream_size;
  scenario.test_size = test_size;
  scenario.rng_seed = master_seed;
  const salt::ScenarioData data = salt::generate_scenario(scenario);

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  salt::write_csv((dir / "seed.csv").string(), data.seed_X, data.seed_y);
  salt::write_csv((dir / "stream.csv").string(), data.stream_X, data.stream_y);
  salt::write_csv((dir / "test.csv").string(), data.test_X, data.test_y);

  salt::DatasetSchema schema;
  schema.numeric_columns = {"x0", "x1"};
  schema.target_column = "label";
  std::ofstream schema_out(dir / "schema.json", std::ios::binary);
  schema_out << schema.to_json_text();

  std::cout << "wrote seed.csv, stream.csv, test.csv, schema.json to "
            << out_dir << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"selective sampling with self-labeling"};
  app.require_subcommand(1);

  std::string run_config, tune_config;
  Overrides run_ov, tune_ov;
  CLI::App* run = app.add_subcommand("run", "execute an experiment");
  add_override_flags(run, run_config, run_ov);
  CLI::App* tune =
      app.add_subcommand("tune", "random-search the method threshold");
  add_override_flags(tune, tune_config, tune_ov);

  std::string sc_name, sc_out = "scenario_out";
  long sc_seed_size = 300, sc_stream_size = 3000, sc_test_size = 1000;
  std::uint64_t sc_master_seed = 1;
  CLI::App* scenario =
      app.add_subcommand("scenario", "export a synthetic scenario as CSV");
  scenario->add_option("--name", sc_name,
                       "three_class_easy or two_class_imbalanced")
      ->required();
  scenario->add_option("--seed-size", sc_seed_size, "seed set size");
  scenario->add_option("--stream-size", sc_stream_size, "stream length");
  scenario->add_option("--test-size", sc_test_size, "test set size");
  scenario->add_option("--master-seed", sc_master_seed, "RNG seed");
  scenario->add_option("--out-dir", sc_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return cmd_run(run, run_config, run_ov);
    if (tune->parsed()) return cmd_tune(tune, tune_config, tune_ov);
    return cmd_scenario(sc_name, sc_seed_size, sc_stream_size, sc_test_size,
                        sc_master_seed, sc_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
