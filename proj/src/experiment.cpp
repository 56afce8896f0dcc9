#include "salt/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "salt/committee.hpp"
#include "salt/measures.hpp"
#include "salt/metrics.hpp"
#include "salt/selective.hpp"
#include "salt/sl2s.hpp"

namespace salt {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string> kMethodNames = {
    "sl2s",          "preliminary",
    "random",        "fixed_uncertainty",
    "variable_uncertainty", "classification_margin",
    "vote_entropy",  "consensus_entropy",
    "max_disagreement", "min_margin",
    "labeled",       "labeled_ensemble"};

namespace {

bool is_measure_method(const std::string& method) {
  for (MeasureKind kind :
       {MeasureKind::Random, MeasureKind::FixedUncertainty,
        MeasureKind::VariableUncertainty, MeasureKind::ClassificationMargin,
        MeasureKind::VoteEntropy, MeasureKind::ConsensusEntropy,
        MeasureKind::MaxDisagreement, MeasureKind::MinMargin}) {
    if (measure_kind_name(kind) == method) return true;
  }
  return false;
}

double default_threshold(const std::string& method, double budget) {
  if (method == "random") return budget;
  if (method == "preliminary") return 0.95;
  if (method == "labeled" || method == "labeled_ensemble") return 0.0;
  // Tunable methods default to the midpoint of their search interval; for
  // the entropy-family methods that midpoint sits above ln C and never
  // triggers, so tuning is the intended way to pick a real threshold.
  const auto [lo, hi] = default_tuning_interval(method);
  return 0.5 * (lo + hi);
}

void check_keys(const json& j, const std::vector<std::string>& allowed,
                const std::string& where) {
  for (const auto& item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) ==
        allowed.end())
      throw std::invalid_argument("config: unknown key '" + item.key() +
                                  "' in " + where);
  }
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(10);
  out << v;
  return out.str();
}

}  // namespace

std::string DatasetSpec::display_name() const {
  if (kind == "scenario") return name;
  return fs::path(path).stem().string();
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }

  ExperimentConfig cfg;
  try {
    check_keys(j, {"method", "dataset", "budget", "seed_size",
                   "target_initial_accuracy", "repetitions", "master_seed",
                   "out_dir", "threshold", "k", "ensemble_size", "batch_size",
                   "checkpoint_every", "variable_step", "query_threshold",
                   "network", "ablation", "tuner"},
               "the top level");

    cfg.method = j.value("method", cfg.method);
    if (j.contains("dataset")) {
      const json& d = j.at("dataset");
      check_keys(d, {"kind", "name", "stream_size", "test_size", "path",
                     "schema", "test_fraction"},
                 "dataset");
      cfg.dataset.kind = d.value("kind", cfg.dataset.kind);
      cfg.dataset.name = d.value("name", cfg.dataset.name);
      cfg.dataset.stream_size = d.value("stream_size", cfg.dataset.stream_size);
      cfg.dataset.test_size = d.value("test_size", cfg.dataset.test_size);
      cfg.dataset.path = d.value("path", cfg.dataset.path);
      cfg.dataset.schema_path = d.value("schema", cfg.dataset.schema_path);
      cfg.dataset.test_fraction =
          d.value("test_fraction", cfg.dataset.test_fraction);
    }
    cfg.budget = j.value("budget", cfg.budget);
    cfg.seed_size = j.value("seed_size", cfg.seed_size);
    cfg.target_initial_accuracy =
        j.value("target_initial_accuracy", cfg.target_initial_accuracy);
    cfg.repetitions = j.value("repetitions", cfg.repetitions);
    cfg.master_seed = j.value("master_seed", cfg.master_seed);
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    cfg.threshold = j.value("threshold", cfg.threshold);
    cfg.k = j.value("k", cfg.k);
    cfg.ensemble_size = j.value("ensemble_size", cfg.ensemble_size);
    cfg.batch_size = j.value("batch_size", cfg.batch_size);
    cfg.checkpoint_every = j.value("checkpoint_every", cfg.checkpoint_every);
    cfg.variable_step = j.value("variable_step", cfg.variable_step);
    cfg.query_threshold = j.value("query_threshold", cfg.query_threshold);

    // Desk-scale network defaults; the hidden width default depends on the
    // method, so it is resolved below.
    cfg.network.hidden_layers.clear();
    cfg.network.max_iterations = 300;
    bool hidden_given = false;
    if (j.contains("network")) {
      cfg.network_given = true;
      const json& n = j.at("network");
      check_keys(n, {"hidden_layers", "learning_rate", "max_iterations",
                     "warm_start"},
                 "network");
      if (n.contains("hidden_layers")) {
        cfg.network.hidden_layers =
            n.at("hidden_layers").get<std::vector<int>>();
        hidden_given = true;
      }
      cfg.network.learning_rate =
          n.value("learning_rate", cfg.network.learning_rate);
      cfg.network.max_iterations =
          n.value("max_iterations", cfg.network.max_iterations);
      cfg.network.warm_start = n.value("warm_start", cfg.network.warm_start);
    }
    if (!hidden_given)
      cfg.network.hidden_layers = (cfg.method == "preliminary")
                                      ? std::vector<int>{5}
                                      : std::vector<int>{10};

    if (j.contains("ablation")) {
      const json& a = j.at("ablation");
      check_keys(a, {"disable_prior_filter", "disable_lambda_reduction",
                     "disable_self_labeling", "disable_bootstrap"},
                 "ablation");
      cfg.disable_prior_filter =
          a.value("disable_prior_filter", cfg.disable_prior_filter);
      cfg.disable_lambda_reduction =
          a.value("disable_lambda_reduction", cfg.disable_lambda_reduction);
      cfg.disable_self_labeling =
          a.value("disable_self_labeling", cfg.disable_self_labeling);
      cfg.disable_bootstrap =
          a.value("disable_bootstrap", cfg.disable_bootstrap);
    }

    if (j.contains("tuner")) {
      cfg.tuner_given = true;
      const json& t = j.at("tuner");
      check_keys(t, {"interval", "num_samples", "seeds_per_sample"}, "tuner");
      if (t.contains("interval")) {
        const auto interval = t.at("interval").get<std::vector<double>>();
        if (interval.size() != 2)
          throw std::invalid_argument(
              "config: tuner interval must be [lo, hi]");
        cfg.tuner_lo = interval[0];
        cfg.tuner_hi = interval[1];
      } else {
        std::tie(cfg.tuner_lo, cfg.tuner_hi) =
            default_tuning_interval(cfg.method);
      }
      cfg.tuner_num_samples = t.value("num_samples", cfg.tuner_num_samples);
      cfg.tuner_seeds_per_sample =
          t.value("seeds_per_sample", cfg.tuner_seeds_per_sample);
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }

  if (cfg.threshold < 0.0)
    cfg.threshold = default_threshold(cfg.method, cfg.budget);
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

std::string ExperimentConfig::to_json_text() const {
  json d{{"kind", dataset.kind}};
  if (dataset.kind == "scenario") {
    d["name"] = dataset.name;
    d["stream_size"] = dataset.stream_size;
    d["test_size"] = dataset.test_size;
  } else {
    d["path"] = dataset.path;
    d["schema"] = dataset.schema_path;
    d["test_fraction"] = dataset.test_fraction;
  }
  json j{{"method", method},
         {"dataset", d},
         {"budget", budget},
         {"seed_size", seed_size},
         {"target_initial_accuracy", target_initial_accuracy},
         {"repetitions", repetitions},
         {"master_seed", master_seed},
         {"out_dir", out_dir},
         {"threshold", threshold},
         {"k", k},
         {"ensemble_size", ensemble_size},
         {"batch_size", batch_size},
         {"checkpoint_every", checkpoint_every},
         {"variable_step", variable_step},
         {"query_threshold", query_threshold},
         {"network",
          {{"hidden_layers", network.hidden_layers},
           {"learning_rate", network.learning_rate},
           {"max_iterations", network.max_iterations},
           {"warm_start", network.warm_start}}},
         {"ablation",
          {{"disable_prior_filter", disable_prior_filter},
           {"disable_lambda_reduction", disable_lambda_reduction},
           {"disable_self_labeling", disable_self_labeling},
           {"disable_bootstrap", disable_bootstrap}}}};
  if (tuner_given) {
    j["tuner"] = {{"interval", {tuner_lo, tuner_hi}},
                  {"num_samples", tuner_num_samples},
                  {"seeds_per_sample", tuner_seeds_per_sample}};
  }
  return j.dump();
}

std::string ExperimentConfig::hash() const { return fnv1a_hex(to_json_text()); }

void ExperimentConfig::validate() const {
  if (std::find(kMethodNames.begin(), kMethodNames.end(), method) ==
      kMethodNames.end())
    throw std::invalid_argument("config: unknown method '" + method + "'");

  if (dataset.kind == "scenario") {
    scenario_kind_from_name(dataset.name);
    if (dataset.stream_size < 1 || dataset.test_size < 1)
      throw std::invalid_argument(
          "config: scenario stream_size and test_size must be positive");
  } else if (dataset.kind == "csv") {
    if (dataset.path.empty() || dataset.schema_path.empty())
      throw std::invalid_argument(
          "config: csv dataset needs both path and schema");
    if (!(dataset.test_fraction > 0.0 && dataset.test_fraction < 1.0))
      throw std::invalid_argument(
          "config: test_fraction must be in (0, 1)");
  } else {
    throw std::invalid_argument("config: dataset kind must be scenario or "
                                "csv, got '" + dataset.kind + "'");
  }

  if (!(budget >= 0.0 && budget <= 1.0))
    throw std::invalid_argument("config: budget must be in [0, 1]");
  if (seed_size < 2)
    throw std::invalid_argument("config: seed_size must be >= 2");
  if (target_initial_accuracy >= 0.0 &&
      !(target_initial_accuracy > 0.0 && target_initial_accuracy <= 1.0))
    throw std::invalid_argument(
        "config: target_initial_accuracy must be in (0, 1]");
  if (repetitions < 1)
    throw std::invalid_argument("config: repetitions must be >= 1");
  if (k < 1) throw std::invalid_argument("config: k must be >= 1");
  if (ensemble_size < 1)
    throw std::invalid_argument("config: ensemble_size must be >= 1");
  if (batch_size < 1)
    throw std::invalid_argument("config: batch_size must be >= 1");
  if (checkpoint_every < 1)
    throw std::invalid_argument("config: checkpoint_every must be >= 1");
  if (!(variable_step > 0.0 && variable_step < 1.0))
    throw std::invalid_argument("config: variable_step must be in (0, 1)");

  if (is_measure_method(method) &&
      measure_uses_committee(measure_kind_from_name(method)) &&
      ensemble_size < 2)
    throw std::invalid_argument("config: " + method +
                                " needs ensemble_size >= 2");

  if (method == "sl2s" && !(threshold > 0.0 && threshold < 1.0))
    throw std::invalid_argument("config: sl2s threshold (tau) must be in "
                                "(0, 1)");
  if (method == "random" && !(threshold >= 0.0 && threshold <= 1.0))
    throw std::invalid_argument(
        "config: random threshold (query rate) must be in [0, 1]");
  if (method == "preliminary") {
    if (!(threshold > 0.0 && threshold < 1.0))
      throw std::invalid_argument(
          "config: preliminary threshold must be in (0, 1)");
    if (!(query_threshold > 0.0 && query_threshold <= threshold))
      throw std::invalid_argument(
          "config: query_threshold must be in (0, threshold]");
  }
  if (!std::isfinite(threshold))
    throw std::invalid_argument("config: threshold must be finite");

  for (int width : network.hidden_layers)
    if (width < 1)
      throw std::invalid_argument(
          "config: hidden layer widths must be >= 1");
  if (!(network.learning_rate > 0.0))
    throw std::invalid_argument("config: learning_rate must be positive");
  if (network.max_iterations < 1)
    throw std::invalid_argument("config: max_iterations must be >= 1");

  if (tuner_given) {
    if (!(tuner_lo < tuner_hi))
      throw std::invalid_argument("config: tuner interval must have lo < hi");
    if (tuner_num_samples < 1 || tuner_seeds_per_sample < 1)
      throw std::invalid_argument(
          "config: tuner num_samples and seeds_per_sample must be >= 1");
  }
}

// ---------------------------------------------------------------------------
// Data preparation
// ---------------------------------------------------------------------------

namespace {

// Candidate seed rows beyond the requested size exist only for the
// grow-until-target mode.
constexpr long kMaxGrownSeed = 2000;

LabeledPool make_seed_pool(const MatrixXd& X, const VectorXi& y, long n,
                           int num_classes) {
  LabeledPool pool(num_classes);
  for (long i = 0; i < n; ++i)
    pool.append(X.row(i).transpose(), y[i], 1.0, LabelSource::Seed);
  return pool;
}

}  // namespace

PreparedData prepare_data(const ExperimentConfig& config, long repetition) {
  const std::uint64_t data_seed =
      derive_seed(config.master_seed, 0, static_cast<std::uint64_t>(repetition));
  const bool grow = config.target_initial_accuracy >= 0.0;

  if (config.dataset.kind == "scenario") {
    SyntheticScenario scenario;
    scenario.kind = scenario_kind_from_name(config.dataset.name);
    scenario.seed_size = grow ? kMaxGrownSeed : config.seed_size;
    scenario.stream_size = config.dataset.stream_size;
    scenario.test_size = config.dataset.test_size;
    scenario.rng_seed = data_seed;
    ScenarioData data = generate_scenario(scenario);

    PreparedData out;
    out.seed_X = std::move(data.seed_X);
    out.seed_y = std::move(data.seed_y);
    out.stream = make_stream_samples(data.stream_X, data.stream_y);
    out.test_X = std::move(data.test_X);
    out.test_y = std::move(data.test_y);
    out.num_classes = data.num_classes;
    return out;
  }

  // CSV: shuffle all rows, carve out the test split, fit the preprocessing
  // on the remaining (train) rows, then split train into seed candidates and
  // stream.
  const DatasetSchema schema = DatasetSchema::load(config.dataset.schema_path);
  RawTable table = load_csv(config.dataset.path, schema);
  table = drop_minority_classes(table, schema.classes_to_drop);

  std::vector<long> order(static_cast<std::size_t>(table.rows));
  std::iota(order.begin(), order.end(), 0L);
  Rng shuffle_rng(derive_seed(data_seed, 10));
  std::shuffle(order.begin(), order.end(), shuffle_rng);

  const long test_n =
      budget_fraction_to_count(config.dataset.test_fraction, table.rows);
  if (test_n < 1 || test_n >= table.rows)
    throw std::invalid_argument("config: test_fraction leaves no usable "
                                "test/train split");
  const std::vector<long> test_rows(order.begin(), order.begin() + test_n);
  const std::vector<long> train_rows(order.begin() + test_n, order.end());

  const FittedTransform transform = fit_transform(table, train_rows);
  MatrixXd train_X = transform.transform(table, train_rows);
  VectorXi train_y = transform.encode_labels(table, train_rows);
  MatrixXd test_X = transform.transform(table, test_rows);
  VectorXi test_y = transform.encode_labels(table, test_rows);

  if (schema.features_to_drop_by_correlation > 0) {
    const std::vector<int> gone = most_correlated_features(
        train_X, train_y, schema.features_to_drop_by_correlation);
    train_X = drop_columns(train_X, gone);
    test_X = drop_columns(test_X, gone);
  }

  const long train_n = train_X.rows();
  const long seed_n =
      grow ? std::min(kMaxGrownSeed, train_n - 1) : config.seed_size;
  if (seed_n >= train_n)
    throw std::invalid_argument(
        "config: seed_size " + std::to_string(seed_n) +
        " does not leave any stream rows (train split has " +
        std::to_string(train_n) + ")");

  PreparedData out;
  out.seed_X = train_X.topRows(seed_n);
  out.seed_y = train_y.head(seed_n);
  out.stream = make_stream_samples(train_X.bottomRows(train_n - seed_n),
                                   train_y.tail(train_n - seed_n));
  out.test_X = std::move(test_X);
  out.test_y = std::move(test_y);
  out.num_classes = transform.num_classes();
  return out;
}

// ---------------------------------------------------------------------------
// Single run
// ---------------------------------------------------------------------------

namespace {

double test_bacc(const Committee& committee, const MatrixXd& test_X,
                 const VectorXi& test_y, int num_classes) {
  return balanced_accuracy(test_y, committee.predict_batch(test_X),
                           num_classes);
}

// Grow the seed pool from 10 records in steps of 10 until the committee
// reaches the target test accuracy (or candidates run out); returns the pool
// and leaves the committee trained on it.
LabeledPool grow_seed_pool(const PreparedData& data, Committee& committee,
                           double target) {
  const long max_n = data.seed_X.rows();
  long n = std::min<long>(10, max_n);
  while (true) {
    LabeledPool pool =
        make_seed_pool(data.seed_X, data.seed_y, n, data.num_classes);
    if (pool.distinct_classes() >= 2) {
      committee.train(pool);
      if (test_bacc(committee, data.test_X, data.test_y, data.num_classes) >=
              target ||
          n >= max_n)
        return pool;
    } else if (n >= max_n) {
      return pool;  // hopeless; let the caller's train() report it
    }
    n = std::min(n + 10, max_n);
  }
}

ExperimentTrace run_reference(const ExperimentConfig& config,
                              const PreparedData& data,
                              std::uint64_t committee_seed) {
  // "labeled" / "labeled_ensemble": the whole train split with its true
  // labels, no streaming.
  LabeledPool pool = make_seed_pool(data.seed_X, data.seed_y,
                                    data.seed_X.rows(), data.num_classes);
  for (const Sample& s : data.stream)
    pool.append(s.features, *s.true_label, 1.0, LabelSource::Seed);

  const bool ensemble = config.method == "labeled_ensemble";
  Committee committee(ensemble ? config.ensemble_size : 1, config.network,
                      committee_seed,
                      ensemble && !config.disable_bootstrap);
  committee.train(pool);

  ExperimentTrace trace;
  trace.method = config.method;
  trace.threshold = 0.0;
  trace.seed_size = static_cast<long>(pool.size());
  trace.budget_total = 0;
  trace.checkpoints.push_back(
      {0, test_bacc(committee, data.test_X, data.test_y, data.num_classes)});
  return trace;
}

}  // namespace

ExperimentTrace run_single(const ExperimentConfig& config, long repetition) {
  config.validate();
  const PreparedData data = prepare_data(config, repetition);
  const std::uint64_t committee_seed = derive_seed(
      config.master_seed, 1, static_cast<std::uint64_t>(repetition));

  ExperimentTrace trace;
  if (config.method == "labeled" || config.method == "labeled_ensemble") {
    trace = run_reference(config, data, committee_seed);
  } else {
    const bool single_model = config.method == "preliminary";
    Committee committee(single_model ? 1 : config.ensemble_size,
                        config.network, committee_seed,
                        !single_model && !config.disable_bootstrap);

    LabeledPool pool(data.num_classes);
    if (config.target_initial_accuracy >= 0.0) {
      pool = grow_seed_pool(data, committee, config.target_initial_accuracy);
    } else {
      pool = make_seed_pool(data.seed_X, data.seed_y, data.seed_X.rows(),
                            data.num_classes);
      committee.train(pool);
    }

    UnlabeledStream stream(data.stream);
    Budget budget(budget_fraction_to_count(
        config.budget, static_cast<long>(data.stream.size())));
    LoopConfig loop{config.batch_size, config.checkpoint_every};

    if (config.method == "sl2s") {
      Sl2sConfig sl2s;
      sl2s.tau = config.threshold;
      sl2s.k = config.k;
      sl2s.disable_prior_filter = config.disable_prior_filter;
      sl2s.disable_lambda_reduction = config.disable_lambda_reduction;
      sl2s.disable_self_labeling = config.disable_self_labeling;
      sl2s.loop = loop;
      trace = sl2s_run(pool, stream, committee, sl2s, budget, data.test_X,
                       data.test_y);
    } else if (config.method == "preliminary") {
      PreliminaryConfig pre;
      pre.self_label_threshold = config.threshold;
      pre.query_threshold = config.query_threshold;
      pre.use_prior_filter = !config.disable_prior_filter;
      pre.k = config.k;
      pre.loop = loop;
      trace = preliminary_run(pool, stream, committee, pre, budget,
                              data.test_X, data.test_y);
    } else {
      Measure measure(measure_kind_from_name(config.method), config.threshold,
                      config.variable_step);
      Rng run_rng(derive_seed(config.master_seed, 2,
                              static_cast<std::uint64_t>(repetition)));
      trace = selective_sampling_run(pool, stream, committee, measure, budget,
                                     loop, data.test_X, data.test_y, run_rng);
    }
  }

  trace.dataset = config.dataset.display_name();
  trace.budget_fraction = config.budget;
  trace.master_seed = config.master_seed;
  trace.repetition = repetition;
  trace.config_hash = config.hash();
  return trace;
}

// ---------------------------------------------------------------------------
// Summary + experiment driver
// ---------------------------------------------------------------------------

std::string SummaryRow::csv_header() {
  return "method,dataset,budget,seed_size,mean_bacc,std_bacc,queries_used,"
         "self_labels,wrong_fraction,config_hash";
}

std::string SummaryRow::to_csv_row() const {
  std::ostringstream out;
  out << method << ',' << dataset << ',' << format_double(budget) << ','
      << seed_size << ',' << format_double(mean_bacc) << ','
      << format_double(std_bacc) << ',' << format_double(queries_used) << ','
      << format_double(self_labels) << ',' << format_double(wrong_fraction)
      << ',' << config_hash;
  return out.str();
}

SummaryRow summarize_traces(const std::vector<ExperimentTrace>& traces) {
  if (traces.empty())
    throw std::invalid_argument("summarize_traces: no traces");

  SummaryRow row;
  row.method = traces.front().method;
  row.dataset = traces.front().dataset;
  row.budget = traces.front().budget_fraction;
  row.seed_size = traces.front().seed_size;
  row.config_hash = traces.front().config_hash;

  const double n = static_cast<double>(traces.size());
  std::vector<double> baccs;
  for (const auto& t : traces) {
    baccs.push_back(t.final_test_balanced_accuracy());
    row.queries_used += static_cast<double>(t.queries_used()) / n;
    row.self_labels += static_cast<double>(t.self_labels()) / n;
    row.wrong_fraction += t.final_wrong_fraction() / n;
  }
  row.mean_bacc =
      std::accumulate(baccs.begin(), baccs.end(), 0.0) / n;
  double ss = 0.0;
  for (double b : baccs) ss += (b - row.mean_bacc) * (b - row.mean_bacc);
  row.std_bacc = traces.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return row;
}

SummaryRow run_experiment(const ExperimentConfig& config) {
  config.validate();
  fs::create_directories(config.out_dir);

  std::vector<ExperimentTrace> traces;
  for (long rep = 0; rep < config.repetitions; ++rep) {
    ExperimentTrace trace = run_single(config, rep);
    const std::string name = config.method + "_" +
                             config.dataset.display_name() + "_rep" +
                             std::to_string(rep) + ".jsonl";
    trace.save((fs::path(config.out_dir) / name).string());
    traces.push_back(std::move(trace));
  }

  const SummaryRow row = summarize_traces(traces);

  const fs::path summary_path = fs::path(config.out_dir) / "summary.csv";
  const bool fresh = !fs::exists(summary_path);
  std::ofstream out(summary_path, std::ios::app | std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open for writing: " +
                             summary_path.string());
  if (fresh) out << SummaryRow::csv_header() << '\n';
  out << row.to_csv_row() << '\n';
  if (!out) throw std::runtime_error("write failed: " + summary_path.string());

  std::ofstream cfg_out(
      fs::path(config.out_dir) / ("config_" + config.hash() + ".json"),
      std::ios::binary);
  cfg_out << config.to_json_text() << '\n';
  return row;
}

TuneResult run_tuning(const ExperimentConfig& config) {
  config.validate();

  TunerSpec spec;
  spec.method = config.method;
  if (config.tuner_given) {
    spec.lo = config.tuner_lo;
    spec.hi = config.tuner_hi;
    spec.num_samples = config.tuner_num_samples;
    spec.seeds_per_sample = config.tuner_seeds_per_sample;
  } else {
    std::tie(spec.lo, spec.hi) = default_tuning_interval(config.method);
  }
  spec.rng_seed = derive_seed(config.master_seed, 3);

  fs::create_directories(config.out_dir);
  const fs::path table_path =
      fs::path(config.out_dir) / ("tuning_" + config.method + ".json");

  auto persist = [&](const std::vector<TuneEntry>& table,
                     const TuneResult* result) {
    json entries = json::array();
    for (const auto& e : table)
      entries.push_back({{"threshold", e.threshold},
                         {"scores", e.scores},
                         {"mean_score", e.mean_score()}});
    json j{{"method", config.method},
           {"config_hash", config.hash()},
           {"interval", {spec.lo, spec.hi}},
           {"table", entries}};
    if (result) {
      j["best_threshold"] = result->best_threshold;
      j["best_score"] = result->best_score;
    }
    std::ofstream out(table_path, std::ios::binary);
    out << j.dump(2) << '\n';
  };

  auto run_fn = [&](double threshold, std::uint64_t run_seed) {
    ExperimentConfig c = config;
    c.threshold = threshold;
    c.master_seed = run_seed;
    return run_single(c, 0).final_test_balanced_accuracy();
  };

  const TuneResult result = random_search(
      spec, run_fn,
      [&](const std::vector<TuneEntry>& table) { persist(table, nullptr); });
  persist(result.table, &result);
  return result;
}

}  // namespace salt
