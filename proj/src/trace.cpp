#include "salt/trace.hpp"

#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace salt {

using nlohmann::json;

std::string decision_name(Decision d) {
  switch (d) {
    case Decision::Query: return "query";
    case Decision::SelfLabel: return "self_label";
    case Decision::Skip: return "skip";
  }
  throw std::logic_error("decision_name: unknown decision");
}

Decision decision_from_name(const std::string& name) {
  if (name == "query") return Decision::Query;
  if (name == "self_label") return Decision::SelfLabel;
  if (name == "skip") return Decision::Skip;
  throw std::invalid_argument("unknown decision: " + name);
}

long ExperimentTrace::queries_used() const {
  long n = 0;
  for (const auto& r : records) n += r.decision == Decision::Query;
  return n;
}

long ExperimentTrace::self_labels() const {
  long n = 0;
  for (const auto& r : records) n += r.decision == Decision::SelfLabel;
  return n;
}

long ExperimentTrace::final_pool_size() const {
  if (records.empty()) return seed_size;
  const auto& h = records.back().pool_class_histogram;
  return std::accumulate(h.begin(), h.end(), 0L);
}

long ExperimentTrace::final_wrong_count() const {
  return records.empty() ? 0 : records.back().wrong_label_count;
}

double ExperimentTrace::final_wrong_fraction() const {
  const long size = final_pool_size();
  return size == 0 ? 0.0
                   : static_cast<double>(final_wrong_count()) /
                         static_cast<double>(size);
}

double ExperimentTrace::final_test_balanced_accuracy() const {
  if (checkpoints.empty())
    throw std::logic_error("ExperimentTrace: no checkpoints recorded");
  return checkpoints.back().test_balanced_accuracy;
}

std::string ExperimentTrace::to_jsonl() const {
  std::ostringstream out;
  json meta{{"type", "meta"},
            {"method", method},
            {"dataset", dataset},
            {"threshold", threshold},
            {"budget_fraction", budget_fraction},
            {"budget_total", budget_total},
            {"seed_size", seed_size},
            {"master_seed", master_seed},
            {"repetition", repetition},
            {"config_hash", config_hash},
            {"budget_exhausted_iteration", budget_exhausted_iteration}};
  out << meta.dump() << '\n';
  for (const auto& r : records) {
    json line{{"type", "record"},
              {"iteration", r.iteration},
              {"decision", decision_name(r.decision)},
              {"chosen_label", r.chosen_label},
              {"true_label", r.true_label},
              {"budget_remaining", r.budget_remaining},
              {"pool_class_histogram", r.pool_class_histogram},
              {"wrong_label_count", r.wrong_label_count}};
    out << line.dump() << '\n';
  }
  for (const auto& c : checkpoints) {
    json line{{"type", "checkpoint"},
              {"iteration", c.iteration},
              {"test_balanced_accuracy", c.test_balanced_accuracy}};
    out << line.dump() << '\n';
  }
  return out.str();
}

ExperimentTrace ExperimentTrace::from_jsonl(const std::string& text) {
  ExperimentTrace trace;
  bool saw_meta = false;
  std::istringstream in(text);
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (type == "meta") {
        trace.method = j.at("method").get<std::string>();
        trace.dataset = j.at("dataset").get<std::string>();
        trace.threshold = j.at("threshold").get<double>();
        trace.budget_fraction = j.at("budget_fraction").get<double>();
        trace.budget_total = j.at("budget_total").get<long>();
        trace.seed_size = j.at("seed_size").get<long>();
        trace.master_seed = j.at("master_seed").get<std::uint64_t>();
        trace.repetition = j.at("repetition").get<long>();
        trace.config_hash = j.at("config_hash").get<std::string>();
        trace.budget_exhausted_iteration =
            j.at("budget_exhausted_iteration").get<long>();
        saw_meta = true;
      } else if (type == "record") {
        TraceRecord r;
        r.iteration = j.at("iteration").get<long>();
        r.decision = decision_from_name(j.at("decision").get<std::string>());
        r.chosen_label = j.at("chosen_label").get<int>();
        r.true_label = j.at("true_label").get<int>();
        r.budget_remaining = j.at("budget_remaining").get<long>();
        r.pool_class_histogram =
            j.at("pool_class_histogram").get<std::vector<long>>();
        r.wrong_label_count = j.at("wrong_label_count").get<long>();
        trace.records.push_back(std::move(r));
      } else if (type == "checkpoint") {
        Checkpoint c;
        c.iteration = j.at("iteration").get<long>();
        c.test_balanced_accuracy =
            j.at("test_balanced_accuracy").get<double>();
        trace.checkpoints.push_back(c);
      } else {
        throw std::runtime_error("unknown type '" + type + "'");
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("trace line " + std::to_string(line_no) +
                               ": " + e.what());
    }
  }
  if (!saw_meta) throw std::runtime_error("trace has no meta line");
  return trace;
}

void ExperimentTrace::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << to_jsonl();
  if (!out) throw std::runtime_error("write failed: " + path);
}

ExperimentTrace ExperimentTrace::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_jsonl(buf.str());
}

}  // namespace salt
