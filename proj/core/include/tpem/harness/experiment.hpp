#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tpem/harness/config.hpp"
#include "tpem/lifecycle/learner.hpp"
#include "tpem/taskstream/corpus.hpp"

namespace tpem::harness {

struct TaskMetrics {
  double bleu = 0.0;
  double entity_f1 = 0.0;
  double loss = 0.0;
  std::uint64_t output_digest = 0;  // hash of the greedy test outputs

  bool operator==(const TaskMetrics&) const = default;
};

struct TaskRunLog {
  std::size_t task = 0;  // 1-based position in the sequence
  std::string name;
  std::size_t hidden_before = 0;
  std::size_t hidden_after = 0;
  std::optional<lifecycle::ExpansionDecision> expansion;
  std::size_t owned_after_train = 0;
  std::size_t released = 0;
  std::size_t train_epochs = 0;
  std::size_t retrain_epochs = 0;
  bool early_stopped = false;
  std::size_t mask_bits_off = 0;
  std::size_t mask_bytes = 0;
  std::size_t shared_parameters = 0;
  std::size_t decoder_parameters = 0;
  double free_fraction_after = 0.0;
  double seconds = 0.0;
};

struct StorageSummary {
  std::size_t weight_bytes = 0;  // f64 bytes of every stored parameter
  std::size_t mask_bytes = 0;    // packed mask bits of every task
  std::size_t models = 0;        // separately stored networks
};

struct RunReport {
  std::string name;
  std::string mode;
  std::vector<std::string> tasks;
  // matrix[i][j]: task j evaluated after finishing task i, j <= i.
  std::vector<std::vector<TaskMetrics>> matrix;
  std::vector<TaskRunLog> logs;
  StorageSummary storage;

  const std::vector<TaskMetrics>& final_metrics() const;
  double average_bleu() const;
  double average_entity_f1() const;
};

struct LoadedTask {
  std::string name;
  stream::Corpus corpus;
};

// Resolves every config task entry into a corpus.
std::vector<LoadedTask> load_tasks(const ExperimentConfig& config);

using ProgressFn = std::function<void(const std::string&)>;

struct RunOptions {
  std::string output_dir;  // empty: keep nothing on disk
  ProgressFn progress;
};

// Trains the tasks in order under config.mode and evaluates every finished
// task on its test split after each step.
RunReport run_sequence(const ExperimentConfig& config, const std::vector<LoadedTask>& tasks,
                       const RunOptions& options = {});
RunReport run_sequence(const ExperimentConfig& config, const RunOptions& options = {});

// Evaluates one task model on up to `limit` samples (0 = all).
TaskMetrics evaluate_task(const lifecycle::InferenceModel& model, const glmp::Vocabulary& vocab,
                          const stream::Corpus& corpus, std::size_t max_decode_len, std::size_t limit = 0);

std::vector<std::vector<std::size_t>> sample_orders(std::size_t tasks, std::size_t n_orders, std::uint64_t seed);

struct ShuffleReport {
  std::vector<std::vector<std::size_t>> orders;
  std::vector<RunReport> runs;
  double mean_bleu() const;
  double mean_entity_f1() const;
};

ShuffleReport run_order_shuffles(const ExperimentConfig& config, std::size_t n_orders, std::uint64_t seed,
                                 const RunOptions& options = {});

}  // namespace tpem::harness
