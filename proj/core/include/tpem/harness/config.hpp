#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tpem/lifecycle/learner.hpp"

namespace tpem::harness {

// Table rows: TPEM, its three ablations, and the three baselines.
enum class Mode { Tpem, TpemNoPrune, TpemNoExpand, TpemNoMask, NaiveFinetune, Reinit, ReinitExpand };

const char* mode_name(Mode mode);
Mode parse_mode(std::string_view name);  // ConfigError on unknown names
const std::vector<Mode>& all_modes();
// Row label used in the results table.
const char* mode_label(Mode mode);

struct ExperimentConfig {
  std::string name = "experiment";
  Mode mode = Mode::Tpem;
  // Each entry is a default-stream domain name, a corpus file (*.jsonl) or a
  // task spec file (*.json). Relative paths resolve against base_dir.
  std::vector<std::string> tasks{"schedule", "navigation", "weather", "restaurant", "hotel", "attraction", "camrest"};
  std::string base_dir = ".";
  double stream_scale = 1.0;
  std::uint64_t stream_seed = 1;

  double prune_ratio = 0.5;
  std::size_t prune_rounds = 1;
  double alpha = 32.0;
  double beta = 50.0;
  std::string log_base = "e";
  bool batches_over_all_epochs = false;
  double tau = 5e-3;
  std::size_t hidden = 128;
  std::size_t embed = 128;
  double learning_rate = 1e-3;
  std::size_t batch_size = 32;
  std::size_t hops = 3;
  std::size_t train_epochs = 30;
  std::size_t retrain_epochs = 5;
  std::size_t patience = 5;
  std::size_t max_decode_len = 30;
  std::size_t eval_limit = 0;  // 0 = whole test split
  std::size_t repeats = 1;
  std::uint64_t seed = 1;
  bool save_checkpoints = true;

  // Throws ConfigError on out-of-range values.
  void validate() const;
  lifecycle::LifecycleOptions lifecycle_options() const;
};

// Parses a JSON object with the field names above (plus "mode" as a string).
// Unknown keys are rejected.
ExperimentConfig parse_config(std::string_view text, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);
std::string to_json(const ExperimentConfig& config);

}  // namespace tpem::harness
